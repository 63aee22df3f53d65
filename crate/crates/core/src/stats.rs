//! Sampling diagnostics: Kolmogorov-Smirnov tests and running moments.

/// Asymptotic Kolmogorov survival function
/// `Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..101 {
        let term = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test against a CDF. Returns `(statistic, p_value)`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let c = cdf(*x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    (d, kolmogorov_survival(d * n.sqrt()))
}

/// Two-sample KS test. Returns `(statistic, p_value)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len(), xb.len());
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut d = 0.0f64;
    while ia < na && ib < nb {
        let x = xa[ia].min(xb[ib]);
        while ia < na && xa[ia] <= x {
            ia += 1;
        }
        while ib < nb && xb[ib] <= x {
            ib += 1;
        }
        d = d.max((ia as f64 / na as f64 - ib as f64 / nb as f64).abs());
    }
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    (d, kolmogorov_survival(d * ne.sqrt()))
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Equal-width histogram over `[lo, hi]`; values outside are clamped
/// into the edge bins.
pub fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    let w = (hi - lo) / bins as f64;
    for &x in xs {
        let idx = (((x - lo) / w).floor() as i64).clamp(0, bins as i64 - 1) as usize;
        counts[idx] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn kolmogorov_reference_values() {
        // frozen against the asymptotic distribution
        assert!((kolmogorov_survival(0.5) - 0.9639452436648751).abs() < 1e-12);
        assert!((kolmogorov_survival(1.0) - 0.26999967167735456).abs() < 1e-12);
        assert!((kolmogorov_survival(1.36) - 0.049485876755377876).abs() < 1e-12);
        assert!((kolmogorov_survival(2.0) - 0.0006709252557796953).abs() < 1e-12);
    }

    #[test]
    fn uniform_passes_ks() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let xs: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let (_, p) = ks_test(&xs, |x| x.clamp(0.0, 1.0));
        assert!(p > 0.01, "p = {p}");
        let ys: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let (_, p2) = ks_two_sample(&xs, &ys);
        assert!(p2 > 0.01, "p = {p2}");
        // shifted sample fails
        let zs: Vec<f64> = xs.iter().map(|x| x * 0.8 + 0.2).collect();
        let (_, p3) = ks_two_sample(&xs, &zs);
        assert!(p3 < 1e-6);
    }

    #[test]
    fn histogram_mass() {
        let xs = [0.05, 0.2, 0.95, 1.5, -0.3];
        let h = histogram(&xs, 0.0, 1.0, 10);
        assert_eq!(h.iter().sum::<u64>(), xs.len() as u64);
        assert_eq!(h[0], 2); // 0.05 and the clamped -0.3
        assert_eq!(h[2], 1);
        assert_eq!(h[9], 2); // 0.95 and the clamped 1.5
    }
}
