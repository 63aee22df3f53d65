//! Vector von Mises-Fisher distribution on unit spheres: exact density,
//! rejection sampling, and natural-parameter estimation from a mean
//! vector.

use super::bessel::{vmf_log_norm_rel_uniform, vmf_solve_kappa};
use super::EstimateError;
use crate::linalg::RVec;
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VmfError {
    #[error("concentration must be nonnegative, got {0}")]
    NegativeKappa(f64),
    #[error("mean direction must be a unit vector, got norm {0}")]
    MeanNotUnit(f64),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
}

/// Mean direction and concentration of a von Mises-Fisher distribution
/// on the unit sphere in R^d.
#[derive(Debug, Clone, PartialEq)]
pub struct VmfParams {
    mu: RVec,
    kappa: f64,
}

impl VmfParams {
    pub fn new(mu: RVec, kappa: f64) -> Result<Self, VmfError> {
        if kappa < 0.0 {
            return Err(VmfError::NegativeKappa(kappa));
        }
        if mu.len() < 2 {
            return Err(VmfError::DimensionTooSmall(mu.len()));
        }
        let norm = mu.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(VmfError::MeanNotUnit(norm));
        }
        Ok(Self { mu, kappa })
    }

    pub fn mu(&self) -> &RVec {
        &self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Natural parameter `kappa * mu`.
    pub fn natural(&self) -> RVec {
        &self.mu * self.kappa
    }
}

/// Log density relative to the uniform probability measure on the
/// sphere: `kappa mu^T x + ln c(d, kappa)`.
pub fn vmf_log_density(x: &RVec, p: &VmfParams) -> f64 {
    p.kappa * p.mu.dot(x) + vmf_log_norm_rel_uniform(p.dim(), p.kappa)
}

/// Uniform draw on the unit sphere of R^d.
pub fn sample_sphere_uniform<R: Rng + ?Sized>(rng: &mut R, d: usize) -> RVec {
    loop {
        let g = RVec::from_fn(d, |_, _| StandardNormal.sample(rng));
        let n = g.norm();
        if n > 1e-12 {
            return g / n;
        }
    }
}

/// Draws from the von Mises-Fisher distribution by the rejection scheme
/// on the `mu^T x` marginal (beta envelope) plus a uniform tangent
/// direction.
pub fn vmf_sample<R: Rng + ?Sized>(rng: &mut R, p: &VmfParams) -> RVec {
    let d = p.dim();
    if p.kappa == 0.0 {
        return sample_sphere_uniform(rng, d);
    }
    let w = sample_vmf_cosine(rng, d, p.kappa);
    // uniform direction orthogonal to mu
    let v = loop {
        let g = RVec::from_fn(d, |_, _| StandardNormal.sample(rng));
        let t = &g - &p.mu * p.mu.dot(&g);
        let n = t.norm();
        if n > 1e-12 {
            break t / n;
        }
    };
    &p.mu * w + v * (1.0 - w * w).max(0.0).sqrt()
}

/// Marginal of `mu^T x` under the von Mises-Fisher distribution,
/// density proportional to `exp(kappa w) (1 - w^2)^{(d-3)/2}` on [-1, 1].
pub fn sample_vmf_cosine<R: Rng + ?Sized>(rng: &mut R, d: usize, kappa: f64) -> f64 {
    assert!(d >= 2);
    let df = d as f64;
    let b = (df - 1.0) / (2.0 * kappa + (4.0 * kappa * kappa + (df - 1.0) * (df - 1.0)).sqrt());
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + (df - 1.0) * (1.0 - x0 * x0).ln();
    let beta = Beta::new((df - 1.0) / 2.0, (df - 1.0) / 2.0).expect("valid shape");
    loop {
        let z: f64 = beta.sample(rng);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u: f64 = rng.gen();
        if kappa * w + (df - 1.0) * (1.0 - x0 * w).ln() - c >= u.ln() {
            return w;
        }
    }
}

/// Natural parameters whose expectation parameter equals the given mean
/// vector: `mu` is the normalized mean, `kappa` inverts the Bessel
/// ratio. Fails for means on or outside the unit sphere.
pub fn vmf_estimate(mean_vector: &RVec) -> Result<VmfParams, EstimateError> {
    let d = mean_vector.len();
    if d < 2 {
        return Err(EstimateError::BadTarget("mean dimension must be at least 2".into()));
    }
    let rbar = mean_vector.norm();
    if rbar >= 1.0 {
        return Err(EstimateError::TargetOnBoundary(format!(
            "mean resultant {rbar} >= 1 admits no finite concentration"
        )));
    }
    if rbar == 0.0 {
        let mut mu = RVec::zeros(d);
        mu[0] = 1.0;
        return Ok(VmfParams { mu, kappa: 0.0 });
    }
    let kappa = vmf_solve_kappa(d, rbar);
    Ok(VmfParams { mu: mean_vector / rbar, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expfam::bessel::vmf_mean_resultant;
    use crate::stats::{ks_test, mean_and_se};
    use crate::uniform::RngStream;

    fn unit(v: Vec<f64>) -> RVec {
        let v = RVec::from_vec(v);
        let n = v.norm();
        v / n
    }

    #[test]
    fn density_basics() {
        let mu = unit(vec![0.0, 0.0, 1.0]);
        // kappa = 0 is the uniform density
        let p0 = VmfParams::new(mu.clone(), 0.0).unwrap();
        for x in [unit(vec![1.0, 0.0, 0.0]), unit(vec![0.3, -0.5, 0.8])] {
            assert!(vmf_log_density(&x, &p0).abs() < 1e-14);
        }
        // log p(mu) - log p(-mu) = 2 kappa
        let p = VmfParams::new(mu.clone(), 3.7).unwrap();
        let anti = -mu.clone();
        let diff = vmf_log_density(&mu, &p) - vmf_log_density(&anti, &p);
        assert!((diff - 2.0 * 3.7).abs() < 1e-12);

        assert!(VmfParams::new(mu.clone(), -1.0).is_err());
        assert!(VmfParams::new(RVec::from_vec(vec![1.0, 1.0]), 1.0).is_err());
    }

    #[test]
    fn density_integrates_to_one_on_circle() {
        // trapezoid quadrature of the relative density over the uniform
        // measure d(theta)/(2 pi)
        let mu = unit(vec![1.0, 0.0]);
        for kappa in [0.5, 5.304689062957708, 20.0] {
            let p = VmfParams::new(mu.clone(), kappa).unwrap();
            let n = 20_000;
            let mut acc = 0.0;
            for i in 0..n {
                let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                let x = RVec::from_vec(vec![t.cos(), t.sin()]);
                acc += vmf_log_density(&x, &p).exp();
            }
            let integral = acc / n as f64;
            assert!((integral - 1.0).abs() < 1e-8, "kappa={kappa}: integral {integral}");
        }
    }

    #[test]
    fn uniform_case_passes_ks() {
        // for kappa = 0 and d = 3 the marginal of any coordinate is
        // uniform on [-1, 1]
        let mut rng = RngStream::new(41, 0).rng();
        let p = VmfParams::new(unit(vec![0.0, 0.0, 1.0]), 0.0).unwrap();
        let xs: Vec<f64> = (0..4000).map(|_| vmf_sample(&mut rng, &p)[2]).collect();
        let (_, pval) = ks_test(&xs, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
        assert!(pval > 0.01, "p = {pval}");
    }

    #[test]
    fn sampler_matches_mean_resultant() {
        let mut rng = RngStream::new(43, 0).rng();
        // d=2 with kappa from rbar = 0.9: empirical E[mu.x] = 0.9
        let p = VmfParams::new(unit(vec![1.0, 0.0]), 5.304689062957708).unwrap();
        let n = 40_000;
        let cs: Vec<f64> = (0..n).map(|_| vmf_sample(&mut rng, &p).dot(p.mu())).collect();
        let (mean, se) = mean_and_se(&cs);
        assert!((mean - 0.9).abs() < 5.0 * se, "mean {mean} se {se}");

        // d=3 at a couple of concentrations
        for kappa in [1.0, 10.0] {
            let p = VmfParams::new(unit(vec![0.0, 1.0, 0.0]), kappa).unwrap();
            let want = vmf_mean_resultant(3, kappa);
            let cs: Vec<f64> = (0..n).map(|_| vmf_sample(&mut rng, &p).dot(p.mu())).collect();
            let (mean, se) = mean_and_se(&cs);
            assert!((mean - want).abs() < 5.0 * se, "kappa={kappa}: {mean} vs {want}");
        }
    }

    #[test]
    fn high_concentration_stays_near_mode() {
        let mut rng = RngStream::new(47, 0).rng();
        let kappa = 400.0;
        let p = VmfParams::new(unit(vec![0.0, 0.0, 1.0]), kappa).unwrap();
        let limit = 5.0 / kappa.sqrt();
        let mut within = 0;
        let n = 2000;
        for _ in 0..n {
            let x = vmf_sample(&mut rng, &p);
            if x.dot(p.mu()).clamp(-1.0, 1.0).acos() < limit {
                within += 1;
            }
        }
        assert!(within as f64 / n as f64 >= 0.99, "{within}/{n} within angle {limit}");
    }

    #[test]
    fn estimate_finds_the_bessel_root() {
        let p = vmf_estimate(&RVec::from_vec(vec![0.9, 0.0])).unwrap();
        assert!((p.kappa() - 5.304689062957708).abs() < 1e-8);
        assert!((p.mu()[0] - 1.0).abs() < 1e-14);

        assert!(vmf_estimate(&RVec::from_vec(vec![1.0, 0.0])).is_err());
        let p0 = vmf_estimate(&RVec::from_vec(vec![0.0, 0.0, 0.0])).unwrap();
        assert_eq!(p0.kappa(), 0.0);
    }

    #[test]
    fn estimate_round_trip_through_sampling() {
        let mut rng = RngStream::new(53, 0).rng();
        let truth = VmfParams::new(unit(vec![0.6, -0.8, 0.0]), 12.0).unwrap();
        let n = 60_000;
        let mut acc = RVec::zeros(3);
        for _ in 0..n {
            acc += vmf_sample(&mut rng, &truth);
        }
        let mean = acc / n as f64;
        let fitted = vmf_estimate(&mean).unwrap();
        assert!((fitted.kappa() - truth.kappa()).abs() / truth.kappa() < 0.03);
        assert!((fitted.mu() - truth.mu()).norm() < 0.02);
    }
}
