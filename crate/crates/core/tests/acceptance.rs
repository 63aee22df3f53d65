//! Acceptance suite: one test per criterion, each printing a pass line
//! with the measured quantities. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines for passing tests).

use qorient::channels::*;
use qorient::expfam::bessel::{vmf_mean_resultant, vmf_solve_kappa};
use qorient::expfam::*;
use qorient::geometry::{classify_extreme_qubit, Verdict};
use qorient::linalg::*;
use qorient::repr::*;
use qorient::stats::{ks_two_sample, mean_and_se};
use qorient::uniform::*;
use rand::Rng;

fn qubit_state_basis() -> Vec<DensityOperator> {
    vec![
        DensityOperator::basis_state(2, 0),
        DensityOperator::basis_state(2, 1),
        bloch_to_state(&BlochVector::from_coords(1.0, 0.0, 0.0).unwrap()).unwrap(),
        bloch_to_state(&BlochVector::from_coords(0.0, 1.0, 0.0).unwrap()).unwrap(),
    ]
}

/// Criterion 1: conversion coherence across 1000 uniform CPTP maps at
/// ranks 1-4; every representation agrees in action to 1e-9 and the
/// reshuffle is an exact involution.
#[test]
fn criterion_1_conversion_coherence() {
    let start = std::time::Instant::now();
    let mut rng = RngStream::new(1001, 0).rng();
    let basis = qubit_state_basis();
    let kinds = [
        ReprKind::Kraus,
        ReprKind::Choi,
        ReprKind::Liouville,
        ReprKind::Ptm,
        ReprKind::Affine,
        ReprKind::Stiefel,
        ReprKind::Frame,
    ];
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let rank = trial % 4 + 1;
        let chan = ChannelRepr::Stiefel(sample_cptp_uniform(&mut rng, 2, rank));
        let reprs: Vec<ChannelRepr> = kinds.iter().map(|k| chan.convert(*k).unwrap()).collect();
        for rho in &basis {
            let reference = reprs[0].apply(rho).unwrap();
            for r in &reprs[1..] {
                let out = r.apply(rho).unwrap();
                worst = worst.max(frobenius_distance(out.mat(), reference.mat()));
            }
        }
        // exact involution on the liouvillian
        let l = chan.to_liouville().unwrap();
        let rr = reshuffle(&reshuffle(l.mat()).unwrap()).unwrap();
        assert_eq!(&rr, l.mat(), "reshuffle must be exactly involutive");
    }
    assert!(worst < 1e-9, "worst action deviation {worst:e}");
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion 1 took {dt:.1}s, budget 60s");
    println!("[PASS] criterion 1: conversion coherence, worst deviation {worst:.2e} ({dt:.1}s)");
}

/// Criterion 2: Haar validity. E[|tr U|^2] = 1 +- 0.02 over 1e5 draws
/// and uniform density operators average to I/2 within 0.01 entrywise.
#[test]
fn criterion_2_haar_validity() {
    let start = std::time::Instant::now();
    let mut rng = RngStream::new(1002, 0).rng();
    let n = 100_000;
    let mut acc = 0.0;
    for _ in 0..n {
        acc += sample_unitary(&mut rng, 2).trace().norm_sqr();
    }
    let moment = acc / n as f64;
    assert!((moment - 1.0).abs() < 0.02, "E[|tr U|^2] = {moment}");

    let mut mean = CMat::zeros(2, 2);
    for _ in 0..n {
        mean += sample_density_uniform(&mut rng, 2, 2).mat();
    }
    mean /= C64::new(n as f64, 0.0);
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { C64::new(0.5, 0.0) } else { ZERO };
            worst = worst.max((mean[(i, j)] - want).norm());
        }
    }
    assert!(worst < 0.01, "mean state deviates from I/2 by {worst}");
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion 2 took {dt:.1}s, budget 60s");
    println!(
        "[PASS] criterion 2: Haar validity, E[|tr U|^2] = {moment:.4}, state-mean deviation {worst:.4} ({dt:.1}s)"
    );
}

/// Criterion 3: dephasing with target E[alpha^2] = 0.9; empirical
/// E[cos theta] within 0.9 +- 0.005 over 1e5 draws and the estimated
/// concentration matches the Bessel-ratio inversion within 1%.
#[test]
fn criterion_3_dephasing() {
    let mut rng = RngStream::new(1003, 0).rng();
    let dist = DephasingVonMises::fit(C64::new(0.9, 0.0)).unwrap();
    let n = 100_000;
    let (mut sum_cos, mut sum_sin) = (0.0, 0.0);
    for _ in 0..n {
        let t = dist.sample_angle(&mut rng);
        sum_cos += t.cos();
        sum_sin += t.sin();
    }
    let mean_cos = sum_cos / n as f64;
    assert!((mean_cos - 0.9).abs() < 0.005, "E[cos theta] = {mean_cos}");

    // estimate kappa from the empirical resultant and compare against
    // the oracle inversion of I1/I0 = 0.9
    let rbar = (sum_cos * sum_cos + sum_sin * sum_sin).sqrt() / n as f64;
    let estimated = vmf_solve_kappa(2, rbar);
    let oracle = bisect_bessel_ratio(0.9);
    assert!(
        (estimated - oracle).abs() / oracle < 0.01,
        "estimated kappa {estimated} vs oracle {oracle}"
    );
    println!(
        "[PASS] criterion 3: dephasing E[cos] = {mean_cos:.4}, kappa {estimated:.4} vs oracle {oracle:.4}"
    );
}

/// Independent oracle: bisection on the Bessel ratio I1/I0.
fn bisect_bessel_ratio(target: f64) -> f64 {
    let f = |k: f64| vmf_mean_resultant(2, k) - target;
    let (mut lo, mut hi) = (1e-6, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Criterion 4: depolarizing in unitary mode. Matrix-Fisher on SO(3)
/// fitted to A_p = diag(0.78, 0.798, 0.978); the empirical mean rotation
/// lands within Frobenius 0.02 over 1e5 draws, every draw orthogonal
/// with determinant +1.
#[test]
fn criterion_4_depolarizing_unitary() {
    let mut rng = RngStream::new(1004, 0).rng();
    let (px, py, pz) = (0.001, 0.01, 0.1);
    let target = RMat::from_row_slice(
        3,
        3,
        &[
            1.0 - 2.0 * (py + pz), 0.0, 0.0,
            0.0, 1.0 - 2.0 * (px + pz), 0.0,
            0.0, 0.0, 1.0 - 2.0 * (px + py),
        ],
    );
    let cfg = SaConfig { batch: 6000, max_iters: 300, tol_sigma: 2.0, ..SaConfig::default() };
    let dist = UnitaryFisher::fit(&mut rng, &target, &cfg).unwrap();

    let n = 100_000;
    let draws = dist.sample_rotations(&mut rng, n);
    let mut mean = RMat::zeros(3, 3);
    let mut worst_orth: f64 = 0.0;
    for r in &draws {
        mean += r;
        worst_orth = worst_orth
            .max(frobenius_distance_real(&(r * r.transpose()), &RMat::identity(3, 3)))
            .max((r.determinant() - 1.0).abs());
    }
    mean /= n as f64;
    let err = frobenius_distance_real(&mean, &target);
    assert!(worst_orth < 1e-10, "rotation defect {worst_orth:e}");
    assert!(err < 0.02, "mean rotation off A_p by {err}");
    println!(
        "[PASS] criterion 4: depolarizing unitary mode, mean-rotation error {err:.4}, rotation defect {worst_orth:.2e}"
    );
}

/// Criterion 5: depolarizing in frame-Bingham mode. The empirical mean
/// Choi lands within Frobenius 0.05 of the target, and more than 99% of
/// output Bloch norms are strictly below 1 - 1e-6.
#[test]
fn criterion_5_depolarizing_frame_bingham() {
    let mut rng = RngStream::new(1005, 0).rng();
    let target = depolarizing_choi(0.001, 0.01, 0.1).unwrap();
    let cfg = SaConfig { batch: 2000, max_iters: 200, tol_sigma: 2.0, ..SaConfig::default() };
    let dist = CptpFrameBingham::fit(&mut rng, &target, 400.0, &cfg).unwrap();

    let n = 10_000;
    let (chois, _) = dist
        .sample_batch(&mut rng, n, &GibbsConfig { burn_in: 100, thin: 2, chains: 1 })
        .unwrap();
    let mut mean = CMat::zeros(4, 4);
    let input = BlochVector::from_coords(0.5f64.sqrt(), 0.5f64.sqrt(), 0.0).unwrap();
    let input_state = bloch_to_state(&input).unwrap();
    let mut contracted = 0usize;
    for c in &chois {
        mean += c.mat();
        let out = ChannelRepr::Choi(c.clone()).apply(&input_state).unwrap();
        let norm = state_to_bloch(&out).unwrap().vec.norm();
        if norm < 1.0 - 1e-6 {
            contracted += 1;
        }
    }
    mean /= C64::new(n as f64, 0.0);
    let err = frobenius_distance(&mean, target.mat());
    let frac = contracted as f64 / n as f64;
    assert!(err < 0.05, "mean Choi off target by {err}");
    assert!(frac > 0.99, "only {frac} of outputs pulled inside the Bloch sphere");
    println!(
        "[PASS] criterion 5: depolarizing frame-Bingham mode, mean-Choi error {err:.4}, contracted fraction {frac:.4}"
    );
}

/// Criterion 6: amplitude damping. The classifier proves the channel is
/// an extreme point (not representable as an average); the epsilon sweep
/// of the scaled matrix-Fisher approximation gives strictly decreasing
/// proxy distances. The diamond-norm reference value "around 0.05" at
/// epsilon = 0.001 is out of scope; the proxy trace-norm distance is
/// reported next to it for qualitative comparison.
#[test]
fn criterion_6_amplitude_damping() {
    let mut rng = RngStream::new(1006, 0).rng();
    let gamma = 0.01;
    let target = amplitude_damping(gamma).to_choi().unwrap();

    let verdict = classify_extreme_qubit(&target).unwrap();
    assert_eq!(verdict.verdict, Verdict::Extreme, "{verdict:?}");
    assert_eq!(verdict.kraus_rank, 2);
    assert!(!verdict.unital);

    let stiefel = ChannelRepr::Choi(target.clone()).to_stiefel().unwrap();
    let padded = kraus_to_stiefel(&stiefel_to_kraus(&stiefel), true);
    let mut distances = Vec::new();
    for eps in [0.1, 0.01, 0.001] {
        // the scalar fit takes Newton-sized steps; no step clamp or decay
        let cfg = SaConfig {
            batch: 500,
            max_iters: 150,
            a0: 0.5,
            tau: 1e9,
            max_step: 1e9,
            ..SaConfig::default()
        };
        let dist = CptpFisherApprox::fit(&mut rng, &padded, eps, &cfg).unwrap();
        let n = 6000;
        let (chois, _) = dist
            .sample_batch(&mut rng, n, &GibbsConfig { burn_in: 60, thin: 2, chains: 12 })
            .unwrap();
        let mut mean = CMat::zeros(4, 4);
        for c in &chois {
            mean += c.mat();
        }
        mean /= C64::new(n as f64, 0.0);
        let d = channel_distance(&ChoiMatrix::new_unchecked(mean), &target);
        distances.push((eps, d));
    }
    for w in distances.windows(2) {
        assert!(
            w[1].1 < w[0].1,
            "proxy distance not strictly decreasing: {distances:?}"
        );
    }
    println!(
        "[PASS] criterion 6: amplitude damping is extreme/not representable; epsilon sweep {:?}; proxy at eps=0.001 is {:.4} (paper's out-of-scope diamond-norm reference: around 0.05)",
        distances, distances[2].1
    );
}

/// Criterion 7: non-unital composite. The frame-Bingham empirical mean
/// reproduces the composite PTM including the non-unital shift entry
/// `(1 - 2(p_x + p_y)) gamma` within 0.01 at 1e5 draws.
#[test]
fn criterion_7_nonunital_composite() {
    let mut rng = RngStream::new(1007, 0).rng();
    let (gamma, px, py, pz) = (0.01, 0.001, 0.01, 0.1);
    let target_ptm = composite_nonunital(gamma, px, py, pz).unwrap();
    let target = ChannelRepr::Ptm(target_ptm.clone()).to_choi().unwrap();

    let cfg = SaConfig { batch: 2500, max_iters: 250, tol_sigma: 2.0, ..SaConfig::default() };
    let dist = CptpFrameBingham::fit(&mut rng, &target, 600.0, &cfg).unwrap();
    let n = 100_000;
    let (chois, _) = dist
        .sample_batch(&mut rng, n, &GibbsConfig { burn_in: 100, thin: 2, chains: 1 })
        .unwrap();
    let mut mean = CMat::zeros(4, 4);
    for c in &chois {
        mean += c.mat();
    }
    mean /= C64::new(n as f64, 0.0);
    // the PTM is linear in the Choi matrix, so the mean PTM is the PTM
    // of the mean
    let mean_ptm =
        liouville_to_ptm(&choi_to_liouville(&ChoiMatrix::new_unchecked(mean))).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((mean_ptm.mat()[(i, j)] - target_ptm.mat()[(i, j)]).abs());
        }
    }
    let shift = mean_ptm.mat()[(3, 0)];
    let want_shift = (1.0 - 2.0 * (px + py)) * gamma;
    assert!(worst < 0.01, "worst PTM entry deviation {worst}");
    assert!((shift - want_shift).abs() < 0.01, "shift entry {shift} vs {want_shift}");
    println!(
        "[PASS] criterion 7: non-unital composite, worst PTM deviation {worst:.4}, shift entry {shift:.5} (target {want_shift:.5})"
    );
}

/// Criterion 8: exponential-family identities. Log-density differences
/// equal the natural-parameter pairing on random pairs to 1e-10; the
/// Bingham shift A -> A + cI leaves sample statistics unchanged
/// (two-sample KS); the Bingham family on V_N(C^N) is uniform.
#[test]
fn criterion_8_exp_family_identities() {
    let mut rng = RngStream::new(1008, 0).rng();

    // pairing identity per family
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        // vMF on S^2
        let mu = {
            let g = RVec::from_vec(vec![rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, 0.3]);
            let n = g.norm();
            g / n
        };
        let kappa = 7.0 * rng.gen::<f64>();
        let p = VmfParams::new(mu.clone(), kappa).unwrap();
        let x1 = qorient::expfam::vmf::sample_sphere_uniform(&mut rng, 3);
        let x2 = qorient::expfam::vmf::sample_sphere_uniform(&mut rng, 3);
        let diff = vmf_log_density(&x1, &p) - vmf_log_density(&x2, &p);
        let pairing = p.natural().dot(&(&x1 - &x2));
        worst = worst.max((diff - pairing).abs());

        // matrix-Bingham on V_2(C^3): theta = -A against T = X X^dag
        let mut a = sample_ginibre_complex(&mut rng, 3, 3);
        a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let mb = MatrixBinghamParams::new(StiefelManifold::complex(3, 2), a.clone()).unwrap();
        let f1 = sample_stiefel_uniform(&mut rng, 3, 2, Field::Complex);
        let f2 = sample_stiefel_uniform(&mut rng, 3, 2, Field::Complex);
        let diff = bingham_log_density_unnorm(&f1, &mb) - bingham_log_density_unnorm(&f2, &mb);
        let (x1c, x2c) = (f1.to_complex(), f2.to_complex());
        let pairing =
            (-&a * (&x1c * x1c.adjoint() - &x2c * x2c.adjoint())).trace().re;
        worst = worst.max((diff - pairing).abs());

        // frame-Bingham: theta against the Choi statistic
        let mut th = sample_ginibre_complex(&mut rng, 4, 4);
        th = (&th + th.adjoint()) * C64::new(0.5, 0.0);
        let fb = FrameBinghamParams::new(2, th.clone(), vec![]).unwrap();
        let g1 = stiefel_to_frame(&sample_cptp_uniform(&mut rng, 2, 4)).unwrap();
        let g2 = stiefel_to_frame(&sample_cptp_uniform(&mut rng, 2, 4)).unwrap();
        let diff = frame_bingham_log_density_unnorm(&g1, &fb)
            - frame_bingham_log_density_unnorm(&g2, &fb);
        let pairing =
            (&th * (frame_to_choi(&g1).mat() - frame_to_choi(&g2).mat())).trace().re;
        worst = worst.max((diff - pairing).abs());
    }
    assert!(worst < 1e-10, "pairing identity violated by {worst:e}");

    // shift invariance of the Bingham family
    let manifold = StiefelManifold::real(3, 2);
    let a = {
        let m = RMat::from_row_slice(3, 3, &[2.0, 0.4, 0.0, 0.4, -1.0, 0.3, 0.0, 0.3, 0.5]);
        to_complex(&((&m + m.transpose()) * 0.5))
    };
    let shifted = &a + CMat::identity(3, 3) * C64::new(9.0, 0.0);
    let p1 = MatrixBinghamParams::new(manifold, a.clone()).unwrap();
    let p2 = MatrixBinghamParams::new(manifold, shifted).unwrap();
    let n = 5000;
    let stat = |p: &MatrixBinghamParams, rng: &mut rand_chacha::ChaCha12Rng| -> Vec<f64> {
        bingham_sample_batch(rng, p, n, &GibbsConfig::default())
            .0
            .iter()
            .map(|d| match d {
                StiefelPoint::Real(x) => (x.transpose() * to_real(&a) * x).trace(),
                _ => unreachable!(),
            })
            .collect()
    };
    let s1 = stat(&p1, &mut rng);
    let s2 = stat(&p2, &mut rng);
    let (_, pval) = ks_two_sample(&s1, &s2);
    assert!(pval > 0.01, "shift changed the Bingham distribution: p = {pval}");

    // Bingham on the full square complex manifold is uniform
    let mu2 = {
        let m = MatrixBinghamParams::new(
            StiefelManifold::complex(2, 2),
            CMat::from_row_slice(2, 2, &[C64::new(4.0, 0.0), I, -I, C64::new(-2.0, 0.0)]),
        )
        .unwrap();
        let (draws, _) = bingham_sample_batch(&mut rng, &m, 50_000, &GibbsConfig::default());
        draws
            .iter()
            .map(|d| d.to_complex()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / 50_000.0
    };
    assert!((mu2 - 0.5).abs() < 0.01, "E|u00|^2 = {mu2} on U(2), uniform wants 0.5");

    println!(
        "[PASS] criterion 8: exp-family identities, worst pairing defect {worst:.2e}, shift-KS p = {pval:.3}, U(2) moment {mu2:.4}"
    );
}

/// Criterion 9: estimator round trips. vMF (d = 2, 3), matrix-Fisher on
/// SO(3), and the frame-Bingham on the depolarizing target: fit, then
/// sample, and recover the target expectation parameter within 5 Monte
/// Carlo standard errors.
#[test]
fn criterion_9_estimator_round_trips() {
    let start = std::time::Instant::now();
    let mut rng = RngStream::new(1009, 0).rng();

    // vMF d=2 and d=3 (closed-form fit)
    for (d, target_norm) in [(2usize, 0.9f64), (3, 0.7)] {
        let mut target = RVec::zeros(d);
        target[d - 1] = target_norm;
        let params = vmf_estimate(&target).unwrap();
        let n = 50_000;
        let mut acc = RVec::zeros(d);
        let mut sq = RVec::zeros(d);
        for _ in 0..n {
            let x = vmf_sample(&mut rng, &params);
            for i in 0..d {
                acc[i] += x[i];
                sq[i] += x[i] * x[i];
            }
        }
        let mean = &acc / n as f64;
        let se: f64 = (0..d)
            .map(|i| (sq[i] / n as f64 - mean[i] * mean[i]) / n as f64)
            .sum::<f64>()
            .sqrt();
        let err = (&mean - &target).norm();
        assert!(err < 5.0 * se, "vMF d={d}: |mean - target| = {err}, 5se = {}", 5.0 * se);
    }

    // matrix-Fisher SO(3) on the depolarizing contraction
    let target = RMat::from_row_slice(3, 3, &[0.78, 0.0, 0.0, 0.0, 0.798, 0.0, 0.0, 0.0, 0.978]);
    let cfg = SaConfig { batch: 20_000, max_iters: 300, tol_sigma: 2.0, ..SaConfig::default() };
    let dist = UnitaryFisher::fit(&mut rng, &target, &cfg).unwrap();
    let n = 50_000;
    let draws = dist.sample_rotations(&mut rng, n);
    let mut mean = RMat::zeros(3, 3);
    let mut sq = RMat::zeros(3, 3);
    for r in &draws {
        for i in 0..3 {
            for j in 0..3 {
                mean[(i, j)] += r[(i, j)];
                sq[(i, j)] += r[(i, j)] * r[(i, j)];
            }
        }
    }
    mean /= n as f64;
    let mut se_sq = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            se_sq += (sq[(i, j)] / n as f64 - mean[(i, j)] * mean[(i, j)]) / n as f64;
        }
    }
    let se = se_sq.sqrt();
    let err = frobenius_distance_real(&mean, &target);
    let budget = 5.0 * se;
    assert!(err < budget, "SO(3) round trip error {err}, budget {budget}");

    // frame-Bingham on the depolarizing target
    let target = depolarizing_choi(0.001, 0.01, 0.1).unwrap();
    let cfg = SaConfig { batch: 4000, max_iters: 250, tol_sigma: 2.0, ..SaConfig::default() };
    let dist = CptpFrameBingham::fit(&mut rng, &target, 400.0, &cfg).unwrap();
    let n = 10_000;
    let (chois, _) =
        dist.sample_batch(&mut rng, n, &GibbsConfig { burn_in: 100, thin: 2, chains: 1 }).unwrap();
    let mut mean = CMat::zeros(4, 4);
    for c in &chois {
        mean += c.mat();
    }
    mean /= C64::new(n as f64, 0.0);
    let flat: Vec<Vec<f64>> = chois.iter().map(|c| flatten_hermitian(c.mat())).collect();
    let mut se_sq = 0.0;
    for i in 0..16 {
        let column: Vec<f64> = flat.iter().map(|f| f[i]).collect();
        let (_, se_i) = mean_and_se(&column);
        se_sq += se_i * se_i;
    }
    let se = se_sq.sqrt();
    let err = frobenius_distance(&mean, target.mat());
    let budget = 5.0 * se;
    assert!(err < budget, "frame-Bingham round trip error {err}, budget {budget}");

    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 1800.0, "criterion 9 took {dt:.0}s, budget 30 minutes");
    println!("[PASS] criterion 9: estimator round trips within 5 MC standard errors ({dt:.0}s)");
}
