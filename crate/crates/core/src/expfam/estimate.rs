//! Natural-parameter estimation by stochastic approximation: iterate
//! `theta <- theta + a_t (target - E_theta[T])`, exploiting the
//! convexity of the log normalizer. Matrix families are fitted without
//! normalizers.

use super::fisher::{matrix_fisher_sample_batch, FisherDraw, MatrixFisherParams};
use super::vmf::{vmf_sample, VmfParams};
use super::{
    EstimateError, GibbsConfig, MomentMatchProblem, SaConfig, SaReport, StatEstimate,
    StiefelManifold,
};
use crate::linalg::{CMat, RMat, RVec, C64};
use rand::Rng;

/// Flattens a Hermitian matrix to a real vector (diagonal, then
/// sqrt(2)-scaled real and imaginary parts of the upper triangle) so the
/// Euclidean inner product of two flattenings equals `tr(A B)`.
pub fn flatten_hermitian(a: &CMat) -> Vec<f64> {
    let d = a.nrows();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(a[(i, i)].re);
    }
    let s = std::f64::consts::SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            out.push(s * a[(i, j)].re);
            out.push(s * a[(i, j)].im);
        }
    }
    out
}

pub fn unflatten_hermitian(v: &[f64], d: usize) -> CMat {
    let mut a = CMat::zeros(d, d);
    for i in 0..d {
        a[(i, i)] = C64::new(v[i], 0.0);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut idx = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let re = v[idx] * s;
            let im = v[idx + 1] * s;
            idx += 2;
            a[(i, j)] = C64::new(re, im);
            a[(j, i)] = C64::new(re, -im);
        }
    }
    a
}

/// Stochastic-approximation fixed point for `E_theta[T] = target`.
///
/// Updates are scaled per component by the inverse of the (floored)
/// batch variance when `diag_metric` is set; convergence is declared
/// when the residual stays below `tol_sigma` times its Monte Carlo
/// standard error for `consecutive` checks.
pub fn estimate_natural_params<P: MomentMatchProblem, R: Rng + ?Sized>(
    problem: &mut P,
    theta0: Vec<f64>,
    target: &[f64],
    cfg: &SaConfig,
    rng: &mut R,
) -> Result<(Vec<f64>, SaReport), EstimateError> {
    let dim = problem.stat_dim();
    if target.len() != dim {
        return Err(EstimateError::BadTarget(format!(
            "target has {} components, statistic has {dim}",
            target.len()
        )));
    }
    let mut theta = theta0;
    problem.project(&mut theta);
    problem.set_theta(&theta, rng);

    let mut streak = 0usize;
    let mut last_residual = f64::INFINITY;
    for t in 0..cfg.max_iters {
        let est = problem.mean_stat(rng, cfg.batch);
        let (mean, var) = (&est.mean, &est.var);
        let resid: Vec<f64> = target.iter().zip(mean).map(|(t, m)| t - m).collect();
        let resid_norm = resid.iter().map(|r| r * r).sum::<f64>().sqrt();
        let se_norm = est.se_norm.max(1e-300);
        last_residual = resid_norm;

        if resid_norm < cfg.tol_sigma * se_norm {
            streak += 1;
            if streak >= cfg.consecutive {
                return Ok((
                    theta,
                    SaReport { iters: t + 1, residual: resid_norm, residual_se: se_norm, converged: true },
                ));
            }
        } else {
            streak = 0;
        }

        let a_t = cfg.a0 / (1.0 + t as f64 / cfg.tau);
        let max_var = var.iter().cloned().fold(0.0, f64::max);
        let floor = (1e-3 * max_var).max(cfg.var_floor);
        let mut step: Vec<f64> = if cfg.diag_metric {
            resid.iter().zip(var).map(|(r, v)| a_t * r / v.max(floor)).collect()
        } else {
            resid.iter().map(|r| a_t * r).collect()
        };
        let step_norm = step.iter().map(|s| s * s).sum::<f64>().sqrt();
        if step_norm > cfg.max_step {
            let s = cfg.max_step / step_norm;
            for v in step.iter_mut() {
                *v *= s;
            }
        }
        for (th, s) in theta.iter_mut().zip(&step) {
            *th += s;
        }
        problem.project(&mut theta);
        problem.set_theta(&theta, rng);
    }
    Err(EstimateError::NotConverged { residual: last_residual, iters: cfg.max_iters })
}

// ---------------------------------------------------------------------
// concrete problems
// ---------------------------------------------------------------------

/// Moment matching for the von Mises-Fisher mean vector; the natural
/// parameter is `kappa mu`. Used as a Monte Carlo cross-check of the
/// closed-form Bessel inversion.
pub struct VmfMeanProblem {
    d: usize,
    params: Option<VmfParams>,
}

impl VmfMeanProblem {
    pub fn new(d: usize) -> Self {
        Self { d, params: None }
    }
}

impl MomentMatchProblem for VmfMeanProblem {
    fn stat_dim(&self) -> usize {
        self.d
    }

    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], _rng: &mut R) {
        let eta = RVec::from_column_slice(theta);
        let kappa = eta.norm();
        self.params = if kappa < 1e-12 {
            let mut mu = RVec::zeros(self.d);
            mu[0] = 1.0;
            Some(VmfParams::new(mu, 0.0).expect("valid"))
        } else {
            Some(VmfParams::new(eta / kappa, kappa).expect("valid"))
        };
    }

    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate {
        let p = self.params.as_ref().expect("set_theta first");
        accumulate_blocked(batch, self.d, 10, || {
            let x = vmf_sample(rng, p);
            x.iter().cloned().collect()
        })
    }
}

/// Moment matching for the SO(3) matrix-Fisher mean rotation; the
/// natural parameter is the full 3x3 matrix F.
pub struct RotationFisherSo3Problem {
    params: Option<MatrixFisherParams>,
}

impl RotationFisherSo3Problem {
    pub fn new() -> Self {
        Self { params: None }
    }
}

impl Default for RotationFisherSo3Problem {
    fn default() -> Self {
        Self::new()
    }
}

impl MomentMatchProblem for RotationFisherSo3Problem {
    fn stat_dim(&self) -> usize {
        9
    }

    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], _rng: &mut R) {
        let f = RMat::from_row_slice(3, 3, theta);
        self.params = Some(MatrixFisherParams::new_rotation(3, f).expect("3x3"));
    }

    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate {
        let p = self.params.as_ref().expect("set_theta first");
        let (draws, _) = matrix_fisher_sample_batch(rng, p, batch, &GibbsConfig::default());
        let mut iter = draws.into_iter();
        accumulate_blocked(batch, 9, 10, || {
            let r = iter.next().expect("batch length").unwrap_rotation();
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| r[(i, j)]).collect()
        })
    }
}

/// Scalar concentration fit for a matrix-Fisher distribution with a
/// fixed frame direction: `F = c S`, matching the mean resultant
/// `E[Re tr(S^dag X)] / k`.
pub struct StiefelFisherScalarProblem {
    direction: CMat,
    manifold: StiefelManifold,
    gibbs: GibbsConfig,
    c: f64,
}

impl StiefelFisherScalarProblem {
    pub fn new(direction: CMat, manifold: StiefelManifold, gibbs: GibbsConfig) -> Self {
        Self { direction, manifold, gibbs, c: 0.0 }
    }

    pub fn params(&self) -> MatrixFisherParams {
        MatrixFisherParams::new_stiefel(self.manifold, &self.direction * C64::new(self.c, 0.0))
            .expect("shape fixed")
    }
}

impl MomentMatchProblem for StiefelFisherScalarProblem {
    fn stat_dim(&self) -> usize {
        1
    }

    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], _rng: &mut R) {
        // concentrations are nonnegative
        self.c = theta[0].max(0.0);
    }

    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate {
        let p = self.params();
        let k = self.manifold.k as f64;
        let (draws, _) = matrix_fisher_sample_batch(rng, &p, batch, &self.gibbs);
        let mut iter = draws.into_iter();
        // block per chain so the standard error sees chain-to-chain spread
        accumulate_blocked(batch, 1, self.gibbs.chains.max(8), || {
            let x = match iter.next().expect("batch length") {
                FisherDraw::Frame(f) => f.to_complex(),
                FisherDraw::Rotation(_) => unreachable!("stiefel manifold"),
            };
            vec![(self.direction.adjoint() * x).trace().re / k]
        })
    }

    fn project(&self, theta: &mut [f64]) {
        if theta[0] < 0.0 {
            theta[0] = 0.0;
        }
    }
}

/// Moment matching of `E[X X^dag]` for the matrix-Bingham family; theta
/// is the flattened Hermitian parameter of the positive-exponent
/// convention.
pub struct BinghamSecondMomentProblem {
    manifold: StiefelManifold,
    a_plus: CMat,
    gibbs: GibbsConfig,
}

impl BinghamSecondMomentProblem {
    pub fn new(manifold: StiefelManifold, gibbs: GibbsConfig) -> Self {
        Self { manifold, a_plus: CMat::zeros(manifold.n, manifold.n), gibbs }
    }

    /// Parameters in the sampler's negative-exponent convention.
    pub fn params(&self) -> super::MatrixBinghamParams {
        super::MatrixBinghamParams::new(self.manifold, -&self.a_plus).expect("hermitian")
    }
}

impl MomentMatchProblem for BinghamSecondMomentProblem {
    fn stat_dim(&self) -> usize {
        self.manifold.n * self.manifold.n
    }

    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], _rng: &mut R) {
        self.a_plus = unflatten_hermitian(theta, self.manifold.n);
    }

    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate {
        let p = self.params();
        let (draws, _) = super::bingham_sample_batch(rng, &p, batch, &self.gibbs);
        let mut iter = draws.into_iter();
        accumulate_blocked(batch, self.stat_dim(), 10, || {
            let x = iter.next().expect("batch length").to_complex();
            flatten_hermitian(&(&x * x.adjoint()))
        })
    }
}

/// Streaming mean, per-draw variance, and blocked standard error of a
/// batch of statistics. The blocked SE (variance of block means) stays
/// honest when consecutive draws are correlated.
pub(crate) fn accumulate_blocked<F: FnMut() -> Vec<f64>>(
    batch: usize,
    dim: usize,
    blocks: usize,
    mut draw: F,
) -> StatEstimate {
    let blocks = blocks.clamp(2, batch.max(2));
    let block_len = batch.div_ceil(blocks);
    let mut mean = vec![0.0; dim];
    let mut m2 = vec![0.0; dim];
    let mut block_means: Vec<Vec<f64>> = Vec::with_capacity(blocks);
    let mut current = vec![0.0; dim];
    let mut in_block = 0usize;
    for b in 0..batch {
        let stat = draw();
        for i in 0..dim {
            let delta = stat[i] - mean[i];
            mean[i] += delta / (b + 1) as f64;
            m2[i] += delta * (stat[i] - mean[i]);
            current[i] += stat[i];
        }
        in_block += 1;
        if in_block == block_len || b + 1 == batch {
            block_means.push(current.iter().map(|c| c / in_block as f64).collect());
            current = vec![0.0; dim];
            in_block = 0;
        }
    }
    let var: Vec<f64> = m2.iter().map(|v| v / (batch.max(2) - 1) as f64).collect();
    let nb = block_means.len().max(2) as f64;
    let mut se_sq = 0.0;
    for i in 0..dim {
        let bm: Vec<f64> = block_means.iter().map(|b| b[i]).collect();
        let bmean = bm.iter().sum::<f64>() / nb;
        let bvar = bm.iter().map(|x| (x - bmean) * (x - bmean)).sum::<f64>() / (nb - 1.0);
        se_sq += bvar / nb;
    }
    StatEstimate { mean, var, se_norm: se_sq.sqrt() }
}
