//! Exponential families on spheres, Stiefel manifolds, and rotation
//! groups: densities, samplers, and natural-parameter estimators.
//!
//! Families with tractable normalizers (von Mises-Fisher) expose exact
//! log densities; the matrix families are normalizer-free, with
//! unnormalized densities and moment-matching estimation.

pub mod bessel;
pub mod bingham;
pub mod estimate;
pub mod fisher;
pub mod frame;
pub mod vmf;

pub use bingham::{
    bingham_log_density_unnorm, bingham_sample, bingham_sample_batch, complex_to_real_embed,
    lift_real_frame, macg_sample, MacgParams, MatrixBinghamParams,
};
pub use estimate::{
    estimate_natural_params, flatten_hermitian, unflatten_hermitian, BinghamSecondMomentProblem,
    RotationFisherSo3Problem, StiefelFisherScalarProblem, VmfMeanProblem,
};
pub use fisher::{
    bmf_log_density_unnorm, matrix_fisher_log_density_unnorm, matrix_fisher_sample,
    matrix_fisher_sample_batch, sample_von_mises, FisherDraw, FisherManifold, MatrixFisherParams,
};
pub use frame::{
    frame_bingham_log_density_unnorm, frame_bingham_params_from_choi, frame_bingham_sample,
    FrameBinghamChain, FrameBinghamParams, FrameBinghamProblem,
};
pub use vmf::{vmf_estimate, vmf_log_density, vmf_sample, VmfError, VmfParams};

use crate::uniform::Field;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

/// A moment-matching target for [`estimate_natural_params`]: the family
/// exposes its sufficient statistic as a flat real vector paired with
/// the flattened natural parameter.
pub trait MomentMatchProblem {
    fn stat_dim(&self) -> usize;

    /// Installs the flattened natural parameter (may keep warm chain
    /// state across calls).
    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], rng: &mut R);

    /// Monte Carlo estimate of `E_theta[T]` over a batch of draws.
    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate;

    /// Feasibility projection (nonnegativity, norm caps).
    fn project(&self, _theta: &mut [f64]) {}
}

/// Stochastic-approximation schedule: step `a_t = a0 / (1 + t/tau)`.
#[derive(Debug, Clone, Serialize)]
pub struct SaConfig {
    pub a0: f64,
    pub tau: f64,
    pub batch: usize,
    pub max_iters: usize,
    /// declare convergence when the residual is below this many MC
    /// standard errors...
    pub tol_sigma: f64,
    /// ...for this many consecutive checks
    pub consecutive: usize,
    /// scale each component's update by its inverse batch variance
    pub diag_metric: bool,
    pub var_floor: f64,
    pub max_step: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            a0: 1.0,
            tau: 50.0,
            batch: 500,
            max_iters: 300,
            tol_sigma: 3.0,
            consecutive: 5,
            diag_metric: true,
            var_floor: 1e-6,
            max_step: 5.0,
        }
    }
}

/// A batch estimate of the expected sufficient statistic: per-component
/// mean, per-draw variance (the exponential-family metric), and a
/// blocked standard error of the mean that stays honest under chain
/// autocorrelation.
#[derive(Debug, Clone)]
pub struct StatEstimate {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub se_norm: f64,
}

/// Outcome of a moment-matching run.
#[derive(Debug, Clone, Serialize)]
pub struct SaReport {
    pub iters: usize,
    pub residual: f64,
    pub residual_se: f64,
    pub converged: bool,
}

/// A Stiefel manifold `V_k(F^n)` as a sample space descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StiefelManifold {
    pub n: usize,
    pub k: usize,
    pub field: Field,
}

impl StiefelManifold {
    pub fn real(n: usize, k: usize) -> Self {
        assert!(k <= n);
        Self { n, k, field: Field::Real }
    }

    pub fn complex(n: usize, k: usize) -> Self {
        assert!(k <= n);
        Self { n, k, field: Field::Complex }
    }
}

#[derive(Debug, Error)]
pub enum ExpfamError {
    #[error("{what}: expected shape {expected:?}, got {got:?}")]
    ShapeMismatch { what: &'static str, expected: (usize, usize), got: (usize, usize) },
    #[error("parameter not Hermitian: defect {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("matrix not positive definite: min eigenvalue {min_eig:e}")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("invalid chain configuration: {0}")]
    BadChainConfig(String),
    #[error(transparent)]
    Vmf(#[from] VmfError),
}

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("target expectation rejected: {0}")]
    TargetOnBoundary(String),
    #[error("invalid target: {0}")]
    BadTarget(String),
    #[error("moment matching did not converge: residual {residual:e} after {iters} iterations")]
    NotConverged { residual: f64, iters: usize },
    #[error(transparent)]
    Expfam(#[from] ExpfamError),
}

/// Burn-in, thinning, and chain replication for Gibbs sampling. At high
/// concentration a single chain moves slowly; spreading a batch over
/// independent chains keeps the batch mean honest.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GibbsConfig {
    pub burn_in: usize,
    pub thin: usize,
    pub chains: usize,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        Self { burn_in: 100, thin: 10, chains: 1 }
    }
}

impl GibbsConfig {
    pub fn with_chains(burn_in: usize, thin: usize, chains: usize) -> Self {
        Self { burn_in, thin, chains }
    }

    pub fn validate(&self) -> Result<(), ExpfamError> {
        if self.burn_in == 0 || self.thin == 0 || self.chains == 0 {
            return Err(ExpfamError::BadChainConfig(
                "burn-in, thinning, and chain count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-run sampling diagnostics, emitted as a JSON sidecar by the
/// experiment runner.
#[derive(Debug, Clone, Serialize)]
pub struct ChainDiagnostics {
    pub method: String,
    pub draws: usize,
    pub rejection_trials: u64,
    pub accepts: u64,
    pub sweeps: u64,
    pub mh_fallbacks: u64,
}

impl ChainDiagnostics {
    pub fn new(method: &str) -> Self {
        Self {
            method: method.into(),
            draws: 0,
            rejection_trials: 0,
            accepts: 0,
            sweeps: 0,
            mh_fallbacks: 0,
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.rejection_trials == 0 {
            f64::NAN
        } else {
            self.accepts as f64 / self.rejection_trials as f64
        }
    }
}
