//! The frame-Bingham distribution: an exponential family on the frame
//! form of CPTP maps whose sufficient statistic is the Choi matrix.
//!
//! The density relative to the Haar measure on the frame manifold is
//! `exp(tr(Theta Choi(xi)))` with Hermitian natural parameter `Theta`.
//! Sampling is column-wise Gibbs: conditioned on the other columns, a
//! frame column lives on the unit sphere of their orthogonal complement
//! and feels a quadratic-plus-linear (Bingham-von Mises-Fisher)
//! exponent, sampled by rejection with an angular central Gaussian
//! envelope and a linear-term bound. Singular targets (Choi rows that
//! vanish) pin the corresponding blocks to zero by restricting the
//! projection step.

use super::bingham::VectorBinghamEngine;
use super::estimate::{estimate_natural_params, flatten_hermitian, unflatten_hermitian};
use super::{
    ChainDiagnostics, EstimateError, ExpfamError, GibbsConfig, MomentMatchProblem, SaConfig,
    SaReport, StatEstimate,
};
use crate::linalg::{
    complexify_vec, hermiticity_defect, realify_hermitian, realify_vec, CMat, CVec, RMat, RVec,
    C64, ZERO,
};
use crate::repr::{frame_to_choi, ChoiMatrix, FrameForm};
use crate::uniform::sample_ginibre_complex;
use rand::Rng;
use rand_distr::Distribution;

/// Rejection attempts for one conditional draw before falling back to a
/// few Metropolis-Hastings steps (recorded in the diagnostics).
const BMF_REJECTION_ATTEMPTS: u64 = 2000;
const BMF_MH_STEPS: usize = 30;

/// Choi diagonal entries below this are treated as exactly zero and pin
/// the corresponding frame block.
pub const PIN_TOL: f64 = 1e-9;

/// Natural parameter of the frame-Bingham distribution.
#[derive(Debug, Clone)]
pub struct FrameBinghamParams {
    dim: usize,
    theta: CMat,
    /// frame blocks forced to the zero vector (singular targets)
    pinned: Vec<usize>,
}

impl FrameBinghamParams {
    pub fn new(dim: usize, theta: CMat, pinned: Vec<usize>) -> Result<Self, ExpfamError> {
        let n2 = dim * dim;
        if theta.nrows() != n2 || theta.ncols() != n2 {
            return Err(ExpfamError::ShapeMismatch {
                what: "frame-bingham parameter",
                expected: (n2, n2),
                got: (theta.nrows(), theta.ncols()),
            });
        }
        let defect = hermiticity_defect(&theta);
        if defect > 1e-10 {
            return Err(ExpfamError::NotHermitian { defect });
        }
        let theta = (&theta + theta.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { dim, theta, pinned })
    }

    pub fn uniform(dim: usize) -> Self {
        let n2 = dim * dim;
        Self { dim, theta: CMat::zeros(n2, n2), pinned: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> &CMat {
        &self.theta
    }

    pub fn pinned(&self) -> &[usize] {
        &self.pinned
    }
}

/// Unnormalized log density `tr(Theta Choi(xi))`.
pub fn frame_bingham_log_density_unnorm(f: &FrameForm, p: &FrameBinghamParams) -> f64 {
    let choi = frame_to_choi(f);
    (&p.theta * choi.mat()).trace().re
}

// ---------------------------------------------------------------------
// Gibbs chain
// ---------------------------------------------------------------------

/// Gibbs chain over the columns of the frame form. The state is always a
/// valid frame: orthonormal columns with the pinned blocks at zero.
pub struct FrameBinghamChain {
    params: FrameBinghamParams,
    state: CMat,
    pub sweeps: u64,
    pub rejection_trials: u64,
    pub accepts: u64,
    pub mh_fallbacks: u64,
    /// consecutive conditionals that ended in the MH fallback; once the
    /// rejection branches starve, probe them only briefly
    fallback_streak: u32,
}

impl FrameBinghamChain {
    pub fn new<R: Rng + ?Sized>(params: FrameBinghamParams, rng: &mut R) -> Self {
        let n = params.dim;
        let n3 = n * n * n;
        // build an initial frame column by column inside the allowed
        // subspaces
        let mut state = CMat::zeros(n3, n);
        for j in 0..n {
            let constraints: Vec<CVec> =
                (0..j).map(|c| state.column(c).clone_owned()).collect();
            let basis = allowed_basis(rng, n, j, &constraints, &params.pinned);
            let z = uniform_complex_sphere(rng, basis.ncols());
            state.set_column(j, &(&basis * z));
        }
        Self {
            params,
            state,
            sweeps: 0,
            rejection_trials: 0,
            accepts: 0,
            mh_fallbacks: 0,
            fallback_streak: 0,
        }
    }

    /// Continues a chain at an existing state under new parameters
    /// (pinned blocks must agree with the state's zero pattern).
    pub fn with_state(params: FrameBinghamParams, state: CMat) -> Self {
        Self {
            params,
            state,
            sweeps: 0,
            rejection_trials: 0,
            accepts: 0,
            mh_fallbacks: 0,
            fallback_streak: 0,
        }
    }

    pub fn state(&self) -> &CMat {
        &self.state
    }

    pub fn frame(&self) -> FrameForm {
        FrameForm::new_unchecked(self.params.dim, self.state.clone())
    }

    pub fn choi(&self) -> ChoiMatrix {
        frame_to_choi(&self.frame())
    }

    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.params.dim;
        for j in 0..n {
            let constraints: Vec<CVec> = (0..n)
                .filter(|&c| c != j)
                .map(|c| self.state.column(c).clone_owned())
                .collect();
            let basis = allowed_basis(rng, n, j, &constraints, &self.params.pinned);
            // conditional exponent: z^dag Q z + 2 Re(z^dag w) in basis
            // coordinates
            let dim = basis.ncols();
            let mut q = CMat::zeros(dim, dim);
            for b in 0..dim {
                let qcol =
                    apply_column_quadratic(&self.params.theta, n, j, &basis.column(b).clone_owned());
                let proj = basis.adjoint() * qcol;
                q.set_column(b, &proj);
            }
            let w = column_linear(&self.params.theta, &self.state, n, j);
            let w_basis = basis.adjoint() * w;

            let a_real = realify_hermitian(&((&q + q.adjoint()) * C64::new(0.5, 0.0)));
            let lin = realify_vec(&w_basis.clone_owned()) * 2.0;
            let current = basis.adjoint() * self.state.column(j);
            let y_cur = realify_vec(&current.clone_owned());
            let y = self.sample_bmf(rng, &a_real, &lin, &y_cur);
            let z = complexify_vec(&y);
            self.state.set_column(j, &(&basis * z));
        }
        self.sweeps += 1;
        if self.sweeps % 64 == 0 {
            self.renormalize();
        }
    }

    /// Draws from the quadratic-plus-linear conditional on the sphere.
    ///
    /// Two exact rejection branches cover the two concentration regimes:
    /// an angular-central-Gaussian envelope with the linear bound
    /// `exp(c.y - |c|)` when the quadratic part dominates, and a von
    /// Mises-Fisher envelope with the quadratic bound when the linear
    /// part dominates. If both starve, a geodesic random-walk
    /// Metropolis kernel (symmetric proposal, so the conditional stays
    /// invariant) advances the chain from the current point.
    fn sample_bmf<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        a: &RMat,
        lin: &RVec,
        current: &RVec,
    ) -> RVec {
        let lin_norm = lin.norm();
        let budget = if self.fallback_streak >= 3 { 40 } else { BMF_REJECTION_ATTEMPTS };
        let mut engine = VectorBinghamEngine::new(a);
        for _ in 0..budget {
            self.rejection_trials += 1;
            let y = engine.sample(rng);
            let u: f64 = rng.gen();
            if u.ln() <= lin.dot(&y) - lin_norm {
                self.accepts += 1;
                self.fallback_streak = 0;
                return y;
            }
        }
        let sym = (a + a.transpose()) * 0.5;
        let (evals, _) = crate::linalg::eigh_real_asc(&sym);
        let lam_max = *evals.last().expect("nonempty");
        let lam_min = evals[0];
        if lin_norm > 1e-10 {
            let vmf = super::vmf::VmfParams::new(lin / lin_norm, lin_norm).expect("unit direction");
            for _ in 0..budget {
                self.rejection_trials += 1;
                let y = super::vmf::vmf_sample(rng, &vmf);
                let quad = (y.transpose() * &sym * &y)[(0, 0)];
                let u: f64 = rng.gen();
                if u.ln() <= quad - lam_max {
                    self.accepts += 1;
                    self.fallback_streak = 0;
                    return y;
                }
            }
        }
        // geodesic random walk: step size matched to the target's
        // curvature scale
        self.mh_fallbacks += 1;
        self.fallback_streak = self.fallback_streak.saturating_add(1);
        let target = |y: &RVec| (y.transpose() * &sym * y)[(0, 0)] + lin.dot(y);
        let scale = (lam_max - lam_min) + lin_norm;
        let sigma = (1.0 / (1.0 + scale).sqrt()).min(0.5);
        let m = lin.len();
        let mut y = current.clone();
        let mut f_cur = target(&y);
        for _ in 0..BMF_MH_STEPS {
            let g = RVec::from_fn(m, |_, _| {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                z
            });
            let tangent = &g - &y * y.dot(&g);
            let tn = tangent.norm();
            if tn < 1e-14 {
                continue;
            }
            let delta: f64 = {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                (z * sigma).abs()
            };
            let prop = &y * delta.cos() + (tangent / tn) * delta.sin();
            let f_prop = target(&prop);
            if rng.gen::<f64>().ln() <= f_prop - f_cur {
                y = prop;
                f_cur = f_prop;
            }
        }
        y
    }

    fn renormalize(&mut self) {
        // ordered Gram-Schmidt keeps the pinned zero pattern of earlier
        // columns; re-zero pinned rows afterwards to absorb roundoff
        let n = self.params.dim;
        let n2 = n * n;
        for j in 0..n {
            let mut col = self.state.column(j).clone_owned();
            for c in 0..j {
                let prev = self.state.column(c);
                let coeff = prev.dotc(&col);
                col -= prev * coeff;
            }
            for &m in &self.params.pinned {
                if m / n == j {
                    let i = m % n;
                    for r in i * n2..(i + 1) * n2 {
                        col[r] = ZERO;
                    }
                }
            }
            let norm = col.norm();
            col /= C64::new(norm, 0.0);
            self.state.set_column(j, &col);
        }
    }

    pub fn diagnostics(&self, draws: usize) -> ChainDiagnostics {
        let mut d = ChainDiagnostics::new("frame-bingham-gibbs");
        d.draws = draws;
        d.sweeps = self.sweeps;
        d.rejection_trials = self.rejection_trials;
        d.accepts = self.accepts;
        d.mh_fallbacks = self.mh_fallbacks;
        d
    }
}

/// Uniform point on the complex unit sphere.
fn uniform_complex_sphere<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVec {
    loop {
        let z = CVec::from_fn(dim, |_, _| {
            C64::new(
                rand_distr::StandardNormal.sample(rng),
                rand_distr::StandardNormal.sample(rng),
            )
        });
        let n = z.norm();
        if n > 1e-12 {
            return z / C64::new(n, 0.0);
        }
    }
}

/// Applies the column's block-quadratic operator: block `i` of the
/// output is `sum_{i'} Theta[jN+i, jN+i'] c_{i'}`.
fn apply_column_quadratic(theta: &CMat, n: usize, j: usize, col: &CVec) -> CVec {
    let n2 = n * n;
    let mut out = CVec::zeros(n * n2);
    for i in 0..n {
        for ip in 0..n {
            let coeff = theta[(j * n + i, j * n + ip)];
            if coeff == ZERO {
                continue;
            }
            for r in 0..n2 {
                out[i * n2 + r] += coeff * col[ip * n2 + r];
            }
        }
    }
    out
}

/// Linear coupling of column `j` to the other columns:
/// block `i` is `sum_{m' outside column j} Theta[jN+i, m'] xi_{m'}`.
fn column_linear(theta: &CMat, state: &CMat, n: usize, j: usize) -> CVec {
    let n2 = n * n;
    let mut out = CVec::zeros(n * n2);
    for i in 0..n {
        for mp in 0..n2 {
            if mp / n == j {
                continue;
            }
            let coeff = theta[(j * n + i, mp)];
            if coeff == ZERO {
                continue;
            }
            let (jp, ip) = (mp / n, mp % n);
            for r in 0..n2 {
                out[i * n2 + r] += coeff * state[(ip * n2 + r, jp)];
            }
        }
    }
    out
}

/// Orthonormal basis of the allowed subspace for column `j`: orthogonal
/// to the constraint columns, zero on the pinned blocks of column `j`.
fn allowed_basis<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    j: usize,
    constraints: &[CVec],
    pinned: &[usize],
) -> CMat {
    let n2 = n * n;
    let n3 = n * n2;
    let pinned_rows: Vec<usize> = pinned
        .iter()
        .filter(|&&m| m / n == j)
        .flat_map(|&m| {
            let i = m % n;
            i * n2..(i + 1) * n2
        })
        .collect();
    // constraints restricted to the coordinate subspace
    let mut restricted: Vec<CVec> = Vec::new();
    for c in constraints {
        let mut v = c.clone();
        for &r in &pinned_rows {
            v[r] = ZERO;
        }
        if v.norm() > 1e-12 {
            restricted.push(v);
        }
    }
    // orthonormalize the restricted constraints
    let mut ortho: Vec<CVec> = Vec::new();
    for v in restricted {
        let mut v = v;
        for o in &ortho {
            let coeff = o.dotc(&v);
            v -= o * coeff;
        }
        let norm = v.norm();
        if norm > 1e-10 {
            v /= C64::new(norm, 0.0);
            ortho.push(v);
        }
    }
    let dim = n3 - pinned_rows.len() - ortho.len();
    loop {
        let mut g = sample_ginibre_complex(rng, n3, dim);
        for &r in &pinned_rows {
            for c in 0..dim {
                g[(r, c)] = ZERO;
            }
        }
        for o in &ortho {
            let coeffs = o.adjoint() * &g;
            g -= o * coeffs;
        }
        let svd = g.svd(true, false);
        let u = svd.u.expect("requested");
        let ok = svd.singular_values.iter().take(dim).all(|s| *s > 1e-8);
        if ok {
            return u.columns(0, dim).clone_owned();
        }
    }
}

/// Draws frames from the distribution, with burn-in and thinning spread
/// over the configured number of independent chains.
pub fn frame_bingham_sample<R: Rng + ?Sized>(
    rng: &mut R,
    p: &FrameBinghamParams,
    count: usize,
    gibbs: &GibbsConfig,
) -> Result<(Vec<FrameForm>, ChainDiagnostics), ExpfamError> {
    gibbs.validate()?;
    let chains = gibbs.chains.min(count.max(1));
    let mut draws = Vec::with_capacity(count);
    let mut diag = ChainDiagnostics::new("frame-bingham-gibbs");
    for c in 0..chains {
        let quota = count / chains + usize::from(c < count % chains);
        if quota == 0 {
            continue;
        }
        let mut chain = FrameBinghamChain::new(p.clone(), rng);
        for _ in 0..gibbs.burn_in {
            chain.sweep(rng);
        }
        for _ in 0..quota {
            for _ in 0..gibbs.thin {
                chain.sweep(rng);
            }
            draws.push(chain.frame());
        }
        let d = chain.diagnostics(quota);
        diag.sweeps += d.sweeps;
        diag.rejection_trials += d.rejection_trials;
        diag.accepts += d.accepts;
        diag.mh_fallbacks += d.mh_fallbacks;
    }
    diag.draws = count;
    Ok((draws, diag))
}

// ---------------------------------------------------------------------
// moment matching
// ---------------------------------------------------------------------

/// Moment-matching problem: find Theta so that the mean Choi matrix of
/// the frame-Bingham distribution hits a target, with the Frobenius norm
/// of Theta capped by the concentration budget.
pub struct FrameBinghamProblem {
    dim: usize,
    pinned: Vec<usize>,
    cap: f64,
    inner_thin: usize,
    chain: Option<FrameBinghamChain>,
}

impl FrameBinghamProblem {
    pub fn new(dim: usize, pinned: Vec<usize>, cap: f64) -> Self {
        Self { dim, pinned, cap, inner_thin: 2, chain: None }
    }
}

impl MomentMatchProblem for FrameBinghamProblem {
    fn stat_dim(&self) -> usize {
        let n2 = self.dim * self.dim;
        n2 * n2
    }

    fn set_theta<R: Rng + ?Sized>(&mut self, theta: &[f64], rng: &mut R) {
        let n2 = self.dim * self.dim;
        let mat = unflatten_hermitian(theta, n2);
        let params = FrameBinghamParams::new(self.dim, mat, self.pinned.clone())
            .expect("hermitian by construction");
        self.chain = Some(match self.chain.take() {
            // keep the warm state across parameter updates
            Some(old) => {
                let mut c = FrameBinghamChain::with_state(params, old.state().clone());
                c.sweeps = old.sweeps;
                c.rejection_trials = old.rejection_trials;
                c.accepts = old.accepts;
                c.mh_fallbacks = old.mh_fallbacks;
                c
            }
            None => {
                let mut c = FrameBinghamChain::new(params, rng);
                for _ in 0..50 {
                    c.sweep(rng);
                }
                c
            }
        });
    }

    fn mean_stat<R: Rng + ?Sized>(&mut self, rng: &mut R, batch: usize) -> StatEstimate {
        let chain = self.chain.as_mut().expect("set_theta first");
        let d = {
            let n2 = chain.params.dim * chain.params.dim;
            n2 * n2
        };
        let inner = self.inner_thin;
        super::estimate::accumulate_blocked(batch, d, 16, || {
            for _ in 0..inner {
                chain.sweep(rng);
            }
            flatten_hermitian(chain.choi().mat())
        })
    }

    fn project(&self, theta: &mut [f64]) {
        let norm: f64 = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm > self.cap {
            let s = self.cap / norm;
            for t in theta.iter_mut() {
                *t *= s;
            }
        }
    }
}

/// Fits a frame-Bingham distribution whose mean Choi matrix matches the
/// target, up to the concentration budget (the Frobenius cap on Theta).
/// Pinned blocks are detected from vanishing diagonal entries of the
/// target.
pub fn frame_bingham_params_from_choi<R: Rng + ?Sized>(
    rng: &mut R,
    target: &ChoiMatrix,
    concentration: f64,
    cfg: &SaConfig,
) -> Result<(FrameBinghamParams, SaReport), EstimateError> {
    if concentration <= 0.0 {
        return Err(EstimateError::BadTarget(format!(
            "concentration must be positive, got {concentration}"
        )));
    }
    let n = target.dim();
    let n2 = n * n;
    let pinned: Vec<usize> =
        (0..n2).filter(|&m| target.mat()[(m, m)].re < PIN_TOL).collect();
    let target_flat = flatten_hermitian(target.mat());

    // warm start pointing from the uniform mean toward the target
    let uniform_mean = CMat::identity(n2, n2) * C64::new(1.0 / n as f64, 0.0);
    let mut theta0_mat = (target.mat() - &uniform_mean) * C64::new(8.0, 0.0);
    theta0_mat = (&theta0_mat + theta0_mat.adjoint()) * C64::new(0.5, 0.0);
    let mut theta0 = flatten_hermitian(&theta0_mat);
    let mut problem = FrameBinghamProblem::new(n, pinned.clone(), concentration);
    problem.project(&mut theta0);

    // coarse phase with the caller's budget, then a short refinement
    // phase with larger batches for an honest final residual
    let (theta, _) = estimate_natural_params(&mut problem, theta0, &target_flat, cfg, rng)?;
    let refine = SaConfig {
        batch: cfg.batch * 5,
        max_iters: (cfg.max_iters / 4).max(20),
        a0: cfg.a0 * 0.5,
        ..cfg.clone()
    };
    let (theta, report) = estimate_natural_params(&mut problem, theta, &target_flat, &refine, rng)?;
    let params = FrameBinghamParams::new(n, unflatten_hermitian(&theta, n2), pinned)
        .expect("hermitian by construction");
    Ok((params, report))
}
