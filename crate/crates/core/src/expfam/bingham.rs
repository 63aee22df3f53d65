//! Matrix-Bingham and matrix angular central Gaussian distributions on
//! Stiefel manifolds.
//!
//! The vector Bingham sampler is exact rejection from an angular central
//! Gaussian envelope. Matrix draws use the same envelope at the matrix
//! level and fall back to column-wise Gibbs when the rejection rate
//! collapses. Complex vector conditionals are sampled through the real
//! embedding, which is a bijection for single columns.

use super::{ChainDiagnostics, ExpfamError, GibbsConfig, StiefelManifold};
use crate::linalg::{
    complexify_vec, eigh_desc, eigh_real_asc, hermiticity_defect, inv_sqrt_hermitian,
    inv_sqrt_symmetric_real, max_imag, realify_hermitian, to_real, CMat, CVec, RMat,
    RVec, C64,
};
use crate::uniform::{sample_ginibre_complex, sample_ginibre_real, Field, StiefelPoint};
use rand::Rng;

/// Rejection attempts before a matrix draw falls back to Gibbs
/// (acceptance below roughly 0.1% at this point).
const REJECTION_FALLBACK_ATTEMPTS: u64 = 3000;

// ---------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------

/// Natural parameter of a matrix-Bingham distribution. The density
/// convention is the negative exponent `exp(-tr(X^dag A X))` relative to
/// the Haar measure; internally the samplers work with the positive
/// exponent and flip the sign at this boundary (the one place the two
/// conventions meet).
#[derive(Debug, Clone)]
pub struct MatrixBinghamParams {
    pub manifold: StiefelManifold,
    a: CMat,
}

impl MatrixBinghamParams {
    pub fn new(manifold: StiefelManifold, a: CMat) -> Result<Self, ExpfamError> {
        if a.nrows() != manifold.n || a.ncols() != manifold.n {
            return Err(ExpfamError::ShapeMismatch {
                what: "bingham parameter",
                expected: (manifold.n, manifold.n),
                got: (a.nrows(), a.ncols()),
            });
        }
        let defect = hermiticity_defect(&a);
        if defect > 1e-12 {
            return Err(ExpfamError::NotHermitian { defect });
        }
        if manifold.field == Field::Real && max_imag(&a) > 1e-12 {
            return Err(ExpfamError::NotHermitian { defect: max_imag(&a) });
        }
        Ok(Self { manifold, a })
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }
}

/// Unnormalized log density `-tr(X^dag A X)` of the matrix-Bingham
/// distribution at a frame.
pub fn bingham_log_density_unnorm(x: &StiefelPoint, p: &MatrixBinghamParams) -> f64 {
    let xc = x.to_complex();
    -(xc.adjoint() * &p.a * &xc).trace().re
}

/// Concentration matrix of a matrix angular central Gaussian.
#[derive(Debug, Clone)]
pub struct MacgParams {
    pub manifold: StiefelManifold,
    sigma: CMat,
}

impl MacgParams {
    pub fn new(manifold: StiefelManifold, sigma: CMat) -> Result<Self, ExpfamError> {
        if sigma.nrows() != manifold.n || sigma.ncols() != manifold.n {
            return Err(ExpfamError::ShapeMismatch {
                what: "macg concentration",
                expected: (manifold.n, manifold.n),
                got: (sigma.nrows(), sigma.ncols()),
            });
        }
        let defect = hermiticity_defect(&sigma);
        if defect > 1e-12 {
            return Err(ExpfamError::NotHermitian { defect });
        }
        let (vals, _) = eigh_desc(&sigma);
        let min = vals.last().copied().unwrap_or(0.0);
        if min <= 0.0 {
            return Err(ExpfamError::NotPositiveDefinite { min_eig: min });
        }
        Ok(Self { manifold, sigma })
    }

    pub fn sigma(&self) -> &CMat {
        &self.sigma
    }
}

// ---------------------------------------------------------------------
// real/complex embedding
// ---------------------------------------------------------------------

/// Real embedding of a complex Hermitian parameter,
/// `[[Re A, -Im A], [Im A, Re A]]`.
pub fn complex_to_real_embed(a: &CMat) -> Result<RMat, ExpfamError> {
    let defect = hermiticity_defect(a);
    if defect > 1e-12 {
        return Err(ExpfamError::NotHermitian { defect });
    }
    Ok(realify_hermitian(a))
}

/// Lift of a real `2n x k` frame back to a complex `n x k` matrix,
/// `Z = Y_top + i Y_bottom`. Exact inverse of stacking real over
/// imaginary parts.
pub fn lift_real_frame(y: &RMat) -> CMat {
    let n = y.nrows() / 2;
    CMat::from_fn(n, y.ncols(), |i, j| C64::new(y[(i, j)], y[(i + n, j)]))
}

// ---------------------------------------------------------------------
// vector Bingham via ACG rejection
// ---------------------------------------------------------------------

/// Exact sampler for the density `exp(+x^T a x)` on the unit sphere of
/// R^m, by rejection from an angular central Gaussian envelope.
pub(crate) struct VectorBinghamEngine {
    evecs: RMat,
    /// shifted eigenvalues of the negated exponent, min is 0
    mu: Vec<f64>,
    /// envelope scale in the eigenbasis: 1/sqrt(1 + 2 mu_i / b)
    scale: Vec<f64>,
    b: f64,
    log_bound: f64,
    pub trials: u64,
    pub accepts: u64,
}

impl VectorBinghamEngine {
    pub fn new(a_plus: &RMat) -> Self {
        let m = a_plus.nrows();
        let sym = (a_plus + a_plus.transpose()) * 0.5;
        let (vals, evecs) = eigh_real_asc(&sym);
        let lam_max = vals[m - 1];
        // exp(x^T a x) = e^{lam_max} exp(-x^T (lam_max I - a) x)
        let mu: Vec<f64> = vals.iter().map(|v| lam_max - v).collect();
        let b = solve_envelope_b(&mu, 1.0, m as f64);
        let scale: Vec<f64> = mu.iter().map(|m| 1.0 / (1.0 + 2.0 * m / b).sqrt()).collect();
        let mf = m as f64;
        let log_bound = (mf / 2.0) * (mf / b).ln() - (mf - b) / 2.0;
        let _ = lam_max;
        Self { evecs, mu, scale, b, log_bound, trials: 0, accepts: 0 }
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RVec {
        let m = self.mu.len();
        loop {
            self.trials += 1;
            // y ~ N(0, Omega^{-1}) in the eigenbasis, then normalize
            let mut y = RVec::from_fn(m, |i, _| {
                use rand_distr::Distribution;
                let g: f64 = rand_distr::StandardNormal.sample(rng);
                g * self.scale[i]
            });
            let n = y.norm();
            if n < 1e-300 {
                continue;
            }
            y /= n;
            let t: f64 = (0..m).map(|i| self.mu[i] * y[i] * y[i]).sum();
            let omega_quad = 1.0 + 2.0 * t / self.b;
            let log_ratio = -t + (m as f64 / 2.0) * omega_quad.ln() - self.log_bound;
            let u: f64 = rng.gen();
            if u.ln() <= log_ratio {
                self.accepts += 1;
                return &self.evecs * y;
            }
        }
    }
}

/// Solves `sum_i factor / (b + 2 mu_i) = 1` for b in (0, factor * m-ish].
fn solve_envelope_b(mu: &[f64], factor: f64, upper: f64) -> f64 {
    let f = |b: f64| -> f64 { mu.iter().map(|m| factor / (b + 2.0 * m)).sum::<f64>() - 1.0 };
    let hi = factor * upper;
    if f(hi) >= 0.0 {
        return hi;
    }
    let mut lo = 1e-12;
    let mut hi = hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// One draw from `exp(+x^T a x)` on the unit sphere in R^m.
pub fn sample_vector_bingham_plus_real<R: Rng + ?Sized>(rng: &mut R, a: &RMat) -> RVec {
    VectorBinghamEngine::new(a).sample(rng)
}

/// One draw from `exp(+z^dag a z)` on the unit sphere in C^n through the
/// real embedding (exact for single columns).
pub fn sample_vector_bingham_plus_complex<R: Rng + ?Sized>(rng: &mut R, a: &CMat) -> CVec {
    let ar = realify_hermitian(a);
    let y = sample_vector_bingham_plus_real(rng, &ar);
    complexify_vec(&y)
}

// ---------------------------------------------------------------------
// MACG
// ---------------------------------------------------------------------

/// Matrix angular central Gaussian draw: `X = W (W^dag W)^{-1/2}` with
/// matrix-normal `W` of column covariance Sigma. Sigma = I is uniform.
pub fn macg_sample<R: Rng + ?Sized>(rng: &mut R, p: &MacgParams) -> StiefelPoint {
    let (n, k) = (p.manifold.n, p.manifold.k);
    match p.manifold.field {
        Field::Real => {
            let sig = to_real(&p.sigma);
            let (vals, vecs) = eigh_real_asc(&sig);
            let mut half = RMat::zeros(n, n);
            for (i, v) in vals.iter().enumerate() {
                half[(i, i)] = v.max(0.0).sqrt();
            }
            let sqrt_sigma = &vecs * half * vecs.transpose();
            let w = sqrt_sigma * sample_ginibre_real(rng, n, k);
            let gram = w.transpose() * &w;
            StiefelPoint::Real(&w * inv_sqrt_symmetric_real(&gram))
        }
        Field::Complex => {
            let (vals, vecs) = eigh_desc(&p.sigma);
            let mut half = CMat::zeros(n, n);
            for (i, v) in vals.iter().enumerate() {
                half[(i, i)] = C64::new(v.max(0.0).sqrt(), 0.0);
            }
            let sqrt_sigma = &vecs * half * vecs.adjoint();
            let w = sqrt_sigma * sample_ginibre_complex(rng, n, k);
            let gram = w.adjoint() * &w;
            StiefelPoint::Complex(&w * inv_sqrt_hermitian(&gram))
        }
    }
}

// ---------------------------------------------------------------------
// matrix Bingham
// ---------------------------------------------------------------------

/// One matrix-Bingham draw (negative-exponent convention, see
/// [`MatrixBinghamParams`]).
pub fn bingham_sample<R: Rng + ?Sized>(rng: &mut R, p: &MatrixBinghamParams) -> StiefelPoint {
    bingham_sample_batch(rng, p, 1, &GibbsConfig::default()).0.pop().expect("one draw")
}

/// Batch of matrix-Bingham draws with diagnostics. Rejection with a MACG
/// envelope is tried first; if the acceptance rate collapses the batch
/// switches to column-wise Gibbs with the given burn-in and thinning.
pub fn bingham_sample_batch<R: Rng + ?Sized>(
    rng: &mut R,
    p: &MatrixBinghamParams,
    count: usize,
    gibbs: &GibbsConfig,
) -> (Vec<StiefelPoint>, ChainDiagnostics) {
    let (n, k) = (p.manifold.n, p.manifold.k);
    let mut diag = ChainDiagnostics::new("bingham-rejection");

    // the exponent is constant on the full square manifold, so any
    // parameter gives the uniform distribution there
    if k == n {
        diag.method = "uniform".into();
        let draws = (0..count)
            .map(|_| crate::uniform::sample_stiefel_uniform(rng, n, k, p.manifold.field))
            .collect();
        diag.draws = count;
        return (draws, diag);
    }

    // negate once: samplers below use the positive-exponent convention
    let a_plus = -&p.a;

    if k == 1 {
        // exact vector case
        let mut draws = Vec::with_capacity(count);
        match p.manifold.field {
            Field::Real => {
                let mut engine = VectorBinghamEngine::new(&to_real(&a_plus));
                for _ in 0..count {
                    draws.push(StiefelPoint::Real(RMat::from_column_slice(
                        n,
                        1,
                        engine.sample(rng).as_slice(),
                    )));
                }
                diag.rejection_trials = engine.trials;
                diag.accepts = engine.accepts;
            }
            Field::Complex => {
                let ar = realify_hermitian(&a_plus);
                let mut engine = VectorBinghamEngine::new(&ar);
                for _ in 0..count {
                    let z = complexify_vec(&engine.sample(rng));
                    draws.push(StiefelPoint::Complex(CMat::from_column_slice(n, 1, z.as_slice())));
                }
                diag.rejection_trials = engine.trials;
                diag.accepts = engine.accepts;
            }
        }
        diag.draws = count;
        return (draws, diag);
    }

    let mut draws = Vec::with_capacity(count);
    let mut rejector = MatrixRejection::new(&a_plus, p.manifold);
    while draws.len() < count {
        match rejector.try_sample(rng, REJECTION_FALLBACK_ATTEMPTS) {
            Some(x) => draws.push(x),
            None => break,
        }
    }
    diag.rejection_trials = rejector.trials;
    diag.accepts = rejector.accepts;

    if draws.len() < count {
        // rejection collapsed; Gibbs chains for the remainder
        diag.method = "bingham-gibbs".into();
        let remaining = count - draws.len();
        let chains = gibbs.chains.max(1).min(remaining);
        for c in 0..chains {
            let quota = remaining / chains + usize::from(c < remaining % chains);
            if quota == 0 {
                continue;
            }
            let mut chain = BinghamGibbs::new(a_plus.clone(), p.manifold, rng);
            for _ in 0..gibbs.burn_in {
                chain.sweep(rng);
            }
            for _ in 0..quota {
                for _ in 0..gibbs.thin.max(1) {
                    chain.sweep(rng);
                }
                draws.push(chain.state());
            }
            diag.sweeps += chain.sweeps;
        }
    }
    diag.draws = count;
    (draws, diag)
}

/// Rejection sampler for `exp(+tr(X^dag a X))` on a Stiefel manifold with
/// a matrix angular central Gaussian envelope.
struct MatrixRejection {
    manifold: StiefelManifold,
    evecs_c: CMat,
    evecs_r: RMat,
    mu: Vec<f64>,
    scale: Vec<f64>,
    b: f64,
    log_bound: f64,
    trials: u64,
    accepts: u64,
}

impl MatrixRejection {
    fn new(a_plus: &CMat, manifold: StiefelManifold) -> Self {
        let n = manifold.n;
        let k = manifold.k as f64;
        let (mu, evecs_c, evecs_r) = match manifold.field {
            Field::Complex => {
                let (vals, vecs) = eigh_desc(a_plus);
                let lam_max = vals[0];
                let mu: Vec<f64> = vals.iter().map(|v| lam_max - v).collect();
                (mu, vecs, RMat::zeros(0, 0))
            }
            Field::Real => {
                let (vals, vecs) = eigh_real_asc(&to_real(a_plus));
                let lam_max = vals[n - 1];
                let mu: Vec<f64> = vals.iter().map(|v| lam_max - v).collect();
                (mu, CMat::zeros(0, 0), vecs)
            }
        };
        // the effective per-column sphere dimension doubles on complex
        // manifolds
        let (factor, m_eff) = match manifold.field {
            Field::Real => (1.0, n as f64),
            Field::Complex => (2.0, 2.0 * n as f64),
        };
        let b = solve_envelope_b(&mu, factor, n as f64);
        let scale: Vec<f64> = mu.iter().map(|m| 1.0 / (1.0 + 2.0 * m / b).sqrt()).collect();
        let log_bound = k * ((m_eff / 2.0) * (m_eff / b).ln() - (m_eff - b) / 2.0);
        Self { manifold, evecs_c, evecs_r, mu, scale, b, log_bound, trials: 0, accepts: 0 }
    }

    fn try_sample<R: Rng + ?Sized>(&mut self, rng: &mut R, max_attempts: u64) -> Option<StiefelPoint> {
        let (n, k) = (self.manifold.n, self.manifold.k);
        let half_dim = match self.manifold.field {
            Field::Real => n as f64 / 2.0,
            Field::Complex => n as f64,
        };
        for _ in 0..max_attempts {
            self.trials += 1;
            match self.manifold.field {
                Field::Real => {
                    let mut w = sample_ginibre_real(rng, n, k);
                    for i in 0..n {
                        for j in 0..k {
                            w[(i, j)] *= self.scale[i];
                        }
                    }
                    let gram = w.transpose() * &w;
                    let x_eig = &w * inv_sqrt_symmetric_real(&gram);
                    let t: f64 = (0..n)
                        .map(|i| self.mu[i] * x_eig.row(i).iter().map(|v| v * v).sum::<f64>())
                        .sum();
                    let mut log_det = 0.0;
                    {
                        // det(X^T Omega X) in the eigenbasis
                        let mut om = x_eig.clone();
                        for i in 0..n {
                            let f = 1.0 + 2.0 * self.mu[i] / self.b;
                            for j in 0..k {
                                om[(i, j)] *= f;
                            }
                        }
                        let m = x_eig.transpose() * om;
                        let (vals, _) = eigh_real_asc(&m);
                        for v in vals {
                            log_det += v.max(1e-300).ln();
                        }
                    }
                    let log_ratio = -t + half_dim * log_det - self.log_bound;
                    let u: f64 = rng.gen();
                    if u.ln() <= log_ratio {
                        self.accepts += 1;
                        return Some(StiefelPoint::Real(&self.evecs_r * x_eig));
                    }
                }
                Field::Complex => {
                    let mut w = sample_ginibre_complex(rng, n, k);
                    for i in 0..n {
                        for j in 0..k {
                            w[(i, j)] *= C64::new(self.scale[i], 0.0);
                        }
                    }
                    let gram = w.adjoint() * &w;
                    let x_eig = &w * inv_sqrt_hermitian(&gram);
                    let t: f64 = (0..n)
                        .map(|i| {
                            self.mu[i] * x_eig.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>()
                        })
                        .sum();
                    let mut log_det = 0.0;
                    {
                        let mut om = x_eig.clone();
                        for i in 0..n {
                            let f = C64::new(1.0 + 2.0 * self.mu[i] / self.b, 0.0);
                            for j in 0..k {
                                om[(i, j)] *= f;
                            }
                        }
                        let m = x_eig.adjoint() * om;
                        let (vals, _) = eigh_desc(&m);
                        for v in vals {
                            log_det += v.max(1e-300).ln();
                        }
                    }
                    let log_ratio = -t + half_dim * log_det - self.log_bound;
                    let u: f64 = rng.gen();
                    if u.ln() <= log_ratio {
                        self.accepts += 1;
                        return Some(StiefelPoint::Complex(&self.evecs_c * x_eig));
                    }
                }
            }
        }
        None
    }
}

/// Column-wise Gibbs chain for `exp(+tr(X^dag a X))`; each conditional is
/// an exact vector Bingham draw on the orthogonal complement sphere.
pub(crate) struct BinghamGibbs {
    a_plus: CMat,
    manifold: StiefelManifold,
    state: CMat,
    pub sweeps: u64,
}

impl BinghamGibbs {
    fn new<R: Rng + ?Sized>(a_plus: CMat, manifold: StiefelManifold, rng: &mut R) -> Self {
        let init = crate::uniform::sample_stiefel_uniform(rng, manifold.n, manifold.k, manifold.field);
        Self { a_plus, manifold, state: init.to_complex(), sweeps: 0 }
    }

    fn state(&self) -> StiefelPoint {
        match self.manifold.field {
            Field::Real => StiefelPoint::Real(to_real(&self.state)),
            Field::Complex => StiefelPoint::Complex(self.state.clone()),
        }
    }

    fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let k = self.manifold.k;
        for j in 0..k {
            let basis = complement_basis(&self.state, j, self.manifold.field, rng);
            // conditional on the complement sphere: exp(+ z^dag (N^dag a N) z)
            let sub = basis.adjoint() * &self.a_plus * &basis;
            let z = match self.manifold.field {
                Field::Real => {
                    let zr = sample_vector_bingham_plus_real(rng, &to_real(&sub));
                    crate::linalg::to_complex(&RMat::from_column_slice(zr.len(), 1, zr.as_slice()))
                        .column(0)
                        .clone_owned()
                }
                Field::Complex => sample_vector_bingham_plus_complex(rng, &sub),
            };
            let col = &basis * z;
            self.state.set_column(j, &col);
        }
        self.sweeps += 1;
        // guard against slow orthonormality drift along the chain
        if self.sweeps % 64 == 0 {
            reorthonormalize(&mut self.state);
        }
    }
}

/// Orthonormal basis of the orthogonal complement of all columns of `x`
/// except column `j`. Randomized but exact: a Gaussian block projected
/// off the kept columns, then orthonormalized. Real manifolds need a
/// real basis, complex ones a complex basis.
pub(crate) fn complement_basis<R: Rng + ?Sized>(
    x: &CMat,
    j: usize,
    field: Field,
    rng: &mut R,
) -> CMat {
    let (n, k) = (x.nrows(), x.ncols());
    let dim = n - (k - 1);
    loop {
        let g = match field {
            Field::Complex => sample_ginibre_complex(rng, n, dim),
            Field::Real => crate::linalg::to_complex(&sample_ginibre_real(rng, n, dim)),
        };
        let mut proj = g;
        for c in 0..k {
            if c == j {
                continue;
            }
            let col = x.column(c);
            let coeffs = col.adjoint() * &proj;
            proj -= col * coeffs;
        }
        let qr = proj.qr();
        let q = qr.q();
        let r = qr.r();
        // reject degenerate blocks
        if (0..dim).all(|i| r[(i, i)].norm() > 1e-10) {
            return q;
        }
    }
}

pub(crate) fn reorthonormalize(x: &mut CMat) {
    let qr = x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q;
    for j in 0..out.ncols() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..out.nrows() {
                out[(i, j)] *= phase;
            }
        }
    }
    *x = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, realify_vec};
    use crate::stats::mean_and_se;
    use crate::uniform::RngStream;

    fn herm(entries: &[f64], n: usize) -> CMat {
        let m = RMat::from_row_slice(n, n, entries);
        let m = crate::linalg::to_complex(&((&m + m.transpose()) * 0.5));
        m
    }

    #[test]
    fn embed_examples() {
        // real parameter embeds block-diagonally
        let a = herm(&[1.0, 0.2, 0.2, -0.5], 2);
        let ar = complex_to_real_embed(&a).unwrap();
        assert_eq!(ar[(0, 2)], 0.0);
        assert_eq!(ar[(2, 0)], 0.0);
        assert_eq!(ar[(0, 0)], 1.0);
        assert_eq!(ar[(2, 2)], 1.0);

        let bad = CMat::from_row_slice(2, 2, &[C64::new(0.0, 1.0); 4]);
        assert!(complex_to_real_embed(&bad).is_err());

        // quadratic form matches on corresponding points and the lift
        // inverts the stacking
        let mut rng = RngStream::new(71, 0).rng();
        let mut a = sample_ginibre_complex(&mut rng, 3, 3);
        a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let ar = complex_to_real_embed(&a).unwrap();
        let x = crate::uniform::sample_stiefel_uniform_complex(&mut rng, 3, 2);
        let mut y = RMat::zeros(6, 2);
        for j in 0..2 {
            let col = realify_vec(&x.column(j).clone_owned());
            y.set_column(j, &col);
        }
        let lhs = (x.adjoint() * &a * &x).trace().re;
        let rhs = (y.transpose() * &ar * &y).trace();
        assert!((lhs - rhs).abs() < 1e-12);
        let z = lift_real_frame(&y);
        assert!(frobenius_distance(&z, &x) < 1e-15);
        assert!(crate::linalg::orthonormality_defect(&z) < 1e-10);
    }

    #[test]
    fn vector_bingham_uniform_when_flat() {
        // a = c I leaves the sphere distribution uniform
        let mut rng = RngStream::new(73, 0).rng();
        let a = RMat::identity(3, 3) * 4.0;
        let mut engine = VectorBinghamEngine::new(&a);
        let n = 4000;
        let zs: Vec<f64> = (0..n).map(|_| engine.sample(&mut rng)[2]).collect();
        let (_, p) = crate::stats::ks_test(&zs, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
        assert!(p > 0.01, "p = {p}");
        assert_eq!(engine.trials, engine.accepts); // acceptance is exactly 1
    }

    #[test]
    fn vector_bingham_concentrates_on_top_eigenvector() {
        // positive-exponent engine concentrates on the largest eigenvalue
        let mut rng = RngStream::new(79, 0).rng();
        let a = RMat::from_row_slice(3, 3, &[30.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -5.0]);
        let mut engine = VectorBinghamEngine::new(&a);
        let n = 3000;
        let mut acc = 0.0;
        for _ in 0..n {
            let x = engine.sample(&mut rng);
            acc += x[0] * x[0];
        }
        let mean = acc / n as f64;
        assert!(mean > 0.95, "E[x_0^2] = {mean}");
        // acceptance stays healthy even at high concentration
        assert!(engine.accepts as f64 / engine.trials as f64 > 0.3);
    }

    #[test]
    fn vector_bingham_antipodal_symmetry() {
        let mut rng = RngStream::new(83, 0).rng();
        let a = herm(&[2.0, 1.0, -0.5, 1.0, 0.0, 0.3, -0.5, 0.3, -1.0], 3);
        let mut engine = VectorBinghamEngine::new(&to_real(&a));
        let n = 20_000;
        let firsts: Vec<f64> = (0..n).map(|_| engine.sample(&mut rng)[0]).collect();
        let (mean, se) = mean_and_se(&firsts);
        assert!(mean.abs() < 5.0 * se, "E[x_0] = {mean} +- {se}");
    }

    #[test]
    fn macg_uniform_and_concentration() {
        let mut rng = RngStream::new(89, 0).rng();
        let manifold = StiefelManifold::complex(3, 1);
        // Sigma = I matches the uniform moment E[|x_0|^2] = 1/3
        let p = MacgParams::new(manifold, CMat::identity(3, 3)).unwrap();
        let n = 20_000;
        let mut acc = 0.0;
        for _ in 0..n {
            if let StiefelPoint::Complex(x) = macg_sample(&mut rng, &p) {
                acc += x[(0, 0)].norm_sqr();
            }
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "E|x0|^2 = {mean}");

        // concentration along the top eigenvector of Sigma
        let mut sigma = CMat::identity(3, 3);
        sigma[(0, 0)] = C64::new(400.0, 0.0);
        let p = MacgParams::new(manifold, sigma).unwrap();
        let mut acc = 0.0;
        for _ in 0..2000 {
            if let StiefelPoint::Complex(x) = macg_sample(&mut rng, &p) {
                acc += x[(0, 0)].norm_sqr();
            }
        }
        assert!(acc / 2000.0 > 0.95, "E|x0|^2 = {}", acc / 2000.0);

        // antipodal symmetry: first-coordinate real part has zero mean
        let vals: Vec<f64> = (0..20_000)
            .map(|_| match macg_sample(&mut rng, &p) {
                StiefelPoint::Complex(x) => x[(0, 0)].re,
                _ => unreachable!(),
            })
            .collect();
        let (mean, se) = mean_and_se(&vals);
        assert!(mean.abs() < 5.0 * se);

        assert!(MacgParams::new(manifold, CMat::zeros(3, 3)).is_err());
    }

    #[test]
    fn matrix_bingham_zero_param_is_uniform() {
        let mut rng = RngStream::new(97, 0).rng();
        let manifold = StiefelManifold::real(4, 2);
        let p = MatrixBinghamParams::new(manifold, CMat::zeros(4, 4)).unwrap();
        let (draws, diag) = bingham_sample_batch(&mut rng, &p, 500, &GibbsConfig::default());
        assert_eq!(diag.rejection_trials, diag.accepts);
        let mut acc = 0.0;
        for d in &draws {
            if let StiefelPoint::Real(x) = d {
                assert!(crate::linalg::orthonormality_defect_real(x) < 1e-10);
                acc += x[(0, 0)] * x[(0, 0)];
            }
        }
        // E[x_{00}^2] = 1/4 under the uniform distribution
        let mean = acc / draws.len() as f64;
        assert!((mean - 0.25).abs() < 0.03, "E[x00^2] = {mean}");
    }

    #[test]
    fn matrix_bingham_shift_invariance() {
        // a -> a + c I multiplies the density by a constant
        let mut rng = RngStream::new(101, 0).rng();
        let manifold = StiefelManifold::real(3, 2);
        let a = herm(&[1.5, 0.3, 0.0, 0.3, -0.7, 0.2, 0.0, 0.2, 0.4], 3);
        let shifted = &a + CMat::identity(3, 3) * C64::new(11.0, 0.0);
        let p1 = MatrixBinghamParams::new(manifold, a).unwrap();
        let p2 = MatrixBinghamParams::new(manifold, shifted).unwrap();
        let n = 4000;
        let stat = |p: &MatrixBinghamParams, rng: &mut rand_chacha::ChaCha12Rng| -> Vec<f64> {
            let (draws, _) = bingham_sample_batch(rng, p, n, &GibbsConfig::default());
            draws
                .iter()
                .map(|d| match d {
                    StiefelPoint::Real(x) => (x.transpose() * to_real(p.a()) * x).trace(),
                    _ => unreachable!(),
                })
                .collect()
        };
        let s1 = stat(&p1, &mut rng);
        let s2: Vec<f64> = stat(&p2, &mut rng)
            .iter()
            .map(|v| v - 11.0 * 2.0) // tr shift on V_2
            .collect();
        let (_, pval) = crate::stats::ks_two_sample(&s1, &s2);
        assert!(pval > 0.01, "shift changed the distribution: p = {pval}");
    }

    #[test]
    fn matrix_bingham_concentrated_projector() {
        // negative-exponent convention concentrates on the least
        // eigenvectors of a
        let mut rng = RngStream::new(103, 0).rng();
        let manifold = StiefelManifold::real(4, 2);
        let mut a = CMat::zeros(4, 4);
        for (i, v) in [0.0f64, 0.5, 60.0, 90.0].iter().enumerate() {
            a[(i, i)] = C64::new(*v, 0.0);
        }
        let p = MatrixBinghamParams::new(manifold, a).unwrap();
        let (draws, _) = bingham_sample_batch(&mut rng, &p, 600, &GibbsConfig::default());
        let mut acc = RMat::zeros(4, 4);
        for d in &draws {
            if let StiefelPoint::Real(x) = d {
                acc += x * x.transpose();
            }
        }
        acc /= draws.len() as f64;
        // projector onto span(e_0, e_1)
        let mut want = RMat::zeros(4, 4);
        want[(0, 0)] = 1.0;
        want[(1, 1)] = 1.0;
        assert!(
            crate::linalg::frobenius_distance_real(&acc, &want) < 0.1,
            "E[XX^T] = {acc}"
        );
    }

    #[test]
    fn bingham_on_full_square_manifold_is_uniform() {
        // on V_N(C^N) the statistic XX^dag is constant, so any parameter
        // gives the uniform (Haar) distribution
        let mut rng = RngStream::new(107, 0).rng();
        let manifold = StiefelManifold::complex(2, 2);
        let a = herm(&[5.0, 1.0, 1.0, -3.0], 2);
        let p = MatrixBinghamParams::new(manifold, a).unwrap();
        let n = 20_000;
        let mut acc = 0.0;
        let (draws, diag) = bingham_sample_batch(&mut rng, &p, n, &GibbsConfig::default());
        for d in &draws {
            if let StiefelPoint::Complex(x) = d {
                acc += x.trace().norm_sqr();
            }
        }
        assert_eq!(diag.method, "uniform");
        let mean = acc / n as f64;
        assert!((mean - 1.0).abs() < 0.05, "E|tr|^2 = {mean}");
    }

    #[test]
    fn gibbs_fallback_matches_rejection_at_moderate_concentration() {
        // same distribution from both methods (two-sample KS on the
        // sufficient statistic)
        let mut rng = RngStream::new(109, 0).rng();
        let manifold = StiefelManifold::real(3, 2);
        let a = herm(&[3.0, 0.5, 0.0, 0.5, 1.0, -0.2, 0.0, -0.2, -2.0], 3);
        let p = MatrixBinghamParams::new(manifold, a.clone()).unwrap();
        let n = 3000;
        let (rej, _) = bingham_sample_batch(&mut rng, &p, n, &GibbsConfig::default());
        let mut chain = BinghamGibbs::new(-&a, manifold, &mut rng);
        for _ in 0..200 {
            chain.sweep(&mut rng);
        }
        let mut gib = Vec::with_capacity(n);
        for _ in 0..n {
            for _ in 0..5 {
                chain.sweep(&mut rng);
            }
            gib.push(chain.state());
        }
        let stat = |d: &StiefelPoint| match d {
            StiefelPoint::Real(x) => (x.transpose() * to_real(&a) * x).trace(),
            _ => unreachable!(),
        };
        let s1: Vec<f64> = rej.iter().map(&stat).collect();
        let s2: Vec<f64> = gib.iter().map(&stat).collect();
        let (_, pval) = crate::stats::ks_two_sample(&s1, &s2);
        assert!(pval > 0.005, "gibbs and rejection disagree: p = {pval}");
        // chain stays on the manifold
        for d in gib.iter().rev().take(20) {
            assert!(d.orthonormality_defect() < 1e-10);
        }
    }
}
