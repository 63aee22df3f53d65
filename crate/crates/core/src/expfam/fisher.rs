//! Matrix-Fisher distributions: linear sufficient statistic `E[X]` on
//! Stiefel manifolds and rotation groups, plus the circle (von Mises)
//! case.
//!
//! Rotation-group sampling on SO(3) reduces exactly to a vector Bingham
//! draw on the unit quaternions; SO(2) reduces to the von Mises angle.
//! Stiefel-manifold sampling is column-wise Gibbs whose conditionals are
//! exact von Mises-Fisher draws on the orthogonal complement sphere.

use super::bingham::{complement_basis, reorthonormalize, VectorBinghamEngine};
use super::vmf::{sample_sphere_uniform, sample_vmf_cosine, vmf_sample, VmfParams};
use super::{ChainDiagnostics, ExpfamError, GibbsConfig, StiefelManifold};
use crate::linalg::{complexify_vec, max_imag, realify_vec, to_complex, to_real, CMat, RMat, RVec};
use crate::uniform::{Field, StiefelPoint};
use rand::Rng;

/// Sample space of a matrix-Fisher distribution. The rotation-group
/// family takes a full `n x n` parameter and is a strict super-model of
/// the `V_{n-1}(R^n)` family for `n > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisherManifold {
    Stiefel(StiefelManifold),
    Rotation(usize),
}

/// Natural parameter of a matrix-Fisher distribution, density
/// `exp(Re tr(F^dag X))` relative to the Haar measure.
#[derive(Debug, Clone)]
pub struct MatrixFisherParams {
    pub manifold: FisherManifold,
    f: CMat,
}

impl MatrixFisherParams {
    pub fn new_stiefel(manifold: StiefelManifold, f: CMat) -> Result<Self, ExpfamError> {
        if f.nrows() != manifold.n || f.ncols() != manifold.k {
            return Err(ExpfamError::ShapeMismatch {
                what: "fisher parameter",
                expected: (manifold.n, manifold.k),
                got: (f.nrows(), f.ncols()),
            });
        }
        if manifold.field == Field::Real && max_imag(&f) > 1e-12 {
            return Err(ExpfamError::NotHermitian { defect: max_imag(&f) });
        }
        Ok(Self { manifold: FisherManifold::Stiefel(manifold), f })
    }

    pub fn new_rotation(n: usize, f: RMat) -> Result<Self, ExpfamError> {
        if f.nrows() != n || f.ncols() != n {
            return Err(ExpfamError::ShapeMismatch {
                what: "rotation fisher parameter",
                expected: (n, n),
                got: (f.nrows(), f.ncols()),
            });
        }
        Ok(Self { manifold: FisherManifold::Rotation(n), f: to_complex(&f) })
    }

    pub fn f(&self) -> &CMat {
        &self.f
    }

    pub fn f_real(&self) -> RMat {
        to_real(&self.f)
    }
}

/// A matrix-Fisher draw: a frame or a rotation matrix, depending on the
/// parameter's manifold.
#[derive(Debug, Clone)]
pub enum FisherDraw {
    Frame(StiefelPoint),
    Rotation(RMat),
}

impl FisherDraw {
    pub fn unwrap_rotation(self) -> RMat {
        match self {
            FisherDraw::Rotation(r) => r,
            FisherDraw::Frame(_) => panic!("expected a rotation draw"),
        }
    }

    pub fn unwrap_frame(self) -> StiefelPoint {
        match self {
            FisherDraw::Frame(x) => x,
            FisherDraw::Rotation(_) => panic!("expected a frame draw"),
        }
    }

    fn to_complex(&self) -> CMat {
        match self {
            FisherDraw::Frame(x) => x.to_complex(),
            FisherDraw::Rotation(r) => to_complex(r),
        }
    }
}

/// Unnormalized log density `Re tr(F^dag X)`.
pub fn matrix_fisher_log_density_unnorm(x: &FisherDraw, p: &MatrixFisherParams) -> f64 {
    (p.f.adjoint() * x.to_complex()).trace().re
}

/// Unnormalized log density of the generalized Bingham-von Mises-Fisher
/// family, `Re tr(C^dag X + B X^dag A X)`. `A = B = 0` is matrix-Fisher;
/// `C = 0, B = I` is matrix-Bingham in the positive-exponent convention.
pub fn bmf_log_density_unnorm(
    x: &CMat,
    a: &CMat,
    b: &CMat,
    c: &CMat,
) -> Result<f64, ExpfamError> {
    let (n, k) = (x.nrows(), x.ncols());
    if a.nrows() != n || a.ncols() != n {
        return Err(ExpfamError::ShapeMismatch {
            what: "bmf quadratic parameter",
            expected: (n, n),
            got: (a.nrows(), a.ncols()),
        });
    }
    if b.nrows() != k || b.ncols() != k {
        return Err(ExpfamError::ShapeMismatch {
            what: "bmf column coupling",
            expected: (k, k),
            got: (b.nrows(), b.ncols()),
        });
    }
    if c.nrows() != n || c.ncols() != k {
        return Err(ExpfamError::ShapeMismatch {
            what: "bmf linear parameter",
            expected: (n, k),
            got: (c.nrows(), c.ncols()),
        });
    }
    Ok((c.adjoint() * x + b * x.adjoint() * a * x).trace().re)
}

/// Von Mises draw on the circle with mean angle `mu` and concentration
/// `kappa`, via the cosine marginal and a random side.
pub fn sample_von_mises<R: Rng + ?Sized>(rng: &mut R, mu: f64, kappa: f64) -> f64 {
    if kappa == 0.0 {
        return rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    }
    let w = sample_vmf_cosine(rng, 2, kappa);
    let angle = w.clamp(-1.0, 1.0).acos();
    let theta = if rng.gen::<bool>() { mu + angle } else { mu - angle };
    theta.rem_euclid(2.0 * std::f64::consts::PI)
}

/// One matrix-Fisher draw with the default chain configuration.
pub fn matrix_fisher_sample<R: Rng + ?Sized>(rng: &mut R, p: &MatrixFisherParams) -> FisherDraw {
    matrix_fisher_sample_batch(rng, p, 1, &GibbsConfig::default()).0.pop().expect("one draw")
}

/// Batch of matrix-Fisher draws.
///
/// Rotation groups (n = 2, 3) are exact per draw; Stiefel manifolds with
/// k = 1 reduce to exact von Mises-Fisher draws; other Stiefel cases run
/// a Gibbs chain with the given burn-in and thinning.
pub fn matrix_fisher_sample_batch<R: Rng + ?Sized>(
    rng: &mut R,
    p: &MatrixFisherParams,
    count: usize,
    gibbs: &GibbsConfig,
) -> (Vec<FisherDraw>, ChainDiagnostics) {
    match p.manifold {
        FisherManifold::Rotation(2) => {
            let mut diag = ChainDiagnostics::new("so2-von-mises");
            let draws = (0..count)
                .map(|_| FisherDraw::Rotation(sample_so2(rng, &p.f_real())))
                .collect();
            diag.draws = count;
            (draws, diag)
        }
        FisherManifold::Rotation(3) => {
            let mut diag = ChainDiagnostics::new("so3-quaternion-bingham");
            let (svd, mut engine) = so3_engine(&p.f_real());
            let draws = (0..count)
                .map(|_| {
                    let q = engine.sample(rng);
                    FisherDraw::Rotation(&svd.u * quaternion_to_rotation(&q) * &svd.vt)
                })
                .collect();
            diag.rejection_trials = engine.trials;
            diag.accepts = engine.accepts;
            diag.draws = count;
            (draws, diag)
        }
        FisherManifold::Rotation(n) => {
            panic!("rotation-group sampling implemented for n = 2, 3 only, got n = {n}")
        }
        FisherManifold::Stiefel(manifold) if manifold.k == 1 => {
            // single column: the whole distribution is one von
            // Mises-Fisher draw on the (realified) sphere
            let mut diag = ChainDiagnostics::new("vmf-exact");
            let draws = (0..count)
                .map(|_| FisherDraw::Frame(sample_fisher_column(rng, &p.f.column(0).clone_owned(), manifold.field)))
                .collect();
            diag.draws = count;
            (draws, diag)
        }
        FisherManifold::Stiefel(manifold) => {
            let mut diag = ChainDiagnostics::new("fisher-gibbs");
            let chains = gibbs.chains.max(1).min(count.max(1));
            let mut draws = Vec::with_capacity(count);
            for c in 0..chains {
                let quota = count / chains + usize::from(c < count % chains);
                if quota == 0 {
                    continue;
                }
                let mut chain = FisherGibbs::new(p.f.clone(), manifold, rng);
                for _ in 0..gibbs.burn_in {
                    chain.sweep(rng);
                }
                for _ in 0..quota {
                    for _ in 0..gibbs.thin.max(1) {
                        chain.sweep(rng);
                    }
                    draws.push(FisherDraw::Frame(chain.state()));
                }
                diag.sweeps += chain.sweeps;
            }
            diag.draws = count;
            (draws, diag)
        }
    }
}

fn sample_so2<R: Rng + ?Sized>(rng: &mut R, f: &RMat) -> RMat {
    // tr(F^T R(theta)) = (f00 + f11) cos(theta) + (f10 - f01) sin(theta)
    //                  = kappa cos(theta - theta0)
    let a = f[(0, 0)] + f[(1, 1)];
    let b = f[(1, 0)] - f[(0, 1)];
    let kappa = (a * a + b * b).sqrt();
    let theta0 = b.atan2(a);
    let theta = sample_von_mises(rng, theta0, kappa);
    RMat::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

struct SignPreservingSvd {
    u: RMat,
    vt: RMat,
    /// singular values, the last possibly negated so det(u vt) = +1
    s: Vec<f64>,
}

/// SVD `F = U S V^T` adjusted so that `det(U V^T) = +1`, keeping the
/// sign in the last diagonal entry.
fn sign_preserving_svd(f: &RMat) -> SignPreservingSvd {
    let svd = f.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let n = f.nrows();
    let det = u.determinant() * vt.determinant();
    let mut u = u;
    if det < 0.0 {
        s[n - 1] = -s[n - 1];
        for i in 0..n {
            u[(i, n - 1)] = -u[(i, n - 1)];
        }
    }
    SignPreservingSvd { u, vt, s }
}

/// Quaternion-Bingham engine for the diagonalized SO(3) matrix-Fisher
/// distribution: `tr(S Y(q)) = q^T B q` with
/// `B = diag(s1+s2+s3, s1-s2-s3, s2-s1-s3, s3-s1-s2)`.
fn so3_engine(f: &RMat) -> (SignPreservingSvd, VectorBinghamEngine) {
    let svd = sign_preserving_svd(f);
    let (s1, s2, s3) = (svd.s[0], svd.s[1], svd.s[2]);
    let mut b = RMat::zeros(4, 4);
    b[(0, 0)] = s1 + s2 + s3;
    b[(1, 1)] = s1 - s2 - s3;
    b[(2, 2)] = s2 - s1 - s3;
    b[(3, 3)] = s3 - s1 - s2;
    (svd, VectorBinghamEngine::new(&b))
}

/// Rotation matrix of a unit quaternion `(w, x, y, z)`.
pub fn quaternion_to_rotation(q: &RVec) -> RMat {
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    RMat::from_row_slice(
        3,
        3,
        &[
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    )
}

/// Exact Fisher draw of a single column: vMF with direction `f/|f|` and
/// concentration `|f|`, through the real embedding for complex columns.
fn sample_fisher_column<R: Rng + ?Sized>(
    rng: &mut R,
    f: &nalgebra::DVector<crate::linalg::C64>,
    field: Field,
) -> StiefelPoint {
    match field {
        Field::Real => {
            let fr = RVec::from_fn(f.len(), |i, _| f[i].re);
            let z = sample_fisher_column_real(rng, &fr);
            StiefelPoint::Real(RMat::from_column_slice(z.len(), 1, z.as_slice()))
        }
        Field::Complex => {
            let fr = realify_vec(&f.clone_owned());
            let y = sample_fisher_column_real(rng, &fr);
            let z = complexify_vec(&y);
            StiefelPoint::Complex(CMat::from_column_slice(z.len(), 1, z.as_slice()))
        }
    }
}

fn sample_fisher_column_real<R: Rng + ?Sized>(rng: &mut R, f: &RVec) -> RVec {
    let kappa = f.norm();
    if kappa < 1e-14 {
        return sample_sphere_uniform(rng, f.len());
    }
    let p = VmfParams::new(f / kappa, kappa).expect("unit direction");
    vmf_sample(rng, &p)
}

/// Column-wise Gibbs chain for the matrix-Fisher distribution on a
/// Stiefel manifold; conditionals are exact vMF draws on the complement
/// sphere.
struct FisherGibbs {
    f: CMat,
    manifold: StiefelManifold,
    state: CMat,
    sweeps: u64,
}

impl FisherGibbs {
    fn new<R: Rng + ?Sized>(f: CMat, manifold: StiefelManifold, rng: &mut R) -> Self {
        let init =
            crate::uniform::sample_stiefel_uniform(rng, manifold.n, manifold.k, manifold.field);
        Self { f, manifold, state: init.to_complex(), sweeps: 0 }
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
            let dir = basis.adjoint() * self.f.column(j);
            let col: crate::linalg::CVec = match self.manifold.field {
                Field::Real if dir.len() == 1 => {
                    // 0-sphere conditional: the sign follows a logistic law
                    let kappa = dir[0].re;
                    let p_plus = 1.0 / (1.0 + (-2.0 * kappa).exp());
                    let sign = if rng.gen::<f64>() < p_plus { 1.0 } else { -1.0 };
                    basis.column(0).clone_owned() * crate::linalg::C64::new(sign, 0.0)
                }
                field => {
                    let z = sample_fisher_column(rng, &dir.clone_owned(), field);
                    &basis * z.to_complex().column(0).clone_owned()
                }
            };
            self.state.set_column(j, &col);
        }
        self.sweeps += 1;
        if self.sweeps % 64 == 0 {
            reorthonormalize(&mut self.state);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expfam::bessel::vmf_mean_resultant;
    use crate::linalg::frobenius_distance_real;
    use crate::stats::{ks_two_sample, mean_and_se};
    use crate::uniform::RngStream;

    #[test]
    fn bmf_reductions() {
        let mut rng = RngStream::new(113, 0).rng();
        let x = crate::uniform::sample_stiefel_uniform_complex(&mut rng, 3, 2);
        let f = crate::uniform::sample_ginibre_complex(&mut rng, 3, 2);
        // A = B = 0 reduces to the Fisher exponent
        let zero_a = CMat::zeros(3, 3);
        let zero_b = CMat::zeros(2, 2);
        let got = bmf_log_density_unnorm(&x, &zero_a, &zero_b, &f).unwrap();
        let want = (f.adjoint() * &x).trace().re;
        assert!((got - want).abs() < 1e-12);
        // C = 0, B = I reduces to the Bingham exponent
        let mut a = crate::uniform::sample_ginibre_complex(&mut rng, 3, 3);
        a = (&a + a.adjoint()) * crate::linalg::C64::new(0.5, 0.0);
        let got =
            bmf_log_density_unnorm(&x, &a, &CMat::identity(2, 2), &CMat::zeros(3, 2)).unwrap();
        let want = (x.adjoint() * &a * &x).trace().re;
        assert!((got - want).abs() < 1e-12);
        // direct trace agreement on random inputs
        let b = crate::uniform::sample_ginibre_complex(&mut rng, 2, 2);
        let c = crate::uniform::sample_ginibre_complex(&mut rng, 3, 2);
        let got = bmf_log_density_unnorm(&x, &a, &b, &c).unwrap();
        let want = (c.adjoint() * &x + &b * x.adjoint() * &a * &x).trace().re;
        assert!((got - want).abs() < 1e-12);
        // shape errors
        assert!(bmf_log_density_unnorm(&x, &zero_b, &zero_b, &f).is_err());
    }

    #[test]
    fn so2_marginal_is_von_mises() {
        let mut rng = RngStream::new(127, 0).rng();
        let (theta0, kappa) = (0.8f64, 3.0f64);
        // F = (kappa/2) R(theta0)
        let f = RMat::from_row_slice(
            2,
            2,
            &[theta0.cos(), -theta0.sin(), theta0.sin(), theta0.cos()],
        ) * (kappa / 2.0);
        let p = MatrixFisherParams::new_rotation(2, f).unwrap();
        let n = 8000;
        let angles: Vec<f64> = (0..n)
            .map(|_| {
                let r = matrix_fisher_sample(&mut rng, &p).unwrap_rotation();
                r[(1, 0)].atan2(r[(0, 0)])
            })
            .collect();
        // oracle draws from the circle distribution itself
        let oracle: Vec<f64> = (0..n)
            .map(|_| {
                let t = sample_von_mises(&mut rng, theta0, kappa);
                if t > std::f64::consts::PI { t - 2.0 * std::f64::consts::PI } else { t }
            })
            .collect();
        let (_, pval) = ks_two_sample(&angles, &oracle);
        assert!(pval > 0.01, "p = {pval}");
        // E[cos(theta - theta0)] matches the Bessel ratio
        let cs: Vec<f64> = angles.iter().map(|t| (t - theta0).cos()).collect();
        let (mean, se) = mean_and_se(&cs);
        let want = vmf_mean_resultant(2, kappa);
        assert!((mean - want).abs() < 5.0 * se);
    }

    #[test]
    fn so3_uniform_when_flat() {
        let mut rng = RngStream::new(131, 0).rng();
        let p = MatrixFisherParams::new_rotation(3, RMat::zeros(3, 3)).unwrap();
        let n = 10_000;
        let mut acc = RMat::zeros(3, 3);
        for _ in 0..n {
            let r = matrix_fisher_sample(&mut rng, &p).unwrap_rotation();
            // every draw is a rotation
            assert!(frobenius_distance_real(&(&r * r.transpose()), &RMat::identity(3, 3)) < 1e-10);
            assert!((r.determinant() - 1.0).abs() < 1e-10);
            acc += r;
        }
        acc /= n as f64;
        assert!(acc.norm() < 0.05, "mean rotation {acc}");
    }

    #[test]
    fn so3_matches_haar_rejection_oracle() {
        // independent oracle: rejection from Haar with the exact density
        let mut rng = RngStream::new(137, 0).rng();
        let f = RMat::from_row_slice(3, 3, &[1.2, 0.3, 0.0, -0.1, 0.7, 0.2, 0.0, 0.4, 0.5]);
        let p = MatrixFisherParams::new_rotation(3, f.clone()).unwrap();
        let n = 4000;
        let stat = |r: &RMat| (f.transpose() * r).trace();
        let ours: Vec<f64> = (0..n)
            .map(|_| stat(&matrix_fisher_sample(&mut rng, &p).unwrap_rotation()))
            .collect();
        // max of tr(F^T X) over SO(3) is the signed singular value sum
        let svd = sign_preserving_svd(&f);
        let bound: f64 = svd.s.iter().sum();
        let mut oracle = Vec::with_capacity(n);
        while oracle.len() < n {
            let q = sample_sphere_uniform(&mut rng, 4);
            let r = quaternion_to_rotation(&q);
            let t = stat(&r);
            if rng.gen::<f64>().ln() <= t - bound {
                oracle.push(t);
            }
        }
        let (_, pval) = ks_two_sample(&ours, &oracle);
        assert!(pval > 0.01, "quaternion route disagrees with oracle: p = {pval}");
    }

    #[test]
    fn so3_mean_is_diagonal_for_diagonal_parameter() {
        let mut rng = RngStream::new(139, 0).rng();
        let mut f = RMat::zeros(3, 3);
        f[(0, 0)] = 8.0;
        f[(1, 1)] = 5.0;
        f[(2, 2)] = 2.0;
        let p = MatrixFisherParams::new_rotation(3, f).unwrap();
        let n = 20_000;
        let mut acc = RMat::zeros(3, 3);
        for _ in 0..n {
            acc += matrix_fisher_sample(&mut rng, &p).unwrap_rotation();
        }
        acc /= n as f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(acc[(i, j)].abs() < 0.02, "off-diagonal mean {acc}");
                }
            }
        }
        // ordering follows the parameter
        assert!(acc[(0, 0)] > acc[(1, 1)] && acc[(1, 1)] > acc[(2, 2)]);
        assert!(acc[(2, 2)] > 0.0);
    }

    #[test]
    fn stiefel_column_fisher_matches_vmf() {
        let mut rng = RngStream::new(149, 0).rng();
        // complex single column: mean direction with resultant A_{2n}(|f|)
        let manifold = StiefelManifold::complex(3, 1);
        let mut f = CMat::zeros(3, 1);
        f[(0, 0)] = crate::linalg::C64::new(4.0, 0.0);
        let p = MatrixFisherParams::new_stiefel(manifold, f).unwrap();
        let n = 20_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let x = matrix_fisher_sample(&mut rng, &p).unwrap_frame().to_complex();
            acc += x[(0, 0)].re;
        }
        let mean = acc / n as f64;
        let want = vmf_mean_resultant(6, 4.0);
        assert!((mean - want).abs() < 0.01, "mean {mean} want {want}");
    }

    #[test]
    fn stiefel_gibbs_mean_aligns_with_parameter() {
        let mut rng = RngStream::new(151, 0).rng();
        let manifold = StiefelManifold::real(4, 2);
        let mut f = RMat::zeros(4, 2);
        f[(0, 0)] = 6.0;
        f[(1, 1)] = 6.0;
        let p = MatrixFisherParams::new_stiefel(manifold, to_complex(&f)).unwrap();
        let (draws, diag) = matrix_fisher_sample_batch(
            &mut rng,
            &p,
            2000,
            &GibbsConfig { burn_in: 50, thin: 5, chains: 1 },
        );
        let mut acc = RMat::zeros(4, 2);
        for d in &draws {
            match d {
                FisherDraw::Frame(StiefelPoint::Real(x)) => {
                    assert!(crate::linalg::orthonormality_defect_real(x) < 1e-10);
                    acc += x;
                }
                _ => unreachable!(),
            }
        }
        acc /= draws.len() as f64;
        assert!(diag.sweeps > 0);
        // mean concentrates along the parameter direction
        assert!(acc[(0, 0)] > 0.7 && acc[(1, 1)] > 0.7, "mean {acc}");
        assert!(acc[(2, 0)].abs() < 0.05 && acc[(3, 1)].abs() < 0.05);
    }

    #[test]
    fn exp_family_identity_for_fisher() {
        let mut rng = RngStream::new(157, 0).rng();
        let f = crate::uniform::sample_ginibre_complex(&mut rng, 3, 2);
        let manifold = StiefelManifold::complex(3, 2);
        let p = MatrixFisherParams::new_stiefel(manifold, f.clone()).unwrap();
        let x1 = FisherDraw::Frame(crate::uniform::sample_stiefel_uniform(
            &mut rng, 3, 2, Field::Complex,
        ));
        let x2 = FisherDraw::Frame(crate::uniform::sample_stiefel_uniform(
            &mut rng, 3, 2, Field::Complex,
        ));
        let diff = matrix_fisher_log_density_unnorm(&x1, &p)
            - matrix_fisher_log_density_unnorm(&x2, &p);
        let inner = (f.adjoint() * (x1.to_complex() - x2.to_complex())).trace().re;
        assert!((diff - inner).abs() < 1e-12);
    }
}
