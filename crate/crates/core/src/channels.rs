//! Named channel constructors and distribution wrappers tying the
//! exponential families to quantum targets: random states and channels
//! whose average is a prescribed state or channel.
//!
//! Fit-heavy distributions follow a fit-once / sample-many pattern; the
//! fitted objects carry their target, parameters, and fit diagnostics as
//! a serializable record. Kinds that can only approximate their target
//! say so in the record (`exact: false`).

use crate::expfam::{
    bingham_sample_batch, estimate_natural_params, frame_bingham_params_from_choi,
    frame_bingham_sample, matrix_fisher_sample_batch, sample_von_mises, vmf_sample,
    BinghamSecondMomentProblem, ChainDiagnostics, EstimateError, ExpfamError, FisherDraw,
    FrameBinghamParams, GibbsConfig, MatrixBinghamParams, MatrixFisherParams, MomentMatchProblem,
    RotationFisherSo3Problem, SaConfig, SaReport, StiefelFisherScalarProblem, StiefelManifold,
    VmfParams,
};
use crate::expfam::bessel::vmf_solve_kappa;
use crate::geometry::{classify_extreme_qubit, GeometryError, Verdict};
use crate::json::complex_matrix_to_json;
use crate::linalg::{eigh_desc, paulis, vec_col, CMat, RMat, RVec, C64, ONE, ZERO};
use crate::repr::{
    bloch_to_state, frame_to_choi, ChannelRepr, ChoiMatrix, DensityOperator, KrausSet,
    PauliTransferMatrix, ReprError, StiefelForm,
};
use crate::uniform::StiefelPoint;
use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("pauli weights must satisfy p_i >= 0 and sum <= 1, got sum {sum}")]
    BadPauliWeights { sum: f64 },
    #[error("target is an extreme point of the CPTP set; no non-trivial random channel averages to it")]
    ExtremePointTarget,
    #[error("degenerate target: {0}")]
    DegenerateTarget(String),
    #[error("target infeasible: {0}")]
    InfeasibleTarget(String),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Expfam(#[from] ExpfamError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

// ---------------------------------------------------------------------
// named constructors
// ---------------------------------------------------------------------

/// Dephasing channel in PTM form for a given `alpha^2` (unit modulus for
/// a unitary draw; `|alpha^2| < 1` gives the averaged map).
pub fn dephasing_ptm(alpha_sq: C64) -> Result<PauliTransferMatrix, ChannelError> {
    if alpha_sq.norm() > 1.0 + 1e-12 {
        return Err(ChannelError::OutOfRange {
            name: "alpha_sq",
            value: alpha_sq.norm(),
            range: "|alpha^2| <= 1",
        });
    }
    let mat = RMat::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0,
            0.0, alpha_sq.re, alpha_sq.im, 0.0,
            0.0, -alpha_sq.im, alpha_sq.re, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ],
    );
    Ok(PauliTransferMatrix::new_unchecked(mat))
}

/// Choi matrix of the Pauli depolarizing channel with weights
/// `(p_x, p_y, p_z)`.
pub fn depolarizing_choi(px: f64, py: f64, pz: f64) -> Result<ChoiMatrix, ChannelError> {
    let sum = px + py + pz;
    if px < 0.0 || py < 0.0 || pz < 0.0 || sum > 1.0 + 1e-12 {
        return Err(ChannelError::BadPauliWeights { sum });
    }
    let weights = [1.0 - sum, px, py, pz];
    let mut mat = CMat::zeros(4, 4);
    for (w, p) in weights.iter().zip(paulis().iter()) {
        let v = vec_col(p);
        mat += &v * v.adjoint() * C64::new(*w, 0.0);
    }
    Ok(ChoiMatrix::new_unchecked(mat))
}

/// Amplitude damping channel with decay probability `gamma`, as a Kraus
/// set.
pub fn amplitude_damping(gamma: f64) -> ChannelRepr {
    let a1 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::new((1.0 - gamma).sqrt(), 0.0)]);
    let a2 = CMat::from_row_slice(2, 2, &[ZERO, C64::new(gamma.sqrt(), 0.0), ZERO, ZERO]);
    ChannelRepr::Kraus(KrausSet::new_unchecked(vec![a1, a2]))
}

pub fn amplitude_damping_checked(gamma: f64) -> Result<ChannelRepr, ChannelError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ChannelError::OutOfRange { name: "gamma", value: gamma, range: "[0, 1]" });
    }
    Ok(amplitude_damping(gamma))
}

/// Amplitude damping followed by depolarizing, in PTM form. Non-unital
/// for `gamma > 0`, with shift entry `(1 - 2(p_x + p_y)) gamma`.
pub fn composite_nonunital(
    gamma: f64,
    px: f64,
    py: f64,
    pz: f64,
) -> Result<PauliTransferMatrix, ChannelError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ChannelError::OutOfRange { name: "gamma", value: gamma, range: "[0, 1]" });
    }
    let sum = px + py + pz;
    if px < 0.0 || py < 0.0 || pz < 0.0 || sum > 1.0 + 1e-12 {
        return Err(ChannelError::BadPauliWeights { sum });
    }
    let (a, b, c) = (1.0 - 2.0 * (py + pz), 1.0 - 2.0 * (px + pz), 1.0 - 2.0 * (px + py));
    let s = (1.0 - gamma).sqrt();
    let mat = RMat::from_row_slice(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0,
            0.0, a * s, 0.0, 0.0,
            0.0, 0.0, b * s, 0.0,
            c * gamma, 0.0, 0.0, c * (1.0 - gamma),
        ],
    );
    Ok(PauliTransferMatrix::new_unchecked(mat))
}

// ---------------------------------------------------------------------
// distribution record
// ---------------------------------------------------------------------

/// Serializable description of a fitted channel distribution, embedded
/// in experiment manifests.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DistributionRecord {
    pub kind: &'static str,
    /// whether sampling then averaging reproduces the target (up to MC
    /// error) or only approximates it
    pub exact: bool,
    pub target: Value,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<SaReport>,
}

// ---------------------------------------------------------------------
// pure states
// ---------------------------------------------------------------------

/// Random pure qubit states from the von Mises-Fisher distribution on
/// the Bloch sphere, with a prescribed mean Bloch vector.
#[derive(Debug, Clone)]
pub struct PureStateVmf {
    params: VmfParams,
    target: RVec,
}

impl PureStateVmf {
    /// Qubits only: for N > 2 not every unit vector of the generalized
    /// Bloch space is a state; use a rank-1 mixed-state distribution
    /// instead.
    pub fn fit(target_mean_bloch: &RVec) -> Result<Self, ChannelError> {
        if target_mean_bloch.len() != 3 {
            return Err(ChannelError::DegenerateTarget(format!(
                "pure-state sampling covers qubits (Bloch dimension 3), got {}",
                target_mean_bloch.len()
            )));
        }
        if target_mean_bloch.norm() >= 1.0 {
            return Err(ChannelError::OutOfRange {
                name: "target_mean_bloch",
                value: target_mean_bloch.norm(),
                range: "norm < 1",
            });
        }
        let params = crate::expfam::vmf_estimate(target_mean_bloch)?;
        Ok(Self { params, target: target_mean_bloch.clone() })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DensityOperator {
        let u = vmf_sample(rng, &self.params);
        bloch_to_state(&crate::repr::BlochVector { vec: u }).expect("unit bloch vector")
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "pure-state-vmf",
            exact: true,
            target: json!(self.target.as_slice()),
            params: json!({
                "mu": self.params.mu().as_slice(),
                "kappa": self.params.kappa(),
            }),
            fit: None,
        }
    }
}

/// Convenience wrapper: fit and draw `count` pure states.
pub fn sample_pure_state<R: Rng + ?Sized>(
    rng: &mut R,
    target_mean_bloch: &RVec,
    count: usize,
) -> Result<Vec<DensityOperator>, ChannelError> {
    let dist = PureStateVmf::fit(target_mean_bloch)?;
    Ok((0..count).map(|_| dist.sample(rng)).collect())
}

// ---------------------------------------------------------------------
// mixed states
// ---------------------------------------------------------------------

/// Random rank-k mixed states `rho = X X^dag / k` with complex
/// matrix-Bingham `X` fitted so the mean state is the target.
pub struct MixedStateBingham {
    params: MatrixBinghamParams,
    k: usize,
    target: CMat,
    fit: Option<SaReport>,
}

impl MixedStateBingham {
    pub fn fit<R: Rng + ?Sized>(
        rng: &mut R,
        target_rho: &DensityOperator,
        k: usize,
        cfg: &SaConfig,
    ) -> Result<Self, ChannelError> {
        let n = target_rho.dim();
        if k < 1 || k > n {
            return Err(ChannelError::OutOfRange {
                name: "k",
                value: k as f64,
                range: "1 <= k <= N",
            });
        }
        let manifold = StiefelManifold::complex(n, k);
        if k == n {
            // X X^dag = I on the full square manifold: only the
            // maximally mixed target is reachable
            let max_mixed = DensityOperator::maximally_mixed(n);
            if crate::linalg::frobenius_distance(target_rho.mat(), max_mixed.mat()) > 1e-9 {
                return Err(ChannelError::InfeasibleTarget(format!(
                    "rank {k} = N frames always average to the maximally mixed state"
                )));
            }
            let params = MatrixBinghamParams::new(manifold, CMat::zeros(n, n))?;
            return Ok(Self { params, k, target: target_rho.mat().clone(), fit: None });
        }
        // k E[rho] = E[X X^dag] has eigenvalues in [0, 1]
        let (vals, _) = eigh_desc(target_rho.mat());
        if vals[0] * k as f64 >= 1.0 - 1e-9 {
            return Err(ChannelError::InfeasibleTarget(format!(
                "largest target eigenvalue {} not below 1/k = {}",
                vals[0],
                1.0 / k as f64
            )));
        }
        let target_flat =
            crate::expfam::flatten_hermitian(&(target_rho.mat() * C64::new(k as f64, 0.0)));
        let mut problem = BinghamSecondMomentProblem::new(manifold, GibbsConfig::default());
        let theta0 = vec![0.0; problem.stat_dim()];
        let (theta, report) = estimate_natural_params(&mut problem, theta0, &target_flat, cfg, rng)?;
        problem.set_theta(&theta, rng);
        Ok(Self {
            params: problem.params(),
            k,
            target: target_rho.mat().clone(),
            fit: Some(report),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DensityOperator {
        let (mut draws, _) = bingham_sample_batch(rng, &self.params, 1, &GibbsConfig::default());
        let x = draws.pop().expect("one draw").to_complex();
        DensityOperator::new_unchecked(&x * x.adjoint() / C64::new(self.k as f64, 0.0))
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "mixed-state-bingham",
            exact: true,
            target: complex_matrix_to_json(&self.target),
            params: json!({
                "k": self.k,
                "A": complex_matrix_to_json(self.params.a()),
            }),
            fit: self.fit.clone(),
        }
    }
}

// ---------------------------------------------------------------------
// dephasing
// ---------------------------------------------------------------------

/// Random unitary dephasing channels: the rotation angle follows a von
/// Mises law with `E[e^{i theta}]` equal to the prescribed mean
/// `alpha^2`.
#[derive(Debug, Clone)]
pub struct DephasingVonMises {
    mu: f64,
    kappa: f64,
    target: C64,
}

impl DephasingVonMises {
    pub fn fit(mean_alpha_sq: C64) -> Result<Self, ChannelError> {
        let r = mean_alpha_sq.norm();
        if r >= 1.0 {
            return Err(ChannelError::OutOfRange {
                name: "mean_alpha_sq",
                value: r,
                range: "modulus < 1",
            });
        }
        let kappa = if r == 0.0 { 0.0 } else { vmf_solve_kappa(2, r) };
        Ok(Self { mu: mean_alpha_sq.arg(), kappa, target: mean_alpha_sq })
    }

    pub fn sample_angle<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_von_mises(rng, self.mu, self.kappa)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliTransferMatrix {
        let theta = self.sample_angle(rng);
        dephasing_ptm(C64::from_polar(1.0, theta)).expect("unit modulus")
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "dephasing-vonmises",
            exact: true,
            target: json!([self.target.re, self.target.im]),
            params: json!({ "mu": self.mu, "kappa": self.kappa }),
            fit: None,
        }
    }
}

pub fn sample_dephasing<R: Rng + ?Sized>(
    rng: &mut R,
    mean_alpha_sq: C64,
    count: usize,
) -> Result<Vec<PauliTransferMatrix>, ChannelError> {
    let dist = DephasingVonMises::fit(mean_alpha_sq)?;
    Ok((0..count).map(|_| dist.sample(rng)).collect())
}

// ---------------------------------------------------------------------
// random unitary channels (SO(3) matrix-Fisher)
// ---------------------------------------------------------------------

/// Random unital qubit channels: matrix-Fisher rotations on the Bloch
/// sphere whose mean rotation is the target contraction matrix.
pub struct UnitaryFisher {
    params: MatrixFisherParams,
    target: RMat,
    fit: SaReport,
}

impl UnitaryFisher {
    pub fn fit<R: Rng + ?Sized>(
        rng: &mut R,
        target_affine: &RMat,
        cfg: &SaConfig,
    ) -> Result<Self, ChannelError> {
        if target_affine.nrows() != 3 || target_affine.ncols() != 3 {
            return Err(ChannelError::DegenerateTarget(
                "unitary-channel sampling covers qubits (3x3 Bloch contraction)".into(),
            ));
        }
        // a singular value at 1 forces a deterministic column (the
        // dephasing situation); the circle family handles that instead
        let svd = target_affine.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        if smax >= 1.0 - 1e-9 {
            return Err(ChannelError::DegenerateTarget(format!(
                "largest singular value {smax} reaches 1: a rotation column is deterministic"
            )));
        }
        let target_flat: Vec<f64> =
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| target_affine[(i, j)]).collect();
        let mut problem = RotationFisherSo3Problem::new();
        let (theta, report) =
            estimate_natural_params(&mut problem, vec![0.0; 9], &target_flat, cfg, rng)?;
        let params = MatrixFisherParams::new_rotation(3, RMat::from_row_slice(3, 3, &theta))?;
        Ok(Self { params, target: target_affine.clone(), fit: report })
    }

    /// One rotation draw, as the Bloch contraction block.
    pub fn sample_rotation<R: Rng + ?Sized>(&self, rng: &mut R) -> RMat {
        matrix_fisher_sample_batch(rng, &self.params, 1, &GibbsConfig::default())
            .0
            .pop()
            .expect("one draw")
            .unwrap_rotation()
    }

    pub fn sample_rotations<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<RMat> {
        matrix_fisher_sample_batch(rng, &self.params, count, &GibbsConfig::default())
            .0
            .into_iter()
            .map(FisherDraw::unwrap_rotation)
            .collect()
    }

    /// One draw lifted to a unital PTM.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliTransferMatrix {
        let r = self.sample_rotation(rng);
        let mut mat = RMat::identity(4, 4);
        for i in 0..3 {
            for j in 0..3 {
                mat[(i + 1, j + 1)] = r[(i, j)];
            }
        }
        PauliTransferMatrix::new_unchecked(mat)
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "unitary-fisher",
            exact: true,
            target: crate::json::real_matrix_to_json(&self.target),
            params: json!({ "F": crate::json::real_matrix_to_json(&self.params.f_real()) }),
            fit: Some(self.fit.clone()),
        }
    }
}

// ---------------------------------------------------------------------
// special unitary completion and SU(N) Bingham
// ---------------------------------------------------------------------

/// The unique unit vector completing an (N-1)-frame to a special unitary
/// matrix.
pub fn complete_special_unitary(x: &CMat) -> CMat {
    let n = x.nrows();
    debug_assert_eq!(x.ncols(), n - 1);
    // orthogonalize the best-conditioned basis vector against the columns
    let mut best: Option<crate::linalg::CVec> = None;
    let mut best_norm = -1.0;
    for i in 0..n {
        let mut v = crate::linalg::CVec::zeros(n);
        v[i] = ONE;
        for _ in 0..2 {
            for j in 0..n - 1 {
                let col = x.column(j);
                let c = col.dotc(&v);
                v -= col * c;
            }
        }
        let nv = v.norm();
        if nv > best_norm {
            best_norm = nv;
            best = Some(v);
        }
    }
    let v = best.expect("n >= 1") / C64::new(best_norm, 0.0);
    let mut full = CMat::zeros(n, n);
    for j in 0..n - 1 {
        full.set_column(j, &x.column(j));
    }
    full.set_column(n - 1, &v);
    let det = full.determinant();
    // rescale the completion so the determinant is exactly +1
    let fixed = v * (det.conj() / det.norm());
    full.set_column(n - 1, &fixed);
    full
}

/// Random special unitaries from a matrix-Bingham distribution on the
/// first N-1 columns, completed to determinant +1.
pub struct SuBingham {
    params: MatrixBinghamParams,
}

impl SuBingham {
    pub fn new(params: MatrixBinghamParams) -> Result<Self, ChannelError> {
        let m = params.manifold;
        if m.field != crate::uniform::Field::Complex || m.k + 1 != m.n {
            return Err(ChannelError::DegenerateTarget(format!(
                "SU(N) sub-model lives on V_{{N-1}}(C^N), got V_{}(F^{})",
                m.k, m.n
            )));
        }
        Ok(Self { params })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CMat {
        let (mut draws, _) = bingham_sample_batch(rng, &self.params, 1, &GibbsConfig::default());
        let x = draws.pop().expect("one draw").to_complex();
        complete_special_unitary(&x)
    }
}

// ---------------------------------------------------------------------
// general CPTP maps
// ---------------------------------------------------------------------

/// Random CPTP maps from the frame-Bingham distribution whose mean Choi
/// matrix is the target. Extreme-point targets are refused.
pub struct CptpFrameBingham {
    params: FrameBinghamParams,
    target: ChoiMatrix,
    fit: SaReport,
}

impl CptpFrameBingham {
    pub fn fit<R: Rng + ?Sized>(
        rng: &mut R,
        target: &ChoiMatrix,
        concentration: f64,
        cfg: &SaConfig,
    ) -> Result<Self, ChannelError> {
        if target.dim() == 2 {
            let verdict = classify_extreme_qubit(target)?;
            if verdict.verdict == Verdict::Extreme {
                return Err(ChannelError::ExtremePointTarget);
            }
        }
        let (params, fit) = frame_bingham_params_from_choi(rng, target, concentration, cfg)?;
        Ok(Self { params, target: target.clone(), fit })
    }

    pub fn sample_batch<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
        gibbs: &GibbsConfig,
    ) -> Result<(Vec<ChoiMatrix>, ChainDiagnostics), ChannelError> {
        let (frames, diag) = frame_bingham_sample(rng, &self.params, count, gibbs)?;
        Ok((frames.iter().map(frame_to_choi).collect(), diag))
    }

    pub fn params(&self) -> &FrameBinghamParams {
        &self.params
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "cptp-frame-bingham",
            exact: true,
            target: complex_matrix_to_json(self.target.mat()),
            params: json!({
                "Theta": complex_matrix_to_json(self.params.theta()),
                "pinned_blocks": self.params.pinned(),
            }),
            fit: Some(self.fit.clone()),
        }
    }
}

/// Approximate CPTP sampling: matrix-Fisher on the Stiefel form with
/// mean resultant `1 - epsilon`. The averaged Choi matrix is close to,
/// but not exactly, the target; the record is marked inexact.
pub struct CptpFisherApprox {
    params: MatrixFisherParams,
    target: StiefelForm,
    epsilon: f64,
    fit: SaReport,
}

impl CptpFisherApprox {
    pub fn fit<R: Rng + ?Sized>(
        rng: &mut R,
        target: &StiefelForm,
        epsilon: f64,
        cfg: &SaConfig,
    ) -> Result<Self, ChannelError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ChannelError::OutOfRange {
                name: "epsilon",
                value: epsilon,
                range: "(0, 1)",
            });
        }
        let n = target.dim();
        let rows = target.s().nrows();
        let manifold = StiefelManifold::complex(rows, n);
        // independent chains keep the batch mean honest at strong
        // concentration, where one chain barely moves
        let gibbs = GibbsConfig { burn_in: 40, thin: 2, chains: 8 };
        let mut problem =
            StiefelFisherScalarProblem::new(target.s().clone(), manifold, gibbs);
        // concentration scales like (real dimension) / (2 epsilon)
        let c0 = (rows as f64) / epsilon.max(1e-3);
        let (_, report) =
            estimate_natural_params(&mut problem, vec![c0], &[1.0 - epsilon], cfg, rng)?;
        Ok(Self { params: problem.params(), target: target.clone(), epsilon, fit: report })
    }

    pub fn sample_batch<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
        gibbs: &GibbsConfig,
    ) -> Result<(Vec<ChoiMatrix>, ChainDiagnostics), ChannelError> {
        let (draws, diag) = matrix_fisher_sample_batch(rng, &self.params, count, gibbs);
        let chois = draws
            .into_iter()
            .map(|d| {
                let s = StiefelForm::new_unchecked(self.target.dim(), match d {
                    FisherDraw::Frame(StiefelPoint::Complex(m)) => m,
                    _ => unreachable!("complex stiefel draws"),
                });
                ChannelRepr::Stiefel(s).to_choi().expect("frames are CPTP")
            })
            .collect();
        Ok((chois, diag))
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "cptp-fisher-approx",
            exact: false,
            target: complex_matrix_to_json(self.target.s()),
            params: json!({
                "epsilon": self.epsilon,
                "F": complex_matrix_to_json(self.params.f()),
            }),
            fit: Some(self.fit.clone()),
        }
    }
}

/// Random amplitude damping channels: `gamma` follows a Beta law with
/// the prescribed mean. Averages of amplitude damping channels are not
/// amplitude damping channels, so the record is marked inexact.
#[derive(Debug, Clone)]
pub struct AdGammaFamily {
    alpha: f64,
    beta: f64,
    target_gamma: f64,
}

impl AdGammaFamily {
    pub fn fit(target_gamma: f64, concentration: f64) -> Result<Self, ChannelError> {
        if !(target_gamma > 0.0 && target_gamma < 1.0) {
            return Err(ChannelError::OutOfRange {
                name: "target_gamma",
                value: target_gamma,
                range: "(0, 1)",
            });
        }
        if concentration <= 0.0 {
            return Err(ChannelError::OutOfRange {
                name: "concentration",
                value: concentration,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            alpha: target_gamma * concentration,
            beta: (1.0 - target_gamma) * concentration,
            target_gamma,
        })
    }

    pub fn sample_gamma<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Beta::new(self.alpha, self.beta).expect("valid shapes").sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelRepr {
        amplitude_damping(self.sample_gamma(rng))
    }

    pub fn record(&self) -> DistributionRecord {
        DistributionRecord {
            kind: "ad-gamma-family",
            exact: false,
            target: json!(self.target_gamma),
            params: json!({ "alpha": self.alpha, "beta": self.beta }),
            fit: None,
        }
    }
}

pub fn sample_ad_gamma<R: Rng + ?Sized>(
    rng: &mut R,
    target_gamma: f64,
    concentration: f64,
    count: usize,
) -> Result<Vec<ChannelRepr>, ChannelError> {
    let dist = AdGammaFamily::fit(target_gamma, concentration)?;
    Ok((0..count).map(|_| dist.sample(rng)).collect())
}
