//! Quantum states, the five channel representations, and conversions
//! between them.
//!
//! A channel can be held as a Kraus operator list, a Choi matrix, a
//! Liouvillian superoperator, a Pauli transfer matrix (qubits only), an
//! affine Bloch-space map (qubits only), a Stiefel form (stacked Kraus
//! operators with orthonormal columns), or a frame form (the row
//! reshuffle of the Stiefel form whose block inner products reproduce
//! Choi entries). Vectorization is column-stacking throughout, which
//! makes the Liouvillian literally `sum A_i^* (x) A_i`.

use crate::linalg::{
    self, eigh_desc, frobenius_distance, hermiticity_defect, max_imag, orthonormality_defect,
    partial_trace_2, paulis, to_real, trace_norm_hermitian, unvec_col, vec_col, CMat, CVec, RMat,
    RVec, C64, ONE,
};
use thiserror::Error;

/// Default validation tolerance for Hermiticity, positivity and trace
/// conditions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues of an `N`-dimensional Choi matrix below `RANK_TOL * N`
/// are treated as zero when counting Kraus rank.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ReprError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector length {len} is not a square dimension")]
    NotPerfectSquare { len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hermiticity violated by {defect:e}")]
    NotHermitian { defect: f64 },
    #[error("not positive semi-definite: min eigenvalue {min_eig:e}")]
    NotPositive { min_eig: f64 },
    #[error("trace condition violated by {defect:e}")]
    TraceViolation { defect: f64 },
    #[error("trace preservation violated by {defect:e}")]
    NotTracePreserving { defect: f64 },
    #[error("columns not orthonormal: defect {defect:e}")]
    NotOrthonormal { defect: f64 },
    #[error("residual imaginary part {defect:e} above tolerance")]
    ResidualImaginary { defect: f64 },
    #[error("operation only implemented for qubits (N=2), got N={dim}")]
    UnsupportedDimension { dim: usize },
    #[error("bloch vector norm {norm} exceeds 1")]
    BlochNormTooLarge { norm: f64 },
    #[error("frame form requires kraus rank {expected}, got {got}")]
    WrongKrausRank { expected: usize, got: usize },
    #[error("kraus set is empty")]
    EmptyKrausSet,
}

// ---------------------------------------------------------------------
// states
// ---------------------------------------------------------------------

/// A density operator: Hermitian, positive semi-definite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    mat: CMat,
}

impl DensityOperator {
    pub fn new(mat: CMat) -> Result<Self, ReprError> {
        Self::new_with_tol(mat, DEFAULT_TOL)
    }

    pub fn new_with_tol(mat: CMat, tol: f64) -> Result<Self, ReprError> {
        if mat.nrows() != mat.ncols() {
            return Err(ReprError::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        let herm = hermiticity_defect(&mat);
        if herm > tol {
            return Err(ReprError::NotHermitian { defect: herm });
        }
        let (vals, _) = eigh_desc(&mat);
        let min_eig = vals.last().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(ReprError::NotPositive { min_eig });
        }
        let tr_defect = (mat.trace() - ONE).norm();
        if tr_defect > tol {
            return Err(ReprError::TraceViolation { defect: tr_defect });
        }
        Ok(Self { dim: mat.nrows(), mat })
    }

    /// Skips validation; for internal construction of values already
    /// known to be valid up to roundoff.
    pub fn new_unchecked(mat: CMat) -> Self {
        Self { dim: mat.nrows(), mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// The pure state `|j><j|`.
    pub fn basis_state(dim: usize, j: usize) -> Self {
        let mut m = CMat::zeros(dim, dim);
        m[(j, j)] = ONE;
        Self { dim, mat: m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { dim, mat: CMat::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0) }
    }
}

/// Tr(rho^2).
pub fn purity(rho: &DensityOperator) -> f64 {
    (rho.mat() * rho.mat()).trace().re
}

/// Generalized Bloch vector of a qubit state (length `N^2 - 1 = 3`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub vec: RVec,
}

impl BlochVector {
    pub fn new(vec: RVec) -> Result<Self, ReprError> {
        let norm = vec.norm();
        if norm > 1.0 + DEFAULT_TOL {
            return Err(ReprError::BlochNormTooLarge { norm });
        }
        Ok(Self { vec })
    }

    pub fn from_coords(x: f64, y: f64, z: f64) -> Result<Self, ReprError> {
        Self::new(RVec::from_vec(vec![x, y, z]))
    }
}

/// Bloch coordinates of a qubit density operator: `v_i = tr(rho sigma_i)`.
pub fn state_to_bloch(rho: &DensityOperator) -> Result<BlochVector, ReprError> {
    if rho.dim() != 2 {
        return Err(ReprError::UnsupportedDimension { dim: rho.dim() });
    }
    let [_, sx, sy, sz] = paulis();
    let coord = |s: &CMat| (s * rho.mat()).trace().re;
    Ok(BlochVector { vec: RVec::from_vec(vec![coord(&sx), coord(&sy), coord(&sz)]) })
}

/// Inverse of [`state_to_bloch`]: `rho = (I + v . sigma) / 2`.
pub fn bloch_to_state(v: &BlochVector) -> Result<DensityOperator, ReprError> {
    let norm = v.vec.norm();
    if norm > 1.0 + DEFAULT_TOL {
        return Err(ReprError::BlochNormTooLarge { norm });
    }
    let [si, sx, sy, sz] = paulis();
    let mat = (si + sx * C64::new(v.vec[0], 0.0) + sy * C64::new(v.vec[1], 0.0)
        + sz * C64::new(v.vec[2], 0.0))
        * C64::new(0.5, 0.0);
    Ok(DensityOperator::new_unchecked(mat))
}

// ---------------------------------------------------------------------
// channel representations
// ---------------------------------------------------------------------

/// An ordered list of Kraus operators with `sum A_i^dag A_i = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    ops: Vec<CMat>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMat>) -> Result<Self, ReprError> {
        Self::new_with_tol(ops, DEFAULT_TOL)
    }

    pub fn new_with_tol(ops: Vec<CMat>, tol: f64) -> Result<Self, ReprError> {
        let first = ops.first().ok_or(ReprError::EmptyKrausSet)?;
        if first.nrows() != first.ncols() {
            return Err(ReprError::NotSquare { rows: first.nrows(), cols: first.ncols() });
        }
        let dim = first.nrows();
        let mut acc = CMat::zeros(dim, dim);
        for a in &ops {
            if a.nrows() != dim || a.ncols() != dim {
                return Err(ReprError::DimensionMismatch { expected: dim, got: a.nrows() });
            }
            acc += a.adjoint() * a;
        }
        let defect = frobenius_distance(&acc, &CMat::identity(dim, dim));
        if defect > tol {
            return Err(ReprError::NotTracePreserving { defect });
        }
        Ok(Self { dim, ops })
    }

    pub fn new_unchecked(ops: Vec<CMat>) -> Self {
        let dim = ops[0].nrows();
        Self { dim, ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, ops: vec![CMat::identity(dim, dim)] }
    }
}

/// The Choi matrix `sum |A_i>><<A_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    mat: CMat,
}

impl ChoiMatrix {
    pub fn new(mat: CMat) -> Result<Self, ReprError> {
        Self::new_with_tol(mat, DEFAULT_TOL)
    }

    pub fn new_with_tol(mat: CMat, tol: f64) -> Result<Self, ReprError> {
        let n2 = mat.nrows();
        if mat.ncols() != n2 {
            return Err(ReprError::NotSquare { rows: n2, cols: mat.ncols() });
        }
        let dim = (n2 as f64).sqrt().round() as usize;
        if dim * dim != n2 {
            return Err(ReprError::NotPerfectSquare { len: n2 });
        }
        let herm = hermiticity_defect(&mat);
        if herm > tol {
            return Err(ReprError::NotHermitian { defect: herm });
        }
        let (vals, _) = eigh_desc(&mat);
        let min_eig = vals.last().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(ReprError::NotPositive { min_eig });
        }
        let pt = partial_trace_2(&mat, dim);
        let defect = frobenius_distance(&pt, &CMat::identity(dim, dim));
        if defect > tol * (dim as f64) {
            return Err(ReprError::NotTracePreserving { defect });
        }
        Ok(Self { dim, mat })
    }

    pub fn new_unchecked(mat: CMat) -> Self {
        let dim = (mat.nrows() as f64).sqrt().round() as usize;
        Self { dim, mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }
}

/// The Liouvillian superoperator `sum A_i^* (x) A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    mat: CMat,
}

impl Liouvillian {
    pub fn new(mat: CMat) -> Result<Self, ReprError> {
        // validity is delegated to the reshuffled Choi form
        let choi = ChoiMatrix::new(reshuffle(&mat)?)?;
        Ok(Self { dim: choi.dim(), mat })
    }

    pub fn new_unchecked(mat: CMat) -> Self {
        let dim = (mat.nrows() as f64).sqrt().round() as usize;
        Self { dim, mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }
}

/// The Liouvillian in the trace-normalized Pauli basis (qubits only).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTransferMatrix {
    mat: RMat,
}

impl PauliTransferMatrix {
    pub fn new(mat: RMat) -> Result<Self, ReprError> {
        Self::new_with_tol(mat, DEFAULT_TOL)
    }

    pub fn new_with_tol(mat: RMat, tol: f64) -> Result<Self, ReprError> {
        if mat.nrows() != 4 || mat.ncols() != 4 {
            return Err(ReprError::UnsupportedDimension { dim: mat.nrows() });
        }
        // trace preservation: first row is (1, 0, 0, 0)
        let mut defect = (mat[(0, 0)] - 1.0).abs();
        for j in 1..4 {
            defect = defect.max(mat[(0, j)].abs());
        }
        if defect > tol {
            return Err(ReprError::NotTracePreserving { defect });
        }
        Ok(Self { mat })
    }

    pub fn new_unchecked(mat: RMat) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        2
    }

    pub fn mat(&self) -> &RMat {
        &self.mat
    }
}

/// Bloch-space action `phi -> A phi + tau` of a qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    pub a: RMat,
    pub tau: RVec,
}

/// Stacked Kraus operators `S = [A_1; ...; A_k]` with `S^dag S = I_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelForm {
    dim: usize,
    kraus_rank: usize,
    s: CMat,
}

impl StiefelForm {
    pub fn new(dim: usize, s: CMat) -> Result<Self, ReprError> {
        Self::new_with_tol(dim, s, DEFAULT_TOL)
    }

    pub fn new_with_tol(dim: usize, s: CMat, tol: f64) -> Result<Self, ReprError> {
        if s.ncols() != dim || s.nrows() % dim != 0 {
            return Err(ReprError::DimensionMismatch { expected: dim, got: s.ncols() });
        }
        let defect = orthonormality_defect(&s);
        if defect > tol {
            return Err(ReprError::NotOrthonormal { defect });
        }
        let kraus_rank = s.nrows() / dim;
        Ok(Self { dim, kraus_rank, s })
    }

    pub fn new_unchecked(dim: usize, s: CMat) -> Self {
        let kraus_rank = s.nrows() / dim;
        Self { dim, kraus_rank, s }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_rank(&self) -> usize {
        self.kraus_rank
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }
}

/// Row reshuffle of the full-rank Stiefel form. The matrix is `N^3 x N`;
/// block `m` (of `N^2`, each a length-`N^2` segment) collects the `m`-th
/// vectorized entry of every Kraus operator, so block inner products
/// reproduce Choi entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameForm {
    dim: usize,
    xi: CMat,
}

impl FrameForm {
    pub fn new(dim: usize, xi: CMat) -> Result<Self, ReprError> {
        if xi.nrows() != dim * dim * dim || xi.ncols() != dim {
            return Err(ReprError::DimensionMismatch { expected: dim * dim * dim, got: xi.nrows() });
        }
        let defect = orthonormality_defect(&xi);
        if defect > DEFAULT_TOL {
            return Err(ReprError::NotOrthonormal { defect });
        }
        Ok(Self { dim, xi })
    }

    pub fn new_unchecked(dim: usize, xi: CMat) -> Self {
        Self { dim, xi }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi(&self) -> &CMat {
        &self.xi
    }

    /// Block `m` (0-based, `m < N^2`): the length-`N^2` vector whose
    /// `k`-th entry is `vec(A_k)[m]`.
    pub fn block(&self, m: usize) -> CVec {
        let n = self.dim;
        let n2 = n * n;
        let i = m % n;
        let j = m / n;
        CVec::from_fn(n2, |k, _| self.xi[(i * n2 + k, j)])
    }
}

// ---------------------------------------------------------------------
// vectorization and reshuffle
// ---------------------------------------------------------------------

/// Column-stacking vectorization of a square matrix.
pub fn vectorize(m: &CMat) -> Result<CVec, ReprError> {
    if m.nrows() != m.ncols() {
        return Err(ReprError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(vec_col(m))
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &CVec) -> Result<CMat, ReprError> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() {
        return Err(ReprError::NotPerfectSquare { len: v.len() });
    }
    Ok(unvec_col(v, n))
}

/// The reshuffling involution relating Liouvillian and Choi forms.
///
/// With column-stacking vec indices `m = j*N + i`, entry
/// `out[(j1,i1),(j2,i2)] = in[(i2,i1),(j2,j1)]`. Exact (a pure index
/// permutation), and its own inverse.
pub fn reshuffle(m: &CMat) -> Result<CMat, ReprError> {
    let n2 = m.nrows();
    if m.ncols() != n2 {
        return Err(ReprError::NotSquare { rows: n2, cols: m.ncols() });
    }
    let n = (n2 as f64).sqrt().round() as usize;
    if n * n != n2 {
        return Err(ReprError::NotPerfectSquare { len: n2 });
    }
    let mut out = CMat::zeros(n2, n2);
    for j1 in 0..n {
        for i1 in 0..n {
            for j2 in 0..n {
                for i2 in 0..n {
                    out[(j1 * n + i1, j2 * n + i2)] = m[(i2 * n + i1, j2 * n + j1)];
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// conversions
// ---------------------------------------------------------------------

pub fn kraus_to_choi(k: &KrausSet) -> ChoiMatrix {
    let n = k.dim();
    let mut mat = CMat::zeros(n * n, n * n);
    for a in k.ops() {
        let v = vec_col(a);
        mat += &v * v.adjoint();
    }
    ChoiMatrix { dim: n, mat }
}

pub fn kraus_to_liouville(k: &KrausSet) -> Liouvillian {
    let n = k.dim();
    let mut mat = CMat::zeros(n * n, n * n);
    for a in k.ops() {
        let conj = a.map(|z| z.conj());
        mat += conj.kronecker(a);
    }
    Liouvillian { dim: n, mat }
}

/// Canonical Kraus operators `sqrt(d_i) K_i` from the eigendecomposition
/// of the Choi matrix, ordered by descending eigenvalue. Eigenvalues
/// below `RANK_TOL * N` are dropped.
pub fn choi_to_kraus(c: &ChoiMatrix) -> Result<KrausSet, ReprError> {
    let n = c.dim();
    let threshold = RANK_TOL * n as f64;
    let (vals, vecs) = eigh_desc(c.mat());
    let mut ops = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if v < -DEFAULT_TOL {
            return Err(ReprError::NotPositive { min_eig: v });
        }
        if v <= threshold {
            continue;
        }
        let col = vecs.column(i).clone_owned() * C64::new(v.sqrt(), 0.0);
        ops.push(unvec_col(&col, n));
    }
    if ops.is_empty() {
        return Err(ReprError::EmptyKrausSet);
    }
    Ok(KrausSet { dim: n, ops })
}

pub fn choi_to_liouville(c: &ChoiMatrix) -> Liouvillian {
    Liouvillian { dim: c.dim(), mat: reshuffle(c.mat()).expect("square by construction") }
}

pub fn liouville_to_choi(l: &Liouvillian) -> ChoiMatrix {
    ChoiMatrix { dim: l.dim(), mat: reshuffle(l.mat()).expect("square by construction") }
}

/// Basis-change matrix whose columns are the vectorized, trace-normalized
/// Paulis `sigma_i / sqrt(2)`; unitary, so the inverse is the adjoint.
fn pauli_basis_matrix() -> CMat {
    let mut t = CMat::zeros(4, 4);
    for (j, p) in paulis().iter().enumerate() {
        let v = vec_col(p) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        t.set_column(j, &v);
    }
    t
}

/// Pauli transfer matrix `R = T^dag L T` (qubits only).
pub fn liouville_to_ptm(l: &Liouvillian) -> Result<PauliTransferMatrix, ReprError> {
    if l.dim() != 2 {
        return Err(ReprError::UnsupportedDimension { dim: l.dim() });
    }
    let t = pauli_basis_matrix();
    let r = t.adjoint() * l.mat() * &t;
    let imag = max_imag(&r);
    if imag > DEFAULT_TOL {
        return Err(ReprError::ResidualImaginary { defect: imag });
    }
    Ok(PauliTransferMatrix { mat: to_real(&r) })
}

pub fn ptm_to_liouville(r: &PauliTransferMatrix) -> Liouvillian {
    let t = pauli_basis_matrix();
    let mat = &t * linalg::to_complex(r.mat()) * t.adjoint();
    Liouvillian { dim: 2, mat }
}

/// Splits a PTM into the Bloch contraction block and shift vector.
pub fn ptm_to_affine(r: &PauliTransferMatrix) -> AffineForm {
    let m = r.mat();
    let a = m.view((1, 1), (3, 3)).clone_owned();
    let tau = RVec::from_vec(vec![m[(1, 0)], m[(2, 0)], m[(3, 0)]]);
    AffineForm { a, tau }
}

pub fn affine_to_ptm(f: &AffineForm) -> PauliTransferMatrix {
    let mut mat = RMat::zeros(4, 4);
    mat[(0, 0)] = 1.0;
    for i in 0..3 {
        mat[(i + 1, 0)] = f.tau[i];
        for j in 0..3 {
            mat[(i + 1, j + 1)] = f.a[(i, j)];
        }
    }
    PauliTransferMatrix { mat }
}

/// Stacks Kraus operators into the Stiefel form. With `pad_to_full`,
/// zero operators are appended up to the maximal rank `N^2`.
pub fn kraus_to_stiefel(k: &KrausSet, pad_to_full: bool) -> StiefelForm {
    let n = k.dim();
    let count = if pad_to_full { n * n } else { k.ops().len() };
    let mut s = CMat::zeros(count * n, n);
    for (idx, a) in k.ops().iter().enumerate() {
        s.view_mut((idx * n, 0), (n, n)).copy_from(a);
    }
    StiefelForm { dim: n, kraus_rank: count, s }
}

/// Unstacks the Stiefel form into its Kraus operator list (zero blocks
/// included, preserving order).
pub fn stiefel_to_kraus(s: &StiefelForm) -> KrausSet {
    let n = s.dim();
    let ops = (0..s.kraus_rank())
        .map(|idx| s.s().view((idx * n, 0), (n, n)).clone_owned())
        .collect();
    KrausSet { dim: n, ops }
}

/// Row reshuffle sending Stiefel row `k*N + i` to frame row `i*N^2 + k`.
pub fn stiefel_to_frame(s: &StiefelForm) -> Result<FrameForm, ReprError> {
    let n = s.dim();
    let n2 = n * n;
    if s.kraus_rank() != n2 {
        return Err(ReprError::WrongKrausRank { expected: n2, got: s.kraus_rank() });
    }
    let mut xi = CMat::zeros(n * n2, n);
    for k in 0..n2 {
        for i in 0..n {
            for j in 0..n {
                xi[(i * n2 + k, j)] = s.s()[(k * n + i, j)];
            }
        }
    }
    Ok(FrameForm { dim: n, xi })
}

pub fn frame_to_stiefel(f: &FrameForm) -> StiefelForm {
    let n = f.dim();
    let n2 = n * n;
    let mut s = CMat::zeros(n2 * n, n);
    for k in 0..n2 {
        for i in 0..n {
            for j in 0..n {
                s[(k * n + i, j)] = f.xi()[(i * n2 + k, j)];
            }
        }
    }
    StiefelForm { dim: n, kraus_rank: n2, s }
}

/// Choi entries as frame block inner products: `Choi[i][j] = xi_j^dag xi_i`.
pub fn frame_to_choi(f: &FrameForm) -> ChoiMatrix {
    let n = f.dim();
    let n2 = n * n;
    let blocks: Vec<CVec> = (0..n2).map(|m| f.block(m)).collect();
    let mut mat = CMat::zeros(n2, n2);
    for i in 0..n2 {
        for j in 0..n2 {
            mat[(i, j)] = blocks[j].dotc(&blocks[i]);
        }
    }
    ChoiMatrix { dim: n, mat }
}

// ---------------------------------------------------------------------
// the representation enum
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReprKind {
    Kraus,
    Choi,
    Liouville,
    Ptm,
    Affine,
    Stiefel,
    Frame,
}

impl ReprKind {
    pub fn name(&self) -> &'static str {
        match self {
            ReprKind::Kraus => "kraus",
            ReprKind::Choi => "choi",
            ReprKind::Liouville => "liouville",
            ReprKind::Ptm => "ptm",
            ReprKind::Affine => "affine",
            ReprKind::Stiefel => "stiefel",
            ReprKind::Frame => "frame",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "kraus" => ReprKind::Kraus,
            "choi" => ReprKind::Choi,
            "liouville" => ReprKind::Liouville,
            "ptm" => ReprKind::Ptm,
            "affine" => ReprKind::Affine,
            "stiefel" => ReprKind::Stiefel,
            "frame" => ReprKind::Frame,
            _ => return None,
        })
    }
}

/// One CPTP map in any of its encodings.
#[derive(Debug, Clone)]
pub enum ChannelRepr {
    Kraus(KrausSet),
    Choi(ChoiMatrix),
    Liouville(Liouvillian),
    Ptm(PauliTransferMatrix),
    Affine(AffineForm),
    Stiefel(StiefelForm),
    Frame(FrameForm),
}

impl ChannelRepr {
    pub fn kind(&self) -> ReprKind {
        match self {
            ChannelRepr::Kraus(_) => ReprKind::Kraus,
            ChannelRepr::Choi(_) => ReprKind::Choi,
            ChannelRepr::Liouville(_) => ReprKind::Liouville,
            ChannelRepr::Ptm(_) => ReprKind::Ptm,
            ChannelRepr::Affine(_) => ReprKind::Affine,
            ChannelRepr::Stiefel(_) => ReprKind::Stiefel,
            ChannelRepr::Frame(_) => ReprKind::Frame,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ChannelRepr::Kraus(k) => k.dim(),
            ChannelRepr::Choi(c) => c.dim(),
            ChannelRepr::Liouville(l) => l.dim(),
            ChannelRepr::Ptm(_) | ChannelRepr::Affine(_) => 2,
            ChannelRepr::Stiefel(s) => s.dim(),
            ChannelRepr::Frame(f) => f.dim(),
        }
    }

    pub fn to_kraus(&self) -> Result<KrausSet, ReprError> {
        match self {
            ChannelRepr::Kraus(k) => Ok(k.clone()),
            ChannelRepr::Choi(c) => choi_to_kraus(c),
            ChannelRepr::Liouville(l) => choi_to_kraus(&liouville_to_choi(l)),
            ChannelRepr::Ptm(r) => choi_to_kraus(&liouville_to_choi(&ptm_to_liouville(r))),
            ChannelRepr::Affine(f) => {
                choi_to_kraus(&liouville_to_choi(&ptm_to_liouville(&affine_to_ptm(f))))
            }
            ChannelRepr::Stiefel(s) => Ok(stiefel_to_kraus(s)),
            ChannelRepr::Frame(f) => Ok(stiefel_to_kraus(&frame_to_stiefel(f))),
        }
    }

    pub fn to_choi(&self) -> Result<ChoiMatrix, ReprError> {
        match self {
            ChannelRepr::Choi(c) => Ok(c.clone()),
            ChannelRepr::Liouville(l) => Ok(liouville_to_choi(l)),
            ChannelRepr::Ptm(r) => Ok(liouville_to_choi(&ptm_to_liouville(r))),
            ChannelRepr::Affine(f) => Ok(liouville_to_choi(&ptm_to_liouville(&affine_to_ptm(f)))),
            ChannelRepr::Frame(f) => Ok(frame_to_choi(f)),
            other => Ok(kraus_to_choi(&other.to_kraus()?)),
        }
    }

    pub fn to_liouville(&self) -> Result<Liouvillian, ReprError> {
        match self {
            ChannelRepr::Liouville(l) => Ok(l.clone()),
            ChannelRepr::Ptm(r) => Ok(ptm_to_liouville(r)),
            other => Ok(choi_to_liouville(&other.to_choi()?)),
        }
    }

    pub fn to_ptm(&self) -> Result<PauliTransferMatrix, ReprError> {
        match self {
            ChannelRepr::Ptm(r) => Ok(r.clone()),
            ChannelRepr::Affine(f) => Ok(affine_to_ptm(f)),
            other => liouville_to_ptm(&other.to_liouville()?),
        }
    }

    pub fn to_affine(&self) -> Result<AffineForm, ReprError> {
        Ok(ptm_to_affine(&self.to_ptm()?))
    }

    pub fn to_stiefel(&self) -> Result<StiefelForm, ReprError> {
        match self {
            ChannelRepr::Stiefel(s) => Ok(s.clone()),
            ChannelRepr::Frame(f) => Ok(frame_to_stiefel(f)),
            other => Ok(kraus_to_stiefel(&other.to_kraus()?, false)),
        }
    }

    pub fn to_frame(&self) -> Result<FrameForm, ReprError> {
        match self {
            ChannelRepr::Frame(f) => Ok(f.clone()),
            other => {
                let padded = kraus_to_stiefel(&other.to_kraus()?, true);
                stiefel_to_frame(&padded)
            }
        }
    }

    pub fn convert(&self, target: ReprKind) -> Result<ChannelRepr, ReprError> {
        Ok(match target {
            ReprKind::Kraus => ChannelRepr::Kraus(self.to_kraus()?),
            ReprKind::Choi => ChannelRepr::Choi(self.to_choi()?),
            ReprKind::Liouville => ChannelRepr::Liouville(self.to_liouville()?),
            ReprKind::Ptm => ChannelRepr::Ptm(self.to_ptm()?),
            ReprKind::Affine => ChannelRepr::Affine(self.to_affine()?),
            ReprKind::Stiefel => ChannelRepr::Stiefel(self.to_stiefel()?),
            ReprKind::Frame => ChannelRepr::Frame(self.to_frame()?),
        })
    }

    /// Applies the channel to a state. All representations agree up to
    /// roundoff; each uses its natural action.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, ReprError> {
        if rho.dim() != self.dim() {
            return Err(ReprError::DimensionMismatch { expected: self.dim(), got: rho.dim() });
        }
        match self {
            ChannelRepr::Kraus(k) => Ok(apply_kraus(k, rho)),
            ChannelRepr::Stiefel(s) => Ok(apply_kraus(&stiefel_to_kraus(s), rho)),
            ChannelRepr::Frame(f) => {
                Ok(apply_kraus(&stiefel_to_kraus(&frame_to_stiefel(f)), rho))
            }
            ChannelRepr::Liouville(l) => {
                let v = vec_col(rho.mat());
                let out = l.mat() * v;
                Ok(DensityOperator::new_unchecked(unvec_col(&out, rho.dim())))
            }
            ChannelRepr::Choi(c) => {
                Ok(ChannelRepr::Liouville(choi_to_liouville(c)).apply(rho)?)
            }
            ChannelRepr::Ptm(r) => {
                let phi = state_to_bloch(rho)?;
                let f = ptm_to_affine(r);
                let out = &f.a * &phi.vec + &f.tau;
                bloch_to_state(&BlochVector { vec: out })
            }
            ChannelRepr::Affine(f) => {
                let phi = state_to_bloch(rho)?;
                let out = &f.a * &phi.vec + &f.tau;
                bloch_to_state(&BlochVector { vec: out })
            }
        }
    }
}

fn apply_kraus(k: &KrausSet, rho: &DensityOperator) -> DensityOperator {
    let n = k.dim();
    let mut out = CMat::zeros(n, n);
    for a in k.ops() {
        out += a * rho.mat() * a.adjoint();
    }
    DensityOperator::new_unchecked(out)
}

// ---------------------------------------------------------------------
// predicates and distances
// ---------------------------------------------------------------------

/// Half the trace norm of the normalized Choi difference,
/// `||a - b||_1 / (2N)`. A diamond-norm lower bound up to normalization.
pub fn channel_distance(a: &ChoiMatrix, b: &ChoiMatrix) -> f64 {
    let n = a.dim() as f64;
    trace_norm_hermitian(&(a.mat() - b.mat())) / (2.0 * n)
}

/// Whether `sum A_i A_i^dag = I` within `tol`.
pub fn is_unital(k: &KrausSet, tol: f64) -> bool {
    let n = k.dim();
    let mut acc = CMat::zeros(n, n);
    for a in k.ops() {
        acc += a * a.adjoint();
    }
    frobenius_distance(&acc, &CMat::identity(n, n)) <= tol
}

/// Whether the channel is completely positive and trace preserving
/// within `tol` (PSD Choi with identity partial trace).
pub fn is_cptp(chan: &ChannelRepr, tol: f64) -> bool {
    match chan.to_choi() {
        Ok(c) => ChoiMatrix::new_with_tol(c.mat().clone(), tol).is_ok(),
        Err(_) => false,
    }
}
