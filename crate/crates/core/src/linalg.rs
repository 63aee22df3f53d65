//! Small dense complex linear-algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// 2x2 identity.
pub fn sigma_i() -> CMat {
    CMat::identity(2, 2)
}

pub fn sigma_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// The four Pauli matrices in the order I, X, Y, Z.
pub fn paulis() -> [CMat; 4] {
    [sigma_i(), sigma_x(), sigma_y(), sigma_z()]
}

/// Column-stacking vectorization: stacks the columns of `m` into one vector.
pub fn vec_col(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), m.iter().cloned())
}

/// Inverse of [`vec_col`] for a square target.
pub fn unvec_col(v: &CVec, n: usize) -> CMat {
    CMat::from_iterator(n, n, v.iter().cloned())
}

/// Hermitian eigendecomposition with eigenvalues sorted in descending order.
///
/// Returns `(values, vectors)` where column `j` of `vectors` is the
/// eigenvector of `values[j]`.
pub fn eigh_desc(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn eigh_real_asc(m: &RMat) -> (Vec<f64>, RMat) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let mut vecs = RMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    let (vals, _) = eigh_desc(m);
    vals.iter().map(|v| v.abs()).sum()
}

/// Partial trace over the second (minor, row-index) tensor factor of an
/// `N^2 x N^2` matrix indexed as `(j, i)` with `j` major.
pub fn partial_trace_2(m: &CMat, n: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    for j1 in 0..n {
        for j2 in 0..n {
            let mut acc = ZERO;
            for i in 0..n {
                acc += m[(j1 * n + i, j2 * n + i)];
            }
            out[(j1, j2)] = acc;
        }
    }
    out
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `x.adjoint() * x` from the identity.
pub fn orthonormality_defect(x: &CMat) -> f64 {
    let g = x.adjoint() * x;
    let k = x.ncols();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - want).norm());
        }
    }
    worst
}

pub fn orthonormality_defect_real(x: &RMat) -> f64 {
    let g = x.transpose() * x;
    let k = x.ncols();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - want).abs());
        }
    }
    worst
}

/// Frobenius distance between two complex matrices.
pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance_real(a: &RMat, b: &RMat) -> f64 {
    (a - b).iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest imaginary part magnitude over all entries.
pub fn max_imag(m: &CMat) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// Drops imaginary parts; callers check [`max_imag`] first.
pub fn to_real(m: &CMat) -> RMat {
    RMat::from_iterator(m.nrows(), m.ncols(), m.iter().map(|z| z.re))
}

pub fn to_complex(m: &RMat) -> CMat {
    CMat::from_iterator(m.nrows(), m.ncols(), m.iter().map(|x| C64::new(*x, 0.0)))
}

/// Stacks real over imaginary parts of a complex vector: `[Re z; Im z]`.
pub fn realify_vec(z: &CVec) -> RVec {
    let n = z.len();
    RVec::from_fn(2 * n, |i, _| if i < n { z[i].re } else { z[i - n].im })
}

/// Inverse of [`realify_vec`].
pub fn complexify_vec(y: &RVec) -> CVec {
    let n = y.len() / 2;
    CVec::from_fn(n, |i, _| C64::new(y[i], y[i + n]))
}

/// Real embedding of a Hermitian matrix: `[[Re A, -Im A], [Im A, Re A]]`.
/// The quadratic form of the embedding on `[Re z; Im z]` equals the
/// Hermitian form of `A` on `z`.
pub fn realify_hermitian(a: &CMat) -> RMat {
    let n = a.nrows();
    let mut out = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = a[(i, j)].re;
            out[(i, j + n)] = -a[(i, j)].im;
            out[(i + n, j)] = a[(i, j)].im;
            out[(i + n, j + n)] = a[(i, j)].re;
        }
    }
    out
}

/// Inverse square root of a Hermitian positive-definite matrix.
pub fn inv_sqrt_hermitian(m: &CMat) -> CMat {
    let (vals, vecs) = eigh_desc(m);
    let n = m.nrows();
    let mut d = CMat::zeros(n, n);
    for (i, v) in vals.iter().enumerate() {
        d[(i, i)] = C64::new(1.0 / v.max(f64::MIN_POSITIVE).sqrt(), 0.0);
    }
    &vecs * d * vecs.adjoint()
}

pub fn inv_sqrt_symmetric_real(m: &RMat) -> RMat {
    let (vals, vecs) = eigh_real_asc(m);
    let n = m.nrows();
    let mut d = RMat::zeros(n, n);
    for (i, v) in vals.iter().enumerate() {
        d[(i, i)] = 1.0 / v.max(f64::MIN_POSITIVE).sqrt();
    }
    &vecs * d * vecs.transpose()
}
