//! Uniform (Haar) sampling of Ginibre matrices, Stiefel frames, density
//! operators, and CPTP maps.
//!
//! Every sampler takes the RNG explicitly; there is no hidden global
//! state. Use [`RngStream`] to derive reproducible, independent streams
//! from a seed.

use crate::linalg::{CMat, RMat, RVec, C64, ONE};
use crate::repr::{DensityOperator, StiefelForm};
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seed plus stream id. The same pair always reproduces the same draws;
/// distinct stream ids give independent streams for the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Scalar field of a sample space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// An orthonormal k-frame in R^n or C^n.
#[derive(Debug, Clone, PartialEq)]
pub enum StiefelPoint {
    Real(RMat),
    Complex(CMat),
}

impl StiefelPoint {
    pub fn n(&self) -> usize {
        match self {
            StiefelPoint::Real(m) => m.nrows(),
            StiefelPoint::Complex(m) => m.nrows(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            StiefelPoint::Real(m) => m.ncols(),
            StiefelPoint::Complex(m) => m.ncols(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            StiefelPoint::Real(_) => Field::Real,
            StiefelPoint::Complex(_) => Field::Complex,
        }
    }

    pub fn orthonormality_defect(&self) -> f64 {
        match self {
            StiefelPoint::Real(m) => crate::linalg::orthonormality_defect_real(m),
            StiefelPoint::Complex(m) => crate::linalg::orthonormality_defect(m),
        }
    }

    /// The frame as a complex matrix (real frames are promoted).
    pub fn to_complex(&self) -> CMat {
        match self {
            StiefelPoint::Real(m) => crate::linalg::to_complex(m),
            StiefelPoint::Complex(m) => m.clone(),
        }
    }
}

/// Matrix with i.i.d. standard normal entries (independently in the real
/// and imaginary parts for the complex field).
pub fn sample_ginibre_real<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> RMat {
    RMat::from_fn(m, n, |_, _| StandardNormal.sample(rng))
}

pub fn sample_ginibre_complex<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> CMat {
    CMat::from_fn(m, n, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// Haar-uniform frame via QR of a Ginibre matrix.
///
/// The raw Householder factor is not Haar distributed; each column of Q
/// is rescaled by the phase of the corresponding diagonal entry of R so
/// that the factor pair is the unique one with positive-diagonal R.
pub fn sample_stiefel_uniform<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    field: Field,
) -> StiefelPoint {
    match field {
        Field::Real => StiefelPoint::Real(sample_stiefel_uniform_real(rng, n, k)),
        Field::Complex => StiefelPoint::Complex(sample_stiefel_uniform_complex(rng, n, k)),
    }
}

pub fn sample_stiefel_uniform_real<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> RMat {
    assert!(k <= n, "need k <= n for a k-frame in R^n");
    let g = sample_ginibre_real(rng, n, k);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

pub fn sample_stiefel_uniform_complex<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMat {
    assert!(k <= n, "need k <= n for a k-frame in C^n");
    let g = sample_ginibre_complex(rng, n, k);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-uniform unitary on C^n.
pub fn sample_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    sample_stiefel_uniform_complex(rng, n, n)
}

/// Uniform point on the (d-1)-simplex: d-1 sorted uniforms plus the 0/1
/// endpoints, returned as consecutive differences.
pub fn sample_simplex_uniform<R: Rng + ?Sized>(rng: &mut R, d: usize) -> RVec {
    assert!(d >= 1);
    let mut cuts: Vec<f64> = (0..d - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = DVector::zeros(d);
    let mut prev = 0.0;
    for (i, c) in cuts.iter().enumerate() {
        out[i] = c - prev;
        prev = *c;
    }
    out[d - 1] = 1.0 - prev;
    out
}

/// Uniform density operator of the requested rank: `rho = K D K^dag`
/// with Haar `K` and a uniform-simplex spectrum on the first `rank`
/// entries.
pub fn sample_density_uniform<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rank: usize,
) -> DensityOperator {
    assert!(rank >= 1 && rank <= n, "need 1 <= rank <= N");
    let k = sample_unitary(rng, n);
    let d = sample_simplex_uniform(rng, rank);
    let mut mat = CMat::zeros(n, n);
    for i in 0..rank {
        let col = k.column(i);
        mat += col * col.adjoint() * C64::new(d[i], 0.0);
    }
    DensityOperator::new_unchecked(mat)
}

/// Uniform CPTP map with the given Kraus rank: a Haar frame on
/// `V_N(C^{kN})` read as stacked Kraus operators. Rank 1 gives Haar
/// unitary channels.
pub fn sample_cptp_uniform<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    kraus_rank: usize,
) -> StiefelForm {
    assert!(kraus_rank >= 1 && kraus_rank <= n * n, "need 1 <= kraus_rank <= N^2");
    let s = sample_stiefel_uniform_complex(rng, kraus_rank * n, n);
    StiefelForm::new_unchecked(n, s)
}
