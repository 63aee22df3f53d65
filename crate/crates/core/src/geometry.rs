//! Convex-geometry classification of qubit channels: which CPTP maps can
//! be the average of a non-trivial random CPTP map.
//!
//! An extreme point of the CPTP set cannot be a non-trivial average. For
//! qubits the classification used here is:
//!
//! * Kraus rank 1 (unitary): extreme, by the rank-one positivity
//!   argument.
//! * Kraus rank 2 and non-unital: extreme (a rank-two qubit channel is
//!   either unital or extreme).
//! * Kraus rank 2 and unital: unknown (not settled by the rule above).
//! * Full rank 4: relative interior of the CPTP set, hence not extreme.
//! * Rank 3: unknown.

use crate::linalg::{eigh_desc, paulis, vec_col, CMat, C64};
use crate::repr::{choi_to_kraus, is_unital, ChoiMatrix, ReprError, DEFAULT_TOL, RANK_TOL};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("classification only implemented for qubits (N=2), got N={dim}")]
    UnsupportedDimension { dim: usize },
    #[error(transparent)]
    Repr(#[from] ReprError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Extreme,
    NotExtreme,
    Unknown,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Extreme => "extreme",
            Verdict::NotExtreme => "not-extreme",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Which rule produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictReason {
    UnitaryRankOne,
    RankTwoNonUnital,
    RankTwoUnital,
    FullRankInterior,
    RankThreeUnclassified,
}

impl VerdictReason {
    pub fn describe(&self) -> &'static str {
        match self {
            VerdictReason::UnitaryRankOne => "rank-1 Choi: unitary channel, always extreme",
            VerdictReason::RankTwoNonUnital => {
                "rank-2 non-unital: extreme (rank-2 qubit channels are unital or extreme)"
            }
            VerdictReason::RankTwoUnital => "rank-2 unital: not settled by the rank-2 rule",
            VerdictReason::FullRankInterior => {
                "full-rank Choi: relative interior of the CPTP set, not extreme"
            }
            VerdictReason::RankThreeUnclassified => "rank-3: no classification rule applies",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RepresentabilityVerdict {
    pub verdict: Verdict,
    pub reason: VerdictReason,
    pub kraus_rank: usize,
    pub unital: bool,
}

/// Number of Choi eigenvalues above the shared rank threshold
/// `RANK_TOL * N`.
pub fn minimal_kraus_rank(c: &ChoiMatrix) -> usize {
    let threshold = RANK_TOL * c.dim() as f64;
    let (vals, _) = eigh_desc(c.mat());
    vals.iter().filter(|&&v| v > threshold).count()
}

/// Extreme-point classification of a qubit channel.
pub fn classify_extreme_qubit(c: &ChoiMatrix) -> Result<RepresentabilityVerdict, GeometryError> {
    if c.dim() != 2 {
        return Err(GeometryError::UnsupportedDimension { dim: c.dim() });
    }
    let rank = minimal_kraus_rank(c);
    let unital = is_unital(&choi_to_kraus(c)?, DEFAULT_TOL * 10.0);
    let (verdict, reason) = match rank {
        0 | 1 => (Verdict::Extreme, VerdictReason::UnitaryRankOne),
        2 if !unital => (Verdict::Extreme, VerdictReason::RankTwoNonUnital),
        2 => (Verdict::Unknown, VerdictReason::RankTwoUnital),
        4 => (Verdict::NotExtreme, VerdictReason::FullRankInterior),
        _ => (Verdict::Unknown, VerdictReason::RankThreeUnclassified),
    };
    Ok(RepresentabilityVerdict { verdict, reason, kraus_rank: rank, unital })
}

/// One term of a convex decomposition witnessing non-extremality.
#[derive(Debug, Clone)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub choi: ChoiMatrix,
}

/// Whether the channel can be the average of a non-trivial random CPTP
/// map. `Some(true)` comes with a witnessing convex decomposition.
#[derive(Debug, Clone)]
pub enum Representability {
    No(RepresentabilityVerdict),
    Yes { verdict: RepresentabilityVerdict, decomposition: Vec<DecompositionTerm> },
    Unknown(RepresentabilityVerdict),
}

pub fn is_representable_as_average(c: &ChoiMatrix) -> Result<Representability, GeometryError> {
    let verdict = classify_extreme_qubit(c)?;
    Ok(match verdict.verdict {
        Verdict::Extreme => Representability::No(verdict),
        Verdict::Unknown => Representability::Unknown(verdict),
        Verdict::NotExtreme => {
            let decomposition = pauli_mixture(c).unwrap_or_else(|| two_point_witness(c));
            Representability::Yes { verdict, decomposition }
        }
    })
}

/// For channels whose Choi is a mixture of the four Pauli unitaries,
/// returns that mixture.
fn pauli_mixture(c: &ChoiMatrix) -> Option<Vec<DecompositionTerm>> {
    let mut terms = Vec::new();
    let mut recon = CMat::zeros(4, 4);
    for p in paulis().iter() {
        let v = vec_col(p);
        let proj = &v * v.adjoint() * C64::new(0.5, 0.0);
        // weight = <<p|Choi|p>> / <<p|p>>^2, real for Hermitian Choi
        let w = (v.adjoint() * c.mat() * &v)[(0, 0)].re / 4.0;
        if w < -DEFAULT_TOL {
            return None;
        }
        recon += &proj * C64::new(2.0 * w, 0.0);
        terms.push(DecompositionTerm {
            weight: w,
            choi: ChoiMatrix::new_unchecked(&proj * C64::new(2.0, 0.0)),
        });
    }
    if crate::linalg::frobenius_distance(&recon, c.mat()) < 1e-10 {
        Some(terms)
    } else {
        None
    }
}

/// Generic witness for a full-rank Choi: a symmetric two-point split
/// `Choi = (Choi + D)/2 + (Choi - D)/2` along a trace-preserving
/// direction small enough to stay positive.
fn two_point_witness(c: &ChoiMatrix) -> Vec<DecompositionTerm> {
    // direction: difference of the identity and sigma_z unitary Chois,
    // which has vanishing partial trace
    let id = vec_col(&paulis()[0]);
    let z = vec_col(&paulis()[3]);
    let d = (&id * id.adjoint() - &z * z.adjoint()) * C64::new(0.5, 0.0);
    let (vals, _) = eigh_desc(c.mat());
    let min_eig = vals.last().copied().unwrap_or(0.0);
    let (dvals, _) = eigh_desc(&d);
    let dnorm = dvals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eta = 0.5 * min_eig / dnorm;
    let plus = c.mat() + &d * C64::new(eta, 0.0);
    let minus = c.mat() - &d * C64::new(eta, 0.0);
    vec![
        DecompositionTerm { weight: 0.5, choi: ChoiMatrix::new_unchecked(plus) },
        DecompositionTerm { weight: 0.5, choi: ChoiMatrix::new_unchecked(minus) },
    ]
}
