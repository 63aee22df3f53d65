//! Random quantum states and CPTP channels drawn from exponential-family
//! distributions on Stiefel manifolds, with a target average state or
//! channel as the sufficient statistic.
//!
//! The crate provides:
//!
//! * [`repr`] — channel representations (Kraus, Choi, Liouvillian, Pauli
//!   transfer / affine, Stiefel, frame) and conversions between them;
//! * [`uniform`] — Haar/uniform sampling of Ginibre matrices, Stiefel
//!   frames, unitaries, density operators, and CPTP maps;
//! * [`expfam`] — von Mises-Fisher, matrix-Bingham, matrix-Fisher,
//!   frame-Bingham and MACG densities, samplers, and moment-matching
//!   natural-parameter estimators;
//! * [`channels`] — distribution wrappers tying the exponential families
//!   to quantum targets, plus named channel constructors;
//! * [`geometry`] — extreme-point classification of qubit channels
//!   (which channels can be an average of a random channel).

pub mod channels;
pub mod expfam;
pub mod geometry;
pub mod json;
pub mod linalg;
pub mod repr;
pub mod stats;
pub mod uniform;

pub use linalg::{CMat, CVec, RMat, RVec, C64};
