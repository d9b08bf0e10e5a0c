//! Finite-horizon constructions around canonical immunity.

pub mod checkers;
pub mod constructions;
pub mod machine;
pub mod mathias;
pub mod numberings;
pub mod report;
pub mod schnorr;
pub mod sets;

pub use sets::{FiniteSet, SetPrefix};

/// Exact measure values.
pub type ExactMeasure = schnorr::DyadicRational;
/// Floating-point measure values, for quick estimates.
pub type FloatMeasure = f64;
