//! Sums of two squares `A^2 + T B^2` in `F_q[T]`.
//!
//! A monic `f` is such a sum exactly when every inert prime (a monic
//! irreducible `P` with `P(-T^2)` irreducible) divides `f` to even
//! multiplicity. On top of that decision procedure the crate computes exact
//! densities in the hyperoctahedral group `C_2 wr S_n` and the affine group of
//! `F_{p^2}`, and scans short intervals `{f0 + h : deg h <= m}` to compare
//! empirical means against them.

pub mod affine;
pub mod error;
pub mod factor;
pub mod ff;
pub mod hyperoct;
pub mod intervals;
pub mod parallel;
pub mod poly;
pub mod report;
pub mod twosquares;

/// Default cap on the number of objects any exhaustive enumeration may visit.
pub const DEFAULT_MAX_ENUM: u64 = 10_000_000;

pub use error::{Error, Result};
pub use factor::{factor, is_irreducible, FactorConfig, Factorization};
pub use ff::{FieldContext, FieldElement, Fq};
pub use hyperoct::{Partition, Sign, SignedCycleType, SignedPermutation};
pub use intervals::{DensityReport, Interval, ScanConfig, ScanMode};
pub use poly::Polynomial;
pub use twosquares::{is_sum_of_two_squares, Representation};
