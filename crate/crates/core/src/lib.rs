//! Exact combinatorics and congruence verification.
//!
//! The crate computes unsigned Stirling numbers of both kinds, Eulerian
//! numbers and p-adic valuations with arbitrary-precision integers, evaluates
//! residue-class filtered sums directly (no roots of unity), and checks
//! Fleck/Weisman/Davis–Sun type lower bounds on their p-adic orders over
//! exhaustive parameter grids.
//!
//! Every numeric module is generic over a [`Scalar`] integer ring so the same
//! code runs on machine integers (`i64`, `i128`) for fast small cases and on
//! [`ExactInt`] for everything that feeds a verdict. The aliases below fix the
//! exact instantiation used by the verifier and the CLI.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod filtered_sums;
pub mod identities;
pub mod report;
pub mod scalar;
pub mod triangles;
pub mod verifier;

pub use error::{Error, Result};
pub use exactmath::{IntPolynomial, PAdicOrder};
pub use filtered_sums::ResidueClass;
pub use scalar::Scalar;
pub use triangles::{Family, Tables, Triangle};

/// Arbitrary-precision signed integer used for every verified quantity.
pub type ExactInt = num_bigint::BigInt;

/// Integer polynomial over [`ExactInt`].
pub type Poly = IntPolynomial<ExactInt>;

/// Exact triangle of one number family.
pub type ExactTriangle = Triangle<ExactInt>;

/// The three exact triangles the sums draw on.
pub type ExactTables = Tables<ExactInt>;

/// Version string embedded in reports and cache headers.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
