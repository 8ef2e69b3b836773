//! Permutations counted by pairs of congruence classes of the major index
//! and of the major index of the inverse.
//!
//! The crate provides the permutation statistics, the insertion and rotation
//! machinery behind the counting results, constructive bijections with
//! audit traces, exact enumeration, closed forms and generating functions,
//! and a verification harness that checks every identity exhaustively.
//!
//! Counts and polynomial coefficients are generic over any [`Count`]
//! scalar (`u64`, `u128`, [`num_bigint::BigUint`], …); the aliases below fix
//! the common choices.

pub mod bijections;
pub mod enumeration;
pub mod error;
pub mod insertion;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod scalar;
pub mod verify;

pub use bijections::{BijectionTrace, CircularCensus, ClassArray, ClassCell};
pub use enumeration::{CongruenceQuery, MatrixCache, Method, Side, CEILING};
pub use error::{Error, Result};
pub use insertion::InsertionProfile;
pub use matrix::CountMatrix;
pub use perm::{DescentSet, Permutation};
pub use poly::{q_factorial, QPolynomial};
pub use scalar::{factorial, Count};
pub use verify::{Suite, SuiteReport, Verifier};

/// Generating function with 64-bit coefficients (exact through degree 20).
pub type QPoly = QPolynomial<u64>;
/// Generating function with 128-bit coefficients (exact through degree 34).
pub type WideQPoly = QPolynomial<u128>;
/// Generating function with arbitrary-precision coefficients.
pub type BigQPoly = QPolynomial<num_bigint::BigUint>;
/// Joint residue table with 64-bit entries.
pub type Matrix = CountMatrix<u64>;
