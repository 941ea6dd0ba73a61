//! Exact worst-case precision analysis for the single-item-type
//! approximation to the integer m-dimensional knapsack problem.
//!
//! The approximate solution of max c·x s.t. A·x ≤ b, x ∈ ℤ₊ⁿ is the best
//! feasible point supported on a single column. This crate computes, with
//! exact rational arithmetic throughout:
//!
//! * the integer sequences δ_n, ε_n and the one-dimensional precision
//!   α_1n = δ_n/ε_n ([`sequences`]);
//! * the exact worst-case precision α_mn over all m×n instances and its
//!   sandwich bounds ([`bounds`]);
//! * worst-case block-diagonal instances approaching α_mn ([`worstgen`]);
//! * measured precision of arbitrary instances against an exact
//!   branch-and-bound oracle ([`model`], [`solver`]).
//!
//! The `mdkp` binary exposes all of this on the command line; see [`cli`].

pub mod bounds;
pub mod cli;
pub mod model;
pub mod numeric;
pub mod sequences;
pub mod solver;
pub mod worstgen;

use num_bigint::BigInt;
use serde::Serializer;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket: need f(lo) >= 0 >= f(hi) with lo <= hi")]
    InvalidBracket,

    #[error("not a rational: {0:?} (expected \"p\" or \"p/q\", base 10)")]
    ParseRational(String),

    #[error("ill-posed instance: columns {0:?} have no positive entry but a positive objective coefficient")]
    IllPosed(Vec<usize>),

    #[error("internal consistency violation: {0}")]
    Inconsistent(String),

    #[error("enumeration box of size {size} exceeds cap {cap}")]
    CapExceeded { size: String, cap: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn serialize_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(BigInt::to_string))
}
