//! The integer sequences behind the one-dimensional precision bound and
//! certified rational approximations of the worst-case parameters μ_n.
//!
//! δ_1 = ε_1 = 1, δ_n = δ_{n−1}(δ_{n−1}+1), ε_n = 1 + ε_{n−1}(δ_{n−1}+1);
//! α_1n = δ_n/ε_n. The sequences grow doubly exponentially: δ_12 already has
//! about 10^4 digits, so callers should treat n ≈ 12 as the practical ceiling.
//! μ_n is the unique root in [0, 1) of Σ_{j=1..n} 1/(δ_j + μ) = 1 (for n ≥ 2;
//! μ_1 = 0, see [`mu`]).

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::numeric::{bisect_decreasing, Bracket, Rational};
use crate::Error;

/// One row of the sequence table: n, δ_n, ε_n and α_1n = δ_n/ε_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceRow {
    pub n: u32,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub delta: BigInt,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub epsilon: BigInt,
    pub alpha1: Rational,
}

/// A certified rational bracket around μ_n of width ≤ tol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuBracket {
    pub n: u32,
    pub bracket: Bracket,
    pub tol: Rational,
}

/// Rows 1..max_n computed by the recurrences, exact.
pub fn sequence_table(max_n: u32) -> Vec<SequenceRow> {
    assert!(max_n >= 1, "max_n must be at least 1");
    let mut rows = Vec::with_capacity(max_n as usize);
    let mut delta = BigInt::one();
    let mut epsilon = BigInt::one();
    for n in 1..=max_n {
        if n > 1 {
            let succ = &delta + 1;
            epsilon = 1 + &epsilon * &succ;
            delta = &delta * succ;
        }
        rows.push(SequenceRow {
            n,
            delta: delta.clone(),
            epsilon: epsilon.clone(),
            alpha1: Rational::new(delta.clone(), epsilon.clone()),
        });
    }
    rows
}

/// δ_1..δ_max_n as rationals, a convenience for the μ equation and the
/// worst-case generator.
pub fn deltas(max_n: u32) -> Vec<Rational> {
    sequence_table(max_n)
        .into_iter()
        .map(|row| Rational::from(row.delta))
        .collect()
}

/// α_1n = δ_n/ε_n, exact.
pub fn alpha1(n: u32) -> Rational {
    sequence_table(n).pop().expect("n >= 1").alpha1
}

/// Brackets μ_n, the root of Σ_{j=1..n} 1/(δ_j + μ) = 1 in [0, 1).
///
/// For n = 1 the equation forces μ = 0 and the degenerate bracket [0, 0] is
/// returned exactly. (Some statements of the worst-case family list μ_1 = 1,
/// which contradicts both the defining equation and the range 0 ≤ μ_n < 1;
/// we use the value the equation dictates.)
pub fn mu(n: u32, tol: &Rational) -> Result<MuBracket, Error> {
    assert!(n >= 1, "n must be at least 1");
    if !tol.is_positive() {
        return Err(Error::Domain("mu: tol must be positive".into()));
    }
    if n == 1 {
        return Ok(MuBracket {
            n,
            bracket: Bracket { lo: Rational::zero(), hi: Rational::zero() },
            tol: tol.clone(),
        });
    }
    let ds = deltas(n);
    // f(0) = ε_n/δ_n − 1 > 0 and f(1) < 0 (the shifted sequence δ_j + 1 is
    // Sylvester's, whose reciprocals sum to 1 only in the limit), so [0, 1]
    // is always a valid starting bracket.
    let f = move |x: &Rational| {
        ds.iter().map(|d| (d + x).recip()).sum::<Rational>() - Rational::one()
    };
    let bracket = bisect_decreasing(
        f,
        Bracket { lo: Rational::zero(), hi: Rational::one() },
        tol,
    )?;
    Ok(MuBracket { n, bracket, tol: tol.clone() })
}
