//! Exact rational arithmetic and a certified bisection routine.
//!
//! All scalar quantities in this crate are [`Rational`]: exact fractions of
//! arbitrary-precision integers in canonical form (reduced, denominator
//! positive, sign on the numerator). No rounding ever happens inside the
//! core; decimal strings exist only at the display boundary.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// An exact rational number with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(BigRational);

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    // cross-multiplication: denominators are canonical-positive. The
    // underlying Ratio::cmp recurses per continued-fraction term, which
    // overflows small thread stacks on multi-thousand-digit operands.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.numer() * other.denom()).cmp(&(other.numer() * self.denom()))
    }
}

impl Rational {
    /// Builds `p/q` in canonical form. Panics if `q == 0`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_integer(p: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(p.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `10^-k` as an exact rational, convenient for tolerances.
    pub fn pow10_neg(k: u32) -> Self {
        Rational::new(1, BigInt::from(10u32).pow(k))
    }

    /// Decimal string with exactly `digits` places after the point,
    /// rounded half away from zero.
    pub fn to_decimal_round(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        // round(p/q * 10^d) = floor((2*|p|*10^d + q) / (2q)), sign restored after
        let p = self.numer().magnitude() * scale.magnitude();
        let q = self.denom().magnitude();
        let scaled = (BigUint::from(2u32) * p + q) / (BigUint::from(2u32) * q);
        format_scaled(self.is_negative(), scaled, digits)
    }

    /// Decimal string with exactly `digits` places, truncated toward zero.
    pub fn to_decimal_trunc(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (self.numer().magnitude() * scale.magnitude()) / self.denom().magnitude();
        format_scaled(self.is_negative(), scaled, digits)
    }
}

fn format_scaled(negative: bool, scaled: BigUint, digits: u32) -> String {
    let mut s = scaled.to_string();
    let digits = digits as usize;
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits - s.len() + 1), s);
    }
    if digits > 0 {
        s.insert(s.len() - digits, '.');
    }
    if negative && s.bytes().any(|b| b.is_ascii_digit() && b != b'0') {
        s.insert(0, '-');
    }
    s
}

/// Exact `⌊b/a⌋` for rational `b ≥ 0`, `a > 0`.
pub fn floor_ratio(b: &Rational, a: &Rational) -> Result<BigInt, Error> {
    if !a.is_positive() {
        return Err(Error::Domain("floor_ratio: divisor must be positive".into()));
    }
    if b.is_negative() {
        return Err(Error::Domain("floor_ratio: dividend must be nonnegative".into()));
    }
    Ok((b / a).floor())
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
    // "p" when the denominator is 1, "p/q" otherwise
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Strict parse of `"p"` or `"p/q"`, base 10, optional leading `-` on the
    /// numerator only. Decimals, whitespace and signs on the denominator are
    /// rejected.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseRational(s.to_string());
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let unsigned = num_str.strip_prefix('-').unwrap_or(num_str);
        if !digits(unsigned) {
            return Err(bad());
        }
        let p = BigInt::from_str(num_str).map_err(|_| bad())?;
        let q = match den_str {
            Some(d) => {
                if !digits(d) {
                    return Err(bad());
                }
                let q = BigInt::from_str(d).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                q
            }
            None => BigInt::one(),
        };
        Ok(Rational::new(p, q))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rational interval on which a decreasing function changes sign:
/// `f(lo) ≥ 0 ≥ f(hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from(2)
    }
}

/// Shrinks a sign-change bracket of a decreasing function `f` to width `≤ tol`
/// by midpoint bisection with exact sign tests.
///
/// Requires `f(bracket0.lo) ≥ 0 ≥ f(bracket0.hi)` and `tol > 0`; both are
/// checked. Every returned bracket satisfies the same sign condition.
pub fn bisect_decreasing(
    f: impl Fn(&Rational) -> Rational,
    bracket0: Bracket,
    tol: &Rational,
) -> Result<Bracket, Error> {
    if !tol.is_positive() {
        return Err(Error::Domain("bisect_decreasing: tol must be positive".into()));
    }
    if bracket0.lo > bracket0.hi {
        return Err(Error::InvalidBracket);
    }
    if f(&bracket0.lo).is_negative() || f(&bracket0.hi).is_positive() {
        return Err(Error::InvalidBracket);
    }
    let mut bracket = bracket0;
    while &bracket.width() > tol {
        let mid = bracket.midpoint();
        if f(&mid).is_negative() {
            bracket.hi = mid;
        } else {
            bracket.lo = mid;
        }
    }
    Ok(bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn floor_ratio_examples() {
        assert_eq!(
            floor_ratio(&Rational::from(7), &Rational::from(2)).unwrap(),
            BigInt::from(3)
        );
        // 5/2 over 1/3 = 15/2 = 7.5; check 7*(1/3) <= 5/2 < 8*(1/3)
        assert_eq!(floor_ratio(&r(5, 2), &r(1, 3)).unwrap(), BigInt::from(7));
        assert!(r(7, 1) * r(1, 3) <= r(5, 2));
        assert!(r(5, 2) < r(8, 1) * r(1, 3));
        assert_eq!(
            floor_ratio(&Rational::zero(), &Rational::from(5)).unwrap(),
            BigInt::from(0)
        );
        assert!(floor_ratio(&Rational::from(1), &Rational::zero()).is_err());
        assert!(floor_ratio(&Rational::from(1), &r(-1, 2)).is_err());
    }

    #[test]
    fn bisect_linear_root() {
        let tol = r(1, 1024);
        let b = bisect_decreasing(
            |x| Rational::one() - x,
            Bracket { lo: Rational::zero(), hi: Rational::from(2) },
            &tol,
        )
        .unwrap();
        assert!(b.width() <= tol);
        assert!(b.lo <= Rational::one() && Rational::one() <= b.hi);
    }

    #[test]
    fn bisect_golden_ratio_equation() {
        // 1/(1+x) + 1/(2+x) - 1 has its root at (sqrt(5)-1)/2
        let f = |x: &Rational| {
            (Rational::one() + x).recip() + (Rational::from(2) + x).recip() - Rational::one()
        };
        let tol = Rational::pow10_neg(12);
        let b = bisect_decreasing(
            f,
            Bracket { lo: Rational::zero(), hi: Rational::one() },
            &tol,
        )
        .unwrap();
        assert!(b.width() <= tol);
        // both endpoints must straddle the algebraic root: x^2 + x - 1 = 0
        let poly = |x: &Rational| x * x + x - Rational::one();
        assert!(!poly(&b.lo).is_positive());
        assert!(!poly(&b.hi).is_negative());
        assert!(b.lo.to_decimal_trunc(5).starts_with("0.61803"));
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        let res = bisect_decreasing(
            |x| -x.clone(),
            Bracket { lo: Rational::one(), hi: Rational::from(2) },
            &r(1, 8),
        );
        assert!(matches!(res, Err(Error::InvalidBracket)));
    }

    #[test]
    fn parse_strict() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), r(3, 4));
        assert_eq!("-6/8".parse::<Rational>().unwrap(), r(-3, 4));
        assert_eq!("5".parse::<Rational>().unwrap(), Rational::from(5));
        for bad in ["1.5", " 1/2", "1/2 ", "1/-2", "1/0", "", "/2", "3/", "+1", "0x2"] {
            assert!(bad.parse::<Rational>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r(2, 3).to_decimal_round(15), "0.666666666666667");
        assert_eq!(r(2, 3).to_decimal_trunc(15), "0.666666666666666");
        assert_eq!(Rational::one().to_decimal_round(15), "1.000000000000000");
        assert_eq!(r(-1, 3).to_decimal_round(3), "-0.333");
        assert_eq!(r(1, 200000).to_decimal_round(3), "0.000");
        assert_eq!(r(1999, 1000).to_decimal_round(2), "2.00");
    }

    proptest! {
        #[test]
        fn canonical_form_scale_invariant(p in -1000i64..1000, q in 1i64..1000, k in 1i64..1000) {
            prop_assert_eq!(Rational::new(p * k, q * k), Rational::new(p, q));
        }

        #[test]
        fn floor_ratio_defining_inequality(bp in 0i64..500, bq in 1i64..20, ap in 1i64..50, aq in 1i64..20) {
            let b = Rational::new(bp, bq);
            let a = Rational::new(ap, aq);
            let k = floor_ratio(&b, &a).unwrap();
            let k = Rational::from_integer(k);
            prop_assert!(&k * &a <= b);
            prop_assert!(b < (k + Rational::one()) * a);
        }
    }
}
