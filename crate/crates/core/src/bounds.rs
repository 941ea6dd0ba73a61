//! The exact worst-case precision α_mn of the single-item-type approximation,
//! together with its sandwich bounds and asymptotic reference value.

use serde::Serialize;

use crate::numeric::Rational;
use crate::sequences::sequence_table;
use crate::Error;

/// Reference decimal for the limit of α_1n as n grows; the sequence is
/// stationary at this 15-digit rendering from n = 7 on.
pub const ALPHA_1_INF_DECIMAL: &str = "0.591355492056890";

/// α_mn with the quantities entering its formula.
///
/// With q = ⌊n/m⌋ and r = n − qm, the bound is
/// α_mn = α_1q / (m + r(α_1q/α_{1,q+1} − 1)), and the sandwich
/// α_{1,⌈n/m⌉}/m ≤ α_mn ≤ α_{1,⌊n/m⌋}/m always holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundBreakdown {
    pub m: u32,
    pub n: u32,
    pub q: u32,
    pub r: u32,
    pub alpha_mn: Rational,
    pub sandwich_lo: Rational,
    pub sandwich_hi: Rational,
}

/// Evaluates α_mn exactly. Requires n ≥ m (so q ≥ 1); the bound is not
/// defined for n < m.
///
/// The value is computed by two independent algebraic routes and the results
/// are compared exactly; a mismatch would indicate a bug and is a hard error.
pub fn alpha_mn(m: u32, n: u32) -> Result<BoundBreakdown, Error> {
    if m < 1 || n < 1 {
        return Err(Error::Domain("alpha_mn: m and n must be positive".into()));
    }
    if n < m {
        return Err(Error::Domain(format!(
            "alpha_mn: undefined for n < m (got m={m}, n={n})"
        )));
    }
    let q = n / m;
    let r = n - q * m;

    let rows = sequence_table(q + 1);
    let alpha_q = rows[(q - 1) as usize].alpha1.clone();
    let alpha_q1 = rows[q as usize].alpha1.clone();

    let m_rat = Rational::from(m as i64);
    let r_rat = Rational::from(r as i64);

    let direct = &alpha_q / (&m_rat + &r_rat * (&alpha_q / &alpha_q1 - Rational::one()));
    let aggregated =
        (&r_rat / &alpha_q1 + (&m_rat - &r_rat) / &alpha_q).recip();
    if direct != aggregated {
        return Err(Error::Inconsistent(format!(
            "alpha_mn({m},{n}): algebraic forms disagree: {direct} vs {aggregated}"
        )));
    }

    let ceil_nm = if r == 0 { q } else { q + 1 };
    let sandwich_lo = rows[(ceil_nm - 1) as usize].alpha1.clone() / &m_rat;
    let sandwich_hi = &alpha_q / &m_rat;

    Ok(BoundBreakdown {
        m,
        n,
        q,
        r,
        alpha_mn: direct,
        sandwich_lo,
        sandwich_hi,
    })
}

/// Decimal rendering of the asymptotic limit α_1∞/m, truncated to `digits`.
/// The stored constant is known to 15 digits, so `digits` may not exceed 15.
pub fn asymptotic_reference(m: u32, digits: u32) -> Result<String, Error> {
    if m < 1 || digits < 1 {
        return Err(Error::Domain(
            "asymptotic_reference: m and digits must be positive".into(),
        ));
    }
    if digits > 15 {
        return Err(Error::Domain(
            "asymptotic_reference: the limit constant is known to 15 digits only".into(),
        ));
    }
    let alpha_inf = Rational::new(591355492056890i64, 10i64.pow(15));
    Ok((alpha_inf / Rational::from(m as i64)).to_decimal_trunc(digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_to_one_dimensional() {
        assert_eq!(alpha_mn(1, 3).unwrap().alpha_mn, Rational::new(3, 5));
        assert_eq!(alpha_mn(1, 2).unwrap().alpha_mn, Rational::new(2, 3));
    }

    #[test]
    fn square_case_is_one_over_m() {
        for m in 1..=6 {
            let b = alpha_mn(m, m).unwrap();
            assert_eq!(b.alpha_mn, Rational::new(1, m as i64));
            assert_eq!(b.q, 1);
            assert_eq!(b.r, 0);
        }
    }

    #[test]
    fn two_by_five() {
        // q = 2, r = 1; 1/(1/α_13 + 1/α_12) = 1/(5/3 + 3/2) = 6/19
        let b = alpha_mn(2, 5).unwrap();
        assert_eq!(b.alpha_mn, Rational::new(6, 19));
    }

    #[test]
    fn rejects_n_below_m() {
        assert!(alpha_mn(3, 2).is_err());
        assert!(alpha_mn(1, 0).is_err());
    }

    #[test]
    fn monotone_in_n_and_sandwiched() {
        // The sequences grow doubly exponentially; keep the unit grid at
        // q <= 11 and leave the wide sweep to the acceptance suite.
        for m in 1..=10u32 {
            let mut prev: Option<Rational> = None;
            for n in m..=40.min(11 * m) {
                let b = alpha_mn(m, n).unwrap();
                assert!(b.sandwich_lo <= b.alpha_mn, "({m},{n}) lower sandwich");
                assert!(b.alpha_mn <= b.sandwich_hi, "({m},{n}) upper sandwich");
                if b.r == 0 {
                    assert_eq!(b.alpha_mn, b.sandwich_hi);
                }
                if let Some(p) = prev {
                    assert!(b.alpha_mn <= p, "({m},{n}) monotonicity");
                }
                prev = Some(b.alpha_mn);
            }
        }
    }

    #[test]
    fn asymptotic_values() {
        assert_eq!(asymptotic_reference(1, 15).unwrap(), ALPHA_1_INF_DECIMAL);
        assert_eq!(asymptotic_reference(2, 5).unwrap(), "0.29567");
        assert!(asymptotic_reference(1, 16).is_err());
    }
}
