//! Generator for the block-diagonal instances on which the precision bound
//! α_mn is attained (up to the tolerance of the μ approximation).
//!
//! A size-k block has objective coefficients 1/δ_j, a single constraint with
//! weights 1/(δ_j + μ̂) and capacity 1, where μ̂ is the upper endpoint of a
//! certified bracket around μ_k. The upper endpoint keeps the all-ones point
//! feasible, so the block optimum is ε_k/δ_k while every single-item value
//! is exactly 1.

use serde::Serialize;

use crate::bounds::alpha_mn;
use crate::model::Instance;
use crate::numeric::Rational;
use crate::sequences::{deltas, mu, MuBracket};
use crate::Error;

/// Blueprint of a generated worst-case instance: block sizes, the μ brackets
/// used, and the bound the instance is expected to approach.
#[derive(Clone, Debug, Serialize)]
pub struct WorstCaseSpec {
    pub m: u32,
    pub n: u32,
    pub q: u32,
    pub r: u32,
    pub tol: Rational,
    pub block_sizes: Vec<u32>,
    pub mu_brackets: Vec<MuBracket>,
    pub expected_alpha: Rational,
    /// exact per-block optimum ε_k/δ_k, in block order
    pub expected_block_opt: Vec<Rational>,
}

/// One worst-case block: a single-row instance with k items.
///
/// `tol` must lie in (0, 1); a tolerance of 1 or more could push μ̂ to 1,
/// where the single-item quantities ⌊δ_j + μ̂⌋ stop being δ_j.
pub fn worst_block(k: u32, tol: &Rational) -> Result<Instance, Error> {
    if !tol.is_positive() || tol >= &Rational::one() {
        return Err(Error::Domain("worst_block: tol must be in (0, 1)".into()));
    }
    let mu_hat = mu(k, tol)?.bracket.hi;
    let ds = deltas(k);
    let weights: Vec<Rational> = ds.iter().map(|d| (d + &mu_hat).recip()).collect();
    let costs: Vec<Rational> = ds.iter().map(Rational::recip).collect();
    Instance::new(vec![weights], vec![Rational::one()], costs)
}

/// Assembles the full worst-case instance for (m, n): r blocks of size q+1
/// followed by m−r blocks of size q, block-diagonal.
pub fn generate(m: u32, n: u32, tol: &Rational) -> Result<(Instance, WorstCaseSpec), Error> {
    let breakdown = alpha_mn(m, n)?; // also rejects n < m
    let (q, r) = (breakdown.q, breakdown.r);

    let mut block_sizes = Vec::with_capacity(m as usize);
    block_sizes.extend(std::iter::repeat_n(q + 1, r as usize));
    block_sizes.extend(std::iter::repeat_n(q, (m - r) as usize));

    let mut mu_brackets = vec![mu(q, tol)?];
    if r > 0 {
        mu_brackets.insert(0, mu(q + 1, tol)?);
    }

    let blocks: Vec<Instance> = block_sizes
        .iter()
        .map(|&k| worst_block(k, tol))
        .collect::<Result<_, _>>()?;

    let n_usize = n as usize;
    let mut a = vec![vec![Rational::zero(); n_usize]; m as usize];
    let mut c = vec![Rational::zero(); n_usize];
    let mut offset = 0;
    for (i, block) in blocks.iter().enumerate() {
        for (dj, weight) in block.a[0].iter().enumerate() {
            a[i][offset + dj] = weight.clone();
        }
        for (dj, cost) in block.c.iter().enumerate() {
            c[offset + dj] = cost.clone();
        }
        offset += block.n;
    }
    let b = vec![Rational::one(); m as usize];

    let expected_block_opt: Vec<Rational> = block_sizes
        .iter()
        .map(|&k| crate::sequences::alpha1(k).recip())
        .collect();

    let spec = WorstCaseSpec {
        m,
        n,
        q,
        r,
        tol: tol.clone(),
        block_sizes,
        mu_brackets,
        expected_alpha: breakdown.alpha_mn,
        expected_block_opt,
    };
    let mut instance = Instance::new(a, b, c)?;
    instance.meta = Some(serde_json::to_value(&spec)?);
    Ok((instance, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{approx_value, item_solutions, precision, split_blocks};
    use crate::solver::{solve_exact, SolveLimits, SolveStatus};
    use num_bigint::BigInt;

    fn tol9() -> Rational {
        Rational::pow10_neg(9)
    }

    #[test]
    fn block_k1_is_trivial() {
        let b = worst_block(1, &tol9()).unwrap();
        assert_eq!(b.a, vec![vec![Rational::one()]]);
        let res = solve_exact(&b, &SolveLimits::default()).unwrap();
        assert_eq!(res.opt_value, Rational::one());
        let rep = precision(&b, res.opt_value, res.witness).unwrap();
        assert_eq!(rep.alpha, Rational::one());
    }

    #[test]
    fn block_k2_matches_known_values() {
        let b = worst_block(2, &tol9()).unwrap();
        // each single-item point has value exactly 1
        let items = item_solutions(&b).unwrap();
        assert_eq!(items[0].quantity, BigInt::from(1));
        assert_eq!(items[1].quantity, BigInt::from(2));
        for it in &items {
            assert_eq!(it.value, Rational::one());
        }
        let res = solve_exact(&b, &SolveLimits::default()).unwrap();
        assert_eq!(res.opt_value, Rational::new(3, 2));
        assert_eq!(res.witness, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn block_rejects_bad_tol() {
        assert!(worst_block(2, &Rational::one()).is_err());
        assert!(worst_block(2, &Rational::zero()).is_err());
    }

    #[test]
    fn all_ones_feasible_and_approx_is_one() {
        for (m, n) in [(1, 2), (2, 4), (2, 5), (3, 7)] {
            let (inst, _) = generate(m, n, &tol9()).unwrap();
            let ones = vec![BigInt::from(1); inst.n];
            assert!(inst.is_feasible(&ones), "({m},{n}) all-ones infeasible");
            let (value, index) = approx_value(&inst).unwrap();
            assert_eq!(value, Rational::one());
            assert_eq!(index, 0);
        }
    }

    #[test]
    fn generate_2_5_structure() {
        let (inst, spec) = generate(2, 5, &tol9()).unwrap();
        assert_eq!(spec.block_sizes, vec![3, 2]);
        assert_eq!(spec.expected_alpha, Rational::new(6, 19));
        let (structure, _) = split_blocks(&inst);
        assert_eq!(structure.sizes(), vec![3, 2]);

        let res = solve_exact(&inst, &SolveLimits::default()).unwrap();
        assert_eq!(res.status, SolveStatus::ProvenOptimal);
        let rep = precision(&inst, res.opt_value, res.witness).unwrap();
        assert_eq!(rep.alpha, Rational::new(6, 19));
    }

    #[test]
    fn generate_rejects_n_below_m() {
        assert!(generate(3, 2, &tol9()).is_err());
    }
}
