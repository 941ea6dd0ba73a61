//! Cross-module property tests: randomized instances checked against the
//! enumeration oracle and the structural lemmas.

use num_bigint::BigInt;
use proptest::prelude::*;

use mdkp_precision::bounds::alpha_mn;
use mdkp_precision::model::{
    combine_block_reports, item_solutions, precision, reduce_columns, split_blocks, validate,
    Instance,
};
use mdkp_precision::numeric::Rational;
use mdkp_precision::solver::{enumerate_bruteforce, solve_exact, SolveLimits, SolveStatus};

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..6, 1i64..4).prop_map(|(p, q)| Rational::new(p, q))
}

/// Small instances whose enumeration boxes stay tiny.
fn instance(m: usize, n: usize) -> impl Strategy<Value = Instance> {
    (
        prop::collection::vec(prop::collection::vec(rational(), n), m),
        prop::collection::vec(rational(), m),
        prop::collection::vec(rational(), n),
    )
        .prop_filter_map("ill-posed", |(a, b, c)| {
            let inst = Instance::new(a, b, c).ok()?;
            validate(&inst).is_well_posed().then_some(inst)
        })
}

fn shapes() -> impl Strategy<Value = Instance> {
    prop_oneof![instance(1, 2), instance(2, 2), instance(2, 3), instance(3, 3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_matches_enumeration(inst in shapes()) {
        let brute = match enumerate_bruteforce(&inst, 50_000) {
            Ok(r) => r,
            Err(_) => return Ok(()), // box too large for the oracle
        };
        let exact = solve_exact(&inst, &SolveLimits::default()).unwrap();
        prop_assert_eq!(exact.status, SolveStatus::ProvenOptimal);
        prop_assert_eq!(&exact.opt_value, &brute.opt_value);
        prop_assert!(inst.is_feasible(&exact.witness));
        prop_assert_eq!(inst.objective(&exact.witness), exact.opt_value);
    }

    #[test]
    fn item_solutions_feasible_and_below_optimum(inst in shapes()) {
        let items = item_solutions(&inst).unwrap();
        for item in &items {
            let mut x = vec![BigInt::from(0); inst.n];
            x[item.j] = item.quantity.clone();
            prop_assert!(inst.is_feasible(&x));
        }
        let exact = solve_exact(&inst, &SolveLimits::default()).unwrap();
        for item in &items {
            prop_assert!(item.value <= exact.opt_value);
        }
    }

    #[test]
    fn precision_respects_universal_lower_bound(inst in shapes()) {
        let exact = solve_exact(&inst, &SolveLimits::default()).unwrap();
        let report = precision(&inst, exact.opt_value, exact.witness).unwrap();
        prop_assert!(report.alpha <= Rational::one());
        prop_assert!(report.alpha.is_positive() || report.opt_value.is_zero());
        let bound = alpha_mn(inst.m as u32, inst.n as u32).unwrap().alpha_mn;
        prop_assert!(report.alpha >= bound);
    }

    #[test]
    fn reduction_preserves_items_and_grows_feasible_set(inst in shapes()) {
        let reduced = reduce_columns(&inst).unwrap();
        prop_assert_eq!(item_solutions(&inst).unwrap(), item_solutions(&reduced).unwrap());
        // every column of the reduced matrix has at most one positive entry
        for j in 0..reduced.n {
            let positives = reduced.a.iter().filter(|row| row[j].is_positive()).count();
            prop_assert!(positives <= 1);
        }
        let before = solve_exact(&inst, &SolveLimits::default()).unwrap();
        let after = solve_exact(&reduced, &SolveLimits::default()).unwrap();
        prop_assert!(after.opt_value >= before.opt_value);
    }

    #[test]
    fn block_solves_combine_to_direct_solve(inst in shapes()) {
        let (structure, subs) = split_blocks(&inst);
        let mut reports = Vec::new();
        for sub in &subs {
            if sub.n == 0 {
                continue;
            }
            let solved = solve_exact(sub, &SolveLimits::default()).unwrap();
            reports.push(precision(sub, solved.opt_value, solved.witness).unwrap());
        }
        prop_assume!(!reports.is_empty());
        let combined = combine_block_reports(&reports).unwrap();

        let direct = solve_exact(&inst, &SolveLimits::default()).unwrap();
        let direct_report = precision(&inst, direct.opt_value, direct.witness).unwrap();
        prop_assert_eq!(&combined.opt_value, &direct_report.opt_value);
        prop_assert_eq!(&combined.approx_value, &direct_report.approx_value);
        prop_assert_eq!(&combined.alpha, &direct_report.alpha);

        // the concatenated witness maps back to a feasible point of the product
        let mut witness = vec![BigInt::from(0); inst.n];
        for (block, report) in structure
            .blocks
            .iter()
            .filter(|b| !b.cols.is_empty())
            .zip(&reports)
        {
            for (&j, v) in block.cols.iter().zip(&report.opt_witness) {
                witness[j] = v.clone();
            }
        }
        prop_assert!(inst.is_feasible(&witness));
        prop_assert_eq!(inst.objective(&witness), combined.opt_value);
    }
}
