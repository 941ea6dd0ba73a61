//! Exact optimization oracle for desk-scale instances: depth-first
//! branch-and-bound with an admissible single-row fractional relaxation
//! bound, plus an exhaustive enumeration used as an independent oracle in
//! tests.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::model::{item_solutions, split_blocks, validate, Instance};
use crate::numeric::{floor_ratio, Rational};
use crate::Error;

/// Resource limits for a single exact solve.
#[derive(Clone, Debug)]
pub struct SolveLimits {
    pub node_budget: u64,
    pub block_decompose: bool,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { node_budget: 10_000_000, block_decompose: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    ProvenOptimal,
    BudgetExceeded,
}

/// Result of an exact solve. The witness is feasible in all cases; the value
/// is the true optimum only when the status is `ProvenOptimal`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveResult {
    pub opt_value: Rational,
    #[serde(serialize_with = "crate::serialize_bigint_vec")]
    pub witness: Vec<BigInt>,
    pub nodes_used: u64,
    pub status: SolveStatus,
}

struct Search<'a> {
    instance: &'a Instance,
    /// variables in branching order
    order: Vec<usize>,
    /// global per-variable boxes (single-item quantities)
    boxes: Vec<BigInt>,
    best_value: Rational,
    best_point: Vec<BigInt>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Search<'a> {
    /// Admissible upper bound for the variables `order[depth..]` under the
    /// residual capacities: the minimum over rows of the single-row
    /// fractional knapsack relaxation (items capped by their global boxes).
    fn upper_bound(&self, depth: usize, residual: &[Rational]) -> Rational {
        let rest = &self.order[depth..];
        let mut best: Option<Rational> = None;
        for (i, cap) in residual.iter().enumerate() {
            // sort remaining items by density c_j/a_ij, free items first
            let mut items: Vec<usize> = rest.to_vec();
            items.sort_by(|&x, &y| {
                let ax = &self.instance.a[i][x];
                let ay = &self.instance.a[i][y];
                match (ax.is_zero(), ay.is_zero()) {
                    (true, true) => std::cmp::Ordering::Equal,
                    (true, false) => std::cmp::Ordering::Less,
                    (false, true) => std::cmp::Ordering::Greater,
                    (false, false) => {
                        // c_x/a_x vs c_y/a_y without division
                        let lhs = &self.instance.c[x] * ay;
                        let rhs = &self.instance.c[y] * ax;
                        rhs.cmp(&lhs)
                    }
                }
            });
            let mut room = cap.clone();
            let mut value = Rational::zero();
            for &j in &items {
                let aij = &self.instance.a[i][j];
                let cj = &self.instance.c[j];
                if aij.is_zero() {
                    value = value + cj * &Rational::from(self.boxes[j].clone());
                    continue;
                }
                if !room.is_positive() {
                    break;
                }
                let full = aij * &Rational::from(self.boxes[j].clone());
                if full <= room {
                    room = room - &full;
                    value = value + cj * &Rational::from(self.boxes[j].clone());
                } else {
                    value = value + cj * &(&room / aij);
                    room = Rational::zero();
                }
            }
            best = Some(match best {
                Some(b) => b.min(value),
                None => value,
            });
        }
        best.unwrap_or_else(Rational::zero)
    }

    fn dfs(&mut self, depth: usize, residual: &mut Vec<Rational>, value: Rational, x: &mut Vec<BigInt>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if value > self.best_value {
            self.best_value = value.clone();
            self.best_point = x.clone();
        }
        if depth == self.order.len() {
            return;
        }
        let bound = &value + &self.upper_bound(depth, residual);
        if bound <= self.best_value {
            return;
        }
        let j = self.order[depth];
        // max quantity of variable j under the residual capacities
        let mut max_q: Option<BigInt> = None;
        for (i, cap) in residual.iter().enumerate() {
            if self.instance.a[i][j].is_positive() {
                let q = floor_ratio(cap, &self.instance.a[i][j]).expect("residual stays nonnegative");
                max_q = Some(match max_q {
                    Some(prev) => prev.min(q),
                    None => q,
                });
            }
        }
        let max_q = max_q.unwrap_or_else(BigInt::zero); // degenerate column
        let mut q = max_q;
        loop {
            let q_rat = Rational::from(q.clone());
            let saved: Vec<Rational> = residual.clone();
            for (i, cap) in residual.iter_mut().enumerate() {
                *cap = &*cap - &(&self.instance.a[i][j] * &q_rat);
            }
            x[j] = q.clone();
            let child_value = &value + &(&self.instance.c[j] * &q_rat);
            self.dfs(depth + 1, residual, child_value, x);
            x[j] = BigInt::zero();
            *residual = saved;
            if self.exhausted || q.is_zero() {
                break;
            }
            q -= 1;
        }
    }
}

fn solve_block(instance: &Instance, budget: u64) -> Result<SolveResult, Error> {
    let items = item_solutions(instance)?;
    let boxes: Vec<BigInt> = items.iter().map(|it| it.quantity.clone()).collect();
    // branch on the densest variables first: sort by best single-item value,
    // which rewards taking profitable items greedily and tightens the
    // incumbent early
    let mut order: Vec<usize> = (0..instance.n).collect();
    order.sort_by(|&x, &y| items[y].value.cmp(&items[x].value));
    let mut search = Search {
        instance,
        order,
        boxes,
        best_value: Rational::zero(),
        best_point: vec![BigInt::zero(); instance.n],
        nodes: 0,
        budget,
        exhausted: false,
    };
    let mut residual = instance.b.clone();
    let mut x = vec![BigInt::zero(); instance.n];
    search.dfs(0, &mut residual, Rational::zero(), &mut x);
    let status = if search.exhausted {
        SolveStatus::BudgetExceeded
    } else {
        SolveStatus::ProvenOptimal
    };
    debug_assert!(instance.is_feasible(&search.best_point));
    debug_assert_eq!(instance.objective(&search.best_point), search.best_value);
    Ok(SolveResult {
        opt_value: search.best_value,
        witness: search.best_point,
        nodes_used: search.nodes,
        status,
    })
}

/// Exact optimum by depth-first branch and bound. With `block_decompose`
/// the instance is first split into the connected blocks of its support
/// graph and the blocks are solved independently; the budget is shared.
pub fn solve_exact(instance: &Instance, limits: &SolveLimits) -> Result<SolveResult, Error> {
    instance.check_shape()?;
    let validation = validate(instance);
    if !validation.is_solvable() {
        return Err(Error::IllPosed(validation.unbounded_columns));
    }
    if !limits.block_decompose {
        return solve_block(instance, limits.node_budget);
    }
    let (structure, subs) = split_blocks(instance);
    let mut opt_value = Rational::zero();
    let mut witness = vec![BigInt::zero(); instance.n];
    let mut nodes_used = 0u64;
    let mut status = SolveStatus::ProvenOptimal;
    for (block, sub) in structure.blocks.iter().zip(&subs) {
        if sub.n == 0 {
            continue; // row-only block contributes nothing
        }
        let remaining = limits.node_budget.saturating_sub(nodes_used).max(1);
        let result = solve_block(sub, remaining)?;
        nodes_used += result.nodes_used;
        opt_value = opt_value + &result.opt_value;
        for (&j, v) in block.cols.iter().zip(&result.witness) {
            witness[j] = v.clone();
        }
        if result.status == SolveStatus::BudgetExceeded {
            status = SolveStatus::BudgetExceeded;
        }
    }
    Ok(SolveResult { opt_value, witness, nodes_used, status })
}

/// Exhaustive enumeration of the box ∏ [0, v_j] filtered by feasibility.
/// Refuses when the box holds more than `cap` points. Independent of the
/// branch-and-bound path; used as its oracle.
pub fn enumerate_bruteforce(instance: &Instance, cap: u64) -> Result<SolveResult, Error> {
    instance.check_shape()?;
    let validation = validate(instance);
    if !validation.is_solvable() {
        return Err(Error::IllPosed(validation.unbounded_columns));
    }
    let items = item_solutions(instance)?;
    let mut size = BigInt::one();
    for it in &items {
        size *= &it.quantity + 1;
    }
    if size.to_u64().is_none_or(|s| s > cap) {
        return Err(Error::CapExceeded { size: size.to_string(), cap });
    }
    let boxes: Vec<BigInt> = items.into_iter().map(|it| it.quantity).collect();
    let mut best_value = Rational::zero();
    let mut best_point = vec![BigInt::zero(); instance.n];
    let mut x = vec![BigInt::zero(); instance.n];
    let mut count = 0u64;
    // odometer over the box; feasibility and value checked from scratch per
    // point, which is fine at the enforced cap
    loop {
        count += 1;
        if instance.is_feasible(&x) {
            let value = instance.objective(&x);
            if value > best_value {
                best_value = value;
                best_point = x.clone();
            }
        }
        let mut pos = 0;
        loop {
            if pos == instance.n {
                return Ok(SolveResult {
                    opt_value: best_value,
                    witness: best_point,
                    nodes_used: count,
                    status: SolveStatus::ProvenOptimal,
                });
            }
            if x[pos] < boxes[pos] {
                x[pos] += 1;
                break;
            }
            x[pos] = BigInt::zero();
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(v: i64) -> Rational {
        Rational::from(v)
    }

    fn inst(a: Vec<Vec<i64>>, b: Vec<i64>, c: Vec<i64>) -> Instance {
        Instance::new(
            a.into_iter().map(|row| row.into_iter().map(ri).collect()).collect(),
            b.into_iter().map(ri).collect(),
            c.into_iter().map(ri).collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_objective() {
        let i = inst(vec![vec![1, 1]], vec![3], vec![0, 0]);
        let res = solve_exact(&i, &SolveLimits::default()).unwrap();
        assert_eq!(res.opt_value, Rational::zero());
        assert_eq!(res.status, SolveStatus::ProvenOptimal);
    }

    #[test]
    fn small_enumeration_example() {
        let i = inst(vec![vec![1, 1]], vec![3], vec![2, 3]);
        let res = solve_exact(&i, &SolveLimits::default()).unwrap();
        assert_eq!(res.opt_value, ri(9));
        assert_eq!(res.witness, vec![BigInt::zero(), BigInt::from(3)]);

        let brute = enumerate_bruteforce(&i, 100).unwrap();
        assert_eq!(brute.opt_value, ri(9));
    }

    #[test]
    fn bruteforce_refuses_large_box() {
        let i = inst(vec![vec![1, 1]], vec![1000], vec![1, 1]);
        assert!(matches!(
            enumerate_bruteforce(&i, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let i = inst(
            vec![vec![1, 1, 1], vec![1, 2, 3]],
            vec![30, 60],
            vec![3, 5, 7],
        );
        let res = solve_exact(&i, &SolveLimits { node_budget: 3, block_decompose: false }).unwrap();
        assert_eq!(res.status, SolveStatus::BudgetExceeded);
        assert!(i.is_feasible(&res.witness));
    }

    #[test]
    fn decompose_matches_monolithic() {
        let i = inst(
            vec![vec![2, 3, 0, 0], vec![0, 0, 1, 4]],
            vec![7, 9],
            vec![3, 5, 2, 7],
        );
        let on = solve_exact(&i, &SolveLimits::default()).unwrap();
        let off =
            solve_exact(&i, &SolveLimits { node_budget: 10_000_000, block_decompose: false })
                .unwrap();
        assert_eq!(on.opt_value, off.opt_value);
        assert!(i.is_feasible(&on.witness));
        assert_eq!(i.objective(&on.witness), on.opt_value);
    }

    #[test]
    fn ill_posed_rejected() {
        let i = inst(vec![vec![0, 1]], vec![3], vec![1, 1]);
        assert!(solve_exact(&i, &SolveLimits::default()).is_err());
    }

    #[test]
    fn degenerate_column_ignored() {
        let i = inst(vec![vec![0, 1]], vec![3], vec![0, 1]);
        let res = solve_exact(&i, &SolveLimits::default()).unwrap();
        assert_eq!(res.opt_value, ri(3));
        assert_eq!(res.witness[0], BigInt::zero());
    }
}
