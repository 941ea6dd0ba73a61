//! Multi-dimensional knapsack instances and the single-item-type
//! approximation: item solutions, precision measurement, the column
//! reduction that leaves one positive entry per column, and direct-product
//! block structure.
//!
//! Column indices are 0-based throughout the library.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::numeric::{floor_ratio, Rational};
use crate::Error;

/// An instance of the integer m-dimensional knapsack problem:
/// maximize c·x over nonnegative integer x with A·x ≤ b.
///
/// Serializes as JSON with all rationals as exact `"p/q"` strings; the
/// optional `meta` object is free-form and round-trips untouched.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl Instance {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Result<Self, Error> {
        let inst = Instance { m: b.len(), n: c.len(), a, b, c, meta: None };
        inst.check_shape()?;
        Ok(inst)
    }

    /// Shape and sign checks: dimensions consistent, every entry ≥ 0.
    pub fn check_shape(&self) -> Result<(), Error> {
        if self.a.len() != self.m || self.b.len() != self.m || self.c.len() != self.n {
            return Err(Error::Domain("instance: inconsistent dimensions".into()));
        }
        if self.a.iter().any(|row| row.len() != self.n) {
            return Err(Error::Domain("instance: ragged matrix".into()));
        }
        let nonneg = |v: &Rational| !v.is_negative();
        if !self.a.iter().flatten().all(nonneg)
            || !self.b.iter().all(nonneg)
            || !self.c.iter().all(nonneg)
        {
            return Err(Error::Domain("instance: negative entry".into()));
        }
        Ok(())
    }

    /// Exact feasibility test A·x ≤ b for an integer point.
    pub fn is_feasible(&self, x: &[BigInt]) -> bool {
        if x.len() != self.n || x.iter().any(|v| v.sign() == num_bigint::Sign::Minus) {
            return false;
        }
        self.a.iter().zip(&self.b).all(|(row, cap)| {
            let lhs: Rational = row
                .iter()
                .zip(x)
                .map(|(aij, xj)| aij * &Rational::from(xj.clone()))
                .sum();
            &lhs <= cap
        })
    }

    /// Objective value c·x.
    pub fn objective(&self, x: &[BigInt]) -> Rational {
        self.c
            .iter()
            .zip(x)
            .map(|(cj, xj)| cj * &Rational::from(xj.clone()))
            .sum()
    }

    fn column_has_positive(&self, j: usize) -> bool {
        self.a.iter().any(|row| row[j].is_positive())
    }
}

/// Outcome of well-posedness validation.
///
/// A column with no positive matrix entry makes the problem unbounded when
/// its objective coefficient is positive; with a zero coefficient it is
/// merely degenerate (a value-0 item) and is tolerated downstream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub unbounded_columns: Vec<usize>,
    pub degenerate_columns: Vec<usize>,
}

impl Validation {
    pub fn is_well_posed(&self) -> bool {
        self.unbounded_columns.is_empty() && self.degenerate_columns.is_empty()
    }

    /// Acceptable for solving: no unbounded columns (degenerate ones are
    /// ignored as value-0 items).
    pub fn is_solvable(&self) -> bool {
        self.unbounded_columns.is_empty()
    }
}

pub fn validate(instance: &Instance) -> Validation {
    let mut unbounded = Vec::new();
    let mut degenerate = Vec::new();
    for j in 0..instance.n {
        if !instance.column_has_positive(j) {
            if instance.c[j].is_positive() {
                unbounded.push(j);
            } else {
                degenerate.push(j);
            }
        }
    }
    Validation { unbounded_columns: unbounded, degenerate_columns: degenerate }
}

/// The best feasible point supported on a single column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemSolution {
    pub j: usize,
    #[serde(serialize_with = "crate::serialize_bigint")]
    pub quantity: BigInt,
    pub value: Rational,
}

/// Per-column single-item quantities v_j = min over rows i with a_ij > 0 of
/// ⌊b_i/a_ij⌋. Degenerate columns get quantity 0.
pub fn item_solutions(instance: &Instance) -> Result<Vec<ItemSolution>, Error> {
    let validation = validate(instance);
    if !validation.is_solvable() {
        return Err(Error::IllPosed(validation.unbounded_columns));
    }
    let mut out = Vec::with_capacity(instance.n);
    for j in 0..instance.n {
        let mut quantity: Option<BigInt> = None;
        for (row, cap) in instance.a.iter().zip(&instance.b) {
            if row[j].is_positive() {
                let q = floor_ratio(cap, &row[j])?;
                quantity = Some(match quantity {
                    Some(prev) => prev.min(q),
                    None => q,
                });
            }
        }
        let quantity = quantity.unwrap_or_else(BigInt::zero);
        let value = &instance.c[j] * &Rational::from(quantity.clone());
        out.push(ItemSolution { j, quantity, value });
    }
    Ok(out)
}

/// Largest single-item value and the smallest column index attaining it.
pub fn approx_value(instance: &Instance) -> Result<(Rational, usize), Error> {
    let items = item_solutions(instance)?;
    let mut best = Rational::zero();
    let mut best_j = 0;
    for item in &items {
        if item.value > best {
            best = item.value.clone();
            best_j = item.j;
        }
    }
    Ok((best, best_j))
}

/// Measured precision of the single-item approximation on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecisionReport {
    pub approx_value: Rational,
    pub approx_index: usize,
    pub opt_value: Rational,
    #[serde(serialize_with = "crate::serialize_bigint_vec")]
    pub opt_witness: Vec<BigInt>,
    pub alpha: Rational,
}

/// Combines the approximate value with an exact optimum into a precision
/// report. α = approx/opt; when the optimum is 0 the approximate value is
/// 0 as well and α is defined to be 1.
///
/// `opt_value < approx_value` cannot happen with a correct solver and is
/// reported as an internal-consistency error.
pub fn precision(
    instance: &Instance,
    opt_value: Rational,
    opt_witness: Vec<BigInt>,
) -> Result<PrecisionReport, Error> {
    let (approx_value, approx_index) = approx_value(instance)?;
    if opt_value < approx_value {
        return Err(Error::Inconsistent(format!(
            "optimal value {opt_value} below approximate value {approx_value}"
        )));
    }
    let alpha = if opt_value.is_zero() {
        Rational::one()
    } else {
        &approx_value / &opt_value
    };
    Ok(PrecisionReport { approx_value, approx_index, opt_value, opt_witness, alpha })
}

/// Zeroes matrix entries column by column until every column has at most one
/// positive entry, without changing any single-item quantity.
///
/// For each column the kept row is the smallest row index attaining the
/// minimal floor ratio ⌊b_i/a_it⌋; all other entries of the column are set
/// to 0. The set of single-item points is preserved exactly and the feasible
/// region can only grow, so the measured precision never increases.
pub fn reduce_columns(instance: &Instance) -> Result<Instance, Error> {
    let validation = validate(instance);
    if !validation.is_solvable() {
        return Err(Error::IllPosed(validation.unbounded_columns));
    }
    let mut a = instance.a.clone();
    for t in 0..instance.n {
        let mut keep: Option<(usize, BigInt)> = None;
        for i in 0..instance.m {
            if a[i][t].is_positive() {
                let ratio = floor_ratio(&instance.b[i], &a[i][t])?;
                let better = match &keep {
                    Some((_, best)) => &ratio < best,
                    None => true,
                };
                if better {
                    keep = Some((i, ratio));
                }
            }
        }
        if let Some((s, _)) = keep {
            for i in 0..instance.m {
                if i != s {
                    a[i][t] = Rational::zero();
                }
            }
        }
    }
    Ok(Instance {
        m: instance.m,
        n: instance.n,
        a,
        b: instance.b.clone(),
        c: instance.c.clone(),
        meta: instance.meta.clone(),
    })
}

/// One block of a direct product: a set of rows and columns such that the
/// matrix is zero outside the block supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Partition of an instance into the connected components of its
/// row/column support graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockStructure {
    pub blocks: Vec<Block>,
}

impl BlockStructure {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.cols.len()).collect()
    }
}

/// Splits an instance into the connected components of the bipartite graph
/// whose edges are the positive entries of A. Rows with empty support and
/// degenerate columns each form their own block. Blocks are ordered by their
/// smallest member (columns first), which keeps the output deterministic.
pub fn split_blocks(instance: &Instance) -> (BlockStructure, Vec<Instance>) {
    let m = instance.m;
    let n = instance.n;
    // union-find over m rows followed by n columns
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for i in 0..m {
        for j in 0..n {
            if instance.a[i][j].is_positive() {
                let ri = find(&mut parent, i);
                let rj = find(&mut parent, m + j);
                parent[ri] = rj;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    for v in 0..m + n {
        let root = find(&mut parent, v);
        let idx = match roots.iter().position(|&r| r == root) {
            Some(idx) => idx,
            None => {
                roots.push(root);
                blocks.push(Block { rows: Vec::new(), cols: Vec::new() });
                roots.len() - 1
            }
        };
        if v < m {
            blocks[idx].rows.push(v);
        } else {
            blocks[idx].cols.push(v - m);
        }
    }
    // column-bearing blocks first, ordered by smallest column; then row-only
    // blocks by smallest row
    blocks.sort_by_key(|b| match b.cols.first() {
        Some(&j) => (0, j),
        None => (1, b.rows[0]),
    });
    let subs = blocks
        .iter()
        .map(|block| Instance {
            m: block.rows.len(),
            n: block.cols.len(),
            a: block
                .rows
                .iter()
                .map(|&i| block.cols.iter().map(|&j| instance.a[i][j].clone()).collect())
                .collect(),
            b: block.rows.iter().map(|&i| instance.b[i].clone()).collect(),
            c: block.cols.iter().map(|&j| instance.c[j].clone()).collect(),
            meta: None,
        })
        .collect();
    (BlockStructure { blocks }, subs)
}

/// Combines per-block precision reports of a direct product: the approximate
/// value is the largest block value, the optimum is the sum of block optima,
/// and the witness is the concatenation of block witnesses.
pub fn combine_block_reports(reports: &[PrecisionReport]) -> Result<PrecisionReport, Error> {
    if reports.is_empty() {
        return Err(Error::Domain("combine_block_reports: empty list".into()));
    }
    let mut approx_value = Rational::zero();
    let mut approx_index = 0usize;
    let mut opt_value = Rational::zero();
    let mut opt_witness = Vec::new();
    let mut offset = 0usize;
    let mut have_best = false;
    for report in reports {
        if !have_best || report.approx_value > approx_value {
            approx_value = report.approx_value.clone();
            approx_index = offset + report.approx_index;
            have_best = true;
        }
        opt_value = opt_value + &report.opt_value;
        opt_witness.extend(report.opt_witness.iter().cloned());
        offset += report.opt_witness.len();
    }
    let alpha = if opt_value.is_zero() {
        Rational::one()
    } else {
        &approx_value / &opt_value
    };
    Ok(PrecisionReport { approx_value, approx_index, opt_value, opt_witness, alpha })
}
