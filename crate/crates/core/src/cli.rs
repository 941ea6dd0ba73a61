//! Command implementations behind the `mdkp` binary: table rendering,
//! bound evaluation, worst-case generation, solving, verification and
//! randomized lower-bound sweeps. Everything here is deterministic given
//! its arguments (including the seed).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{alpha_mn, BoundBreakdown};
use crate::model::{precision, reduce_columns, validate, Instance, PrecisionReport};
use crate::numeric::Rational;
use crate::sequences::sequence_table;
use crate::solver::{solve_exact, SolveLimits, SolveResult, SolveStatus};
use crate::worstgen::generate;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

/// Renders the δ/ε/α table for n = 1..max_n.
///
/// CSV columns: `n,delta,epsilon,alpha_pq,alpha_decimal`, where the decimal
/// column is rounded to `digits` places (15 by default upstream).
pub fn cmd_table(max_n: u32, format: TableFormat, digits: u32) -> Result<String, Error> {
    if max_n < 1 {
        return Err(Error::Domain("table: max-n must be at least 1".into()));
    }
    let rows = sequence_table(max_n);
    match format {
        TableFormat::Csv => {
            let mut out = String::from("n,delta,epsilon,alpha_pq,alpha_decimal\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    row.delta,
                    row.epsilon,
                    row.alpha1,
                    row.alpha1.to_decimal_round(digits)
                ));
            }
            Ok(out)
        }
        TableFormat::Json => {
            #[derive(Serialize)]
            struct JsonRow {
                n: u32,
                delta: String,
                epsilon: String,
                alpha: Rational,
                alpha_decimal: String,
            }
            let json_rows: Vec<JsonRow> = rows
                .iter()
                .map(|row| JsonRow {
                    n: row.n,
                    delta: row.delta.to_string(),
                    epsilon: row.epsilon.to_string(),
                    alpha: row.alpha1.clone(),
                    alpha_decimal: row.alpha1.to_decimal_round(digits),
                })
                .collect();
            Ok(serde_json::to_string_pretty(&json_rows)? + "\n")
        }
        TableFormat::Text => {
            let mut out = String::new();
            let dw = rows.iter().map(|r| r.delta.to_string().len()).max().unwrap();
            let ew = rows.iter().map(|r| r.epsilon.to_string().len()).max().unwrap();
            out.push_str(&format!(
                "{:>3} {:>dw$} {:>ew$} {}\n",
                "n", "delta", "epsilon", "alpha_1n"
            ));
            for row in &rows {
                out.push_str(&format!(
                    "{:>3} {:>dw$} {:>ew$} {}\n",
                    row.n,
                    row.delta.to_string(),
                    row.epsilon.to_string(),
                    row.alpha1.to_decimal_round(digits)
                ));
            }
            Ok(out)
        }
    }
}

/// α_mn breakdown plus decimal renderings for display.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub breakdown: BoundBreakdown,
    pub alpha_decimal: String,
    pub asymptotic: String,
}

pub fn cmd_bound(m: u32, n: u32, digits: u32) -> Result<BoundReport, Error> {
    let breakdown = alpha_mn(m, n)?;
    let alpha_decimal = breakdown.alpha_mn.to_decimal_round(digits);
    let asymptotic = crate::bounds::asymptotic_reference(m, digits.min(15))?;
    Ok(BoundReport { breakdown, alpha_decimal, asymptotic })
}

pub fn cmd_gen(m: u32, n: u32, tol: &Rational) -> Result<Instance, Error> {
    Ok(generate(m, n, tol)?.0)
}

/// Solve + precision in one step.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub solve: SolveResult,
    pub precision: Option<PrecisionReport>,
}

pub fn cmd_solve(instance: &Instance, limits: &SolveLimits) -> Result<SolveReport, Error> {
    instance.check_shape()?;
    let result = solve_exact(instance, limits)?;
    let report = if result.status == SolveStatus::ProvenOptimal {
        Some(precision(instance, result.opt_value.clone(), result.witness.clone())?)
    } else {
        None // an incumbent is not a valid denominator for α
    };
    Ok(SolveReport { solve: result, precision: report })
}

/// Outcome of one generate-solve-compare round.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub m: u32,
    pub n: u32,
    pub tol: Rational,
    pub bound: Rational,
    pub measured: Option<Rational>,
    pub gap: Option<Rational>,
    pub solver_status: SolveStatus,
}

/// Generates the worst-case instance for (m, n), solves it exactly with
/// block decomposition and compares the measured precision to α_mn.
pub fn cmd_verify(m: u32, n: u32, tol: &Rational, node_budget: u64) -> Result<VerifyReport, Error> {
    let (instance, spec) = generate(m, n, tol)?;
    let limits = SolveLimits { node_budget, block_decompose: true };
    let result = solve_exact(&instance, &limits)?;
    if result.status == SolveStatus::BudgetExceeded {
        return Ok(VerifyReport {
            m,
            n,
            tol: tol.clone(),
            bound: spec.expected_alpha,
            measured: None,
            gap: None,
            solver_status: result.status,
        });
    }
    let report = precision(&instance, result.opt_value, result.witness)?;
    let gap = &report.alpha - &spec.expected_alpha;
    Ok(VerifyReport {
        m,
        n,
        tol: tol.clone(),
        bound: spec.expected_alpha,
        measured: Some(report.alpha),
        gap: Some(gap),
        solver_status: SolveStatus::ProvenOptimal,
    })
}

/// Parameters of a randomized sweep.
#[derive(Clone, Debug)]
pub struct RandomParams {
    pub m: u32,
    pub n: u32,
    pub count: u32,
    pub seed: u64,
    pub coef_cap: u32,
    pub bound_cap: u32,
    pub node_budget: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            m: 1,
            n: 2,
            count: 100,
            seed: 0,
            coef_cap: 5,
            bound_cap: 5,
            node_budget: 10_000_000,
        }
    }
}

/// Summary of a randomized sweep against the universal lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct RandomSummary {
    pub checked: u32,
    pub skipped_budget: u32,
    pub bound: Rational,
    pub min_alpha: Option<Rational>,
    /// instances whose measured precision fell below α_mn; any entry here
    /// indicates a bug (or a counterexample to the bound)
    pub violations: Vec<Instance>,
}

/// Samples well-posed instances with rational entries p/q (p, q ≤ coef_cap,
/// capacities ≤ bound_cap) and checks α(A,b,c) ≥ α_mn on each.
pub fn cmd_random(params: &RandomParams) -> Result<RandomSummary, Error> {
    let bound = alpha_mn(params.m, params.n)?.alpha_mn;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut min_alpha: Option<Rational> = None;
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut skipped_budget = 0;
    let limits = SolveLimits { node_budget: params.node_budget, block_decompose: true };
    for _ in 0..params.count {
        let instance = sample_instance(&mut rng, params);
        let result = solve_exact(&instance, &limits)?;
        if result.status == SolveStatus::BudgetExceeded {
            skipped_budget += 1;
            continue;
        }
        let report = precision(&instance, result.opt_value, result.witness)?;
        if report.alpha < bound {
            violations.push(instance);
        }
        min_alpha = Some(match min_alpha {
            Some(prev) => prev.min(report.alpha),
            None => report.alpha,
        });
        checked += 1;
    }
    Ok(RandomSummary { checked, skipped_budget, bound, min_alpha, violations })
}

/// One random well-posed instance. All-zero columns are resampled.
pub fn sample_instance(rng: &mut ChaCha8Rng, params: &RandomParams) -> Instance {
    let m = params.m as usize;
    let n = params.n as usize;
    let cap = params.coef_cap as i64;
    let rat = |rng: &mut ChaCha8Rng| {
        Rational::new(rng.gen_range(1..=cap), rng.gen_range(1..=cap))
    };
    let mut a = vec![vec![Rational::zero(); n]; m];
    for j in 0..n {
        loop {
            let mut any = false;
            for row in a.iter_mut() {
                // about a quarter of the entries are structural zeros
                if rng.gen_range(0..4) == 0 {
                    row[j] = Rational::zero();
                } else {
                    row[j] = rat(rng);
                    any = true;
                }
            }
            if any {
                break;
            }
        }
    }
    let b = (0..m)
        .map(|_| Rational::new(rng.gen_range(0..=params.bound_cap as i64), rng.gen_range(1..=cap)))
        .collect();
    let c = (0..n)
        .map(|_| Rational::new(rng.gen_range(0..=cap), rng.gen_range(1..=cap)))
        .collect();
    Instance::new(a, b, c).expect("sampled entries are nonnegative")
}

/// Result of applying the column reduction to a stored instance.
#[derive(Clone, Debug, Serialize)]
pub struct ReduceReport {
    pub reduced: Instance,
    /// (row, column) positions zeroed by the reduction
    pub zeroed: Vec<(usize, usize)>,
}

pub fn cmd_reduce(instance: &Instance) -> Result<ReduceReport, Error> {
    instance.check_shape()?;
    let validation = validate(instance);
    if !validation.is_solvable() {
        return Err(Error::IllPosed(validation.unbounded_columns));
    }
    let reduced = reduce_columns(instance)?;
    let mut zeroed = Vec::new();
    for i in 0..instance.m {
        for j in 0..instance.n {
            if instance.a[i][j] != reduced.a[i][j] {
                zeroed.push((i, j));
            }
        }
    }
    Ok(ReduceReport { reduced, zeroed })
}

pub fn load_instance(path: &std::path::Path) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)?;
    let instance: Instance = serde_json::from_str(&text)?;
    instance.check_shape()?;
    Ok(instance)
}

pub fn save_instance(path: &std::path::Path, instance: &Instance) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(instance)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
