//! `mdkp`: CLI for exact knapsack approximation-precision analysis.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 solver budget exceeded,
//! 3 property violation found by `random`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mdkp_precision::cli::{
    self, RandomParams, TableFormat,
};
use mdkp_precision::numeric::Rational;
use mdkp_precision::solver::{SolveLimits, SolveStatus};
use mdkp_precision::Error;

#[derive(Parser)]
#[command(name = "mdkp", version, about = "Worst-case precision of single-item-type knapsack approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the delta/epsilon/alpha table for n = 1..max-n
    Table {
        #[arg(long, value_name = "N")]
        max_n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// decimal places for the alpha column
        #[arg(long, default_value_t = 15)]
        digits: u32,
    },
    /// Evaluate the exact worst-case precision alpha_mn
    Bound {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
        #[arg(long, default_value_t = 15)]
        digits: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Generate the worst-case instance for (m, n) and write it as JSON
    Gen {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
        /// width of the certified bracket around each mu, as "p/q"
        #[arg(long, default_value = "1/1000000000")]
        tol: Rational,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Solve an instance file exactly and report its measured precision
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        node_budget: u64,
        /// solve the instance monolithically instead of block by block
        #[arg(long)]
        no_decompose: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Generate, solve and compare the measured precision to alpha_mn
    Verify {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
        #[arg(long, default_value = "1/1000000000")]
        tol: Rational,
        #[arg(long, default_value_t = 10_000_000)]
        node_budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check alpha(A,b,c) >= alpha_mn on random instances
    Random {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        n: u32,
        #[arg(long)]
        count: u32,
        #[arg(long)]
        seed: u64,
        /// numerators and denominators of sampled entries stay <= this
        #[arg(long, default_value_t = 5)]
        coef_cap: u32,
        /// sampled capacities stay <= this
        #[arg(long, default_value_t = 5)]
        bound_cap: u32,
        #[arg(long, default_value_t = 10_000_000)]
        node_budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Zero dominated matrix entries until each column has one positive entry
    Reduce {
        file: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
}

fn json_line<T: Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Table { max_n, format, digits } => {
            let format = match format {
                Format::Text => TableFormat::Text,
                Format::Csv => TableFormat::Csv,
                Format::Json => TableFormat::Json,
            };
            print!("{}", cli::cmd_table(max_n, format, digits)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { m, n, digits, format } => {
            let report = cli::cmd_bound(m, n, digits)?;
            match format {
                Format::Json => json_line(&report)?,
                _ => {
                    let b = &report.breakdown;
                    println!("alpha_{}{} = {} = {}", b.m, b.n, b.alpha_mn, report.alpha_decimal);
                    println!("q = {}, r = {}", b.q, b.r);
                    println!("sandwich: {} <= alpha <= {}", b.sandwich_lo, b.sandwich_hi);
                    println!("asymptotic alpha_1inf/m = {}", report.asymptotic);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { m, n, tol, output } => {
            let instance = cli::cmd_gen(m, n, &tol)?;
            cli::save_instance(&output, &instance)?;
            eprintln!("wrote {} ({}x{})", output.display(), instance.m, instance.n);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file, node_budget, no_decompose, format } => {
            let instance = cli::load_instance(&file)?;
            let limits = SolveLimits { node_budget, block_decompose: !no_decompose };
            let report = cli::cmd_solve(&instance, &limits)?;
            match format {
                Format::Json => json_line(&report)?,
                _ => {
                    println!("status: {:?}", report.solve.status);
                    println!("opt_value = {}", report.solve.opt_value);
                    println!(
                        "witness = [{}]",
                        report
                            .solve
                            .witness
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    println!("nodes = {}", report.solve.nodes_used);
                    if let Some(p) = &report.precision {
                        println!("approx_value = {} (column {})", p.approx_value, p.approx_index);
                        println!("alpha = {}", p.alpha);
                    }
                }
            }
            if report.solve.status == SolveStatus::BudgetExceeded {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Verify { m, n, tol, node_budget, format } => {
            let report = cli::cmd_verify(m, n, &tol, node_budget)?;
            match format {
                Format::Json => json_line(&report)?,
                _ => {
                    println!("bound alpha_{}{} = {}", report.m, report.n, report.bound);
                    match (&report.measured, &report.gap) {
                        (Some(measured), Some(gap)) => {
                            println!("measured = {}", measured);
                            println!("gap = {} ({})", gap, gap.to_decimal_round(12));
                        }
                        _ => println!("solver budget exceeded"),
                    }
                }
            }
            if report.solver_status == SolveStatus::BudgetExceeded {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Random { m, n, count, seed, coef_cap, bound_cap, node_budget, format } => {
            let params =
                RandomParams { m, n, count, seed, coef_cap, bound_cap, node_budget };
            let summary = cli::cmd_random(&params)?;
            match format {
                Format::Json => json_line(&summary)?,
                _ => {
                    println!("checked {} instances (skipped {} on budget)", summary.checked, summary.skipped_budget);
                    println!("bound alpha_{}{} = {}", m, n, summary.bound);
                    match &summary.min_alpha {
                        Some(min) => println!("min observed alpha = {}", min),
                        None => println!("no instances checked"),
                    }
                    for bad in &summary.violations {
                        println!("VIOLATION: {}", serde_json::to_string(bad)?);
                    }
                }
            }
            if summary.violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Reduce { file, output } => {
            let instance = cli::load_instance(&file)?;
            let report = cli::cmd_reduce(&instance)?;
            cli::save_instance(&output, &report.reduced)?;
            eprintln!("zeroed {} entries: {:?}", report.zeroed.len(), report.zeroed);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not usage errors
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
