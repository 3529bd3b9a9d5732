//! `strongmono`: residual multipartite contangles of symmetric Gaussian states.

mod grid;
mod record;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use strongmono::config::PRECISION_ENV;
use strongmono::monogamy::{evaluate_cube, gaussian_decomposition, molecular_residual, MoleculePartition, ResidualEvaluator, ScanGrid};
use strongmono::teleportation::{fidelity_from_squeezing, squeezing_from_fidelity};
use strongmono::verify::{self, Suite};
use strongmono::{db_to_squeezing, Error, Tolerances};

use record::{render, Format, OutputRecord};

const DB_HELP: &str = "Squeezing in decibels, s_dB = 10 log10(e^(2 r_bar)) ~ 8.6859 r_bar";

#[derive(Parser)]
#[command(name = "strongmono", version, about = "Genuine multipartite Gaussian contangle of symmetric states")]
struct Cli {
    /// Minimum working precision (bits) of the extended-precision sums.
    #[arg(long, global = true, env = PRECISION_ENV)]
    precision_bits: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Squeezing {
    /// Average squeezing r_bar (natural units)
    #[arg(long)]
    rbar: Option<f64>,
    #[arg(long, help = DB_HELP)]
    db: Option<f64>,
}

impl Squeezing {
    fn r_bar(&self) -> f64 {
        match (self.rbar, self.db) {
            (Some(r), _) => r,
            (None, Some(db)) => db_to_squeezing(db),
            (None, None) => unreachable!("clap enforces one of --rbar / --db"),
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file (standard output when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Residual contangle of N out of N + M modes of a pure symmetric state.
    Residual {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[command(flatten)]
        squeezing: Squeezing,
        /// Parties are molecules of this many modes each
        #[arg(long)]
        molecule_size: Option<usize>,
        /// Attach the K-partite terms of the strong-monogamy decomposition
        #[arg(long)]
        terms: bool,
        /// Print every f_j term with its binomial and sign to stderr
        #[arg(short, long)]
        verbose: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Residuals over a grid, one record per point (N-major, then M, then r_bar).
    ///
    /// Axes accept `v`, `a:b`, `a:b:step`, `log:a:b:count` and comma-separated lists.
    Sweep {
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "0")]
        m: String,
        /// Squeezing axis (natural units)
        #[arg(long, conflicts_with = "db", required_unless_present = "db")]
        rbar: Option<String>,
        /// Squeezing axis in decibels, s_dB = 10 log10(e^(2 r_bar))
        #[arg(long)]
        db: Option<String>,
        #[arg(long)]
        molecule_size: Option<usize>,
        #[arg(long)]
        terms: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite on its built-in grid.
    Verify {
        /// positivity | monotonicity | oracle | recursion | gamma | fidelity | scale | all
        suite: String,
    },
    /// Optimal teleportation fidelity of an N-party network and its residual contangle.
    Fidelity {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with_all = ["db", "fidelity"])]
        rbar: Option<f64>,
        #[arg(long, help = DB_HELP, conflicts_with = "fidelity")]
        db: Option<f64>,
        /// Target fidelity in [1/2, 1); the squeezing is solved for
        #[arg(long)]
        fidelity: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

/// Error that maps to the usage exit status.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn emit(records: &[OutputRecord], output: &Output) -> Result<()> {
    let text = render(records, output.format)?;
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn point(
    ev: &mut ResidualEvaluator,
    n: usize,
    m: usize,
    molecule_size: Option<usize>,
    terms: bool,
) -> Result<OutputRecord> {
    let value = match molecule_size {
        Some(size) => {
            let part = MoleculePartition::new(size, n)?;
            molecular_residual(&part, m, ev.r_bar())?.residual.value()
        }
        None => ev.residual(n, m)?.value,
    };
    let rec = OutputRecord::new(n, m, ev.r_bar(), value)?;
    Ok(if terms { rec.with_terms(&gaussian_decomposition(ev, n, m)?) } else { rec })
}

fn run(cli: Cli) -> Result<bool> {
    let mut tol = Tolerances::DEFAULT;
    if let Some(bits) = cli.precision_bits {
        if bits > tol.max_precision_bits {
            return Err(usage(format!("--precision-bits {bits} exceeds the ceiling {}", tol.max_precision_bits)));
        }
        tol.min_precision_bits = bits;
    }

    match cli.command {
        Command::Residual {
            n,
            m,
            squeezing,
            molecule_size,
            terms,
            verbose,
            output,
        } => {
            let mut ev = ResidualEvaluator::new(squeezing.r_bar(), tol)?;
            if verbose {
                for t in ev.terms(n, m)? {
                    eprintln!("j = {:>4}  C = {}  sign = {}  f_j = {:e}", t.j, t.binomial, if t.negative { '-' } else { '+' }, t.f);
                }
            }
            emit(&[point(&mut ev, n, m, molecule_size, terms)?], &output)?;
        }
        Command::Sweep {
            n,
            m,
            rbar,
            db,
            molecule_size,
            terms,
            output,
        } => {
            let ns = grid::parse_int_axis(&n).map_err(|e| usage(e.to_string()))?;
            let ms = grid::parse_int_axis(&m).map_err(|e| usage(e.to_string()))?;
            let rs = match (rbar, db) {
                (Some(r), _) => grid::parse_real_axis(&r),
                (None, Some(d)) => grid::parse_real_axis(&d).map(|v| v.into_iter().map(db_to_squeezing).collect()),
                (None, None) => unreachable!("clap enforces one of --rbar / --db"),
            }
            .map_err(|e| usage(e.to_string()))?;
            let grid = ScanGrid::new(ns, ms, rs)?;
            let records = if molecule_size.is_none() && !terms {
                let cube = evaluate_cube(&grid, &tol)?;
                cube.points()
                    .map(|p| OutputRecord::new(p.n, p.m, p.r_bar, p.value))
                    .collect::<Result<Vec<_>>>()?
            } else {
                let mut rows = Vec::with_capacity(grid.len());
                for &n in &grid.n {
                    for &m in &grid.m {
                        for &r in &grid.r_bar {
                            let mut ev = ResidualEvaluator::new(r, tol)?;
                            rows.push(point(&mut ev, n, m, molecule_size, terms)?);
                        }
                    }
                }
                rows
            };
            emit(&records, &output)?;
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(|e: Error| usage(e.to_string()))?;
            let mut ok = true;
            for report in verify::run(suite, &tol)? {
                print!("{report}");
                ok &= report.passed();
            }
            println!("{}", if ok { "all checks passed" } else { "verification FAILED" });
            return Ok(ok);
        }
        Command::Fidelity {
            n,
            rbar,
            db,
            fidelity,
            output,
        } => {
            let r = match (rbar, db, fidelity) {
                (Some(r), _, _) => r,
                (_, Some(d), _) => db_to_squeezing(d),
                (_, _, Some(f)) => squeezing_from_fidelity(n, f)?,
                _ => return Err(usage("one of --rbar, --db or --fidelity is required")),
            };
            fidelity_from_squeezing(n, r)?;
            let mut ev = ResidualEvaluator::new(r, tol)?;
            emit(&[point(&mut ev, n, 0, None, false)?], &output)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let is_usage = err.downcast_ref::<Usage>().is_some()
                || matches!(err.downcast_ref::<Error>(), Some(Error::Domain(_)));
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let cli = Cli::parse_from(["strongmono", "verify", "nope"]);
        let err = run(cli).unwrap_err();
        assert!(err.downcast_ref::<Usage>().is_some());
    }

    #[test]
    fn anyhow_keeps_domain_errors() {
        let err: anyhow::Error = ResidualEvaluator::new(-1.0, Tolerances::DEFAULT).err().unwrap().into();
        assert!(matches!(err.downcast_ref::<Error>(), Some(Error::Domain(_))));
    }
}
