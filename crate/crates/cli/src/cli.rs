//! Command wiring, I/O, and exit-code mapping.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/validation error,
//! 3 internal invariant breach.

use crate::bench::{self, BenchSpec};
use crate::format;
use crate::gen::{self, Family, GnpParams, RegularParams};
use crate::solve::{render_solver_block, solve, Algo};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use fairdiv_core::instance::{AllocationReport, Instance};
use fairdiv_core::{oracle, Error, Ratio};
use std::fs;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "EF1 allocations under soft conflict graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Text,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute an EF1 allocation for an instance file
    Solve {
        /// Instance file path, or '-' for stdin
        instance: String,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Profile-cube half-width for --algo degree (decimal, weight units)
        #[arg(long)]
        delta: Option<String>,
        /// Write output to this path instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the report for an allocation file
    Verify {
        instance: String,
        allocation: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive EF1 minimum-violation search (small instances only)
    Oracle {
        instance: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an instance from a named family
    Gen {
        #[arg(value_enum)]
        family: Family,
        /// Agent count
        #[arg(long)]
        n: Option<usize>,
        /// Good count (gnp, regular-weighted)
        #[arg(long)]
        m: Option<usize>,
        /// Edge probability for gnp, e.g. 0.1 (at most 9 decimals)
        #[arg(long)]
        p: Option<String>,
        /// Comma-separated clique sizes (cliques family)
        #[arg(long)]
        sizes: Option<String>,
        /// Matching rounds for regular-weighted
        #[arg(long)]
        deg: Option<usize>,
        /// RNG seed; mandatory for randomized families
        #[arg(long)]
        seed: Option<u64>,
        /// All agents share one valuation row
        #[arg(long)]
        identical: bool,
        /// Draw integer edge weights in 1..=max-weight (gnp)
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 100)]
        max_value: u64,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite; one report row per (instance, algo)
    Bench {
        #[arg(long, value_enum, default_value_t = Family::Gnp)]
        family: Family,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
        /// Agent counts, comma separated
        #[arg(long, value_delimiter = ',', default_value = "3")]
        n: Vec<usize>,
        /// Good counts, comma separated
        #[arg(long, value_delimiter = ',', default_value = "20")]
        m: Vec<usize>,
        /// Edge probabilities, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        p: Vec<String>,
        /// Matching rounds for regular-weighted, comma separated
        #[arg(long, value_delimiter = ',', default_value = "4")]
        deg: Vec<usize>,
        /// Seeds: 'a..b' half-open range or comma list
        #[arg(long, default_value = "0..10")]
        seeds: String,
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        identical: bool,
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 100)]
        max_value: u64,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// Solver and verifier errors triggered by the user's algorithm choice are
/// usage errors; invariant breaches are internal.
fn solver_error(e: Error) -> CliError {
    if e.is_internal() {
        CliError::Internal(e.to_string())
    } else {
        CliError::Usage(e.to_string())
    }
}

fn data_error(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(data_error)?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            CliError::Data(format!("{}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &str) -> Result<Instance, CliError> {
    let text = read_input(path)?;
    format::parse_instance(&text).map_err(data_error)
}

/// Parses a decimal `--delta` into scaled weight units.
fn parse_delta(value: &str, wscale: u64) -> Result<i128, CliError> {
    let d = format::parse_decimal(value).map_err(CliError::Usage)?;
    let frac_scale = 10u64.pow(d.digits);
    if !wscale.is_multiple_of(frac_scale) {
        return Err(CliError::Usage(format!(
            "--delta {value} is finer-grained than the instance weights"
        )));
    }
    Ok(d.int as i128 * wscale as i128 + d.frac as i128 * (wscale / frac_scale) as i128)
}

fn parse_probability(value: &str) -> Result<(u32, u32), CliError> {
    let d = format::parse_decimal(value).map_err(CliError::Usage)?;
    let den = 10u64.pow(d.digits);
    let num = d.int * den + d.frac as u64;
    if num > den {
        return Err(CliError::Usage(format!("probability {value} exceeds 1")));
    }
    Ok((num as u32, den as u32))
}

fn parse_sizes(value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid size '{t}'")))
        })
        .collect()
}

fn parse_seeds(value: &str) -> Result<Vec<u64>, CliError> {
    if let Some((a, b)) = value.split_once("..") {
        let start: u64 = a
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid seed range '{value}'")))?;
        let end: u64 = b
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid seed range '{value}'")))?;
        return Ok((start..end).collect());
    }
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("invalid seed '{t}'")))
        })
        .collect()
}

fn require<T>(opt: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    opt.ok_or_else(|| CliError::Usage(format!("family '{family}' requires --{flag}")))
}

#[allow(clippy::too_many_arguments)]
pub fn build_instance(
    family: Family,
    n: Option<usize>,
    m: Option<usize>,
    p: Option<String>,
    sizes: Option<String>,
    deg: Option<usize>,
    seed: Option<u64>,
    identical: bool,
    weighted: bool,
    max_value: u64,
    max_weight: u64,
) -> Result<Instance, CliError> {
    match family {
        Family::Star => Ok(gen::star(require(n, "n", "star")?)),
        Family::Cliques => {
            let n = require(n, "n", "cliques")?;
            let sizes = parse_sizes(&require(sizes, "sizes", "cliques")?)?;
            Ok(gen::cliques(n, &sizes))
        }
        Family::Gnp => {
            let (p_num, p_den) = parse_probability(&require(p, "p", "gnp")?)?;
            Ok(gen::gnp(&GnpParams {
                n: require(n, "n", "gnp")?,
                m: require(m, "m", "gnp")?,
                p_num,
                p_den,
                seed: require(seed, "seed", "gnp")?,
                identical,
                weighted,
                max_value,
                max_weight,
            }))
        }
        Family::RegularWeighted => Ok(gen::regular_weighted(&RegularParams {
            n: require(n, "n", "regular-weighted")?,
            m: require(m, "m", "regular-weighted")?,
            deg: deg.unwrap_or(4),
            seed: require(seed, "seed", "regular-weighted")?,
            identical,
            max_value,
            max_weight,
        })),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            instance,
            algo,
            delta,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let delta = delta
                .map(|d| parse_delta(&d, inst.wscale()))
                .transpose()?;
            if delta.is_some() && algo != Algo::Degree {
                return Err(CliError::Usage(
                    "--delta only applies to --algo degree".into(),
                ));
            }
            let outcome = solve(&inst, algo, delta).map_err(solver_error)?;
            let report =
                AllocationReport::build(&inst, &outcome.allocation).map_err(solver_error)?;
            let mut text = format::render_allocation(&outcome.allocation);
            text.push_str(&render_solver_block(&outcome));
            text.push_str(&format::render_report(&report));
            write_output(&out, &text)
        }
        Command::Verify {
            instance,
            allocation,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let alloc_text = read_input(&allocation)?;
            let alloc = format::parse_allocation(&alloc_text, &inst).map_err(data_error)?;
            let report = AllocationReport::build(&inst, &alloc).map_err(|e| {
                if e.is_internal() {
                    CliError::Internal(e.to_string())
                } else {
                    CliError::Data(e.to_string())
                }
            })?;
            write_output(&out, &format::render_report(&report))
        }
        Command::Oracle { instance, out } => {
            let inst = load_instance(&instance)?;
            let (min, witness) = oracle::min_violations_ef1(&inst).map_err(|e| match e {
                Error::OracleSizeLimit => CliError::Data(e.to_string()),
                other => solver_error(other),
            })?;
            let minimum = Ratio::new(min as i128, inst.wscale() as i128);
            let report = AllocationReport::build(&inst, &witness).map_err(solver_error)?;
            let mut text = format!("# oracle: minimum={minimum}\n");
            text.push_str(&format::render_allocation(&witness));
            text.push_str(&format::render_report(&report));
            write_output(&out, &text)
        }
        Command::Gen {
            family,
            n,
            m,
            p,
            sizes,
            deg,
            seed,
            identical,
            weighted,
            max_value,
            max_weight,
            out,
        } => {
            let inst = build_instance(
                family, n, m, p, sizes, deg, seed, identical, weighted, max_value, max_weight,
            )?;
            write_output(&out, &format::render_instance(&inst))
        }
        Command::Bench {
            family,
            algo,
            n,
            m,
            p,
            deg,
            seeds,
            sizes,
            identical,
            weighted,
            max_value,
            max_weight,
            format: fmt,
            out,
        } => {
            let ps = p
                .iter()
                .map(|s| parse_probability(s))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = BenchSpec {
                family,
                algo,
                ns: n,
                ms: m,
                ps,
                degs: deg,
                seeds: parse_seeds(&seeds)?,
                sizes: sizes.as_deref().map(parse_sizes).transpose()?.unwrap_or(vec![3, 4]),
                identical,
                weighted,
                max_value,
                max_weight,
            };
            let rows = bench::run_suite(&spec).map_err(solver_error)?;
            let text = match fmt {
                OutputFormat::Csv => bench::to_csv(&rows),
                OutputFormat::Text => bench::to_text(&rows),
            };
            write_output(&out, &text)
        }
    }
}

pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Data(msg) => eprintln!("error: {msg}"),
                CliError::Internal(msg) => eprintln!("internal error: {msg}"),
            }
            e.exit_code()
        }
    }
}
