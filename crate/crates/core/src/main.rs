use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use k3hilb::classify::{batch_sweep, classify, parse_flop_profiles, ClassifyOptions};
use k3hilb::lattice::Surface;
use k3hilb::pell::{solve_neg_pell, solve_pos_pell, NegPellOutcome};
use k3hilb::report::{render, render_sweep, Format};
use k3hilb::Error;

#[derive(Parser)]
#[command(
    name = "k3hilb",
    version,
    about = "Derived-natural involutions on S^[n] for generic K3 surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Box size for the wall scans.
    #[arg(long, default_value_t = 100)]
    scan_bound: u64,
    /// Bound for the spherical positivity scan.
    #[arg(long, default_value_t = 200)]
    positivity_bound: u64,
    /// Bound for the auxiliary equation scan.
    #[arg(long, default_value_t = 10_000)]
    aux_bound: u64,
    /// File of "p k" profiles to test against flopping walls.
    #[arg(long)]
    flop_profiles: Option<PathBuf>,
    /// Box size for the direct search attached to each flop profile.
    #[arg(long, default_value_t = 100)]
    flop_search_bound: u64,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single (degree, points) pair.
    Classify {
        /// Degree 2t of the polarization.
        #[arg(long)]
        degree: u64,
        /// Number of points n.
        #[arg(long)]
        points: u64,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Classify every pair in a product range; odd degrees are skipped.
    Sweep {
        /// Degree range A:B (inclusive).
        #[arg(long)]
        degree_range: String,
        /// Points range C:D (inclusive).
        #[arg(long)]
        points_range: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Fundamental solutions of X^2 - D Y^2 = -1 and X^2 - D Y^2 = 1.
    Pell {
        #[arg(long)]
        d: u64,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok(a..=b)
}

fn options(opts: &CommonOpts) -> Result<(ClassifyOptions, Format), Box<dyn std::error::Error>> {
    let format: Format = opts.format.parse()?;
    let flop_profiles = match &opts.flop_profiles {
        Some(path) => Some(parse_flop_profiles(&fs::read_to_string(path)?)?),
        None => None,
    };
    Ok((
        ClassifyOptions {
            scan_bound: opts.scan_bound,
            positivity_bound: opts.positivity_bound,
            aux_bound: opts.aux_bound,
            flop_profiles,
            flop_search_bound: opts.flop_search_bound,
        },
        format,
    ))
}

fn run(cli: Cli) -> Result<String, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Classify {
            degree,
            points,
            opts,
        } => {
            let (options, format) = options(&opts)?;
            let surface = Surface::from_degree(degree)?;
            let report = classify(surface.t(), points, &options)?;
            Ok(render(&report, format)?)
        }
        Command::Sweep {
            degree_range,
            points_range,
            opts,
        } => {
            let (options, format) = options(&opts)?;
            let degrees = parse_range(&degree_range)?;
            let points = parse_range(&points_range)?;
            let t_lo = degrees.start().div_ceil(2);
            let t_hi = degrees.end() / 2;
            if t_lo > t_hi {
                return Err(Error::EmptyRange(format!("no even degree in {degree_range}")).into());
            }
            let sweep = batch_sweep(t_lo..=t_hi, points, &options)?;
            Ok(render_sweep(&sweep, format)?)
        }
        Command::Pell { d } => {
            let neg = match solve_neg_pell(d)? {
                NegPellOutcome::Solved(p) => format!("({}, {})", p.a, p.b),
                NegPellOutcome::Unsolvable => "no solution".into(),
                NegPellOutcome::Square => "no solution (D is a square)".into(),
            };
            let pos = match solve_pos_pell(d) {
                Ok(p) => format!("({}, {})", p.a, p.b),
                Err(Error::SquarePellParameter(_)) => {
                    "no nontrivial solution (D is a square)".into()
                }
                Err(e) => return Err(e.into()),
            };
            Ok(format!(
                "D = {d}\nX^2 - D Y^2 = -1: {neg}\nX^2 - D Y^2 = 1: {pos}\n"
            ))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
