use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oppwelfare::dominance::{default_r_values, DEFAULT_GRID, DEFAULT_TOL};
use oppwelfare::io::{ingest_microdata, load_society, read_microdata_csv, society_to_json, Binning};
use oppwelfare::model::UtilityKind;
use oppwelfare::report::{emit_report, evaluate, sweep, weights_report, Format};
use oppwelfare::{compare, inequality_report, Aversion, Error, Utility};

/// Opportunity-sensitive welfare evaluation.
#[derive(Debug, Parser)]
#[command(name = "oppwelfare", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// `json` or `csv`.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct UtilityArg {
    /// `log` or `power:<σ>`.
    #[arg(long, default_value = "log", value_parser = parse_utility)]
    utility: Utility,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Welfare, EDEI, normative weights and the efficiency / inequality split.
    Evaluate {
        society: PathBuf,
        #[command(flatten)]
        utility: UtilityArg,
        /// Aversion `θ ≥ 0` or `inf`.
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_theta)]
        theta: Aversion,
        #[command(flatten)]
        out: Output,
    },
    /// Overall, social-risk and opportunity inequality indices.
    Indices {
        society: PathBuf,
        #[command(flatten)]
        utility: UtilityArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_theta)]
        theta: Aversion,
        #[command(flatten)]
        out: Output,
    },
    /// Indices over an evenly spaced grid of `ρ = exp(−θ)` in [0, 1].
    Sweep {
        society: PathBuf,
        #[command(flatten)]
        utility: UtilityArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Normative type weights.
    Weights {
        society: PathBuf,
        #[command(flatten)]
        utility: UtilityArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_theta)]
        theta: Aversion,
        #[command(flatten)]
        out: Output,
    },
    /// Welfare dominance of the first society over the second for all θ.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        utility: UtilityArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Build a society file from `type,income[,weight]` micro-data.
    Ingest {
        csv: PathBuf,
        /// `exact` or `quantile:<k>`.
        #[arg(long, default_value = "exact", value_parser = parse_binning)]
        binning: Binning,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_utility(s: &str) -> Result<Utility, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_theta(s: &str) -> Result<Aversion, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_binning(s: &str) -> Result<Binning, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn power_notice(u: &Utility, theta: Aversion) {
    if matches!(u.kind(), UtilityKind::Power(_)) && theta.value() > 0.0 {
        eprintln!("note: {u} with θ > 0 is not scale invariant; results change under a common rescaling of incomes");
    }
}

fn write_out(bytes: &[u8], path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(Error::from)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Evaluate { society, utility, theta, out } => {
            let s = load_society(&society)?;
            power_notice(&utility.utility, theta);
            let r = evaluate(&s, &utility.utility, theta)?;
            write_out(&emit_report(&r, out.format.unwrap_or(Format::Json))?, out.output.as_deref())
        }
        Command::Indices { society, utility, theta, out } => {
            let s = load_society(&society)?;
            power_notice(&utility.utility, theta);
            let r = inequality_report(&s, &utility.utility, theta)?;
            write_out(&emit_report(&r, out.format.unwrap_or(Format::Json))?, out.output.as_deref())
        }
        Command::Sweep { society, utility, grid, out } => {
            let s = load_society(&society)?;
            power_notice(&utility.utility, Aversion::Infinite);
            let rows = sweep(&s, &utility.utility, grid)?;
            write_out(&emit_report(&rows, out.format.unwrap_or(Format::Csv))?, out.output.as_deref())
        }
        Command::Weights { society, utility, theta, out } => {
            let s = load_society(&society)?;
            let r = weights_report(&s, &utility.utility, theta)?;
            write_out(&emit_report(&r, out.format.unwrap_or(Format::Json))?, out.output.as_deref())
        }
        Command::Compare { first, second, utility, grid, tol, out } => {
            let a = load_society(&first)?;
            let b = load_society(&second)?;
            power_notice(&utility.utility, Aversion::Infinite);
            let v = compare(&a, &b, &utility.utility, grid, tol, &default_r_values())?;
            write_out(&emit_report(&v, out.format.unwrap_or(Format::Json))?, out.output.as_deref())
        }
        Command::Ingest { csv, binning, output } => {
            let file = std::fs::File::open(&csv).map_err(|e| Error::Io(format!("{}: {e}", csv.display())))?;
            let records = read_microdata_csv(file)?;
            let s = ingest_microdata(records, binning)?;
            write_out(society_to_json(&s).as_bytes(), output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
