//! Batch command-line surface: achievable-rate reports for channel files,
//! binary-phase curve data, and the randomized verification suites.
//!
//! Exit codes: 0 success, 1 check/computation failure, 2 usage error,
//! 3 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wiretap_toolkit::bounds::{
    bpsk_curve, oneshot_private_lower, oneshot_public_lower, second_order_private_report,
    BoundReport,
};
use wiretap_toolkit::error::{Error, Result};
use wiretap_toolkit::states::{load_channel, reduce_wiretap, BpskParams};
use wiretap_toolkit::textfmt::{sig17, to_json_17};
use wiretap_toolkit::verify::{run_suite, SuiteKind};

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "wiretap",
    version,
    about = "One-shot and second-order achievable private rates for cq wiretap channels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Binary-phase pure-loss curve as CSV (n, normal_approx, asymptote, capacity)
    Bpsk(BpskArgs),
    /// Achievable-rate report for a channel file as JSON
    Bound(BoundArgs),
    /// Run a randomized verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BpskArgs {
    /// Channel transmissivity in (0, 1)
    #[arg(long)]
    eta: f64,
    /// Mean photon number per use
    #[arg(long)]
    nbar: f64,
    /// Decoding error tolerance
    #[arg(long, default_value_t = 0.01)]
    eps1: f64,
    /// Secrecy tolerance
    #[arg(long, default_value_t = 0.01)]
    eps2: f64,
    /// Smallest block length of the logarithmic grid
    #[arg(long, default_value_t = 1_000)]
    n_min: u64,
    /// Largest block length of the logarithmic grid
    #[arg(long, default_value_t = 10_000_000)]
    n_max: u64,
    /// Number of grid points
    #[arg(long, default_value_t = 30)]
    points: usize,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Channel file (.wtc.json)
    #[arg(long)]
    channel: PathBuf,
    /// Input distribution as comma-separated probabilities; the channel's
    /// declared distribution (or uniform) when absent
    #[arg(long)]
    p_x: Option<String>,
    /// Which bound to evaluate
    #[arg(long, value_enum)]
    mode: Mode,
    /// Block length (second-order mode)
    #[arg(long)]
    n: Option<u64>,
    /// Decoding error tolerance
    #[arg(long, default_value_t = 0.01)]
    eps1: f64,
    /// Secrecy tolerance
    #[arg(long, default_value_t = 0.01)]
    eps2: f64,
    /// Decoding slack (public and private modes)
    #[arg(long)]
    eta1: Option<f64>,
    /// Secrecy slack (private mode)
    #[arg(long)]
    eta2: Option<f64>,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Public,
    Private,
    SecondOrder,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: np | hn | convex-split | prop1 | protocol | metrics
    #[arg(long)]
    suite: String,
    /// Number of random instances; the suite's standard count when absent
    #[arg(long)]
    trials: Option<usize>,
    /// RNG seed; falls back to TOOLKIT_SEED, then 42
    #[arg(long)]
    seed: Option<u64>,
}

/// A command failure carrying its exit code.
enum Failure {
    Check(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Io(_) | Error::ChannelParse(_) => Failure::Io(e.to_string()),
            Error::InvalidParameter(_)
            | Error::InvalidDistribution(_)
            | Error::ChannelValidation(_)
            | Error::DimMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Bpsk(a) => cmd_bpsk(a),
        Cmd::Bound(a) => cmd_bound(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CHECK)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> CmdResult {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
    }
}

/// Logarithmically spaced integer grid from `n_min` to `n_max`; rounding
/// collisions are deduplicated.
fn log_grid(n_min: u64, n_max: u64, points: usize) -> Result<Vec<u64>> {
    if n_min == 0 {
        return Err(Error::InvalidParameter(
            "block lengths start at 1".into(),
        ));
    }
    if n_max < n_min {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} must be at least n_min = {n_min}"
        )));
    }
    if points == 0 {
        return Err(Error::InvalidParameter(
            "the grid needs at least one point".into(),
        ));
    }
    if points == 1 {
        if n_min != n_max {
            return Err(Error::InvalidParameter(format!(
                "a single grid point needs n_min = n_max, got [{n_min}, {n_max}]"
            )));
        }
        return Ok(vec![n_min]);
    }
    let lo = (n_min as f64).ln();
    let hi = (n_max as f64).ln();
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            ((lo + t * (hi - lo)).exp().round() as u64).clamp(n_min, n_max)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

fn cmd_bpsk(a: &BpskArgs) -> CmdResult {
    let params = BpskParams::new(a.eta, a.nbar)?;
    let grid = log_grid(a.n_min, a.n_max, a.points)?;
    let curve = bpsk_curve(&params, &grid, a.eps1, a.eps2)?;
    let mut csv = String::from("n,normal_approx,asymptote,capacity\n");
    for pt in &curve.points {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            pt.n,
            sig17(pt.rate_per_use_bits),
            sig17(curve.asymptote_bits),
            sig17(curve.capacity_bits)
        );
    }
    emit(a.out.as_ref(), &csv)
}

fn parse_distribution(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("'{tok}' is not a probability")))
        })
        .collect()
}

fn cmd_bound(a: &BoundArgs) -> CmdResult {
    let ch = load_channel(&a.channel)?;
    let p_x = match &a.p_x {
        Some(s) => parse_distribution(s)?,
        None => ch.default_p_x(),
    };
    let report: BoundReport = match a.mode {
        Mode::Public => {
            let eta1 = a
                .eta1
                .ok_or_else(|| Failure::Usage("--eta1 is required in public mode".into()))?;
            let red = reduce_wiretap(&ch, &p_x)?;
            oneshot_public_lower(&red.rho_xb, a.eps1, eta1, false)?
        }
        Mode::Private => {
            let eta1 = a
                .eta1
                .ok_or_else(|| Failure::Usage("--eta1 is required in private mode".into()))?;
            let eta2 = a
                .eta2
                .ok_or_else(|| Failure::Usage("--eta2 is required in private mode".into()))?;
            oneshot_private_lower(&ch, &p_x, a.eps1, a.eps2, eta1, eta2)?
        }
        Mode::SecondOrder => {
            let n = a
                .n
                .ok_or_else(|| Failure::Usage("--n is required in second-order mode".into()))?;
            second_order_private_report(&ch, &p_x, n, a.eps1, a.eps2)?
        }
    };
    let mut json =
        to_json_17(&report).map_err(|e| Failure::Check(format!("serialization failed: {e}")))?;
    json.push('\n');
    emit(a.out.as_ref(), &json)
}

fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("TOOLKIT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("TOOLKIT_SEED = '{v}' is not a valid seed"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    let kind = SuiteKind::from_name(&a.suite).ok_or_else(|| {
        let known: Vec<&str> = SuiteKind::ALL.iter().map(|k| k.name()).collect();
        Failure::Usage(format!(
            "unknown suite '{}'; expected one of {}",
            a.suite,
            known.join(", ")
        ))
    })?;
    let seed = resolve_seed(a.seed)?;
    let trials = a.trials.unwrap_or_else(|| kind.default_trials());
    let report = run_suite(kind, trials, seed)?;
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "suite {} failed {} of {} checks",
            report.suite,
            report.checks_failed,
            report.checks_passed + report.checks_failed
        )))
    }
}
