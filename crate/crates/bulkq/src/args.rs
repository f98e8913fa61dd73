//! Command-line grammar.

use std::path::PathBuf;

use bulkq_core::Complex64;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bulkq", version, about = "Transient probabilities of the M/M(m,m)/1 bulk-service queue")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Branches of ω^{m+1} − zω^m + c = 0 at given points, or the star where they meet.
    Branches(BranchesArgs),
    /// P_{n,r}(t) from the spectral representation.
    Transition(TransitionArgs),
    /// Run the invariant battery and report one line per suite.
    Validate(ValidateArgs),
    /// Monte Carlo estimate of the state distribution at time t.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct QueueArgs {
    #[arg(long, value_parser = positive)]
    pub lambda: f64,
    #[arg(long, value_parser = positive)]
    pub mu: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct BranchesArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub m: u64,
    #[arg(long, value_parser = positive)]
    pub c: f64,
    /// Points such as `3`, `-1.5+2i` or `0.5i`; repeat or separate by commas.
    #[arg(long, value_parser = complex, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<Complex64>,
    /// Print the arm length and arm directions of the star.
    #[arg(long, conflicts_with = "z")]
    pub star: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    #[command(flatten)]
    pub queue: QueueArgs,
    /// Initial states.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(0..=64))]
    pub n: Vec<u64>,
    /// Target states.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(0..=64))]
    pub r: Vec<u64>,
    /// Times.
    #[arg(long, value_delimiter = ',', required = true, value_parser = time)]
    pub t: Vec<f64>,
    /// Add the uniformization value and the absolute difference.
    #[arg(long)]
    pub with_oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=8))]
    pub m_max: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(4..=64))]
    pub n_max: u64,
    /// Allowed |spectral − uniformization|.
    #[arg(long, default_value_t = 1e-6, value_parser = positive, allow_hyphen_values = true)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub queue: QueueArgs,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = time)]
    pub t: f64,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Add the uniformization value and a 3σ coverage flag per state.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive and finite"))
    }
}

fn time(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite and non-negative"))
    }
}

/// `a`, `bi`, `a+bi`, `a-bi`, with `j` accepted for `i`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("`{s}` is not a complex number");
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}
