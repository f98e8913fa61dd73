//! Front end for `bulkq-core`: argument parsing, output formats and the validation battery.

pub mod args;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use bulkq_core::algebraic::{solve_branches, star_geometry, AlgebraicConfig};
use bulkq_core::oracle::{simulate_replication, uniformization_rows, McResult};
use bulkq_core::transition::{transition_spectral, TransitionQuery};
use bulkq_core::{Error, QueueParams};
use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use args::{BranchesArgs, Cli, Command, QueueArgs, SimulateArgs, TransitionArgs, ValidateArgs};
use output::{num, sink, write_csv, write_json, ParamsJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Branches(a) => branches(a, out),
        Command::Transition(a) => transition(a, out),
        Command::Validate(a) => validate(a, out),
        Command::Simulate(a) => simulate(a, out),
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

/// Pool sized by `BULKQ_THREADS` when set.
fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("BULKQ_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => builder = builder.num_threads(n),
            _ => return Err(format!("BULKQ_THREADS must be a positive integer, got `{v}`")),
        }
    }
    builder.build().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveRate { .. } | Error::ZeroBatchSize | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("output: {e}"))
    }
}

fn params(q: &QueueArgs) -> Result<QueueParams, Failure> {
    Ok(QueueParams::new(q.lambda, q.mu, q.m as usize)?)
}

fn queue_echo(p: &QueueParams) -> Vec<(&'static str, String)> {
    vec![("lambda", num(p.lambda)), ("mu", num(p.mu)), ("m", p.m.to_string())]
}

fn branches(a: &BranchesArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let m = a.m as usize;
    let cfg = AlgebraicConfig::new(a.c, m)?;
    if !a.star && a.z.is_empty() {
        return Err(Failure::Usage("give at least one --z or --star".into()));
    }
    let mut w = sink(a.output.out.as_deref(), out)?;
    let echo = vec![("command", "branches".to_string()), ("m", m.to_string()), ("c", num(a.c))];
    if a.star {
        let star = star_geometry(&cfg);
        let arms: Vec<StarArm> = (0..star.arm_count)
            .map(|k| {
                let d = star.rotation.powu(k as u32);
                let tip = star.tip(k);
                StarArm { arm: k, arm_length: star.arm_length, dir_re: d.re, dir_im: d.im, tip_re: tip.re, tip_im: tip.im }
            })
            .collect();
        if a.output.json {
            write_json(&mut w, &StarJson { schema: 1, m, c: a.c, arm_length: star.arm_length, arms })?;
        } else {
            let rows = arms
                .iter()
                .map(|s| vec![s.arm.to_string(), num(s.arm_length), num(s.dir_re), num(s.dir_im), num(s.tip_re), num(s.tip_im)])
                .collect::<Vec<_>>();
            write_csv(&mut w, &echo, &["arm", "arm_length", "dir_re", "dir_im", "tip_re", "tip_im"], &rows)?;
        }
        return Ok(EXIT_OK);
    }
    let mut points = Vec::with_capacity(a.z.len());
    for &z in &a.z {
        let bv = solve_branches(&cfg, z)?;
        points.push(BranchRow {
            z_re: z.re,
            z_im: z.im,
            omega: bv.omega.iter().map(|w| [w.re, w.im]).collect(),
            vieta: bv.vieta_residuals(a.c),
        });
    }
    if a.output.json {
        write_json(&mut w, &BranchesJson { schema: 1, m, c: a.c, rows: points })?;
    } else {
        let mut header = vec!["z_re".to_string(), "z_im".to_string()];
        for k in 0..=m {
            header.push(format!("omega{k}_re"));
            header.push(format!("omega{k}_im"));
        }
        for k in 1..=m + 1 {
            header.push(format!("vieta_residual_e{k}"));
        }
        let rows = points
            .iter()
            .map(|p| {
                let mut row = vec![num(p.z_re), num(p.z_im)];
                for w in &p.omega {
                    row.push(num(w[0]));
                    row.push(num(w[1]));
                }
                row.extend(p.vieta.iter().map(|&v| num(v)));
                row
            })
            .collect::<Vec<_>>();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        write_csv(&mut w, &echo, &header, &rows)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct StarArm {
    arm: usize,
    arm_length: f64,
    dir_re: f64,
    dir_im: f64,
    tip_re: f64,
    tip_im: f64,
}

#[derive(Serialize)]
struct StarJson {
    schema: u32,
    m: usize,
    c: f64,
    arm_length: f64,
    arms: Vec<StarArm>,
}

#[derive(Serialize)]
struct BranchRow {
    z_re: f64,
    z_im: f64,
    omega: Vec<[f64; 2]>,
    vieta: Vec<f64>,
}

#[derive(Serialize)]
struct BranchesJson {
    schema: u32,
    m: usize,
    c: f64,
    rows: Vec<BranchRow>,
}

#[derive(Serialize)]
struct TransitionRow {
    n: usize,
    r: usize,
    t: f64,
    p_spectral: f64,
    error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
}

#[derive(Serialize)]
struct TransitionJson {
    schema: u32,
    params: ParamsJson,
    rows: Vec<TransitionRow>,
    max_diff: Option<f64>,
}

fn transition(a: &TransitionArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = params(&a.queue)?;
    let pairs: Vec<(usize, usize)> =
        a.n.iter().flat_map(|&n| a.r.iter().map(move |&r| (n as usize, r as usize))).collect();
    let computed: Vec<Result<Vec<TransitionRow>, Error>> = pairs
        .par_iter()
        .map(|&(n, r)| {
            let res = transition_spectral(&p, &TransitionQuery { n, r, times: a.t.clone() })?;
            let mut rows = Vec::with_capacity(a.t.len());
            for (k, &t) in a.t.iter().enumerate() {
                let oracle = if a.with_oracle {
                    Some(uniformization_rows(&p, &[n], t, 1e-13)?[0].get(r).copied().unwrap_or(0.0))
                } else {
                    None
                };
                let v = res.values[k];
                rows.push(TransitionRow {
                    n,
                    r,
                    t,
                    p_spectral: v,
                    error_estimate: res.error_estimate[k],
                    p_oracle: oracle,
                    abs_diff: oracle.map(|o| (v - o).abs()),
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for c in computed {
        rows.extend(c?);
    }
    let max_diff = if a.with_oracle { Some(rows.iter().filter_map(|r| r.abs_diff).fold(0.0, f64::max)) } else { None };
    let mut w = sink(a.output.out.as_deref(), out)?;
    if a.output.json {
        let params = ParamsJson { lambda: p.lambda, mu: p.mu, m: p.m };
        write_json(&mut w, &TransitionJson { schema: 1, params, rows, max_diff })?;
    } else {
        let mut echo = vec![("command", "transition".to_string())];
        echo.extend(queue_echo(&p));
        let mut header = vec!["n", "r", "t", "p_spectral", "error_estimate"];
        if a.with_oracle {
            header.extend(["p_oracle", "abs_diff"]);
        }
        let table = rows
            .iter()
            .map(|row| {
                let mut v = vec![row.n.to_string(), row.r.to_string(), num(row.t), num(row.p_spectral), num(row.error_estimate)];
                if let (Some(o), Some(d)) = (row.p_oracle, row.abs_diff) {
                    v.push(num(o));
                    v.push(num(d));
                }
                v
            })
            .collect::<Vec<_>>();
        write_csv(&mut w, &echo, &header, &table)?;
    }
    Ok(EXIT_OK)
}

fn validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let plan = suites::Plan { m_max: a.m_max as usize, n_max: a.n_max as usize, tol: a.tol };
    let results = suites::run_all(&plan);
    let mut all = true;
    for s in &results {
        all &= s.passed;
        writeln!(out, "suite {}: {} {}", s.name, if s.passed { "PASS" } else { "FAIL" }, s.detail)?;
    }
    if all {
        writeln!(out, "all {} suites passed", results.len())?;
        Ok(EXIT_OK)
    } else {
        let failed: Vec<&str> = results.iter().filter(|s| !s.passed).map(|s| s.name).collect();
        writeln!(out, "failed: {}", failed.join(", "))?;
        Ok(EXIT_FAILURE)
    }
}

#[derive(Serialize)]
struct SimRow {
    state: usize,
    count: u64,
    frequency: f64,
    std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    within_3se: Option<bool>,
}

#[derive(Serialize)]
struct SimJson {
    schema: u32,
    params: ParamsJson,
    replications: u64,
    seed: u64,
    start: usize,
    t: f64,
    rows: Vec<SimRow>,
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = params(&a.queue)?;
    // counts do not depend on how replications are split across threads
    let states: Vec<usize> =
        (0..a.reps).into_par_iter().map(|rep| simulate_replication(&p, a.start, a.t, a.seed, rep)).collect();
    let res = McResult::from_states(states);
    let exact = if a.compare { Some(uniformization_rows(&p, &[a.start], a.t, 1e-13)?.remove(0)) } else { None };
    let top = res.max_state().max(a.start);
    let rows: Vec<SimRow> = (0..=top)
        .map(|s| {
            let f = res.frequency(s);
            let se = res.std_error(s);
            let p_exact = exact.as_ref().map(|e| e.get(s).copied().unwrap_or(0.0));
            SimRow {
                state: s,
                count: res.counts.get(s).copied().unwrap_or(0),
                frequency: f,
                std_error: se,
                p_exact,
                within_3se: p_exact.map(|e| (f - e).abs() <= 3.0 * se.max(1.0 / a.reps as f64)),
            }
        })
        .collect();
    let mut w = sink(a.output.out.as_deref(), out)?;
    if a.output.json {
        let params = ParamsJson { lambda: p.lambda, mu: p.mu, m: p.m };
        write_json(&mut w, &SimJson { schema: 1, params, replications: a.reps, seed: a.seed, start: a.start, t: a.t, rows })?;
    } else {
        let mut echo = vec![("command", "simulate".to_string())];
        echo.extend(queue_echo(&p));
        echo.extend([
            ("reps", a.reps.to_string()),
            ("seed", a.seed.to_string()),
            ("start", a.start.to_string()),
            ("t", num(a.t)),
        ]);
        let mut header = vec!["state", "count", "frequency", "std_error"];
        if a.compare {
            header.extend(["p_exact", "within_3se"]);
        }
        let table = rows
            .iter()
            .map(|r| {
                let mut v = vec![r.state.to_string(), r.count.to_string(), num(r.frequency), num(r.std_error)];
                if let (Some(e), Some(ok)) = (r.p_exact, r.within_3se) {
                    v.push(num(e));
                    v.push(ok.to_string());
                }
                v
            })
            .collect::<Vec<_>>();
        write_csv(&mut w, &echo, &header, &table)?;
    }
    Ok(EXIT_OK)
}
