//! The invariant battery behind `bulkq validate`. Each suite returns one verdict line.

use bulkq_core::algebraic::{solve_branches, AlgebraicConfig};
use bulkq_core::operators::{moment, OperatorSpec};
use bulkq_core::oracle::{cross_validate, CrossConfig};
use bulkq_core::polynomials::{dual_explicit, dual_values, h_poly, h_zeros, l_poly, q_explicit, q_values, t_poly};
use bulkq_core::spectral::{rotated_moment, star_quadrature, SpectralFunctional};
use bulkq_core::transition::{honesty_check, semigroup_check, tail_bound, SpectralEngine};
use bulkq_core::{Complex64, Error, QueueParams, Result};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct Plan {
    pub m_max: usize,
    pub n_max: usize,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Suite = fn(&Plan) -> Result<(bool, String)>;

const SUITES: [(&str, Suite); 7] = [
    ("branches", branches),
    ("polynomials", polynomials),
    ("quadrature", quadrature),
    ("moments", moments),
    ("orthogonality", orthogonality),
    ("transition-properties", properties),
    ("oracle-agreement", oracles),
];

/// Rates shared by the suites that need queue parameters.
const RATES: [(f64, f64); 3] = [(1.0, 1.0), (0.7, 1.4), (2.0, 0.6)];

pub fn run_all(plan: &Plan) -> Vec<SuiteResult> {
    SUITES
        .par_iter()
        .map(|&(name, suite)| match suite(plan) {
            Ok((passed, detail)) => SuiteResult { name, passed, detail },
            Err(e) => SuiteResult { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}

fn grid(radius: f64, steps: usize) -> Vec<Complex64> {
    let h = 2.0 * radius / (steps - 1) as f64;
    (0..steps)
        .flat_map(|i| (0..steps).map(move |k| Complex64::new(-radius + h * i as f64 + 0.013, -radius + h * k as f64 + 0.007)))
        .collect()
}

fn queues(plan: &Plan) -> impl Iterator<Item = QueueParams> + '_ {
    RATES.iter().flat_map(move |&(l, mu)| (1..=plan.m_max).map(move |m| QueueParams::new(l, mu, m).unwrap()))
}

fn branches(plan: &Plan) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut misordered = 0;
    for m in 1..=plan.m_max {
        for c in [0.3, 1.0, 2.5] {
            let cfg = AlgebraicConfig::new(c, m)?;
            for z in grid(5.0, 15) {
                let bv = solve_branches(&cfg, z)?;
                worst = bv.vieta_residuals(c).into_iter().fold(worst, f64::max);
                misordered += bv.omega.windows(2).filter(|w| w[0].norm() < w[1].norm()).count();
            }
        }
    }
    Ok((worst <= 1e-10 && misordered == 0, format!("max vieta residual {worst:.2e}, misordered {misordered}")))
}

fn polynomials(plan: &Plan) -> Result<(bool, String)> {
    let (mut q_err, mut d_err, mut l_err, mut h_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let n_top = plan.n_max.min(20);
    for p in queues(plan) {
        let m = p.m;
        for z in grid(2.0, 5) {
            let qs = q_values(&p, n_top, z);
            for (n, rec) in qs.iter().enumerate().skip(1) {
                match q_explicit(&p, n, z) {
                    Ok(v) => q_err = q_err.max((v - rec).norm() / (1.0 + rec.norm())),
                    Err(Error::NearSingularConfiguration { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            let ds = dual_values(&p, n_top.max(2 * m), z);
            for r in 2 * m..=n_top.max(2 * m) {
                for j in 0..m {
                    match dual_explicit(&p, r, j, z) {
                        Ok(v) => d_err = d_err.max((v - ds[r][j]).norm() / (1.0 + ds[r][j].norm())),
                        Err(Error::NearSingularConfiguration { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            let shifted = q_values(&p, n_top, z - p.lambda - p.mu);
            for (n, q) in shifted.iter().enumerate() {
                let l = l_poly(&p, n).eval_complex(z);
                l_err = l_err.max((l - q * p.lambda.powi(n as i32)).norm() / (1.0 + l.norm()));
            }
        }
        let cfg = AlgebraicConfig::t_frame(&p);
        for n in 0..=n_top {
            let back = h_poly(&cfg, n).compose_power(m + 1).shift_up(n % (m + 1));
            let t = t_poly(&cfg, n);
            for k in 0..=n {
                h_err = h_err.max((back.coeff(k) - t.coeff(k)).abs() / t.max_abs_coeff());
            }
        }
    }
    let ok = q_err <= 1e-9 && d_err <= 1e-8 && l_err <= 1e-8 && h_err <= 1e-12;
    Ok((ok, format!("closed form Q {q_err:.2e}, dual {d_err:.2e}, L shift {l_err:.2e}, h recomposition {h_err:.2e}")))
}

/// Rules must have positive weights, interlacing zeros and be exact up to their exactness degree.
fn quadrature(plan: &Plan) -> Result<(bool, String)> {
    let (mut negative, mut short, mut interlace) = (0, 0, 0);
    let mut mass: f64 = 0.0;
    for p in queues(plan) {
        let m = p.m;
        let cfg = AlgebraicConfig::t_frame(&p);
        let mut prev: Vec<f64> = Vec::new();
        for n in m + 1..=plan.n_max {
            let rule = star_quadrature(&cfg, n)?;
            negative += rule.weights.iter().filter(|w| !(**w > 0.0)).count();
            let target = (m + 1) as f64 * p.t_constant();
            mass = mass.max((rule.total_weight() - target).abs() / target);
            let spec = OperatorSpec::t(&cfg, (rule.exactness_degree + rule.r + 2) * (m + 1) + m);
            for deg in 0..=rule.exactness_degree {
                let exact = moment(&spec, deg + rule.r, 1)?;
                let approx = rule.apply(|y| y.powu(deg as u32));
                let power = (deg as f64 - (m + 1 - rule.r) as f64) / (m + 1) as f64;
                let scale: f64 = rule.zeros.iter().zip(&rule.weights).map(|(x, w)| w * x.powf(power)).sum();
                if (approx - exact).norm() > 1e-9 * (1.0 + exact.abs().max(scale)) {
                    short += 1;
                    break;
                }
            }
            if rule.zeros.len() == prev.len() + 1 {
                for (k, &x) in prev.iter().enumerate() {
                    if !(rule.zeros[k] < x && x < rule.zeros[k + 1]) {
                        interlace += 1;
                    }
                }
            }
            prev = h_zeros(&cfg, n)?;
        }
    }
    let ok = negative == 0 && short == 0 && interlace == 0 && mass <= 1e-10;
    Ok((ok, format!("nonpositive weights {negative}, inexact rules {short}, interlacing violations {interlace}, mass {mass:.2e}")))
}

fn moments(plan: &Plan) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in 1..=plan.m_max {
        for c in [0.5, 1.5] {
            let cfg = AlgebraicConfig::new(c, m)?;
            let t = OperatorSpec::t(&cfg, 12 * (m + 1));
            for j in 1..=m {
                for nu in 0..=8 {
                    let quad = rotated_moment(&cfg, j, nu)?;
                    worst = worst.max((quad - moment(&t, nu, j)?).norm());
                }
            }
        }
    }
    Ok((worst <= 1e-7, format!("max |star moment - operator moment| {worst:.2e}")))
}

fn orthogonality(plan: &Plan) -> Result<(bool, String)> {
    let top = plan.n_max.min(12);
    let mut worst: f64 = 0.0;
    for p in queues(plan).filter(|p| p.m <= 3) {
        let (values, _) = SpectralFunctional::new(&p)?.orthogonality_matrix(top, top)?;
        for (n, row) in values.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                worst = worst.max((v - if n == r { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok((worst <= 1e-6, format!("n, r <= {top}: max deviation from delta {worst:.2e}")))
}

fn properties(plan: &Plan) -> Result<(bool, String)> {
    let (mut identity, mut lowest, mut honesty, mut semigroup, mut continuity) = (0.0f64, f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    let top = plan.n_max.min(8);
    for p in queues(plan) {
        let engine = SpectralEngine::new(&p, 5.0)?;
        for r in 0..=top {
            let col = engine.column(r, top, &[0.0, 1e-4, 0.5, 2.0, 5.0])?;
            for n in 0..=top {
                let delta = if n == r { 1.0 } else { 0.0 };
                identity = identity.max((col[0][n].0 - delta).abs());
                continuity = continuity.max((col[1][n].0 - delta).abs());
                for c in &col[2..] {
                    lowest = lowest.min(c[n].0);
                }
            }
        }
        let r_max = (0..).find(|&k| tail_bound(&p, 1, 1.0, k) < 1e-10).unwrap();
        honesty = honesty.max((honesty_check(&p, 1, 1.0, r_max)? - 1.0).abs());
        let k_max = (0..).find(|&k| tail_bound(&p, 1, 0.4, k) < 1e-10).unwrap();
        semigroup = semigroup.max(semigroup_check(&p, 1, 2, 0.4, 0.6, k_max)?);
    }
    let ok = identity <= 1e-10 && lowest >= -1e-7 && honesty <= 1e-7 && semigroup <= 1e-7 && continuity <= 1e-3;
    Ok((
        ok,
        format!(
            "t=0 identity {identity:.2e}, lowest value {lowest:.2e}, honesty {honesty:.2e}, \
             semigroup {semigroup:.2e}, |P(1e-4) - I| {continuity:.2e}"
        ),
    ))
}

fn oracles(plan: &Plan) -> Result<(bool, String)> {
    let top = plan.n_max.min(8);
    let grid: Vec<(usize, usize, f64)> = [0.1, 1.0, 5.0]
        .iter()
        .flat_map(|&t| (0..=top).step_by(2).flat_map(move |n| (0..=top).map(move |r| (n, r, t))))
        .collect();
    let cfg = CrossConfig { tol: plan.tol, ..CrossConfig::default() };
    let (mut spectral, mut picard, mut failed) = (0.0f64, 0.0f64, 0);
    for p in queues(plan) {
        let report = cross_validate(&p, &grid, &cfg)?;
        spectral = spectral.max(report.max_spectral_diff);
        picard = picard.max(report.max_picard_diff);
        failed += usize::from(!report.passed);
    }
    Ok((failed == 0, format!("max |spectral - uniformization| {spectral:.2e}, max |picard - uniformization| {picard:.2e}")))
}
