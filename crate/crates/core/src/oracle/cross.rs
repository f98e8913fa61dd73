use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{validate_params, QueueParams};
use crate::transition::{decay_rate, SpectralEngine};

use super::montecarlo::{simulate_mc, McConfig};
use super::picard::picard_propagate;
use super::uniformization::uniformization_rows;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossConfig {
    /// Allowed |spectral − uniformization|.
    pub tol: f64,
    /// Zero skips the simulation columns.
    pub mc_replications: u64,
    pub seed: u64,
}

impl Default for CrossConfig {
    fn default() -> Self {
        CrossConfig { tol: 1e-6, mc_replications: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossRow {
    pub n: usize,
    pub r: usize,
    pub t: f64,
    pub spectral: f64,
    pub uniformization: f64,
    pub picard: f64,
    /// Frequency and standard error.
    pub mc: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossReport {
    pub rows: Vec<CrossRow>,
    pub max_spectral_diff: f64,
    pub max_picard_diff: f64,
    /// Cells where simulation lies within 3 standard errors, out of cells simulated.
    pub mc_hits: usize,
    pub mc_cells: usize,
    /// λ = mμ: no exponential decay to assert.
    pub critical: bool,
    /// None when the decay check was skipped.
    pub decay_ok: Option<bool>,
    pub passed: bool,
}

pub fn cross_validate(p: &QueueParams, grid: &[(usize, usize, f64)], cfg: &CrossConfig) -> Result<CrossReport> {
    validate_params(p)?;
    let critical = p.is_critical();
    let mut report = CrossReport {
        rows: Vec::new(),
        max_spectral_diff: 0.0,
        max_picard_diff: 0.0,
        mc_hits: 0,
        mc_cells: 0,
        critical,
        decay_ok: None,
        passed: true,
    };
    if grid.is_empty() {
        return Ok(report);
    }
    let t_max = grid.iter().fold(0.0f64, |a, g| a.max(g.2));
    let engine = SpectralEngine::new(p, t_max)?;
    for &(n, r, t) in grid {
        let (spectral, _) = engine.probability(n, r, t)?;
        let row = uniformization_rows(p, &[n], t, 1e-14)?.remove(0);
        let uniformization = row.get(r).copied().unwrap_or(0.0);
        let picard_row = picard_propagate(p, row.len(), t, n)?.row;
        let picard = picard_row.get(r).copied().unwrap_or(0.0);
        let mc = if cfg.mc_replications > 0 {
            let res = simulate_mc(p, &McConfig { replications: cfg.mc_replications, seed: cfg.seed, start: n, horizon: t })?;
            let f = res.frequency(r);
            let se = res.std_error(r);
            report.mc_cells += 1;
            // A zero-variance cell counts as a hit when the analytic value is negligible.
            if (f - uniformization).abs() <= 3.0 * se.max(1.0 / cfg.mc_replications as f64) {
                report.mc_hits += 1;
            }
            Some((f, se))
        } else {
            None
        };
        report.max_spectral_diff = report.max_spectral_diff.max((spectral - uniformization).abs());
        report.max_picard_diff = report.max_picard_diff.max((picard - uniformization).abs());
        report.rows.push(CrossRow { n, r, t, spectral, uniformization, picard, mc });
    }
    if !critical {
        report.decay_ok = Some(decay_rate(p) <= 0.0);
    }
    report.passed = report.max_spectral_diff <= cfg.tol
        && report.max_picard_diff <= 1e-8
        && report.decay_ok != Some(false)
        && (report.mc_cells == 0 || report.mc_hits as f64 >= 0.85 * report.mc_cells as f64);
    Ok(report)
}
