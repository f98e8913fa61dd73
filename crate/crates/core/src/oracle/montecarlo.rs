use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{validate_params, QueueParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub replications: u64,
    pub seed: u64,
    pub start: usize,
    pub horizon: f64,
}

/// Empirical distribution of the state at the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub replications: u64,
    /// `counts[i]` replications ended in state i.
    pub counts: Vec<u64>,
}

impl McResult {
    pub fn from_states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        let mut counts = Vec::new();
        let mut total = 0u64;
        for s in states {
            if s >= counts.len() {
                counts.resize(s + 1, 0);
            }
            counts[s] += 1;
            total += 1;
        }
        McResult { replications: total, counts }
    }

    pub fn frequency(&self, state: usize) -> f64 {
        if self.replications == 0 {
            return 0.0;
        }
        self.counts.get(state).copied().unwrap_or(0) as f64 / self.replications as f64
    }

    /// Binomial standard error sqrt(p(1 − p)/n).
    pub fn std_error(&self, state: usize) -> f64 {
        if self.replications == 0 {
            return 0.0;
        }
        let f = self.frequency(state);
        libm::sqrt(f * (1.0 - f) / self.replications as f64)
    }

    pub fn max_state(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }
}

/// Uniform draw in (0, 1].
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
}

/// One path from `start` to `horizon` on the stream keyed by (seed, rep).
pub fn simulate_replication(p: &QueueParams, start: usize, horizon: f64, seed: u64, rep: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    let total = p.lambda + p.mu;
    let mut state = start;
    let mut clock = 0.0;
    loop {
        let rate = if state < p.m { p.lambda } else { total };
        clock += -libm::log(open_uniform(&mut rng)) / rate;
        if clock > horizon {
            return state;
        }
        if state < p.m || open_uniform(&mut rng) * total <= p.lambda {
            state += 1;
        } else {
            state -= p.m;
        }
    }
}

pub fn simulate_mc(p: &QueueParams, cfg: &McConfig) -> Result<McResult> {
    validate_params(p)?;
    if cfg.replications == 0 {
        return Err(Error::InvalidArgument("replications must be at least 1"));
    }
    if !(cfg.horizon >= 0.0 && cfg.horizon.is_finite()) {
        return Err(Error::InvalidArgument("horizon must be finite and non-negative"));
    }
    let mut counts = vec![0u64; cfg.start + 1];
    for rep in 0..cfg.replications {
        let s = simulate_replication(p, cfg.start, cfg.horizon, cfg.seed, rep);
        if s >= counts.len() {
            counts.resize(s + 1, 0);
        }
        counts[s] += 1;
    }
    Ok(McResult { replications: cfg.replications, counts })
}
