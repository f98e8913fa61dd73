use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{build_generator, validate_params, GeneratorMatrix, QueueParams};
use crate::transition::poisson_tail;

/// Largest section the row engine grows to.
pub const MAX_SIZE: usize = 4096;
/// Row-sum deficit tolerated on requested rows.
pub const LEAK_THRESHOLD: f64 = 1e-9;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Poisson(qt) weights up to the point where the tail drops below `tol`.
fn poisson_weights(qt: f64, tol: f64) -> Vec<f64> {
    if qt == 0.0 {
        return vec![1.0];
    }
    let mut k = libm::floor(qt) as usize;
    while poisson_tail(qt, k) >= tol {
        k += 1 + k / 8;
    }
    (0..=k)
        .map(|j| libm::exp(-qt + j as f64 * libm::log(qt) - libm::lgamma(j as f64 + 1.0)))
        .collect()
}

/// x ← x S with S = I + A/q.
fn step(gen: &GeneratorMatrix, q: f64, x: &[f64], tmp: &mut [f64]) {
    gen.tmul_vec(x, tmp);
    for (t, &v) in tmp.iter_mut().zip(x) {
        *t = v + *t / q;
    }
}

fn propagate_row(gen: &GeneratorMatrix, start: usize, t: f64, weights: &[f64]) -> Vec<f64> {
    let p = &gen.params;
    let q = p.lambda + p.mu;
    let _ = t;
    let n = gen.dim;
    let mut x = vec![0.0; n];
    x[start] = 1.0;
    let mut acc = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for (k, &w) in weights.iter().enumerate() {
        if k > 0 {
            step(gen, q, &x, &mut tmp);
            core::mem::swap(&mut x, &mut tmp);
        }
        for (a, v) in acc.iter_mut().zip(&x) {
            *a += w * v;
        }
    }
    acc
}

/// e^{tA_N} as Σ_k e^{−qt}(qt)^k/k! S^k with q = λ + μ.
pub fn expm_uniformization(p: &QueueParams, size: usize, t: f64, tol: f64) -> Result<DenseMatrix> {
    validate_params(p)?;
    if !(tol > 0.0) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument("need t >= 0 and tol > 0"));
    }
    let need = (4.0 * (p.m as f64 + p.lambda * t)) as usize;
    if size < need.max(p.m + 2) {
        return Err(Error::TruncationTooSmall { need: need.max(p.m + 2), got: size });
    }
    let gen = build_generator(p, size)?;
    let weights = poisson_weights((p.lambda + p.mu) * t, tol);
    let mut data = Vec::with_capacity(size * size);
    for i in 0..size {
        data.extend(propagate_row(&gen, i, t, &weights));
    }
    Ok(DenseMatrix { dim: size, data })
}

/// Selected rows of e^{tA}, doubling the section until each row leaks less than
/// [`LEAK_THRESHOLD`] through the boundary.
pub fn uniformization_rows(p: &QueueParams, rows: &[usize], t: f64, tol: f64) -> Result<Vec<Vec<f64>>> {
    validate_params(p)?;
    if !(tol > 0.0) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument("need t >= 0 and tol > 0"));
    }
    let top = rows.iter().copied().max().unwrap_or(0);
    let mut size = ((4.0 * (p.m as f64 + p.lambda * t)) as usize).max(2 * top + p.m + 2).max(32);
    let weights = poisson_weights((p.lambda + p.mu) * t, tol);
    loop {
        let gen = build_generator(p, size)?;
        let out: Vec<Vec<f64>> = rows.iter().map(|&i| propagate_row(&gen, i, t, &weights)).collect();
        let worst = out.iter().map(|row| 1.0 - row.iter().sum::<f64>()).fold(0.0f64, f64::max);
        if worst <= LEAK_THRESHOLD + tol {
            return Ok(out);
        }
        if size >= MAX_SIZE {
            return Err(Error::TruncationTooSmall { need: 2 * size, got: size });
        }
        size = (2 * size).min(MAX_SIZE);
    }
}
