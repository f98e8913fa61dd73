use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{build_generator, QueueParams};

/// Row n of e^{tA_N} by successive approximation y_k = b + ∫_0^t Aᵀ y_{k−1},
/// whose increments are g_k = (tAᵀ)^k b / k!.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardState {
    pub size: usize,
    pub t: f64,
    /// Band reach m + 2.
    pub ell: f64,
    /// Largest entry modulus λ + μ.
    pub big_m: f64,
    /// Largest modulus of the initial vector.
    pub b: f64,
    pub increment_norms: Vec<f64>,
    /// (ℓMt)^k B / k!.
    pub bounds: Vec<f64>,
    pub row: Vec<f64>,
}

impl PicardState {
    pub fn bounds_hold(&self) -> bool {
        self.increment_norms.iter().zip(&self.bounds).all(|(g, b)| *g <= *b * (1.0 + 1e-12))
    }
}

fn iterate(p: &QueueParams, size: usize, t: f64, b: Vec<f64>, k_max: usize) -> Result<PicardState> {
    let gen = build_generator(p, size)?;
    let ell = (p.m + 2) as f64;
    let big_m = p.lambda + p.mu;
    let bnorm = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut y = b.clone();
    let mut g = b;
    let mut tmp = vec![0.0; size];
    let mut norms = vec![bnorm];
    let mut bounds = vec![bnorm];
    let mut bound = bnorm;
    for k in 1..=k_max {
        gen.tmul_vec(&g, &mut tmp);
        let f = t / k as f64;
        for v in tmp.iter_mut() {
            *v *= f;
        }
        core::mem::swap(&mut g, &mut tmp);
        for (a, v) in y.iter_mut().zip(&g) {
            *a += v;
        }
        bound *= ell * big_m * t / k as f64;
        norms.push(g.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        bounds.push(bound);
    }
    Ok(PicardState { size, t, ell, big_m, b: bnorm, increment_norms: norms, bounds, row: y })
}

/// K Picard iterates on [0, t] from b = e_n. Fails when the last increment is not negligible.
pub fn picard_solve(p: &QueueParams, size: usize, t: f64, n: usize, k: usize) -> Result<PicardState> {
    if n >= size {
        return Err(Error::TruncationTooSmall { need: n + 1, got: size });
    }
    let mut b = vec![0.0; size];
    b[n] = 1.0;
    let state = iterate(p, size, t, b, k)?;
    let last = *state.increment_norms.last().unwrap();
    if k > 0 && last > 1e-15 {
        return Err(Error::IterationBudgetExceeded { k, increment: last });
    }
    Ok(state)
}

/// Row n of e^{tA_N} by Picard iteration on sub-intervals short enough that ℓMh ≤ 1,
/// restarting from the previous end value; the increment records cover the first piece.
pub fn picard_propagate(p: &QueueParams, size: usize, t: f64, n: usize) -> Result<PicardState> {
    if n >= size {
        return Err(Error::TruncationTooSmall { need: n + 1, got: size });
    }
    let reach = (p.m + 2) as f64 * (p.lambda + p.mu);
    let pieces = libm::ceil(reach * t).max(1.0) as usize;
    let h = t / pieces as f64;
    let mut b = vec![0.0; size];
    b[n] = 1.0;
    let mut first: Option<PicardState> = None;
    for _ in 0..pieces {
        let s = iterate(p, size, h, b, 40)?;
        b = s.row.clone();
        if first.is_none() {
            first = Some(s);
        }
    }
    let mut state = first.unwrap();
    state.t = t;
    state.row = b;
    Ok(state)
}
