//! Queue parameters and the truncated generator.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Arrival rate, batch-service rate and batch size of the queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueParams {
    pub lambda: f64,
    pub mu: f64,
    pub m: usize,
}

impl QueueParams {
    pub fn new(lambda: f64, mu: f64, m: usize) -> Result<Self> {
        let p = QueueParams { lambda, mu, m };
        validate_params(&p)?;
        Ok(p)
    }

    /// The constant μλ^m of the unscaled operator T.
    pub fn t_constant(&self) -> f64 {
        self.mu * libm::pow(self.lambda, self.m as f64)
    }

    /// λ = mμ, where the star touches the origin after the shift.
    pub fn is_critical(&self) -> bool {
        let lhs = self.lambda;
        let rhs = self.m as f64 * self.mu;
        (lhs - rhs).abs() <= 1e-12 * lhs.max(rhs)
    }

    /// Diagonal entry of row `i` of the generator.
    pub fn diagonal(&self, i: usize) -> f64 {
        if i < self.m {
            -self.lambda
        } else {
            -(self.lambda + self.mu)
        }
    }
}

pub fn validate_params(p: &QueueParams) -> Result<()> {
    if !(p.lambda.is_finite() && p.lambda > 0.0) {
        return Err(Error::NonPositiveRate { name: "lambda", value: p.lambda });
    }
    if !(p.mu.is_finite() && p.mu > 0.0) {
        return Err(Error::NonPositiveRate { name: "mu", value: p.mu });
    }
    if p.m == 0 {
        return Err(Error::ZeroBatchSize);
    }
    Ok(())
}

/// N-section of the generator, stored by its three bands.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    pub params: QueueParams,
    pub dim: usize,
}

pub fn build_generator(p: &QueueParams, n: usize) -> Result<GeneratorMatrix> {
    validate_params(p)?;
    if n < p.m + 2 {
        return Err(Error::TruncationTooSmall { need: p.m + 2, got: n });
    }
    Ok(GeneratorMatrix { params: *p, dim: n })
}

impl GeneratorMatrix {
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let p = &self.params;
        if i >= self.dim || j >= self.dim {
            return 0.0;
        }
        if j == i + 1 {
            p.lambda
        } else if j == i {
            p.diagonal(i)
        } else if i >= p.m && j == i - p.m {
            p.mu
        } else {
            0.0
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.dim).map(|j| self.entry(i, j)).collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(self.params.m)..(i + 2).min(n) {
                out[i * n + j] = self.entry(i, j);
            }
        }
        out
    }

    /// Exact row sum: the diagonal is minus the outgoing rates, so only the arrival edge cut
    /// off by the section on the last row is missing.
    pub fn row_sum(&self, i: usize) -> f64 {
        if i + 1 < self.dim {
            0.0
        } else {
            -self.params.lambda
        }
    }

    /// `out = A x`.
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        let p = &self.params;
        let n = self.dim;
        for i in 0..n {
            let mut s = p.diagonal(i) * x[i];
            if i + 1 < n {
                s += p.lambda * x[i + 1];
            }
            if i >= p.m {
                s += p.mu * x[i - p.m];
            }
            out[i] = s;
        }
    }

    /// `out = xᵀ A`, i.e. `Aᵀ x`.
    pub fn tmul_vec(&self, x: &[f64], out: &mut [f64]) {
        let p = &self.params;
        let n = self.dim;
        for j in 0..n {
            let mut s = p.diagonal(j) * x[j];
            if j >= 1 {
                s += p.lambda * x[j - 1];
            }
            if j + p.m < n {
                s += p.mu * x[j + p.m];
            }
            out[j] = s;
        }
    }
}
