//! Interpolatory rule on the star built from the zeros of h_n.
//!
//! With n = d(m+1) + r and x_1 < … < x_d the zeros of h_n, the nodes are the (m+1)-th
//! roots y of each x_j and
//!     e_0ᵀ P(T) T^r e_0 ≈ Σ λ_j P(y) / ((m+1) y^{m+1−r}).
//! For r ≥ 1 the weight is λ_j = h_{n−1}(x_j)/h_n'(x_j); for r = 0 it is x_j times that.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::algebraic::AlgebraicConfig;
use crate::error::{Error, Result};
use crate::polynomials::{h_value_and_derivative, h_zeros};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub n: usize,
    pub m: usize,
    /// n mod (m+1).
    pub r: usize,
    pub zeros: Vec<f64>,
    /// One weight per zero; every node over the same zero shares it.
    pub weights: Vec<f64>,
    /// All (m+1)·d nodes, grouped by zero.
    pub nodes: Vec<Complex64>,
    /// Largest ν for which the rule integrates x^ν exactly.
    pub exactness_degree: usize,
    /// The degree bound 2(m+1)d + r − 1 that would hold for a Gaussian-type rule.
    pub nominal_degree: usize,
}

impl QuadratureRule {
    /// Σ over nodes of weight·f(y)/((m+1)·y^{m+1−r}).
    pub fn apply<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        let m1 = self.m + 1;
        let power = (m1 - self.r) as i32;
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &w) in self.weights.iter().enumerate() {
            for k in 0..m1 {
                let y = self.nodes[j * m1 + k];
                total += f(y) * y.powi(-power) * (w / m1 as f64);
            }
        }
        total
    }

    /// Σ of the weights over all (m+1)·d nodes.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() * (self.m + 1) as f64
    }
}

/// Smallest q with mq ≥ n and n + q ≡ 0 (mod m+1) gives exactness q + n − r − 1.
fn exact_degree(n: usize, m: usize, r: usize) -> usize {
    let mut q = 0;
    while m * q < n || !(n + q).is_multiple_of(m + 1) {
        q += 1;
    }
    q + n - r - 1
}

pub fn star_quadrature(cfg: &AlgebraicConfig, n: usize) -> Result<QuadratureRule> {
    let m = cfg.m;
    let m1 = m + 1;
    if n < m1 {
        return Err(Error::InvalidArgument("star quadrature needs n >= m + 1"));
    }
    let d = n / m1;
    let r = n % m1;
    let zeros = h_zeros(cfg, n)?;
    let mut weights = Vec::with_capacity(d);
    let mut nodes = Vec::with_capacity(d * m1);
    for &x in &zeros {
        let (prev, _) = h_value_and_derivative(cfg, n - 1, x);
        let (_, slope) = h_value_and_derivative(cfg, n, x);
        let w = if r == 0 { x * prev / slope } else { prev / slope };
        weights.push(w);
        let root = libm::pow(x, 1.0 / m1 as f64);
        for k in 0..m1 {
            nodes.push(Complex64::from_polar(root, 2.0 * PI * k as f64 / m1 as f64));
        }
    }
    Ok(QuadratureRule {
        n,
        m,
        r,
        zeros,
        weights,
        nodes,
        exactness_degree: exact_degree(n, m, r),
        nominal_degree: 2 * m1 * d + r - 1,
    })
}
