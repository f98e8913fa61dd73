//! Gauss–Legendre panels on [0, a] under the grading t = a·sin²θ.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

const ORDER: usize = 16;

/// ∫_0^a f(t) dt with the sin² grading, on `panels` equal θ-panels.
fn graded_sum<F>(a: f64, panels: usize, nodes: &[f64], weights: &[f64], f: &mut F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let h = 0.5 * PI / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in nodes.iter().zip(weights) {
            let th = mid + 0.5 * h * x;
            let (s, c) = (libm::sin(th), libm::cos(th));
            let t = a * s * s;
            total += f(t)? * (2.0 * a * s * c * 0.5 * h * w);
        }
    }
    Ok(total)
}

/// Panel doubling until successive values differ by less than `tol·max(1, |I|)`.
pub(crate) fn graded_integral<F>(a: f64, tol: f64, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let (nodes, weights) = gauss_legendre(ORDER);
    let mut panels = 4;
    let mut prev = graded_sum(a, panels, &nodes, &weights, &mut f)?;
    while panels < 4096 {
        panels *= 2;
        let cur = graded_sum(a, panels, &nodes, &weights, &mut f)?;
        let change = (cur - prev).norm();
        if change < tol * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged { estimate: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_low_degree() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn square_root_endpoint() {
        let v = graded_integral(2.0, 1e-12, |t| Ok(Complex64::new(libm::sqrt(2.0 - t), 0.0))).unwrap();
        assert!((v.re - 2.0 / 3.0 * libm::pow(2.0, 1.5)).abs() < 1e-11);
    }
}
