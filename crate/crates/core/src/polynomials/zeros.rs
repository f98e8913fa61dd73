use alloc::vec::Vec;

use super::h_poly;
use crate::algebraic::AlgebraicConfig;
use crate::error::{Error, Result};

/// h_n(x) and h_n'(x) by running the recurrence on values.
pub fn h_value_and_derivative(cfg: &AlgebraicConfig, n: usize, x: f64) -> (f64, f64) {
    let m = cfg.m;
    let mut v: Vec<f64> = Vec::with_capacity(n + 1);
    let mut dv: Vec<f64> = Vec::with_capacity(n + 1);
    v.push(1.0);
    dv.push(0.0);
    for k in 0..n {
        let (nv, nd) = if k < m {
            (v[k], dv[k])
        } else if k % (m + 1) < m {
            (v[k] - cfg.c * v[k - m], dv[k] - cfg.c * dv[k - m])
        } else {
            (x * v[k] - cfg.c * v[k - m], v[k] + x * dv[k] - cfg.c * dv[k - m])
        };
        v.push(nv);
        dv.push(nd);
    }
    (v[n], dv[n])
}

/// The ⌊n/(m+1)⌋ real zeros of h_n in ascending order.
///
/// They are simple and lie in (0, a^{m+1}), so a sign-change scan on a grid that is
/// denser near both ends brackets each one, and bisection finishes it. Values come from
/// the recurrence, which stays accurate where the monomial coefficients cancel.
pub fn h_zeros(cfg: &AlgebraicConfig, n: usize) -> Result<Vec<f64>> {
    let d = n / (cfg.m + 1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let h = h_poly(cfg, n);
    if h.degree() != Some(d) {
        return Err(Error::ZeroFindingFailure { n });
    }
    let s = libm::pow(cfg.reduced_arm_length(), (cfg.m + 1) as f64) * (1.0 + 1e-6);
    let value = |x: f64| h_value_and_derivative(cfg, n, x).0;
    let mut points = 16 * (d + 1);
    let brackets = loop {
        let grid: Vec<f64> = (0..=points)
            .map(|k| {
                let th = core::f64::consts::FRAC_PI_2 * k as f64 / points as f64;
                s * libm::sin(th) * libm::sin(th)
            })
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&x| value(x)).collect();
        let found: Vec<(f64, f64, f64)> = (0..points)
            .filter(|&k| vals[k] == 0.0 || vals[k].signum() != vals[k + 1].signum() && vals[k + 1] != 0.0)
            .map(|k| (grid[k], grid[k + 1], vals[k]))
            .collect();
        if found.len() == d {
            break found;
        }
        if found.len() > d || points >= 1 << 16 {
            return Err(Error::ZeroFindingFailure { n });
        }
        points *= 2;
    };
    let mut zeros = Vec::with_capacity(d);
    for (mut lo, mut hi, flo) in brackets {
        if flo == 0.0 {
            zeros.push(lo);
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = value(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    let scale_of = |x: f64| h.coeffs.iter().enumerate().map(|(k, c)| c.abs() * libm::pow(x.abs(), k as f64)).sum::<f64>();
    for (i, &x) in zeros.iter().enumerate() {
        let (f, _) = h_value_and_derivative(cfg, n, x);
        if !(f.abs() <= 1e-10 * scale_of(x)) || !x.is_finite() {
            return Err(Error::ZeroFindingFailure { n });
        }
        if i > 0 && !(x > zeros[i - 1]) {
            return Err(Error::ZeroFindingFailure { n });
        }
    }
    Ok(zeros)
}
