//! Closed forms of Q_n and q_{j,r} as sums over the branches ω_0, …, ω_m of
//! λω^{m+1} − (z+λ+μ)ω^m + μ = 0.

use alloc::vec::Vec;
use num_complex::Complex64;

use super::dual_values;
use crate::algebraic::{solve_branches, AlgebraicConfig};
use crate::error::{Error, Result};
use crate::model::QueueParams;

/// Threshold below which a closed-form denominator is treated as singular.
pub const EPS_SING: f64 = 1e-8;

/// Per-branch quantities of the closed forms at one point z.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitCoefficients {
    pub omega: Vec<Complex64>,
    /// Q_n(z) = Σ_j a[j] ω_j^n.
    pub a: Vec<Complex64>,
    /// 1/(ω_k^{m+1} − mμ/λ).
    pub e: Vec<Complex64>,
    /// q_{j,r}(z) = Σ_k b[j][k] ω_k^{m−r} for r ≥ m−1.
    pub b: Vec<Vec<Complex64>>,
    /// d[j][s] = q_{j,m+s}(z), s = 0..=m.
    pub d: Vec<Vec<Complex64>>,
    /// w[k][s] = ω_k^{−s}, so that d = b·w.
    pub w: Vec<Vec<Complex64>>,
    /// Inverse of w.
    pub w_inv: Vec<Vec<Complex64>>,
}

fn branches(p: &QueueParams, z: Complex64) -> Result<Vec<Complex64>> {
    let bv = solve_branches(&AlgebraicConfig::a_frame(p), z)?;
    for &w in &bv.omega {
        if w.norm() <= EPS_SING {
            return Err(Error::NearSingularConfiguration { value: w.norm() });
        }
    }
    Ok(bv.omega)
}

fn e_factors(p: &QueueParams, omega: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = p.m as u32;
    let crit = p.m as f64 * p.mu / p.lambda;
    omega
        .iter()
        .map(|w| {
            let den = w.powu(m + 1) - crit;
            if den.norm() <= EPS_SING {
                Err(Error::NearSingularConfiguration { value: den.norm() })
            } else {
                Ok(den.inv())
            }
        })
        .collect()
}

fn a_factors(p: &QueueParams, omega: &[Complex64], e: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = p.m as u32;
    let ratio = p.mu / p.lambda;
    omega
        .iter()
        .zip(e)
        .map(|(&w, &ek)| {
            let wm = w.powu(m);
            let den = wm - 1.0;
            if den.norm() <= EPS_SING {
                return Err(Error::NearSingularConfiguration { value: den.norm() });
            }
            let num = (w + (wm.inv() - 1.0) * ratio).powu(m) - 1.0;
            // ω^m − mμ/(λω) = (ω^{m+1} − mμ/λ)/ω
            Ok(num * wm * w * ek / den)
        })
        .collect()
}

fn b_table(p: &QueueParams, omega: &[Complex64], e: &[Complex64]) -> Vec<Vec<Complex64>> {
    let m = p.m;
    let ratio = p.mu / p.lambda;
    (0..m)
        .map(|j| {
            omega
                .iter()
                .zip(e)
                .map(|(&w, &ek)| (Complex64::new(1.0, 0.0) - w.powu(m as u32).inv()) * w.powu(j as u32) * ek * ratio)
                .collect()
        })
        .collect()
}

pub fn explicit_coefficients(p: &QueueParams, z: Complex64) -> Result<ExplicitCoefficients> {
    let m = p.m;
    let omega = branches(p, z)?;
    let e = e_factors(p, &omega)?;
    let a = a_factors(p, &omega, &e)?;
    let b = b_table(p, &omega, &e);
    let duals = dual_values(p, 2 * m, z);
    let d = (0..m).map(|j| (0..=m).map(|s| duals[m + s][j]).collect()).collect();
    let w = omega.iter().map(|&wk| (0..=m).map(|s| wk.powi(-(s as i32))).collect()).collect();
    let ratio = p.mu / p.lambda;
    let w_inv = (0..=m)
        .map(|s| {
            omega
                .iter()
                .zip(&e)
                .map(|(&wk, &ek)| if s == 0 { wk.powu(m as u32 + 1) * ek } else { -wk.powu(s as u32) * ek * ratio })
                .collect()
        })
        .collect();
    Ok(ExplicitCoefficients { omega, a, e, b, d, w, w_inv })
}

/// Q_n(z) from the branch sum; errors near removable singularities.
pub fn q_explicit(p: &QueueParams, n: usize, z: Complex64) -> Result<Complex64> {
    let omega = branches(p, z)?;
    let e = e_factors(p, &omega)?;
    let a = a_factors(p, &omega, &e)?;
    Ok(omega.iter().zip(&a).map(|(w, a)| a * w.powu(n as u32)).sum())
}

/// q_{j,r}(z) from the branch sum, valid for r ≥ m − 1.
pub fn dual_explicit(p: &QueueParams, r: usize, j: usize, z: Complex64) -> Result<Complex64> {
    if j >= p.m {
        return Err(Error::InvalidArgument("component index must be below m"));
    }
    if r + 1 < p.m {
        return Err(Error::InvalidArgument("closed form needs r >= m - 1"));
    }
    let omega = branches(p, z)?;
    let e = e_factors(p, &omega)?;
    let b = b_table(p, &omega, &e);
    let shift = p.m as i32 - r as i32;
    Ok(omega.iter().zip(&b[j]).map(|(w, b)| b * w.powi(shift)).sum())
}
