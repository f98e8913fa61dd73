//! Weights on the arms of the reduced star and the Markov functions they represent.

use core::f64::consts::PI;
use num_complex::Complex64;

use crate::algebraic::{boundary_values, solve_branches, AlgebraicConfig};
use crate::error::{Error, Result};
use crate::quad::graded_integral;

/// Arm-integration tolerance between panel doublings.
const PANEL_TOL: f64 = 1e-11;

/// w(t) = (1/ω₋ − 1/ω₊)/(2πi) on the positive arm; unit total mass over the m+1 arms.
pub fn weight_rho(cfg: &AlgebraicConfig, t: f64) -> Result<f64> {
    let (wp, wm) = boundary_values(cfg, t)?;
    let v = (wm.inv() - wp.inv()) / Complex64::new(0.0, 2.0 * PI);
    Ok(v.re)
}

/// Σ_{k<j} ω₊^{−(j−1−k)} ω₋^{−k}, real by conjugacy; equals 1 for j = 1.
pub fn weight_rho_j(cfg: &AlgebraicConfig, j: usize, t: f64) -> Result<f64> {
    if j == 0 || j > cfg.m {
        return Err(Error::InvalidArgument("weight index j must be in 1..=m"));
    }
    let (wp, wm) = boundary_values(cfg, t)?;
    let (ip, im) = (wp.inv(), wm.inv());
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..j {
        s += ip.powu((j - 1 - k) as u32) * im.powu(k as u32);
    }
    Ok(s.re)
}

/// Product density ρ̃_j(x)ρ̃(x) at a point x of the star, using the rotation rule
/// ρ̃_j(x)ρ̃(x) = ε^{−j} ρ̃_j(|x|)ρ̃(|x|) on the arm with direction ε.
pub fn star_density(cfg: &AlgebraicConfig, j: usize, x: Complex64) -> Result<Complex64> {
    let m1 = cfg.m + 1;
    let turns = x.arg() * m1 as f64 / (2.0 * PI);
    let k = libm::round(turns);
    if (turns - k).abs() > 1e-9 {
        return Err(Error::NotOnOpenArm { t: x.norm(), a: cfg.reduced_arm_length() });
    }
    let eps = Complex64::from_polar(1.0, 2.0 * PI * k / m1 as f64);
    let t = x.norm();
    Ok(eps.powi(-(j as i32)) * weight_rho_j(cfg, j, t)? * weight_rho(cfg, t)?)
}

fn arm_integral<F>(cfg: &AlgebraicConfig, j: usize, mut g: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let a = cfg.reduced_arm_length();
    graded_integral(a, PANEL_TOL, |t| Ok(g(t) * weight_rho_j(cfg, j, t)? * weight_rho(cfg, t)?))
}

/// Σ_k ε_k^{ν−j+1} ∫_0^a t^ν ρ̃_j(t) w(t) dt, the ν-th moment of ρ̃_jρ̃ over the whole star.
pub fn rotated_moment(cfg: &AlgebraicConfig, j: usize, nu: usize) -> Result<Complex64> {
    let arm = arm_integral(cfg, j, |t| Complex64::new(libm::pow(t, nu as f64), 0.0))?;
    let m1 = cfg.m + 1;
    let mut rot = Complex64::new(0.0, 0.0);
    for k in 0..m1 {
        let e = (nu as i64 - j as i64 + 1).rem_euclid(m1 as i64) as f64;
        rot += Complex64::from_polar(1.0, 2.0 * PI * k as f64 * e / m1 as f64);
    }
    Ok(rot * arm)
}

/// |1/ω_0(z)^j − z^{1−j} ∫_star x^{j−1} ρ̃_j(x) ρ̃(x) dx/(z − x)|.
pub fn markov_residual(cfg: &AlgebraicConfig, j: usize, z: Complex64) -> Result<f64> {
    if j == 0 || j > cfg.m {
        return Err(Error::InvalidArgument("weight index j must be in 1..=m"));
    }
    let m1 = cfg.m + 1;
    let dirs: alloc::vec::Vec<Complex64> =
        (0..m1).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m1 as f64)).collect();
    let zeta = cfg.reduce(z);
    let integral = arm_integral(cfg, j, |t| {
        let mut s = Complex64::new(0.0, 0.0);
        for &e in &dirs {
            s += (zeta - e * t).inv();
        }
        s * libm::pow(t, (j - 1) as f64)
    })?;
    let right = integral * zeta.powi(1 - j as i32);
    let left = solve_branches(cfg, z)?.dominant().powi(-(j as i32));
    Ok((left - right).norm())
}
