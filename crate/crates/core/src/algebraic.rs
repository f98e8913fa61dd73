//! Branches of ω^{m+1} − zω^m + c = 0, the star where the two largest branches meet,
//! and boundary values on its arms.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::QueueParams;
use crate::roots::{polynomial_roots, sort_by_modulus};

/// Root tolerance used by [`solve_branches`].
pub const EPS_ROOT: f64 = 1e-12;

/// Which variable the caller works in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    /// z is the variable of the reduced equation itself.
    T,
    /// z is the spectral variable of the generator; the reduced variable is (z + λ + μ)/λ.
    A { lambda: f64, mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicConfig {
    pub c: f64,
    pub m: usize,
    pub frame: Frame,
}

impl AlgebraicConfig {
    pub fn new(c: f64, m: usize) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::NonPositiveRate { name: "c", value: c });
        }
        if m == 0 {
            return Err(Error::ZeroBatchSize);
        }
        Ok(AlgebraicConfig { c, m, frame: Frame::T })
    }

    /// c = μλ^m, the constant of the operator T.
    pub fn t_frame(p: &QueueParams) -> Self {
        AlgebraicConfig { c: p.t_constant(), m: p.m, frame: Frame::T }
    }

    /// c = μ/λ with the generator's spectral variable.
    pub fn a_frame(p: &QueueParams) -> Self {
        AlgebraicConfig { c: p.mu / p.lambda, m: p.m, frame: Frame::A { lambda: p.lambda, mu: p.mu } }
    }

    /// Map the caller's variable to the variable of the reduced equation.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        match self.frame {
            Frame::T => z,
            Frame::A { lambda, mu } => (z + lambda + mu) / lambda,
        }
    }

    pub fn unreduce(&self, zeta: Complex64) -> Complex64 {
        match self.frame {
            Frame::T => zeta,
            Frame::A { lambda, mu } => zeta * lambda - lambda - mu,
        }
    }

    /// Arm length of the star of the reduced equation, ((m+1)/m)(mc)^{1/(m+1)}.
    pub fn reduced_arm_length(&self) -> f64 {
        let m = self.m as f64;
        (m + 1.0) / m * libm::pow(m * self.c, 1.0 / (m + 1.0))
    }

    fn scale(&self) -> f64 {
        match self.frame {
            Frame::T => 1.0,
            Frame::A { lambda, .. } => lambda,
        }
    }
}

/// The m+1 roots at one point, largest modulus first.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchValues {
    pub z: Complex64,
    /// The point in the reduced variable.
    pub zeta: Complex64,
    pub omega: Vec<Complex64>,
}

impl BranchValues {
    pub fn dominant(&self) -> Complex64 {
        self.omega[0]
    }

    /// Relative defects of the elementary symmetric functions: e_1 = ζ, e_k = 0 for
    /// 2 ≤ k ≤ m, e_{m+1} = (−1)^{m+1} c. Entry k−1 belongs to e_k.
    pub fn vieta_residuals(&self, c: f64) -> Vec<f64> {
        let d = self.omega.len();
        let m = d - 1;
        let mut e = vec![Complex64::new(0.0, 0.0); d + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for (i, &w) in self.omega.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                e[k] = e[k] + e[k - 1] * w;
            }
        }
        let big = self.omega.iter().map(|w| w.norm()).fold(1.0, f64::max);
        let mut out = Vec::with_capacity(d);
        let mut binom = 1.0;
        for k in 1..=d {
            binom = binom * (d - k + 1) as f64 / k as f64;
            let target = if k == 1 {
                self.zeta
            } else if k == d {
                let sign = if (m + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                Complex64::new(sign * c, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let scale = binom * libm::pow(big, k as f64);
            out.push((e[k] - target).norm() / scale);
        }
        out
    }
}

/// Sorted roots of ω^{m+1} − ζω^m + c in the reduced variable.
pub fn reduced_roots(c: f64, m: usize, zeta: Complex64) -> Result<Vec<Complex64>> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(Error::InvalidArgument("z must be finite"));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m + 2];
    coeffs[0] = Complex64::new(c, 0.0);
    coeffs[m] = -zeta;
    coeffs[m + 1] = Complex64::new(1.0, 0.0);
    let mut roots = polynomial_roots(&coeffs)?;
    for &w in &roots {
        let residual = (w.powu(m as u32 + 1) - zeta * w.powu(m as u32) + c).norm();
        let bound = EPS_ROOT * (1.0 + zeta.norm()) * libm::pow(w.norm().max(1.0), (m + 1) as f64);
        if !(residual <= bound) {
            return Err(Error::RootSolveFailure { re: zeta.re, im: zeta.im });
        }
    }
    sort_by_modulus(&mut roots);
    Ok(roots)
}

pub fn solve_branches(cfg: &AlgebraicConfig, z: Complex64) -> Result<BranchValues> {
    let zeta = cfg.reduce(z);
    let omega = reduced_roots(cfg.c, cfg.m, zeta)?;
    Ok(BranchValues { z, zeta, omega })
}

/// Points where two branches collide, with the double root there.
pub fn branch_points(cfg: &AlgebraicConfig) -> Vec<(Complex64, Complex64)> {
    let m = cfg.m as f64;
    let w_mod = libm::pow(m * cfg.c, 1.0 / (m + 1.0));
    let z_mod = (m + 1.0) / m * w_mod;
    (0..=cfg.m)
        .map(|k| {
            let rot = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / (m + 1.0));
            (cfg.unreduce(rot * z_mod), rot * w_mod)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarGeometry {
    pub arm_count: usize,
    pub arm_length: f64,
    pub rotation: Complex64,
    pub center: Complex64,
}

impl StarGeometry {
    /// Endpoint of arm k.
    pub fn tip(&self, k: usize) -> Complex64 {
        self.center + self.rotation.powu(k as u32) * self.arm_length
    }

    /// Distance from z to the union of the arms.
    pub fn distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for k in 0..self.arm_count {
            let dir = self.rotation.powu(k as u32);
            let local = (z - self.center) * dir.conj();
            let t = local.re.clamp(0.0, self.arm_length);
            best = best.min((local - t).norm());
        }
        best
    }
}

/// The star in the caller's variable.
pub fn star_geometry(cfg: &AlgebraicConfig) -> StarGeometry {
    let m = cfg.m as f64;
    StarGeometry {
        arm_count: cfg.m + 1,
        arm_length: cfg.scale() * cfg.reduced_arm_length(),
        rotation: Complex64::from_polar(1.0, 2.0 * PI / (m + 1.0)),
        center: cfg.unreduce(Complex64::new(0.0, 0.0)),
    }
}

/// Limits of the dominant branch from above (`ω₊`, positive imaginary part) and below
/// at the point t of the positive arm of the reduced star, 0 < t < a.
pub fn boundary_values(cfg: &AlgebraicConfig, t: f64) -> Result<(Complex64, Complex64)> {
    let a = cfg.reduced_arm_length();
    if !(t > 0.0 && t < a) {
        return Err(Error::NotOnOpenArm { t, a });
    }
    let roots = reduced_roots(cfg.c, cfg.m, Complex64::new(t, 0.0))?;
    // Near t = 0 all moduli nearly agree; the dominant pair is then the one closest to
    // the positive axis, so pick by modulus with argument as the tie-breaker.
    let scale = roots[0].norm();
    let mut plus: Option<Complex64> = None;
    for &w in roots.iter().filter(|w| w.im > 1e-14 * scale) {
        plus = match plus {
            None => Some(w),
            Some(best) => {
                let gap = w.norm() - best.norm();
                if gap > 1e-13 * scale || (gap.abs() <= 1e-13 * scale && w.arg() < best.arg()) {
                    Some(w)
                } else {
                    Some(best)
                }
            }
        };
    }
    let plus = plus.ok_or(Error::NoConjugatePair { t })?;
    if plus.norm() < roots[0].norm() * (1.0 - 1e-9) {
        return Err(Error::NoConjugatePair { t });
    }
    Ok((plus, plus.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_branches() {
        let cfg = AlgebraicConfig::new(1.0, 1).unwrap();
        let b = solve_branches(&cfg, Complex64::new(3.0, 0.0)).unwrap();
        let s5 = libm::sqrt(5.0);
        assert!((b.omega[0] - (3.0 + s5) / 2.0).norm() < 1e-13);
        assert!((b.omega[1] - (3.0 - s5) / 2.0).norm() < 1e-13);
    }

    #[test]
    fn star_distance() {
        let cfg = AlgebraicConfig::new(1.0, 1).unwrap();
        let s = star_geometry(&cfg);
        assert!((s.distance(Complex64::new(0.0, 1.0)) - 1.0).abs() < 1e-14);
        assert!((s.distance(Complex64::new(3.0, 0.0)) - 1.0).abs() < 1e-14);
    }
}
