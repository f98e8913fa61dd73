//! Polynomial roots by companion-matrix eigenvalues followed by Newton polishing.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Horner evaluation of p and p' for ascending coefficients.
pub(crate) fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All roots of the polynomial with ascending coefficients `coeffs`.
/// Trailing zero coefficients must already be trimmed.
pub(crate) fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidArgument("leading coefficient vanishes"));
    }
    if d == 1 {
        return Ok(alloc::vec![-coeffs[0] / lead]);
    }
    let companion = DMatrix::<Complex64>::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let failure = || Error::RootSolveFailure { re: coeffs[0].re, im: coeffs[0].im };
    let schur = nalgebra::Schur::try_new(companion, 1e-15, 10_000).ok_or_else(failure)?;
    let eig = schur.eigenvalues().ok_or_else(failure)?;
    let mut roots: Vec<Complex64> = eig.iter().copied().collect();
    for r in roots.iter_mut() {
        *r = newton_polish(coeffs, *r, 6);
    }
    Ok(roots)
}

/// A few Newton steps, keeping the iterate with the smallest residual.
pub(crate) fn newton_polish(coeffs: &[Complex64], x0: Complex64, steps: usize) -> Complex64 {
    let mut best = x0;
    let (mut best_res, mut dp) = horner_with_derivative(coeffs, x0);
    let mut x = x0;
    for _ in 0..steps {
        if dp.norm() == 0.0 || best_res.norm() == 0.0 {
            break;
        }
        x -= horner_with_derivative(coeffs, x).0 / dp;
        let (p, d) = horner_with_derivative(coeffs, x);
        dp = d;
        if p.norm() < best_res.norm() {
            best = x;
            best_res = p;
        } else {
            break;
        }
    }
    best
}

/// Sort by modulus descending; near-equal moduli are ordered by argument ascending.
pub(crate) fn sort_by_modulus(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let scale = roots.first().map(|r| r.norm()).unwrap_or(0.0).max(1e-300);
    let mut start = 0;
    while start < roots.len() {
        let mut end = start + 1;
        while end < roots.len() && roots[end - 1].norm() - roots[end].norm() <= 1e-10 * scale {
            end += 1;
        }
        roots[start..end].sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let c = [Complex64::new(2.0, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(1.0, 0.0)];
        let mut r = polynomial_roots(&c).unwrap();
        sort_by_modulus(&mut r);
        assert!((r[0] - 2.0).norm() < 1e-14);
        assert!((r[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn ties_sorted_by_argument() {
        let mut r = [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(0.5, 0.0)];
        sort_by_modulus(&mut r);
        assert!(r[0].im < 0.0 && r[1].im > 0.0);
    }
}
