//! Truncated three-band operators: the generator A, the normalized T, the shifted L and K,
//! and the general H. Polynomial identities are checked on finite sections.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::algebraic::AlgebraicConfig;
use crate::error::{Error, Result};
use crate::model::{validate_params, QueueParams};
use crate::polynomials::{q_poly, Family, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    H,
    A,
    T,
    L,
    K,
}

/// Row j carries ι at (j, j+1), −γ (j < m) or −ξ (j ≥ m) at (j, j), η at (j, j−m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bands {
    pub m: usize,
    pub gamma: f64,
    pub xi: f64,
    pub iota: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub bands: Bands,
    pub size: usize,
}

impl OperatorSpec {
    pub fn h(bands: Bands, size: usize) -> Self {
        OperatorSpec { kind: OperatorKind::H, bands, size }
    }

    pub fn a(p: &QueueParams, size: usize) -> Self {
        let bands = Bands { m: p.m, gamma: p.lambda, xi: p.lambda + p.mu, iota: p.lambda, eta: p.mu };
        OperatorSpec { kind: OperatorKind::A, bands, size }
    }

    pub fn t(cfg: &AlgebraicConfig, size: usize) -> Self {
        let bands = Bands { m: cfg.m, gamma: 0.0, xi: 0.0, iota: 1.0, eta: cfg.c };
        OperatorSpec { kind: OperatorKind::T, bands, size }
    }

    /// T with +μ on the first m diagonal entries.
    pub fn l(p: &QueueParams, size: usize) -> Self {
        let bands = Bands { m: p.m, gamma: -p.mu, xi: 0.0, iota: 1.0, eta: p.t_constant() };
        OperatorSpec { kind: OperatorKind::L, bands, size }
    }

    /// μI_m + T; the same section as [`OperatorSpec::l`].
    pub fn k(p: &QueueParams, size: usize) -> Self {
        OperatorSpec { kind: OperatorKind::K, ..Self::l(p, size) }
    }

    pub fn with_size(&self, size: usize) -> Self {
        OperatorSpec { size, ..*self }
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        if i < self.bands.m {
            -self.bands.gamma
        } else {
            -self.bands.xi
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let b = &self.bands;
        if i >= self.size || j >= self.size {
            0.0
        } else if j == i + 1 {
            b.iota
        } else if j == i {
            self.diagonal(i)
        } else if i >= b.m && j == i - b.m {
            b.eta
        } else {
            0.0
        }
    }

    /// `out = M x`.
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        let (n, b) = (self.size, &self.bands);
        for i in 0..n {
            let mut s = self.diagonal(i) * x[i];
            if i + 1 < n {
                s += b.iota * x[i + 1];
            }
            if i >= b.m {
                s += b.eta * x[i - b.m];
            }
            out[i] = s;
        }
    }

    /// `out = Mᵀ x`.
    pub fn tmul_vec(&self, x: &[f64], out: &mut [f64]) {
        let (n, b) = (self.size, &self.bands);
        for j in 0..n {
            let mut s = self.diagonal(j) * x[j];
            if j >= 1 {
                s += b.iota * x[j - 1];
            }
            if j + b.m < n {
                s += b.eta * x[j + b.m];
            }
            out[j] = s;
        }
    }

    /// H_0, …, H_{n_max}: ((γ+x)/ι)^n up to n = m, then ιH_{n+1} = (ξ+x)H_n − ηH_{n−m}.
    pub fn family(&self, n_max: usize) -> Vec<Poly> {
        let b = &self.bands;
        let fam = match self.kind {
            OperatorKind::A => Family::Q,
            OperatorKind::T => Family::T,
            OperatorKind::L | OperatorKind::K => Family::L,
            OperatorKind::H => Family::Operator,
        };
        let mut out = vec![Poly::constant(1.0, fam)];
        for n in 0..n_max {
            let next = if n < b.m {
                out[n].mul(&Poly::new(vec![b.gamma / b.iota, 1.0 / b.iota], fam))
            } else {
                out[n].mul(&Poly::new(vec![b.xi, 1.0], fam)).sub(&out[n - b.m].scale(b.eta)).scale(1.0 / b.iota)
            };
            out.push(next.with_family(fam));
        }
        out
    }

    /// Whether z lies in the union of the Gershgorin discs of the infinite operator.
    pub fn gershgorin_contains(&self, z: Complex64) -> bool {
        let b = &self.bands;
        let head = (z + b.gamma).norm() <= b.iota.abs();
        let tail = (z + b.xi).norm() <= b.iota.abs() + b.eta.abs();
        head || tail
    }
}

/// Σ_k coeffs[k] Mᵀ^k e_0 (`transpose`) or Σ_k coeffs[k] M^k e_start.
fn apply_poly(spec: &OperatorSpec, poly: &Poly, start: usize, transpose: bool) -> Vec<f64> {
    let n = spec.size;
    let mut v = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for &c in poly.coeffs.iter().rev() {
        if transpose {
            spec.tmul_vec(&v, &mut tmp);
        } else {
            spec.mul_vec(&v, &mut tmp);
        }
        core::mem::swap(&mut v, &mut tmp);
        v[start] += c;
    }
    v
}

fn need(size: usize, need: usize) -> Result<()> {
    if size < need {
        Err(Error::TruncationTooSmall { need, got: size })
    } else {
        Ok(())
    }
}

/// ‖H_n(Mᵀ)e_0 − e_n‖_∞ for the family matching the operator.
pub fn basis_jump_check(spec: &OperatorSpec, n: usize) -> Result<f64> {
    need(spec.size, (spec.bands.m + 1) * (n + 2))?;
    let poly = spec.family(n).pop().unwrap();
    let mut v = apply_poly(spec, &poly, 0, true);
    v[n] -= 1.0;
    Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// Σ_j q_{j,r}(A)e_j, each q_{j,r}(A)e_j run through the recurrence of q_{j,·} with A in
/// place of x. Expanding q_{j,r} in powers of A instead loses about (‖A‖/μ)^r ulps.
fn dual_combination(p: &QueueParams, r: usize, size: usize) -> Vec<f64> {
    let spec = OperatorSpec::a(p, size);
    let m = p.m;
    let mut acc = vec![0.0; size];
    let mut tmp = vec![0.0; size];
    for j in 0..m {
        // seq[s] = q_{j,s}(A)e_j
        let mut seq: Vec<Vec<f64>> = Vec::with_capacity(r + 1);
        for s in 0..=r {
            let mut v = vec![0.0; size];
            if s < m {
                if s == j {
                    v[j] = 1.0;
                }
            } else {
                let base = s - m;
                let diag = if base < m { p.lambda } else { p.lambda + p.mu };
                spec.mul_vec(&seq[base], &mut tmp);
                for i in 0..size {
                    let prev = if base >= 1 { seq[base - 1][i] } else { 0.0 };
                    v[i] = (diag * seq[base][i] + tmp[i] - p.lambda * prev) / p.mu;
                }
            }
            seq.push(v);
        }
        for (a, x) in acc.iter_mut().zip(&seq[r]) {
            *a += x;
        }
    }
    acc
}

/// ‖Σ_j q_{j,r}(A)e_j − e_r‖_∞ on the N-section.
pub fn dual_jump_check(p: &QueueParams, r: usize, size: usize) -> Result<f64> {
    validate_params(p)?;
    need(size, (p.m + 1) * (r + 2))?;
    let mut v = dual_combination(p, r, size);
    v[r] -= 1.0;
    Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// (Σ_j q_{j,r}(A)e_j)·(Q_n(Aᵀ)e_0), which should equal δ_{n,r}.
pub fn biorthogonality_check(p: &QueueParams, n: usize, r: usize, size: usize) -> Result<f64> {
    validate_params(p)?;
    need(size, (p.m + 1) * (n.max(r) + 2))?;
    let left = dual_combination(p, r, size);
    let right = apply_poly(&OperatorSpec::a(p, size), &q_poly(p, n), 0, true);
    Ok(left.iter().zip(&right).map(|(a, b)| a * b).sum())
}

/// c_{ν,j} = (M^ν e_{j−1})_0 for j = 1..=m.
pub fn moment(spec: &OperatorSpec, nu: usize, j: usize) -> Result<f64> {
    let m = spec.bands.m;
    if j == 0 || j > m {
        return Err(Error::InvalidArgument("moment index j must be in 1..=m"));
    }
    need(spec.size, (nu + 1) * (m + 1) + m)?;
    let mut v = vec![0.0; spec.size];
    let mut tmp = vec![0.0; spec.size];
    v[j - 1] = 1.0;
    for _ in 0..nu {
        spec.mul_vec(&v, &mut tmp);
        core::mem::swap(&mut v, &mut tmp);
    }
    Ok(v[0])
}

/// Moments c_{ν,j} for ν ≤ ν_max, j = 1..=m, at a section size large enough for all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub kind: OperatorKind,
    /// entries[ν][j−1]
    pub entries: Vec<Vec<f64>>,
}

pub fn moment_table(spec: &OperatorSpec, nu_max: usize) -> Result<MomentTable> {
    let m = spec.bands.m;
    let s = spec.with_size(spec.size.max((nu_max + 1) * (m + 1) + m));
    let entries = (0..=nu_max)
        .map(|nu| (1..=m).map(|j| moment(&s, nu, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentTable { kind: spec.kind, entries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventSample {
    pub j: usize,
    pub z: Complex64,
    pub value: Complex64,
    /// Section size of the accepted value and the value at half that size.
    pub size: usize,
    pub previous: Complex64,
}

/// Solves (z − M_N) x = e_col on a section and returns x_0.
fn section_solve(spec: &OperatorSpec, z: Complex64, col: usize) -> Option<Complex64> {
    let n = spec.size;
    let m = spec.bands.m;
    let width = 2 * m + 2;
    // row i keeps columns i−m ..= i+m+1
    let zero = Complex64::new(0.0, 0.0);
    let mut rows = vec![zero; n * width];
    let at = |i: usize, c: usize| i * width + (c + m - i);
    for i in 0..n {
        rows[at(i, i)] = z - spec.diagonal(i);
        if i + 1 < n {
            rows[at(i, i + 1)] = Complex64::new(-spec.bands.iota, 0.0);
        }
        if i >= m {
            rows[at(i, i - m)] = Complex64::new(-spec.bands.eta, 0.0);
        }
    }
    let mut rhs = vec![zero; n];
    rhs[col] = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let last = (c + m).min(n - 1);
        let hi = (c + m + 1).min(n - 1);
        let mut piv = c;
        for r in c + 1..=last {
            if rows[at(r, c)].norm() > rows[at(piv, c)].norm() {
                piv = r;
            }
        }
        if rows[at(piv, c)].norm() == 0.0 {
            return None;
        }
        if piv != c {
            for k in c..=hi {
                let (a, b) = (at(c, k), at(piv, k));
                rows.swap(a, b);
            }
            rhs.swap(c, piv);
        }
        let pivot = rows[at(c, c)];
        for r in c + 1..=last {
            let f = rows[at(r, c)] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for k in c..=hi {
                let u = rows[at(c, k)];
                rows[at(r, k)] -= f * u;
            }
            let rc = rhs[c];
            rhs[r] -= f * rc;
        }
    }
    let mut x = vec![zero; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for k in i + 1..=(i + m + 1).min(n - 1) {
            s -= rows[at(i, k)] * x[k];
        }
        x[i] = s / rows[at(i, i)];
    }
    Some(x[0])
}

/// f_j(z) = ((z − M)^{−1} e_{j−1})_0, with section doubling until the value settles to 1e−9.
pub fn resolvent(spec: &OperatorSpec, j: usize, z: Complex64) -> Result<ResolventSample> {
    if j == 0 || j > spec.bands.m {
        return Err(Error::InvalidArgument("resolvent index j must be in 1..=m"));
    }
    if spec.gershgorin_contains(z) {
        return Err(Error::InsideSupport);
    }
    let mut size = spec.size.max(4 * (spec.bands.m + 2));
    let fail = |size, change| Error::TruncationNotConverged { size, change };
    let mut prev = section_solve(&spec.with_size(size), z, j - 1).ok_or(fail(size, f64::INFINITY))?;
    while size < (1 << 16) {
        size *= 2;
        let cur = section_solve(&spec.with_size(size), z, j - 1).ok_or(fail(size, f64::INFINITY))?;
        let change = (cur - prev).norm();
        if change < 1e-9 {
            return Ok(ResolventSample { j, z, value: cur, size, previous: prev });
        }
        prev = cur;
    }
    Err(fail(size, f64::NAN))
}

/// Largest entrywise defect of A = Λ^{−1}(L − (λ+μ)I)Λ on an N-section, N ≤ 60,
/// relative on the nonzero entries of A and absolute elsewhere.
pub fn lambda_conjugation_check(p: &QueueParams, size: usize) -> Result<f64> {
    validate_params(p)?;
    if size > 60 {
        return Err(Error::InvalidArgument("conjugation sections are capped at 60"));
    }
    need(size, p.m + 2)?;
    let a = OperatorSpec::a(p, size);
    let l = OperatorSpec::l(p, size);
    let shift = p.lambda + p.mu;
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            let lij = l.entry(i, j) - if i == j { shift } else { 0.0 };
            let conj = libm::pow(p.lambda, j as f64 - i as f64) * lij;
            let aij = a.entry(i, j);
            let dev = (aij - conj).abs();
            worst = worst.max(if aij != 0.0 { dev / aij.abs() } else { dev });
        }
    }
    Ok(worst)
}
