//! The functionals σ_j, j = 0..m−1, of the generator, defined by
//! σ_j[x^ν] = (A^ν)_{0,j} and realized through the Stieltjes function
//! F_j(z) = e_0ᵀ(z − A)^{−1}e_j.
//!
//! F_j is computed from the dominant branch: with u = 1/ω_0(z),
//! F_j(z) = u^{j+1} g_j(u) / (λ g_{−1}(u)), where g_{m−1} = 1 and
//! g_{n−1} = g_n(1 − κu) + κu^{m+1}(g_n − 1), κ = μ/λ.
//! Zeros of g_{−1} at which the branch is strictly dominant are simple poles of F_j;
//! everything else is analytic off the star.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::algebraic::{boundary_values, solve_branches, star_geometry, AlgebraicConfig, StarGeometry};
use crate::error::{Error, Result};
use crate::model::{validate_params, QueueParams};
use crate::polynomials::{dual_values, q_values, Family, Poly};
use crate::quad::graded_integral;
use crate::roots::{horner_with_derivative, newton_polish, polynomial_roots};

/// A simple pole of the Stieltjes functions off the star.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleAtom {
    pub location: Complex64,
    /// Branch values at the pole, dominant first.
    pub omega: Vec<Complex64>,
    /// Residue of F_j for j = 0..m−1.
    pub residues: Vec<Complex64>,
    u: Complex64,
    g: Vec<Complex64>,
    dg: Complex64,
    du_dz: Complex64,
}

/// One contour node with everything the integrands need.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourNode {
    pub z: Complex64,
    /// (z − center)/N, so that Σ weight·h(z) approximates (1/2πi)∮ h.
    pub weight: Complex64,
    pub omega: Vec<Complex64>,
    g: Vec<Complex64>,
}

/// Circle around the star plus the poles left outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: Vec<ContourNode>,
    /// Indices into [`SpectralFunctional::atoms`].
    pub outer: Vec<usize>,
    /// Geometric convergence factor of the trapezoidal rule.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunctional {
    pub params: QueueParams,
    pub star: StarGeometry,
    pub atoms: Vec<PoleAtom>,
    /// g_{−1}, …, g_{m−1} as polynomials in u; entry n+1 holds g_n.
    g: Vec<Poly>,
}

/// Largest node count the contour will grow to.
pub const MAX_NODES: usize = 1 << 15;

/// Relative gaps tried by [`SpectralFunctional::apply`], widest first.
const GAPS: [f64; 4] = [0.25, 0.0625, 0.015625, 0.004];

impl SpectralFunctional {
    pub fn new(p: &QueueParams) -> Result<Self> {
        validate_params(p)?;
        let cfg = AlgebraicConfig::a_frame(p);
        let star = star_geometry(&cfg);
        let g = g_polys(p);
        let mut f = SpectralFunctional { params: *p, star, atoms: Vec::new(), g };
        f.atoms = f.find_poles()?;
        Ok(f)
    }

    fn cfg(&self) -> AlgebraicConfig {
        AlgebraicConfig::a_frame(&self.params)
    }

    /// g_{−1}(u), …, g_{m−1}(u) by the value recursion.
    fn g_values(&self, u: Complex64) -> Vec<Complex64> {
        let m = self.params.m;
        let kappa = self.params.mu / self.params.lambda;
        let um1 = u.powu(m as u32 + 1);
        let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
        out[m] = Complex64::new(1.0, 0.0);
        for n in (0..m).rev() {
            let gn = out[n + 1];
            out[n] = gn * (1.0 - u * kappa) + um1 * kappa * (gn - 1.0);
        }
        out
    }

    fn find_poles(&self) -> Result<Vec<PoleAtom>> {
        let p = &self.params;
        let (l, mu, m) = (p.lambda, p.mu, p.m);
        let top = &self.g[0];
        let coeffs: Vec<Complex64> = top.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let mut atoms: Vec<PoleAtom> = Vec::new();
        for u in polynomial_roots(&coeffs)? {
            let u = newton_polish(&coeffs, u, 8);
            let w = u.inv();
            let z = w * l + w.powi(-(m as i32)) * mu - l - mu;
            let bv = solve_branches(&self.cfg(), z)?;
            let w0 = bv.omega[0];
            let lead = w0.norm();
            let strictly = lead - bv.omega[1].norm() > 1e-7 * lead;
            if !(strictly && (w - w0).norm() <= 1e-6 * lead) {
                continue;
            }
            if atoms.iter().any(|a| (a.location - z).norm() <= 1e-10 * (1.0 + z.norm())) {
                continue;
            }
            let (_, dg) = horner_with_derivative(&coeffs, u);
            let dz_dw = Complex64::new(l, 0.0) - w.powi(-(m as i32) - 1) * (m as f64 * mu);
            let du_dz = -u * u / dz_dw;
            let g = self.g_values(u);
            let mut atom = PoleAtom { location: z, omega: bv.omega, residues: Vec::new(), u, g, dg, du_dz };
            atom.residues = (0..m).map(|j| self.pole_residue(&atom, j)).collect();
            atoms.push(atom);
        }
        Ok(atoms)
    }

    /// Residue of F_r at an atom, any r ≥ 0.
    pub fn pole_residue(&self, atom: &PoleAtom, r: usize) -> Complex64 {
        let m = self.params.m;
        let gr = if r + 1 >= m { Complex64::new(1.0, 0.0) } else { atom.g[r + 1] };
        atom.u.powu(r as u32 + 1) * gr / (atom.dg * atom.du_dz * self.params.lambda)
    }

    fn stieltjes_from(&self, u: Complex64, g: &[Complex64], r: usize) -> Complex64 {
        let m = self.params.m;
        let gr = if r + 1 >= m { Complex64::new(1.0, 0.0) } else { g[r + 1] };
        u.powu(r as u32 + 1) * gr / (g[0] * self.params.lambda)
    }

    /// F_r(z) = e_0ᵀ(z − A)^{−1}e_r, continued analytically off the star.
    pub fn resolvent(&self, r: usize, z: Complex64) -> Result<Complex64> {
        let bv = solve_branches(&self.cfg(), z)?;
        let u = bv.omega[0].inv();
        Ok(self.stieltjes_from(u, &self.g_values(u), r))
    }

    /// Residue at z = 0 of F_0, the stationary probability of the empty state, when it exists.
    pub fn stationary_mass(&self) -> Option<f64> {
        self.origin_atom().map(|a| a.residues[0].re)
    }

    pub(crate) fn origin_atom(&self) -> Option<&PoleAtom> {
        let scale = self.params.lambda + self.params.mu;
        self.atoms.iter().find(|a| a.location.norm() <= 1e-9 * scale)
    }

    /// Gap δ between star and circle, relative to the arm length, for horizon `t_max`.
    fn gap_for(&self, t_max: f64) -> f64 {
        let a = self.star.arm_length;
        if t_max > 0.0 {
            (0.5 / (a * t_max)).clamp(0.02, 0.25)
        } else {
            0.25
        }
    }

    /// Contour radius avoiding pole radii, and node count for roughly 16 digits.
    fn plan(&self, delta: f64) -> (f64, f64, usize) {
        let a = self.star.arm_length;
        let radii: Vec<f64> = self.atoms.iter().map(|at| (at.location - self.star.center).norm()).collect();
        let mut radius = a * (1.0 + delta);
        for _ in 0..64 {
            let clash = radii.iter().copied().find(|&rho| rho > radius / (1.0 + 0.5 * delta) && rho < radius * (1.0 + 0.5 * delta));
            match clash {
                Some(rho) => radius = rho * (1.0 + 0.5 * delta) * (1.0 + 1e-3),
                None => break,
            }
        }
        let mut ratio = a / radius;
        for &rho in &radii {
            ratio = ratio.max(if rho < radius { rho / radius } else { radius / rho });
        }
        let need = libm::ceil(38.0 / -libm::log(ratio)) as usize;
        let nodes = need.next_power_of_two().clamp(64, MAX_NODES);
        (radius, ratio, nodes)
    }

    /// Node count the plan asks for at horizon `t_max`.
    pub fn planned_nodes(&self, t_max: f64) -> usize {
        self.plan(self.gap_for(t_max)).2
    }

    /// Contour suited to integrands growing like e^{zt} with t ≤ t_max.
    pub fn contour(&self, t_max: f64, nodes: usize) -> Result<Contour> {
        self.contour_with_gap(self.gap_for(t_max), nodes)
    }

    /// Node count the plan asks for at relative gap `delta`.
    pub fn planned_nodes_with_gap(&self, delta: f64) -> usize {
        self.plan(delta).2
    }

    /// Circle of radius about (1 + δ)·arm length around the star center.
    pub fn contour_with_gap(&self, delta: f64, nodes: usize) -> Result<Contour> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument("contour gap must be positive"));
        }
        let (radius, ratio, _) = self.plan(delta);
        let center = self.star.center;
        let cfg = self.cfg();
        let nodes = nodes.max(4);
        let mut out = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
            let z = center + e * radius;
            let bv = solve_branches(&cfg, z)?;
            let g = self.g_values(bv.omega[0].inv());
            out.push(ContourNode { z, weight: e * radius / nodes as f64, omega: bv.omega, g });
        }
        let outer = (0..self.atoms.len()).filter(|&i| (self.atoms[i].location - center).norm() > radius).collect();
        Ok(Contour { center, radius, nodes: out, outer, ratio })
    }

    /// F_r at a contour node.
    pub fn node_resolvent(&self, node: &ContourNode, r: usize) -> Complex64 {
        self.stieltjes_from(node.omega[0].inv(), &node.g, r)
    }

    /// σ_j[f] on one contour: (value, |N-node − N/2-node|, largest |term|·N).
    pub fn apply_on<F>(&self, contour: &Contour, j: usize, f: F) -> Result<(Complex64, f64, f64)>
    where
        F: Fn(Complex64) -> Complex64,
    {
        if j >= self.params.m {
            return Err(Error::InvalidArgument("functional index must be below m"));
        }
        let n = contour.nodes.len();
        let mut full = Complex64::new(0.0, 0.0);
        let mut half = Complex64::new(0.0, 0.0);
        let mut scale: f64 = 0.0;
        for (k, node) in contour.nodes.iter().enumerate() {
            let v = f(node.z) * self.node_resolvent(node, j) * node.weight;
            scale = scale.max(v.norm() * n as f64);
            full += v;
            if k % 2 == 0 {
                half += v * 2.0;
            }
        }
        for &i in &contour.outer {
            let a = &self.atoms[i];
            full += a.residues[j] * f(a.location);
        }
        Ok((full, (full - half - self.outer_sum(contour, j, &f)).norm(), scale))
    }

    fn outer_sum<F>(&self, contour: &Contour, j: usize, f: &F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64,
    {
        contour.outer.iter().map(|&i| self.atoms[i].residues[j] * f(self.atoms[i].location)).sum()
    }

    /// σ_j[f] for an entire function f, with an error estimate that covers both the
    /// trapezoidal error and the rounding in the sum. Polynomials of high degree grow fast
    /// off the star, so the circle is pulled closer when rounding dominates.
    pub fn apply<F>(&self, j: usize, f: F) -> Result<(Complex64, f64)>
    where
        F: Fn(Complex64) -> Complex64,
    {
        let mut best: Option<(Complex64, f64)> = None;
        for &delta in &GAPS {
            let mut n = self.planned_nodes_with_gap(delta);
            let (value, err) = loop {
                let c = self.contour_with_gap(delta, n)?;
                let (v, est, scale) = self.apply_on(&c, j, &f)?;
                let rounding = 1e-16 * scale;
                if est <= rounding.max(1e-14 * v.norm()) || est <= 1e-15 || n >= MAX_NODES {
                    break (v, est + rounding);
                }
                n *= 2;
            };
            if best.is_none_or(|b| err < b.1) {
                best = Some((value, err));
            }
            if err <= 1e-12 * value.norm().max(1.0) {
                break;
            }
        }
        let (value, err) = best.unwrap();
        if !(err <= 1e-6 * value.norm().max(1.0)) {
            return Err(Error::QuadratureNotConverged { estimate: err });
        }
        Ok((value, err))
    }

    /// M[n][r] = Σ_j σ_j[Q_n q_{j,r}] for n ≤ n_max, r ≤ r_max, which should be the identity.
    /// Returns the matrix and an entrywise error bound.
    pub fn orthogonality_matrix(&self, n_max: usize, r_max: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let p = &self.params;
        let m = p.m;
        let zero = Complex64::new(0.0, 0.0);
        let mut best_val = vec![vec![0.0; r_max + 1]; n_max + 1];
        let mut best_err = vec![vec![f64::INFINITY; r_max + 1]; n_max + 1];
        for &delta in &GAPS {
            let mut n_nodes = self.planned_nodes_with_gap(delta);
            loop {
                let c = self.contour_with_gap(delta, n_nodes)?;
                let mut full = vec![vec![zero; r_max + 1]; n_max + 1];
                let mut half = vec![vec![zero; r_max + 1]; n_max + 1];
                let mut scale = vec![vec![0.0f64; r_max + 1]; n_max + 1];
                let mut add = |z: Complex64, fr: &dyn Fn(usize) -> Complex64, w: Complex64, even: Option<bool>| {
                    let qs = q_values(p, n_max, z);
                    let ds = dual_values(p, r_max, z);
                    let f: Vec<Complex64> = (0..m).map(fr).collect();
                    for r in 0..=r_max {
                        let inner: Complex64 = (0..m).map(|j| ds[r][j] * f[j]).sum::<Complex64>() * w;
                        for n in 0..=n_max {
                            let v = qs[n] * inner;
                            full[n][r] += v;
                            match even {
                                Some(true) => {
                                    half[n][r] += v * 2.0;
                                    scale[n][r] = scale[n][r].max(v.norm());
                                }
                                Some(false) => scale[n][r] = scale[n][r].max(v.norm()),
                                None => half[n][r] += v,
                            }
                        }
                    }
                };
                for (k, node) in c.nodes.iter().enumerate() {
                    add(node.z, &|j| self.node_resolvent(node, j), node.weight, Some(k % 2 == 0));
                }
                for &i in &c.outer {
                    let a = &self.atoms[i];
                    add(a.location, &|j| a.residues[j], Complex64::new(1.0, 0.0), None);
                }
                let nn = n_nodes as f64;
                let mut worst_ratio: f64 = 0.0;
                for n in 0..=n_max {
                    for r in 0..=r_max {
                        // `half` carries the outer poles once, `full` once.
                        let est = (full[n][r] - half[n][r]).norm();
                        let rounding = 1e-16 * scale[n][r] * nn;
                        let err = est + rounding;
                        if err < best_err[n][r] {
                            best_err[n][r] = err;
                            best_val[n][r] = full[n][r].re;
                        }
                        worst_ratio = worst_ratio.max(est / rounding.max(1e-15));
                    }
                }
                if worst_ratio <= 1.0 || n_nodes >= MAX_NODES {
                    break;
                }
                n_nodes *= 2;
            }
            if best_err.iter().flatten().all(|e| *e <= 1e-12) {
                break;
            }
        }
        Ok((best_val, best_err))
    }

    /// σ_j[f] written as a density on the arms of the star plus point masses at the poles.
    /// Fails with [`Error::PoleOnStar`] when a pole sits on the star, where that form breaks down.
    pub fn apply_on_star<F>(&self, j: usize, f: F) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        let p = &self.params;
        if j >= p.m {
            return Err(Error::InvalidArgument("functional index must be below m"));
        }
        let a = self.star.arm_length;
        for atom in &self.atoms {
            if self.star.distance(atom.location) <= 1e-6 * a {
                return Err(Error::PoleOnStar { re: atom.location.re, im: atom.location.im });
            }
        }
        let cfg = self.cfg();
        let reduced = cfg.reduced_arm_length();
        let m1 = p.m + 1;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..m1 {
            let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m1 as f64);
            let arm = graded_integral(reduced, 1e-12, |tau| {
                let (wp, wm) = boundary_values(&cfg, tau)?;
                let up = (e * wp).inv();
                let um = (e * wm).inv();
                let jump = self.stieltjes_from(um, &self.g_values(um), j) - self.stieltjes_from(up, &self.g_values(up), j);
                let x = cfg.unreduce(e * tau);
                Ok(f(x) * jump * e * p.lambda)
            })?;
            total += arm;
        }
        total /= Complex64::new(0.0, 2.0 * PI);
        for atom in &self.atoms {
            total += atom.residues[j] * f(atom.location);
        }
        Ok(total)
    }
}

/// g_{−1}, …, g_{m−1} as polynomials in u.
fn g_polys(p: &QueueParams) -> Vec<Poly> {
    let m = p.m;
    let kappa = p.mu / p.lambda;
    let mut out = vec![Poly::zero(Family::Other); m + 1];
    out[m] = Poly::constant(1.0, Family::Other);
    let damp = Poly::new(vec![1.0, -kappa], Family::Other);
    for n in (0..m).rev() {
        let gn = &out[n + 1];
        let minus_one = gn.sub(&Poly::constant(1.0, Family::Other));
        out[n] = gn.mul(&damp).add(&minus_one.shift_up(m + 1).scale(kappa));
    }
    out
}

/// σ_j[f] for an entire f; the real part of the contour evaluation.
pub fn sigma_apply<F>(p: &QueueParams, j: usize, f: F) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    Ok(SpectralFunctional::new(p)?.apply(j, f)?.0.re)
}

/// Column r of (z − A)^{−1} for rows 0..=n_max, split as F_r(z)·hom + src. Rows below
/// max(r+1, m) come from the upward recursion, rows above from the m decaying modes
/// (the non-dominant branches `small`).
pub(crate) fn column_parts(
    p: &QueueParams,
    z: Complex64,
    small: &[Complex64],
    r: usize,
    n_max: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let (l, mu, m) = (p.lambda, p.mu, p.m);
    let zero = Complex64::new(0.0, 0.0);
    let b = (r + 1).max(m);
    let len = n_max + 1;
    let mut hom = vec![zero; len.max(b)];
    let mut src = vec![zero; len.max(b)];
    hom[0] = Complex64::new(1.0, 0.0);
    for i in 0..b - 1 {
        let d = if i < m { l } else { l + mu };
        let (ph, ps) = if i >= m { (hom[i - m], src[i - m]) } else { (zero, zero) };
        hom[i + 1] = ((z + d) * hom[i] - ph * mu) / l;
        let kick = if i == r { 1.0 } else { 0.0 };
        src[i + 1] = ((z + d) * src[i] - ps * mu - kick) / l;
    }
    if len > b {
        // Σ_k α_k ω_k^{i−b+1} matches the values at i = b−m .. b−1
        let mut mat: Vec<Vec<Complex64>> =
            (0..m).map(|row| small.iter().map(|w| w.powi(row as i32 + 1 - m as i32)).collect()).collect();
        let mut ah: Vec<Complex64> = (0..m).map(|row| hom[b - m + row]).collect();
        let mut as_: Vec<Complex64> = (0..m).map(|row| src[b - m + row]).collect();
        solve_small(&mut mat, &mut ah, &mut as_);
        let mut pw: Vec<Complex64> = small.to_vec();
        for n in b..len {
            let mut yh = zero;
            let mut ys = zero;
            for k in 0..m {
                yh += ah[k] * pw[k];
                ys += as_[k] * pw[k];
                pw[k] *= small[k];
            }
            hom[n] = yh;
            src[n] = ys;
        }
    }
    hom.truncate(len);
    src.truncate(len);
    (hom, src)
}

/// Gaussian elimination with partial pivoting, two right-hand sides, solved in place.
fn solve_small(a: &mut [Vec<Complex64>], b1: &mut [Complex64], b2: &mut [Complex64]) {
    let n = b1.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).unwrap();
        a.swap(c, piv);
        b1.swap(c, piv);
        b2.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
            let (v1, v2) = (b1[c], b2[c]);
            b1[r] -= f * v1;
            b2[r] -= f * v2;
        }
    }
    for i in (0..n).rev() {
        let (mut s1, mut s2) = (b1[i], b2[i]);
        for k in i + 1..n {
            s1 -= a[i][k] * b1[k];
            s2 -= a[i][k] * b2[k];
        }
        b1[i] = s1 / a[i][i];
        b2[i] = s2 / a[i][i];
    }
}
