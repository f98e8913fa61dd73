//! P_{n,r}(t) from the spectral representation, and checks of the properties a transition
//! function must have.
//!
//! P_{n,r}(t) = Σ_j σ_j[e^{xt} Q_n q_{j,r}] is evaluated as (1/2πi)∮ e^{zt} R_{n,r}(z) dz
//! around the star plus residues at the poles outside the circle, where
//! R_{n,r}(z) = e_nᵀ(z − A)^{−1}e_r. The two integrands differ by a polynomial in z, which
//! integrates to zero, and the resolvent entry avoids the cancellation carried by q_{j,r}.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::algebraic::{star_geometry, AlgebraicConfig};
use crate::error::{Error, Result};
use crate::model::{validate_params, QueueParams};
use crate::spectral::{column_parts, Contour, SpectralFunctional, MAX_NODES};

/// Largest state index accepted by [`transition_spectral`].
pub const DESK_CAP: usize = 64;
/// Accepted trapezoidal error estimate.
const ACCEPT: f64 = 1e-9;
/// Target error estimate when sizing the contour.
const TARGET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionQuery {
    pub n: usize,
    pub r: usize,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Spectral,
    Uniformization,
    Picard,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionResult {
    pub values: Vec<f64>,
    pub method: Method,
    pub error_estimate: Vec<f64>,
}

/// A contour sized for times up to `t_max`, reusable across (n, r, t).
#[derive(Debug, Clone)]
pub struct SpectralEngine {
    functional: SpectralFunctional,
    contour: Contour,
    t_max: f64,
}

impl SpectralEngine {
    pub fn new(p: &QueueParams, t_max: f64) -> Result<Self> {
        validate_params(p)?;
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(Error::InvalidArgument("times must be finite and non-negative"));
        }
        let functional = SpectralFunctional::new(p)?;
        let mut nodes = functional.planned_nodes(t_max);
        loop {
            let contour = functional.contour(t_max, nodes)?;
            let engine = SpectralEngine { functional: functional.clone(), contour, t_max };
            let probe = engine.column(0, p.m + 1, &[t_max])?;
            let est = probe[0].iter().fold(0.0f64, |a, v| a.max(v.1));
            if est <= TARGET || nodes >= MAX_NODES {
                return Ok(engine);
            }
            nodes *= 2;
        }
    }

    pub fn functional(&self) -> &SpectralFunctional {
        &self.functional
    }

    pub fn contour(&self) -> &Contour {
        &self.contour
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// P_{n,r}(t) for n = 0..=n_max at each time, as (value, error estimate); indexed [t][n].
    pub fn column(&self, r: usize, n_max: usize, times: &[f64]) -> Result<Vec<Vec<(f64, f64)>>> {
        self.refined(r, n_max, times, false)
    }

    /// Same as [`SpectralEngine::column`] without the stationary atom at z = 0.
    pub fn transient_column(&self, r: usize, n_max: usize, times: &[f64]) -> Result<Vec<Vec<(f64, f64)>>> {
        self.refined(r, n_max, times, true)
    }

    /// Far columns grow like |ω_0|^{−r} near the tips of the star, so the shared contour can
    /// be too coarse for them; double the nodes while that still lowers the estimate.
    fn refined(&self, r: usize, n_max: usize, times: &[f64], drop_origin: bool) -> Result<Vec<Vec<(f64, f64)>>> {
        let worst = |out: &Vec<Vec<(f64, f64)>>| out.iter().flatten().fold(0.0f64, |a, v| a.max(v.1));
        let mut out = self.column_impl(&self.contour, r, n_max, times, drop_origin)?;
        let mut est = worst(&out);
        let mut nodes = self.contour.nodes.len();
        while est > TARGET && nodes < MAX_NODES {
            nodes *= 2;
            let finer = self.functional.contour(self.t_max, nodes)?;
            let next = self.column_impl(&finer, r, n_max, times, drop_origin)?;
            let next_est = worst(&next);
            if next_est >= 0.5 * est {
                break;
            }
            out = next;
            est = next_est;
        }
        Ok(out)
    }

    fn column_impl(
        &self,
        contour: &Contour,
        r: usize,
        n_max: usize,
        times: &[f64],
        drop_origin: bool,
    ) -> Result<Vec<Vec<(f64, f64)>>> {
        let p = &self.functional.params;
        for &t in times {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidArgument("times must be finite and non-negative"));
            }
        }
        let len = n_max + 1;
        let zero = Complex64::new(0.0, 0.0);
        let mut full = vec![vec![zero; len]; times.len()];
        let mut half = vec![vec![zero; len]; times.len()];
        let mut scale = vec![vec![0.0f64; len]; times.len()];
        for (k, node) in contour.nodes.iter().enumerate() {
            let (hom, src) = column_parts(p, node.z, &node.omega[1..], r, n_max);
            let fr = self.functional.node_resolvent(node, r);
            for (ti, &t) in times.iter().enumerate() {
                let base = (node.z * t).exp() * node.weight;
                for n in 0..len {
                    let v = base * (fr * hom[n] + src[n]);
                    full[ti][n] += v;
                    if k % 2 == 0 {
                        half[ti][n] += v * 2.0;
                    }
                    scale[ti][n] = scale[ti][n].max(v.norm());
                }
            }
        }
        let origin = self.functional.origin_atom().map(|a| a.location);
        let mut out = vec![vec![(0.0, 0.0); len]; times.len()];
        let mut poles = vec![vec![zero; len]; times.len()];
        let mut inner_origin: Option<Vec<Complex64>> = None;
        for (i, atom) in self.functional.atoms.iter().enumerate() {
            let is_origin = origin == Some(atom.location);
            let outside = contour.outer.contains(&i);
            if !(outside || (drop_origin && is_origin)) {
                continue;
            }
            let (hom, _) = column_parts(p, atom.location, &atom.omega[1..], r, n_max);
            let res = self.functional.pole_residue(atom, r);
            if !outside {
                // inside the circle: its share is already in the integral, remove it
                inner_origin = Some(hom.iter().map(|h| res * h).collect());
                continue;
            }
            if drop_origin && is_origin {
                continue;
            }
            for (ti, &t) in times.iter().enumerate() {
                let e = (atom.location * t).exp();
                for n in 0..len {
                    poles[ti][n] += res * hom[n] * e;
                }
            }
        }
        let nodes = contour.nodes.len() as f64;
        for ti in 0..times.len() {
            for n in 0..len {
                let mut v = full[ti][n] + poles[ti][n];
                if let Some(sub) = &inner_origin {
                    v -= sub[n];
                }
                let est = (full[ti][n] - half[ti][n]).norm() + 1e-16 * scale[ti][n] * nodes;
                out[ti][n] = (v.re, est);
            }
        }
        Ok(out)
    }

    /// P_{n,r}(t) with its error estimate.
    pub fn probability(&self, n: usize, r: usize, t: f64) -> Result<(f64, f64)> {
        Ok(self.column(r, n, &[t])?[0][n])
    }
}

fn check_estimates(values: &[(f64, f64)]) -> Result<()> {
    for &(_, est) in values {
        if !(est <= ACCEPT) {
            return Err(Error::QuadratureNotConverged { estimate: est });
        }
    }
    Ok(())
}

pub fn transition_spectral(p: &QueueParams, q: &TransitionQuery) -> Result<TransitionResult> {
    if q.n > DESK_CAP || q.r > DESK_CAP {
        return Err(Error::InvalidArgument("state indices are capped at 64"));
    }
    if q.times.is_empty() {
        return Err(Error::InvalidArgument("at least one time is required"));
    }
    let t_max = q.times.iter().fold(0.0f64, |a, &t| a.max(t));
    let engine = SpectralEngine::new(p, t_max)?;
    let col = engine.column(q.r, q.n, &q.times)?;
    let picked: Vec<(f64, f64)> = col.iter().map(|c| c[q.n]).collect();
    check_estimates(&picked)?;
    Ok(TransitionResult {
        values: picked.iter().map(|v| v.0).collect(),
        method: Method::Spectral,
        error_estimate: picked.iter().map(|v| v.1).collect(),
    })
}

/// P(Poisson(mean) > k).
pub fn poisson_tail(mean: f64, k: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let mut log_term = -mean + (k + 1) as f64 * libm::log(mean) - libm::lgamma((k + 2) as f64);
    let mut total = 0.0;
    let mut j = k + 1;
    loop {
        let term = libm::exp(log_term);
        total += term;
        j += 1;
        log_term += libm::log(mean) - libm::log(j as f64);
        if (j as f64) > mean && term < 1e-18 * total.max(1e-300) {
            break;
        }
        if j > k + 100_000 {
            break;
        }
    }
    total.min(1.0)
}

/// Upper bound on P(X(t) > R | X(0) = n): reaching above R needs more than R − n arrivals.
pub fn tail_bound(p: &QueueParams, n: usize, t: f64, r_max: usize) -> f64 {
    if r_max < n {
        return 1.0;
    }
    poisson_tail(p.lambda * t, r_max - n)
}

/// Σ_{r ≤ R} P_{n,r}(t).
pub fn honesty_check(p: &QueueParams, n: usize, t: f64, r_max: usize) -> Result<f64> {
    let bound = tail_bound(p, n, t, r_max);
    if bound >= 1e-8 {
        return Err(Error::TailNotControlled { bound });
    }
    let engine = SpectralEngine::new(p, t)?;
    let mut total = 0.0;
    for r in 0..=r_max {
        let v = engine.column(r, n, &[t])?[0][n];
        check_estimates(&[v])?;
        total += v.0;
    }
    Ok(total)
}

/// |P_{n,r}(s+t) − Σ_{k ≤ K} P_{n,k}(s)P_{k,r}(t)|.
pub fn semigroup_check(p: &QueueParams, n: usize, r: usize, s: f64, t: f64, k_max: usize) -> Result<f64> {
    let bound = tail_bound(p, n, s, k_max);
    if bound >= 1e-8 {
        return Err(Error::TailNotControlled { bound });
    }
    let engine = SpectralEngine::new(p, s + t)?;
    let whole = engine.column(r, n, &[s + t])?[0][n];
    let split = engine.column(r, k_max, &[t])?.remove(0);
    check_estimates(&[whole])?;
    check_estimates(&split)?;
    let mut sum = 0.0;
    for (k, right) in split.iter().enumerate() {
        let left = engine.column(k, n, &[s])?[0][n];
        check_estimates(&[left])?;
        sum += left.0 * right.0;
    }
    Ok((whole.0 - sum).abs())
}

/// −λ − μ plus the arm length of the star of A: the largest real part on the star.
/// It is never positive and vanishes exactly when λ = mμ.
pub fn decay_rate(p: &QueueParams) -> f64 {
    let star = star_geometry(&AlgebraicConfig::a_frame(p));
    star.center.re + star.arm_length
}
