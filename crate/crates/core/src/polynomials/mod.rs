//! Polynomial families generated by the three-band recurrences, their closed forms in
//! terms of the branches, and the zeros of the factor h_n.

mod explicit;
mod poly;
mod zeros;

pub use explicit::{dual_explicit, explicit_coefficients, q_explicit, ExplicitCoefficients, EPS_SING};
pub use poly::{Family, Poly, VectorPoly};
pub use zeros::{h_value_and_derivative, h_zeros};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::algebraic::AlgebraicConfig;
use crate::model::QueueParams;
use poly::linear_step;

/// Q_0, …, Q_{n_max}.
pub fn q_family(p: &QueueParams, n_max: usize) -> Vec<Poly> {
    let (l, mu, m) = (p.lambda, p.mu, p.m);
    let mut out = vec![Poly::constant(1.0, Family::Q)];
    let zero = Poly::zero(Family::Q);
    for n in 0..n_max {
        let next = if n < m {
            linear_step(1.0, 1.0 / l, &out[n], 0.0, &zero, 1.0, Family::Q)
        } else {
            linear_step(l + mu, 1.0, &out[n], -mu, &out[n - m], l, Family::Q)
        };
        out.push(next);
    }
    out
}

pub fn q_poly(p: &QueueParams, n: usize) -> Poly {
    q_family(p, n).pop().unwrap()
}

/// Q_0(z), …, Q_{n_max}(z) by the value recurrence.
pub fn q_values(p: &QueueParams, n_max: usize, z: Complex64) -> Vec<Complex64> {
    let (l, mu, m) = (p.lambda, p.mu, p.m);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex64::new(1.0, 0.0));
    for n in 0..n_max {
        let next = if n < m {
            out[n] * (l + z) / l
        } else {
            ((l + mu + z) * out[n] - out[n - m] * mu) / l
        };
        out.push(next);
    }
    out
}

/// Shared law of T_n and L_n: x^n-type start for n ≤ m, then P_{n+1} = xP_n − cP_{n−m}.
fn shifted_start_family(shift: f64, c: f64, m: usize, n_max: usize, family: Family) -> Vec<Poly> {
    let mut out = vec![Poly::constant(1.0, family)];
    let zero = Poly::zero(family);
    for n in 0..n_max {
        let next = if n < m {
            linear_step(-shift, 1.0, &out[n], 0.0, &zero, 1.0, family)
        } else {
            linear_step(0.0, 1.0, &out[n], -c, &out[n - m], 1.0, family)
        };
        out.push(next);
    }
    out
}

pub fn t_family(cfg: &AlgebraicConfig, n_max: usize) -> Vec<Poly> {
    shifted_start_family(0.0, cfg.c, cfg.m, n_max, Family::T)
}

pub fn t_poly(cfg: &AlgebraicConfig, n: usize) -> Poly {
    t_family(cfg, n).pop().unwrap()
}

/// L_n(z) = (z − μ)^n for n ≤ m, then the T recurrence with c = μλ^m.
pub fn l_family(p: &QueueParams, n_max: usize) -> Vec<Poly> {
    shifted_start_family(p.mu, p.t_constant(), p.m, n_max, Family::L)
}

pub fn l_poly(p: &QueueParams, n: usize) -> Poly {
    l_family(p, n).pop().unwrap()
}

/// h_0, …, h_{n_max} with T_n(z) = z^{n mod (m+1)} h_n(z^{m+1}).
pub fn h_family(cfg: &AlgebraicConfig, n_max: usize) -> Vec<Poly> {
    let m = cfg.m;
    let mut out = vec![Poly::constant(1.0, Family::H)];
    let zero = Poly::zero(Family::H);
    for n in 0..n_max {
        let next = if n < m {
            linear_step(1.0, 0.0, &out[n], 0.0, &zero, 1.0, Family::H)
        } else if n % (m + 1) < m {
            linear_step(1.0, 0.0, &out[n], -cfg.c, &out[n - m], 1.0, Family::H)
        } else {
            linear_step(0.0, 1.0, &out[n], -cfg.c, &out[n - m], 1.0, Family::H)
        };
        out.push(next);
    }
    out
}

pub fn h_poly(cfg: &AlgebraicConfig, n: usize) -> Poly {
    h_family(cfg, n).pop().unwrap()
}

/// T_{n,j} = T_{n−j}, zero for n < j.
pub fn second_kind(cfg: &AlgebraicConfig, n: usize, j: usize) -> Poly {
    if n < j {
        Poly::zero(Family::SecondKind(j))
    } else {
        t_poly(cfg, n - j).with_family(Family::SecondKind(j))
    }
}

/// q_{−1}, q_0, …, q_{r_max}; entry `r + 1` holds q_r.
pub fn dual_family(p: &QueueParams, r_max: usize) -> Vec<VectorPoly> {
    let (l, mu, m) = (p.lambda, p.mu, p.m);
    let mut out: Vec<VectorPoly> = Vec::with_capacity(r_max + 2);
    out.push(VectorPoly { r: -1, components: vec![Poly::zero(Family::Dual); m] });
    for r in 0..m.min(r_max + 1) {
        let components = (0..m)
            .map(|j| Poly::constant(if j == r { 1.0 } else { 0.0 }, Family::Dual))
            .collect();
        out.push(VectorPoly { r: r as isize, components });
    }
    // q_{s+m} from q_s and q_{s−1}
    let mut s = 0;
    while s + m <= r_max {
        let diag = if s < m { l } else { l + mu };
        let components = (0..m)
            .map(|j| {
                linear_step(diag, 1.0, &out[s + 1].components[j], -l, &out[s].components[j], mu, Family::Dual)
            })
            .collect();
        out.push(VectorPoly { r: (s + m) as isize, components });
        s += 1;
    }
    out
}

pub fn dual_vector(p: &QueueParams, r: isize) -> VectorPoly {
    assert!(r >= -1, "dual index must be at least -1");
    let mut fam = dual_family(p, r.max(0) as usize);
    fam.swap_remove((r + 1) as usize)
}

/// q_r(z) for r = 0..=r_max, each a vector of m values.
pub fn dual_values(p: &QueueParams, r_max: usize, z: Complex64) -> Vec<Vec<Complex64>> {
    let (l, mu, m) = (p.lambda, p.mu, p.m);
    let zero = Complex64::new(0.0, 0.0);
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        if r < m {
            let mut v = vec![zero; m];
            v[r] = Complex64::new(1.0, 0.0);
            out.push(v);
        } else {
            let s = r - m;
            let diag = if s < m { l } else { l + mu };
            let v = (0..m)
                .map(|j| {
                    let prev = if s >= 1 { out[s - 1][j] } else { zero };
                    ((diag + z) * out[s][j] - prev * l) / mu
                })
                .collect();
            out.push(v);
        }
    }
    out
}

/// Coefficients w_g ≥ 0 with Σ w_g Q_g = (x + λ + μ)^k Q_n, keyed by g.
pub fn shifted_power_expansion(p: &QueueParams, n: usize, k: usize) -> BTreeMap<usize, f64> {
    let mut current = BTreeMap::new();
    current.insert(n, 1.0);
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for (&g, &w) in &current {
            *next.entry(g + 1).or_insert(0.0) += w * p.lambda;
            let down = if g >= p.m { g - p.m } else { g };
            *next.entry(down).or_insert(0.0) += w * p.mu;
        }
        current = next;
    }
    current
}
