use approx::assert_abs_diff_eq;
use bulkq_core::algebraic::AlgebraicConfig;
use bulkq_core::polynomials::{
    dual_explicit, dual_vector, explicit_coefficients, h_poly, h_value_and_derivative, h_zeros, l_poly, q_explicit,
    q_family, q_poly, q_values, second_kind, shifted_power_expansion, t_poly, Family, Poly,
};
use bulkq_core::{Complex64, QueueParams};

fn params(lambda: f64, mu: f64, m: usize) -> QueueParams {
    QueueParams::new(lambda, mu, m).unwrap()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit(m: usize) -> AlgebraicConfig {
    AlgebraicConfig::new(1.0, m).unwrap()
}

/// Q_n with λ = μ = 1 in exact integer arithmetic.
fn integer_q(m: usize, n_max: usize) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = vec![vec![1]];
    for n in 0..n_max {
        let prev = &out[n];
        let mut next = vec![0i128; prev.len() + 1];
        let shift = if n < m { 1 } else { 2 };
        for (k, &c) in prev.iter().enumerate() {
            next[k] += shift * c;
            next[k + 1] += c;
        }
        if n >= m {
            for (k, &c) in out[n - m].iter().enumerate() {
                next[k] -= c;
            }
        }
        out.push(next);
    }
    out
}

#[test]
fn golden_integer_coefficients() {
    for m in 1..=3 {
        let exact = integer_q(m, 12);
        let fam = q_family(&params(1.0, 1.0, m), 12);
        for (n, (e, q)) in exact.iter().zip(&fam).enumerate() {
            assert_eq!(q.degree(), Some(n));
            for (k, &c) in e.iter().enumerate() {
                assert_eq!(q.coeff(k), c as f64, "m = {m}, n = {n}, k = {k}");
            }
        }
    }
}

#[test]
fn first_q_polynomials() {
    assert_eq!(q_poly(&params(3.0, 1.0, 2), 0).coeffs, vec![1.0]);
    assert_eq!(q_poly(&params(2.0, 1.0, 2), 1).coeffs, vec![1.0, 0.5]);
    let q2 = q_poly(&params(1.0, 1.0, 1), 2);
    assert_eq!(q2.coeffs, vec![1.0, 3.0, 1.0]);
    assert_eq!(q2.family, Family::Q);
    // leading coefficient λ^{−n}
    let q = q_poly(&params(2.0, 0.7, 3), 9);
    assert_abs_diff_eq!(q.leading(), 2f64.powi(-9), epsilon = 1e-18);
}

#[test]
fn closed_form_values() {
    let v = q_explicit(&params(1.0, 1.0, 1), 2, c64(1.0, 0.0)).unwrap();
    assert!((v - 5.0).norm() < 1e-9);
    let v = q_explicit(&params(1.0, 1.0, 2), 1, c64(0.5, 0.0)).unwrap();
    assert!((v - 1.5).norm() < 1e-9);
    let p = params(1.0, 2.0, 2);
    let z = c64(0.3, 0.2);
    let exact = q_explicit(&p, 7, z).unwrap();
    let rec = q_values(&p, 7, z)[7];
    assert!((exact - rec).norm() <= 1e-9 * rec.norm().max(1.0));
}

#[test]
fn explicit_coefficient_invariants() {
    let p = params(1.3, 0.9, 3);
    let ec = explicit_coefficients(&p, c64(-0.4, 0.7)).unwrap();
    let total: Complex64 = ec.a.iter().sum();
    assert!((total - 1.0).norm() < 1e-10);
    assert_eq!(ec.omega.len(), 4);
}

#[test]
fn dual_vector_rows() {
    let p = params(1.5, 0.5, 2);
    let q1 = dual_vector(&p, 1);
    assert_eq!(q1.components[0].coeffs, Vec::<f64>::new());
    assert_eq!(q1.components[1].coeffs, vec![1.0]);
    let q3 = dual_vector(&p, 3);
    assert_abs_diff_eq!(q3.components[0].coeff(0), -3.0, epsilon = 1e-15);
    assert_eq!(q3.components[0].degree(), Some(0));
    assert_abs_diff_eq!(q3.components[1].coeff(0), 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(q3.components[1].coeff(1), 2.0, epsilon = 1e-15);
    let minus = dual_vector(&p, -1);
    assert!(minus.components.iter().all(Poly::is_zero));
    // m = 1 is self-dual
    let q2 = dual_vector(&params(1.0, 1.0, 1), 2);
    assert_eq!(q2.components[0].coeffs, vec![1.0, 3.0, 1.0]);
}

#[test]
fn dual_closed_form_matches_recurrence() {
    let cases = [
        (params(1.0, 1.0, 2), 4, 0, c64(0.7, 0.0)),
        (params(1.0, 2.0, 2), 5, 1, c64(-0.4, 0.0)),
        (params(1.0, 1.0, 3), 6, 2, c64(0.1, 0.1)),
    ];
    for (p, r, j, z) in cases {
        let exact = dual_explicit(&p, r, j, z).unwrap();
        let rec = dual_vector(&p, r as isize).components[j].eval_complex(z);
        assert!((exact - rec).norm() <= 1e-8 * rec.norm().max(1.0), "{p:?} r={r}: {exact} vs {rec}");
    }
}

#[test]
fn t_and_l_polynomials() {
    let cfg = AlgebraicConfig::t_frame(&params(1.0, 1.0, 2));
    assert_eq!(t_poly(&cfg, 1).coeffs, vec![0.0, 1.0]);
    let cfg = AlgebraicConfig::t_frame(&params(1.0, 1.0, 1));
    assert_eq!(t_poly(&cfg, 3).coeffs, vec![0.0, -2.0, 0.0, 1.0]);
    let p = params(1.0, 1.0, 1);
    assert_eq!(l_poly(&p, 2).coeffs, vec![-1.0, -1.0, 1.0]);
}

/// p(x − s) by Horner on polynomials.
fn shifted(p: &Poly, s: f64) -> Poly {
    let lin = Poly::new(vec![-s, 1.0], Family::Other);
    p.coeffs.iter().rev().fold(Poly::zero(Family::Other), |acc, &c| acc.mul(&lin).add(&Poly::constant(c, Family::Other)))
}

#[test]
fn l_is_scaled_shift_of_q() {
    for (lambda, mu, m) in [(1.0, 1.0, 1), (0.8, 1.7, 2), (2.0, 0.5, 3)] {
        let p = params(lambda, mu, m);
        for n in 0..=10 {
            let l = l_poly(&p, n);
            let q = shifted(&q_poly(&p, n), lambda + mu).scale(lambda.powi(n as i32));
            let scale = l.max_abs_coeff();
            for k in 0..=n {
                assert!((l.coeff(k) - q.coeff(k)).abs() <= 1e-12 * scale, "{p:?} n={n} k={k}");
            }
        }
    }
}

#[test]
fn h_factorization() {
    let cfg = unit(2);
    assert_eq!(h_poly(&cfg, 3).coeffs, vec![-1.0, 1.0]);
    assert_eq!(h_poly(&cfg, 4).coeffs, vec![-2.0, 1.0]);
    assert_eq!(h_poly(&cfg, 5).coeffs, vec![-3.0, 1.0]);
    for n in 0..=2 {
        assert_eq!(h_poly(&cfg, n).coeffs, vec![1.0]);
    }
    assert_eq!(h_poly(&unit(1), 4).coeffs, vec![1.0, -3.0, 1.0]);

    for m in 1..=4 {
        let cfg = AlgebraicConfig::new(0.6, m).unwrap();
        for n in 0..=20 {
            let h = h_poly(&cfg, n);
            assert_eq!(h.degree(), Some(n / (m + 1)));
            let back = h.compose_power(m + 1).shift_up(n % (m + 1));
            let t = t_poly(&cfg, n);
            assert_eq!(back.coeffs.len(), t.coeffs.len());
            for k in 0..t.coeffs.len() {
                assert!((back.coeff(k) - t.coeff(k)).abs() <= 1e-12 * t.max_abs_coeff());
            }
        }
    }
}

#[test]
fn second_kind_shifts() {
    let cfg = unit(2);
    assert!(second_kind(&cfg, 0, 1).is_zero());
    assert_eq!(second_kind(&cfg, 2, 2).coeffs, vec![1.0]);
    assert_eq!(second_kind(&cfg, 5, 2).coeffs, t_poly(&cfg, 3).coeffs);
    assert_eq!(second_kind(&cfg, 5, 2).family, Family::SecondKind(2));
}

#[test]
fn zeros_of_h() {
    assert!(h_zeros(&unit(2), 2).unwrap().is_empty());
    let z = h_zeros(&unit(2), 4).unwrap();
    assert_eq!(z.len(), 1);
    assert_abs_diff_eq!(z[0], 2.0, epsilon = 1e-12);
    let z = h_zeros(&unit(1), 4).unwrap();
    let s5 = 5f64.sqrt();
    assert_abs_diff_eq!(z[0], (3.0 - s5) / 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(z[1], (3.0 + s5) / 2.0, epsilon = 1e-12);
}

#[test]
fn zeros_are_simple_positive_and_interlace() {
    for m in 1..=3 {
        let cfg = AlgebraicConfig::new(1.4, m).unwrap();
        for n in (m + 1)..=30 {
            let h = h_poly(&cfg, n);
            let zs = h_zeros(&cfg, n).unwrap();
            assert_eq!(zs.len(), n / (m + 1));
            assert!(h.coeff(0) != 0.0);
            let norm = h.max_abs_coeff();
            for w in zs.windows(2) {
                assert!(w[0] < w[1]);
            }
            for &x in &zs {
                assert!(x > 0.0);
                let (v, dv) = h_value_and_derivative(&cfg, n, x);
                assert!(v.abs() <= 1e-10 * norm * x.max(1.0).powi(zs.len() as i32), "m={m} n={n}: {v}");
                assert!(dv != 0.0);
            }
            let next = h_zeros(&cfg, n + 1).unwrap();
            if next.len() == zs.len() + 1 {
                for (k, &x) in zs.iter().enumerate() {
                    assert!(next[k] < x && x < next[k + 1], "m={m} n={n}");
                }
            } else {
                for (k, &x) in zs.iter().enumerate() {
                    assert!(next[k] > x || (next[k] - x).abs() < 1e-12, "m={m} n={n}");
                    if k + 1 < zs.len() {
                        assert!(next[k] < zs[k + 1]);
                    }
                }
            }
        }
    }
}

#[test]
fn shifted_power_examples() {
    let p = params(1.3, 0.7, 2);
    let e = shifted_power_expansion(&p, 5, 0);
    assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![(5, 1.0)]);
    let e = shifted_power_expansion(&params(1.0, 1.0, 1), 1, 1);
    assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![(0, 1.0), (2, 1.0)]);
    let e = shifted_power_expansion(&p, 4, 1);
    assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![(2, 0.7), (5, 1.3)]);
}

#[test]
fn shifted_power_reconstructs_product() {
    let p = params(0.9, 1.6, 2);
    let fam = q_family(&p, 40);
    for n in 0..6 {
        for k in 0..8 {
            let exp = shifted_power_expansion(&p, n, k);
            let mut rebuilt = Poly::zero(Family::Other);
            for (&g, &w) in &exp {
                assert!(w >= 0.0);
                rebuilt = rebuilt.add(&fam[g].scale(w));
            }
            let lin = Poly::new(vec![p.lambda + p.mu, 1.0], Family::Other);
            let mut direct = fam[n].clone();
            for _ in 0..k {
                direct = direct.mul(&lin);
            }
            let scale = direct.max_abs_coeff();
            for i in 0..=(n + k) {
                assert!((rebuilt.coeff(i) - direct.coeff(i)).abs() <= 1e-10 * scale, "n={n} k={k} i={i}");
            }
        }
    }
}

#[test]
fn vandermonde_inverse_and_dual_table() {
    for (l, mu, m) in [(1.0, 1.0, 1), (1.5, 0.5, 2), (0.8, 1.3, 3)] {
        let p = params(l, mu, m);
        let ec = explicit_coefficients(&p, c64(-0.4, 0.7)).unwrap();
        for s in 0..=m {
            for t in 0..=m {
                let prod: Complex64 = (0..=m).map(|k| ec.w_inv[s][k] * ec.w[k][t]).sum();
                let delta = if s == t { 1.0 } else { 0.0 };
                assert!((prod - delta).norm() < 1e-10, "m={m} ({s},{t}): {prod}");
            }
        }
        for j in 0..m {
            for s in 0..=m {
                let prod: Complex64 = (0..=m).map(|k| ec.b[j][k] * ec.w[k][s]).sum();
                assert!((prod - ec.d[j][s]).norm() < 1e-10 * (1.0 + ec.d[j][s].norm()), "m={m} j={j} s={s}");
            }
        }
    }
}
