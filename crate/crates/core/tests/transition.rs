use approx::assert_abs_diff_eq;
use bulkq_core::model::build_generator;
use bulkq_core::oracle::{expm_uniformization, uniformization_rows};
use bulkq_core::spectral::SpectralFunctional;
use bulkq_core::transition::{
    decay_rate, honesty_check, poisson_tail, semigroup_check, tail_bound, transition_spectral, Method, SpectralEngine,
    TransitionQuery,
};
use bulkq_core::{Error, QueueParams};

fn params(lambda: f64, mu: f64, m: usize) -> QueueParams {
    QueueParams::new(lambda, mu, m).unwrap()
}

fn query(n: usize, r: usize, times: &[f64]) -> TransitionQuery {
    TransitionQuery { n, r, times: times.to_vec() }
}

#[test]
fn identity_at_time_zero() {
    for p in [params(1.0, 1.0, 1), params(0.6, 1.5, 3)] {
        let engine = SpectralEngine::new(&p, 0.0).unwrap();
        for r in 0..8 {
            let col = engine.column(r, 8, &[0.0]).unwrap();
            for n in 0..=8 {
                let target = if n == r { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(col[0][n].0, target, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn arrival_rate_at_short_times() {
    let p = params(1.4, 0.9, 2);
    for i in 0..4 {
        let mut last = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let v = transition_spectral(&p, &query(i, i + 1, &[h])).unwrap().values[0];
            let gap = (v / h - p.lambda).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-3, "i = {i}: {last}");
    }
}

#[test]
fn matches_uniformization_example() {
    let p = params(1.0, 1.0, 2);
    let res = transition_spectral(&p, &query(0, 2, &[1.0])).unwrap();
    assert_eq!(res.method, Method::Spectral);
    let dense = expm_uniformization(&p, 400, 1.0, 1e-10).unwrap();
    assert!((res.values[0] - dense.get(0, 2)).abs() <= 1e-6);
    assert!(res.error_estimate[0] <= 1e-9);
}

#[test]
fn agrees_with_uniformization_on_a_grid() {
    let times = [0.1, 0.5, 1.0, 2.5, 5.0];
    for p in [params(1.0, 1.0, 1), params(0.5, 1.0, 2), params(2.5, 0.7, 3), params(1.2, 0.4, 2)] {
        let engine = SpectralEngine::new(&p, 5.0).unwrap();
        let rows: Vec<usize> = (0..=10).collect();
        for &t in &times {
            let uni = uniformization_rows(&p, &rows, t, 1e-12).unwrap();
            for r in 0..=10 {
                let col = engine.column(r, 10, &[t]).unwrap();
                for n in 0..=10 {
                    let (v, est) = col[0][n];
                    assert!(est <= 1e-9);
                    assert!((v - uni[n][r]).abs() <= 1e-6, "{p:?} n={n} r={r} t={t}: {v} vs {}", uni[n][r]);
                    assert!(v >= -1e-7);
                }
            }
        }
    }
}

#[test]
fn rows_sum_to_one() {
    let p = params(0.8, 0.8, 2);
    let engine = SpectralEngine::new(&p, 0.0).unwrap();
    let mut total = 0.0;
    for r in 0..=6 {
        total += engine.column(r, 3, &[0.0]).unwrap()[0][3].0;
    }
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    let v = honesty_check(&params(1.0, 1.0, 1), 0, 1.0, 40).unwrap();
    assert_abs_diff_eq!(v, 1.0, epsilon = 1e-7);
    let v = honesty_check(&params(2.0, 1.0, 2), 3, 2.0, 80).unwrap();
    assert_abs_diff_eq!(v, 1.0, epsilon = 1e-6);
    assert!(matches!(honesty_check(&params(2.0, 1.0, 2), 0, 5.0, 10), Err(Error::TailNotControlled { .. })));
}

#[test]
fn chapman_kolmogorov() {
    let v = semigroup_check(&params(1.0, 1.0, 1), 0, 1, 0.5, 0.5, 60).unwrap();
    assert!(v <= 1e-7);
    let v = semigroup_check(&params(1.0, 2.0, 3), 2, 5, 0.3, 0.7, 100).unwrap();
    assert!(v <= 1e-6);
    let v = semigroup_check(&params(1.3, 0.5, 2), 1, 2, 0.0, 0.8, 20).unwrap();
    assert!(v <= 1e-12);
}

#[test]
fn tails() {
    assert_eq!(poisson_tail(0.0, 3), 0.0);
    // P(Poisson(1) > 0) = 1 − e^{−1}
    assert_abs_diff_eq!(poisson_tail(1.0, 0), 1.0 - (-1.0f64).exp(), epsilon = 1e-14);
    assert_abs_diff_eq!(poisson_tail(2.0, 1), 1.0 - 3.0 * (-2.0f64).exp(), epsilon = 1e-14);
    assert_eq!(tail_bound(&params(1.0, 1.0, 1), 5, 1.0, 4), 1.0);
}

#[test]
fn decay_rates() {
    assert_abs_diff_eq!(decay_rate(&params(1.0, 1.0, 1)), 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(decay_rate(&params(1.0, 2.0, 1)), -3.0 + 2.0 * 2f64.sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(decay_rate(&params(1.0, 1.0, 2)), -2.0 + 3.0 * 0.25f64.powf(1.0 / 3.0), epsilon = 1e-12);
    assert_abs_diff_eq!(decay_rate(&params(1.0, 1.0, 2)), -0.1101, epsilon = 1e-4);
    assert!(decay_rate(&params(3.0, 0.5, 2)) < 0.0);
}

#[test]
fn continuity_at_zero() {
    let p = params(2.0, 1.5, 2);
    let engine = SpectralEngine::new(&p, 1e-2).unwrap();
    for (n, r) in [(0, 0), (3, 3), (3, 4), (4, 2)] {
        let mut last = f64::INFINITY;
        for dt in [1e-2, 1e-3, 1e-4] {
            let v = engine.column(r, n, &[dt]).unwrap()[0][n].0;
            let gap = (v - if n == r { 1.0 } else { 0.0 }).abs();
            assert!(gap < last && gap < 50.0 * dt);
            last = gap;
        }
    }
}

#[test]
fn backward_equations_hold() {
    let p = params(1.1, 0.8, 2);
    let a = build_generator(&p, 40).unwrap();
    let h = 1e-3;
    let engine = SpectralEngine::new(&p, 3.0).unwrap();
    for &t in &[0.5, 1.5, 2.5] {
        let times = [t - 2.0 * h, t - h, t, t + h, t + 2.0 * h];
        for r in 0..5 {
            let col = engine.column(r, 8, &times).unwrap();
            for i in 0..7 {
                let d = (col[0][i].0 - 8.0 * col[1][i].0 + 8.0 * col[3][i].0 - col[4][i].0) / (12.0 * h);
                let rhs: f64 = (0..=8).map(|k| a.entry(i, k) * col[2][k].0).sum();
                assert!((d - rhs).abs() <= 1e-4, "t={t} i={i} r={r}: {d} vs {rhs}");
            }
        }
    }
}

#[test]
fn transient_part_decays_at_star_edge_rate() {
    // Mid load with no pole to the right of the star: |P − π| e^{−κt} stays bounded.
    let p = params(1.0, 1.0, 2);
    let f = SpectralFunctional::new(&p).unwrap();
    let kappa = decay_rate(&p);
    let edge_led = f.atoms.iter().all(|a| a.location.norm() < 1e-9 || a.location.re < kappa);
    assert!(edge_led);
    let engine = SpectralEngine::new(&p, 30.0).unwrap();
    let times: Vec<f64> = (0..=25).map(|k| 5.0 + k as f64).collect();
    let col = engine.transient_column(0, 0, &times).unwrap();
    let scaled: Vec<f64> = times.iter().zip(&col).map(|(t, c)| c[0].0.abs() * (-kappa * t).exp()).collect();
    let early = scaled[..6].iter().fold(0.0f64, |a, &b| a.max(b));
    assert!(scaled.iter().all(|&s| s <= 10.0 * early), "{scaled:?}");
}

#[test]
fn rejects_bad_queries() {
    let p = params(1.0, 1.0, 1);
    assert!(matches!(transition_spectral(&p, &query(65, 0, &[1.0])), Err(Error::InvalidArgument(_))));
    assert!(matches!(transition_spectral(&p, &query(0, 0, &[])), Err(Error::InvalidArgument(_))));
    assert!(matches!(transition_spectral(&p, &query(0, 0, &[-1.0])), Err(Error::InvalidArgument(_))));
    let bad = QueueParams { lambda: -1.0, mu: 1.0, m: 1 };
    assert!(matches!(transition_spectral(&bad, &query(0, 0, &[1.0])), Err(Error::NonPositiveRate { .. })));
}
