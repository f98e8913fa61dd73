use approx::assert_abs_diff_eq;
use bulkq_core::oracle::{
    cross_validate, expm_uniformization, picard_propagate, picard_solve, simulate_mc, simulate_replication,
    uniformization_rows, CrossConfig, McConfig, McResult,
};
use bulkq_core::{Error, QueueParams};

fn params(lambda: f64, mu: f64, m: usize) -> QueueParams {
    QueueParams::new(lambda, mu, m).unwrap()
}

#[test]
fn uniformization_at_zero_is_identity() {
    let e = expm_uniformization(&params(1.0, 2.0, 2), 12, 0.0, 1e-12).unwrap();
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(e.get(i, j), if i == j { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn uniformization_rows_are_stochastic() {
    let e = expm_uniformization(&params(1.0, 1.0, 1), 200, 1.0, 1e-12).unwrap();
    for i in 0..=40 {
        let s: f64 = e.row(i).iter().sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-9);
        assert!(e.row(i).iter().all(|&v| v >= 0.0));
    }
    assert!(matches!(expm_uniformization(&params(3.0, 1.0, 1), 10, 2.0, 1e-9), Err(Error::TruncationTooSmall { .. })));
}

#[test]
fn uniformization_derivative_at_zero() {
    let p = params(1.7, 0.4, 3);
    let h = 1e-5;
    let e = expm_uniformization(&p, 20, h, 1e-15).unwrap();
    for i in 0..10 {
        assert!((e.get(i, i + 1) / h - p.lambda).abs() < 1e-3);
    }
}

#[test]
fn uniformization_partial_sums_grow() {
    // fewer Poisson terms give an entrywise smaller matrix since every S^k is nonnegative
    let p = params(1.2, 0.9, 2);
    let coarse = expm_uniformization(&p, 60, 2.0, 1e-2).unwrap();
    let fine = expm_uniformization(&p, 60, 2.0, 1e-14).unwrap();
    for i in 0..60 {
        for j in 0..60 {
            assert!(coarse.get(i, j) <= fine.get(i, j) + 1e-16);
        }
    }
}

#[test]
fn automatic_rows_grow_the_section() {
    let p = params(2.0, 0.3, 1);
    let rows = uniformization_rows(&p, &[0, 5, 30], 10.0, 1e-12).unwrap();
    for row in &rows {
        assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
    }
}

#[test]
fn picard_matches_uniformization() {
    let p = params(1.0, 1.0, 1);
    let zero = picard_solve(&p, 200, 1.0, 3, 0).unwrap();
    let mut e3 = vec![0.0; 200];
    e3[3] = 1.0;
    assert_eq!(zero.row, e3);

    let state = picard_solve(&p, 200, 1.0, 0, 60).unwrap();
    assert!(state.bounds_hold());
    assert_eq!(state.ell, 3.0);
    assert_eq!(state.big_m, 2.0);
    let e = expm_uniformization(&p, 200, 1.0, 1e-14).unwrap();
    for j in 0..200 {
        assert!((state.row[j] - e.get(0, j)).abs() <= 1e-8);
    }
    assert!(matches!(picard_solve(&p, 200, 1.0, 0, 10), Err(Error::IterationBudgetExceeded { k: 10, .. })));
}

#[test]
fn picard_on_long_horizons() {
    let p = params(1.4, 0.8, 2);
    let state = picard_propagate(&p, 160, 4.0, 2).unwrap();
    assert!(state.bounds_hold());
    let e = expm_uniformization(&p, 160, 4.0, 1e-14).unwrap();
    for j in 0..160 {
        assert!((state.row[j] - e.get(2, j)).abs() <= 1e-8);
    }
}

#[test]
fn simulation_at_zero_is_point_mass() {
    let res = simulate_mc(&params(1.0, 1.0, 1), &McConfig { replications: 500, seed: 9, start: 4, horizon: 0.0 })
        .unwrap();
    assert_eq!(res.frequency(4), 1.0);
    assert_eq!(res.std_error(4), 0.0);
    assert_eq!(res.max_state(), 4);
}

fn three_sigma(p: &QueueParams, start: usize, t: f64, reps: u64, seed: u64) -> (usize, usize) {
    let res = simulate_mc(p, &McConfig { replications: reps, seed, start, horizon: t }).unwrap();
    let exact = uniformization_rows(p, &[start], t, 1e-12).unwrap().remove(0);
    let mut hits = 0;
    let cells = res.max_state().max(start) + 1;
    for s in 0..cells {
        let target = exact.get(s).copied().unwrap_or(0.0);
        if (res.frequency(s) - target).abs() <= 3.0 * res.std_error(s).max(1.0 / reps as f64) {
            hits += 1;
        }
    }
    (hits, cells)
}

#[test]
fn simulation_agrees_with_uniformization() {
    for (p, start, t) in [(params(1.0, 1.0, 1), 0, 1.0), (params(1.0, 2.0, 3), 5, 2.0)] {
        let (hits, cells) = three_sigma(&p, start, t, 100_000, 2024);
        assert!(hits as f64 >= 0.95 * cells as f64, "{p:?}: {hits}/{cells}");
    }
}

#[test]
fn simulation_coverage_across_seeds() {
    let p = params(1.0, 1.0, 2);
    let exact = uniformization_rows(&p, &[1], 1.5, 1e-12).unwrap().remove(0);
    for cell in 0..4 {
        let mut hits = 0;
        for seed in 0..20 {
            let res = simulate_mc(&p, &McConfig { replications: 4000, seed, start: 1, horizon: 1.5 }).unwrap();
            if (res.frequency(cell) - exact[cell]).abs() <= 3.0 * res.std_error(cell) {
                hits += 1;
            }
        }
        assert!(hits >= 17, "cell {cell}: {hits}/20");
    }
}

#[test]
fn simulation_is_reproducible() {
    let p = params(1.3, 0.6, 2);
    let cfg = McConfig { replications: 2000, seed: 77, start: 3, horizon: 2.0 };
    assert_eq!(simulate_mc(&p, &cfg).unwrap(), simulate_mc(&p, &cfg).unwrap());
    let by_rep = McResult::from_states((0..2000).map(|rep| simulate_replication(&p, 3, 2.0, 77, rep)));
    assert_eq!(by_rep, simulate_mc(&p, &cfg).unwrap());
    let other = simulate_mc(&p, &McConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(other, simulate_mc(&p, &cfg).unwrap());
    assert!(matches!(simulate_mc(&p, &McConfig { replications: 0, ..cfg }), Err(Error::InvalidArgument(_))));
}

#[test]
fn cross_validation_reports() {
    let p = params(1.0, 1.0, 2);
    let empty = cross_validate(&p, &[], &CrossConfig::default()).unwrap();
    assert!(empty.rows.is_empty() && empty.passed);

    let grid: Vec<(usize, usize, f64)> =
        [0.1, 1.0, 5.0].iter().flat_map(|&t| (0..=8).step_by(4).flat_map(move |n| (0..=8).step_by(2).map(move |r| (n, r, t)))).collect();
    for m in 1..=3 {
        let report = cross_validate(&params(0.9, 1.1, m), &grid, &CrossConfig::default()).unwrap();
        assert!(report.passed, "m = {m}: {} {}", report.max_spectral_diff, report.max_picard_diff);
        assert!(report.max_spectral_diff <= 1e-6);
        assert_eq!(report.decay_ok, Some(true));
    }

    let critical = cross_validate(&params(2.0, 1.0, 2), &grid[..10], &CrossConfig::default()).unwrap();
    assert!(critical.critical && critical.passed);
    assert_eq!(critical.decay_ok, None);

    let cfg = CrossConfig { mc_replications: 20_000, seed: 5, ..CrossConfig::default() };
    let with_mc = cross_validate(&p, &[(0, 0, 1.0), (0, 1, 1.0), (2, 2, 0.5)], &cfg).unwrap();
    assert_eq!(with_mc.mc_cells, 3);
    assert!(with_mc.rows.iter().all(|r| r.mc.is_some()));
}
