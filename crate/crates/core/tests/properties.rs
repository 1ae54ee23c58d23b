//! Property tests over random grids, kernels and candidate covariances.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sskern_core::{
    chain_rule_residual, empirical_covariance, eval_kernel, exp_transform, finite_difference,
    gaussian_entropy, gram, increment_matrix, make_grid, maxent_gap, min_eigenvalue,
    random_constrained_covariance, sample_wiener, white_noise_rate, KernelSpec, TimeGrid,
};

fn grid_from_gaps(gaps: &[f64]) -> TimeGrid {
    let mut t = vec![0.0];
    let mut acc = 0.0;
    for g in gaps {
        acc += g;
        t.push(acc);
    }
    make_grid(&t).unwrap()
}

fn random_grid(rng: &mut ChaCha8Rng, n_points: usize) -> TimeGrid {
    let gaps: Vec<f64> = (0..n_points - 1)
        .map(|_| 10f64.powf(rng.random_range(-2.0..1.0)))
        .collect();
    grid_from_gaps(&gaps)
}

proptest! {
    #[test]
    fn exp_transform_order_reversing(
        gaps in prop::collection::vec(1e-3f64..5.0, 1..12),
        beta in 1e-6f64..10.0,
    ) {
        let grid = grid_from_gaps(&gaps);
        let tg = exp_transform(&grid, beta).unwrap();
        let taus = tg.taus();
        prop_assert_eq!(taus[0], 1.0);
        for i in 1..taus.len() {
            prop_assert!(taus[i] < taus[i - 1]);
            prop_assert!(taus[i] > 0.0 && taus[i] <= 1.0);
        }
    }

    #[test]
    fn tc_equals_wiener_on_warped_times(
        gaps in prop::collection::vec(1e-3f64..5.0, 1..10),
        beta in 0.01f64..5.0,
        lambda in 0.01f64..10.0,
        i in 0usize..10,
        j in 0usize..10,
    ) {
        let grid = grid_from_gaps(&gaps);
        let t = grid.times();
        let (ti, tj) = (t[i % t.len()], t[j % t.len()]);
        let tc = eval_kernel(&KernelSpec::Tc { beta, lambda }, ti, tj).unwrap();
        let warped = eval_kernel(
            &KernelSpec::Wiener { lambda },
            (-beta * ti).exp(),
            (-beta * tj).exp(),
        )
        .unwrap();
        prop_assert!((tc - warped).abs() <= 1e-14 * tc.abs().max(1e-300));
    }

    #[test]
    fn make_grid_idempotent(gaps in prop::collection::vec(1e-3f64..5.0, 0..20)) {
        let grid = grid_from_gaps(&gaps);
        let rebuilt = make_grid(grid.times()).unwrap();
        prop_assert_eq!(grid, rebuilt);
    }
}

#[test]
fn transform_identity_thousand_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let np = rng.random_range(2..12);
        let grid = random_grid(&mut rng, np);
        let beta = 10f64.powf(rng.random_range(-2.0..1.0));
        let lambda = 10f64.powf(rng.random_range(-2.0..1.0));
        let t = grid.times();
        let ti = t[rng.random_range(0..t.len())];
        let tj = t[rng.random_range(0..t.len())];
        let tc = eval_kernel(&KernelSpec::Tc { beta, lambda }, ti, tj).unwrap();
        let warped = eval_kernel(
            &KernelSpec::Wiener { lambda },
            (-beta * ti).exp(),
            (-beta * tj).exp(),
        )
        .unwrap();
        assert!(
            (tc - warped).abs() <= 1e-14 * tc.abs().max(f64::MIN_POSITIVE),
            "tc={tc}, warped={warped}"
        );
    }
}

#[test]
fn grams_are_psd_on_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let np = rng.random_range(2..=50);
        let grid = random_grid(&mut rng, np);
        for spec in [
            KernelSpec::Tc {
                beta: 10f64.powf(rng.random_range(-1.0..0.5)),
                lambda: 1.0,
            },
            KernelSpec::Wiener { lambda: 1.5 },
            KernelSpec::WhiteNoise { sigma2: 0.7 },
        ] {
            let k = gram(&spec, &grid).unwrap();
            let trace = k.entries().trace();
            assert!(min_eigenvalue(&k).unwrap() >= -1e-8 * trace);
        }
    }
}

#[test]
fn chain_rule_hundred_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let np = rng.random_range(2..=50);
        let grid = random_grid(&mut rng, np);
        let lambda = rng.random_range(0.1..10.0);
        let residual = chain_rule_residual(&grid, lambda).unwrap();
        assert!(residual.abs() < 1e-8, "residual {residual}");
    }
}

#[test]
fn wiener_dominates_random_feasible_candidates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..200 {
        let n = rng.random_range(2..=8);
        let grid = random_grid(&mut rng, n + 1);
        let lambda = rng.random_range(0.1..5.0);
        let cand = random_constrained_covariance(&grid, lambda, 1000 + trial).unwrap();
        let gap = maxent_gap(&cand).unwrap();
        assert!(gap >= -1e-10, "gap {gap}");
    }
}

#[test]
fn unit_variance_entropy_bounded_by_white_noise() {
    // Random covariances with all variances equal to lambda never beat the
    // i.i.d. bound; equality needs a diagonal covariance.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let lambda = 1.0;
    let n = 6;
    let bound = n as f64 * white_noise_rate(lambda).unwrap();
    for _ in 0..200 {
        let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = &g * g.transpose() + DMatrix::from_diagonal_element(n, n, 1e-6);
        let mut c = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] = s[(i, j)] * (lambda / s[(i, i)]).sqrt() * (lambda / s[(j, j)]).sqrt();
            }
        }
        let c = (&c + c.transpose()) * 0.5;
        let h = gaussian_entropy(&c).unwrap();
        assert!(h <= bound + 1e-10, "h={h}, bound={bound}");
    }
    let diag = DMatrix::from_diagonal_element(n, n, lambda);
    let h = gaussian_entropy(&diag).unwrap();
    assert!((h - bound).abs() < 1e-12);
}

#[test]
fn rescaled_wiener_differences_are_white() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let grid = random_grid(&mut rng, 6);
    let lambda = 1.0;
    let paths = sample_wiener(&grid, lambda, 17, 100_000).unwrap();
    let diffs = finite_difference(&paths).unwrap();
    let cov = empirical_covariance(&diffs).unwrap();
    let gaps = grid.spacings();
    for i in 0..cov.nrows() {
        let scaled = cov[(i, i)] / gaps[i];
        assert!((scaled - lambda).abs() < 0.03 * lambda);
        for j in 0..i {
            let corr = cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt();
            assert!(corr.abs() < 0.02, "corr {corr}");
        }
    }
}

#[test]
fn sampling_independent_of_thread_count() {
    let grid = make_grid(&[0.0, 0.3, 1.0, 2.0, 5.0]).unwrap();
    let multi = sample_wiener(&grid, 1.0, 9, 256).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(|| sample_wiener(&grid, 1.0, 9, 256).unwrap());
    assert_eq!(multi.values(), single.values());
}

#[test]
fn tc_entropy_equals_warped_wiener_entropy_hundred_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let np = rng.random_range(2..10);
        let grid = random_grid(&mut rng, np);
        let beta = 10f64.powf(rng.random_range(-1.0..0.5));
        let lambda = rng.random_range(0.2..3.0);
        let h_tc = gaussian_entropy(
            gram(&KernelSpec::Tc { beta, lambda }, &grid).unwrap().entries(),
        )
        .unwrap();
        let taus: Vec<f64> = exp_transform(&grid, beta)
            .unwrap()
            .taus()
            .iter()
            .rev()
            .cloned()
            .collect();
        let n = taus.len();
        let wiener = DMatrix::from_fn(n, n, |i, j| lambda * taus[i].min(taus[j]));
        let h_w = gaussian_entropy(&wiener).unwrap();
        if h_tc.is_finite() || h_w.is_finite() {
            assert!((h_tc - h_w).abs() < 1e-8, "{h_tc} vs {h_w}");
        }
    }
}

#[test]
fn wiener_cumulative_equals_increment_map_hundred_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let np = rng.random_range(2..12);
        let grid = random_grid(&mut rng, np);
        let lambda = rng.random_range(0.2..4.0);
        let n = grid.len();
        let seed = 5000 + trial;
        let wiener = sample_wiener(&grid, lambda, seed, 8).unwrap();
        let aux = make_grid(&grid.times()[..n - 1]).unwrap();
        let white = sskern_core::sample_white(&aux, lambda, seed, 8).unwrap();
        let a = increment_matrix(&grid).unwrap();
        for p in 0..8 {
            let levels = a.entries() * white.values().row(p).transpose();
            for i in 0..n - 1 {
                assert!(
                    (wiener.values()[(p, i + 1)] - levels[i]).abs() <= 1e-12,
                    "route mismatch"
                );
            }
        }
    }
}

#[test]
fn disjoint_wiener_increments_uncorrelated() {
    let grid = make_grid(&[0.0, 0.5, 1.25, 2.0, 3.5]).unwrap();
    let paths = sample_wiener(&grid, 1.0, 23, 100_000).unwrap();
    let diffs = finite_difference(&paths).unwrap();
    let cov = empirical_covariance(&diffs).unwrap();
    for i in 0..cov.nrows() {
        for j in 0..i {
            let corr = cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt();
            assert!(corr.abs() < 0.02);
        }
    }
}
