//! The `verify` subcommand: numerical checks of the library's
//! maximum-entropy and covariance properties, reported as a pass/fail
//! table.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sskern_core::{
    chain_rule_residual, empirical_covariance, eval_kernel, exp_transform, finite_difference,
    gaussian_entropy, gram, increment_matrix, make_grid, maxent_gap, min_eigenvalue,
    random_constrained_covariance, sample_stable_spline, sample_white, sample_wiener,
    white_noise_rate, KernelSpec, TimeGrid,
};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> CheckResult {
    CheckResult { name, pass, detail }
}

fn random_grid(rng: &mut ChaCha8Rng, n_points: usize) -> TimeGrid {
    let mut t = vec![0.0];
    let mut acc = 0.0;
    for _ in 0..n_points - 1 {
        acc += 10f64.powf(rng.random_range(-2.0..1.0));
        t.push(acc);
    }
    make_grid(&t).unwrap()
}

/// White noise maximizes entropy among unit-variance covariances, and its
/// rate has the closed form `1/2 log(2 pi e lambda)`.
pub fn check_lemma1(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 8;
    let lambda = 1.0;
    let bound = n as f64 * white_noise_rate(lambda).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut dominated = true;
    for _ in 0..1000 {
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
        worst = worst.max(h - bound);
        if h > bound + 1e-10 {
            dominated = false;
        }
    }
    let mut rate_exact = true;
    let mut worst_rate = 0.0f64;
    for n_pts in 1..=50 {
        let grid = TimeGrid::uniform(n_pts.max(2), 1.0).unwrap();
        let reports = sskern_core::entropy_rate_curve(
            &KernelSpec::WhiteNoise { sigma2: lambda },
            &grid,
            n_pts,
        )
        .unwrap();
        for r in &reports {
            let resid = (r.rate - white_noise_rate(lambda).unwrap()).abs();
            worst_rate = worst_rate.max(resid);
            if resid > 1e-12 {
                rate_exact = false;
            }
        }
    }
    vec![
        check(
            "lemma1/unit-variance entropy dominated by white noise",
            dominated,
            format!("worst excess {worst:.3e} (limit 1e-10)"),
        ),
        check(
            "lemma1/white-noise rate closed form",
            rate_exact,
            format!("worst residual {worst_rate:.3e} (limit 1e-12)"),
        ),
    ]
}

/// Both directions of the cumulative-sum characterization of the Wiener
/// process.
pub fn check_lemma2(seed: u64) -> Vec<CheckResult> {
    // (a) whiteness of rescaled finite differences
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = random_grid(&mut rng, 6);
    let lambda = 1.0;
    let paths = sample_wiener(&grid, lambda, seed ^ 0x57, 100_000).unwrap();
    let diffs = finite_difference(&paths).unwrap();
    let cov = empirical_covariance(&diffs).unwrap();
    let gaps = grid.spacings();
    let mut var_ok = true;
    let mut corr_ok = true;
    let mut worst_var = 0.0f64;
    let mut worst_corr = 0.0f64;
    for i in 0..cov.nrows() {
        let rel = (cov[(i, i)] / gaps[i] - lambda).abs() / lambda;
        worst_var = worst_var.max(rel);
        if rel > 0.03 {
            var_ok = false;
        }
        for j in 0..i {
            let corr = cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt();
            worst_corr = worst_corr.max(corr.abs());
            if corr.abs() > 0.02 {
                corr_ok = false;
            }
        }
    }
    // (b) cumulative construction equals the increment-matrix route
    let mut route_ok = true;
    let mut worst_route = 0.0f64;
    for trial in 0..100 {
        let np = rng.random_range(2..12);
        let g = random_grid(&mut rng, np);
        let lam = rng.random_range(0.2..4.0);
        let s = seed.wrapping_add(7000 + trial);
        let wiener = sample_wiener(&g, lam, s, 8).unwrap();
        let aux = make_grid(&g.times()[..g.len() - 1]).unwrap();
        let white = sample_white(&aux, lam, s, 8).unwrap();
        let a = increment_matrix(&g).unwrap();
        for p in 0..8 {
            let levels = a.entries() * white.values().row(p).transpose();
            for i in 0..g.len() - 1 {
                let err = (wiener.values()[(p, i + 1)] - levels[i]).abs();
                worst_route = worst_route.max(err);
                if err > 1e-12 {
                    route_ok = false;
                }
            }
        }
    }
    vec![
        check(
            "lemma2/rescaled differences have white variance",
            var_ok,
            format!("worst relative error {worst_var:.3e} (limit 0.03)"),
        ),
        check(
            "lemma2/rescaled differences uncorrelated",
            corr_ok,
            format!("worst |corr| {worst_corr:.3e} (limit 0.02)"),
        ),
        check(
            "lemma2/cumulative equals increment-matrix route",
            route_ok,
            format!("worst deviation {worst_route:.3e} (limit 1e-12)"),
        ),
    ]
}

/// Monte Carlo check of the `lambda min(t_i, t_j)` covariance.
pub fn check_lemma3(seed: u64) -> Vec<CheckResult> {
    let grid = make_grid(&[0.0, 0.2, 0.5, 0.9, 1.4, 2.0, 2.3, 3.1, 4.0, 5.5]).unwrap();
    let lambda = 1.0;
    let paths = sample_wiener(&grid, lambda, seed, 200_000).unwrap();
    let cov = empirical_covariance(&paths).unwrap();
    let k = gram(&KernelSpec::Wiener { lambda }, &grid).unwrap();
    let max_entry = k.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..cov.nrows() {
        for j in 0..cov.ncols() {
            worst = worst.max((cov[(i, j)] - k.entries()[(i, j)]).abs());
        }
    }
    let pass = worst <= 0.03 * max_entry;
    vec![check(
        "lemma3/wiener covariance matches lambda*min",
        pass,
        format!(
            "max elementwise error {worst:.3e} (limit {:.3e})",
            0.03 * max_entry
        ),
    )]
}

/// Wiener dominance over random feasible constrained covariances, with
/// equality only at diagonal increment covariances.
pub fn check_prop2(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dominance = true;
    let mut equality_only_diag = true;
    let mut worst_gap = f64::INFINITY;
    let mut count = 0u64;
    for n in 2..=8 {
        let grid = random_grid(&mut rng, n + 1);
        let lambda = rng.random_range(0.1..5.0);
        for trial in 0..1000 {
            let cand =
                random_constrained_covariance(&grid, lambda, seed ^ (n as u64 * 100_000 + trial))
                    .unwrap();
            let gap = maxent_gap(&cand).unwrap();
            worst_gap = worst_gap.min(gap);
            count += 1;
            if gap < -1e-10 {
                dominance = false;
            }
            if gap < 1e-10 {
                // near-zero gap must come with a near-diagonal increment cov
                let inc = cand.increment_covariance();
                for i in 0..inc.nrows() {
                    for j in 0..i {
                        if inc[(i, j)].abs() > 1e-8 {
                            equality_only_diag = false;
                        }
                    }
                }
            }
        }
    }
    vec![
        check(
            "prop2/wiener dominates feasible candidates",
            dominance,
            format!("{count} candidates, min gap {worst_gap:.3e} (limit -1e-10)"),
        ),
        check(
            "prop2/zero gap only at diagonal increments",
            equality_only_diag,
            "near-zero gaps all had diagonal increment covariance".into(),
        ),
    ]
}

/// Stable-spline sampling agrees with the TC Gram; the TC kernel is the
/// Wiener kernel at exponentially warped times; entropies agree under the
/// warp.
pub fn check_prop3(seed: u64) -> Vec<CheckResult> {
    let grid = TimeGrid::uniform(10, 1.0).unwrap();
    let paths = sample_stable_spline(&grid, 1.0, 1.0, seed, 200_000).unwrap();
    let cov = empirical_covariance(&paths).unwrap();
    let k = gram(
        &KernelSpec::Tc {
            beta: 1.0,
            lambda: 1.0,
        },
        &grid,
    )
    .unwrap();
    let max_entry = k.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst_mc = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            worst_mc = worst_mc.max((cov[(i, j)] - k.entries()[(i, j)]).abs());
        }
    }
    let mc_ok = worst_mc <= 0.03 * max_entry;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x99);
    let mut identity_ok = true;
    let mut worst_identity = 0.0f64;
    for _ in 0..1000 {
        let np = rng.random_range(2..12);
        let g = random_grid(&mut rng, np);
        let beta = 10f64.powf(rng.random_range(-2.0..1.0));
        let lambda = 10f64.powf(rng.random_range(-2.0..1.0));
        let t = g.times();
        let ti = t[rng.random_range(0..t.len())];
        let tj = t[rng.random_range(0..t.len())];
        let tc = eval_kernel(&KernelSpec::Tc { beta, lambda }, ti, tj).unwrap();
        let warped = eval_kernel(
            &KernelSpec::Wiener { lambda },
            (-beta * ti).exp(),
            (-beta * tj).exp(),
        )
        .unwrap();
        let rel = (tc - warped).abs() / tc.abs().max(f64::MIN_POSITIVE);
        worst_identity = worst_identity.max(rel);
        if rel > 1e-14 {
            identity_ok = false;
        }
    }

    let mut entropy_ok = true;
    let mut worst_entropy = 0.0f64;
    for _ in 0..100 {
        let np = rng.random_range(2..10);
        let g = random_grid(&mut rng, np);
        let beta = 10f64.powf(rng.random_range(-1.0..0.5));
        let lambda = rng.random_range(0.2..3.0);
        let h_tc =
            gaussian_entropy(gram(&KernelSpec::Tc { beta, lambda }, &g).unwrap().entries())
                .unwrap();
        let taus: Vec<f64> = exp_transform(&g, beta)
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
            let err = (h_tc - h_w).abs();
            worst_entropy = worst_entropy.max(err);
            if err > 1e-8 {
                entropy_ok = false;
            }
        }
    }
    vec![
        check(
            "prop3/stable-spline sampling matches TC Gram",
            mc_ok,
            format!(
                "max elementwise error {worst_mc:.3e} (limit {:.3e})",
                0.03 * max_entry
            ),
        ),
        check(
            "prop3/TC equals Wiener at warped times",
            identity_ok,
            format!("worst relative deviation {worst_identity:.3e} (limit 1e-14)"),
        ),
        check(
            "prop3/entropy invariant under the warp",
            entropy_ok,
            format!("worst deviation {worst_entropy:.3e} (limit 1e-8)"),
        ),
    ]
}

/// Gram matrices of all families stay PSD on random grids.
pub fn check_psd(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let np = rng.random_range(2..=50);
        let grid = random_grid(&mut rng, np);
        for spec in [
            KernelSpec::Tc {
                beta: 10f64.powf(rng.random_range(-1.0..0.5)),
                lambda: rng.random_range(0.2..3.0),
            },
            KernelSpec::Wiener {
                lambda: rng.random_range(0.2..3.0),
            },
            KernelSpec::WhiteNoise {
                sigma2: rng.random_range(0.2..3.0),
            },
        ] {
            let k = gram(&spec, &grid).unwrap();
            let trace = k.entries().trace();
            let ratio = min_eigenvalue(&k).unwrap() / trace;
            worst = worst.min(ratio);
            if ratio < -1e-8 {
                ok = false;
            }
        }
    }
    vec![check(
        "psd/gram matrices on random grids",
        ok,
        format!("min eigenvalue/trace {worst:.3e} (limit -1e-8)"),
    )]
}

/// The entropy identity between level and innovation coordinates.
pub fn check_chain(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let np = rng.random_range(2..=50);
        let grid = random_grid(&mut rng, np);
        let lambda = rng.random_range(0.1..10.0);
        let residual = chain_rule_residual(&grid, lambda).unwrap().abs();
        worst = worst.max(residual);
        if residual > 1e-8 {
            ok = false;
        }
    }
    vec![check(
        "chain/level-innovation entropy identity",
        ok,
        format!("worst residual {worst:.3e} (limit 1e-8)"),
    )]
}

pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<CheckResult>, String> {
    let mut out = Vec::new();
    let all = suite == "all";
    let mut known = false;
    if all || suite == "lemma1" {
        out.extend(check_lemma1(seed));
        known = true;
    }
    if all || suite == "lemma2" {
        out.extend(check_lemma2(seed));
        known = true;
    }
    if all || suite == "lemma3" {
        out.extend(check_lemma3(seed));
        known = true;
    }
    if all || suite == "prop2" {
        out.extend(check_prop2(seed));
        known = true;
    }
    if all || suite == "prop3" {
        out.extend(check_prop3(seed));
        known = true;
    }
    if all || suite == "psd" {
        out.extend(check_psd(seed));
        known = true;
    }
    if all || suite == "chain" {
        out.extend(check_chain(seed));
        known = true;
    }
    if !known {
        return Err(format!(
            "unknown suite `{suite}`; expected all, lemma1, lemma2, lemma3, prop2, prop3, psd or chain"
        ));
    }
    Ok(out)
}
