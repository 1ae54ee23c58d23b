//! Samplers for discrete-time white-noise, Wiener and stable-spline
//! processes, the finite-difference operator, the lower-triangular increment
//! map, and the Monte Carlo covariance estimator.
//!
//! Path `p` draws from RNG stream `p` of a counter-based generator seeded by
//! the run seed, so results are identical regardless of how paths are
//! scheduled across threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{exp_transform, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessTag {
    White,
    Wiener,
    StableSpline,
}

/// Sampled trajectories: one row per path, one column per grid point.
#[derive(Debug, Clone)]
pub struct ProcessPaths {
    values: DMatrix<f64>,
    grid: TimeGrid,
    seed: u64,
    tag: ProcessTag,
}

impl ProcessPaths {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tag(&self) -> ProcessTag {
        self.tag
    }

    pub fn n_paths(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_points(&self) -> usize {
        self.values.ncols()
    }
}

/// Lower-triangular map from white-noise innovations to Wiener levels;
/// `A[i][j] = sqrt(t[j+1] - t[j])` for `j <= i`.
#[derive(Debug, Clone)]
pub struct IncrementMatrix {
    entries: DMatrix<f64>,
    grid: TimeGrid,
}

impl IncrementMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// `log |det A| = sum_i log sqrt(t[i+1] - t[i])`.
    pub fn log_abs_det(&self) -> f64 {
        self.grid
            .spacings()
            .iter()
            .map(|d| d.sqrt().ln())
            .sum()
    }
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value: v })
    }
}

fn check_paths(n_paths: usize) -> Result<()> {
    if n_paths == 0 {
        Err(Error::TooFewPaths { needed: 1, got: 0 })
    } else {
        Ok(())
    }
}

fn sample_rows<F>(n_paths: usize, n_points: usize, row: F) -> DMatrix<f64>
where
    F: Fn(u64, &mut [f64]) + Sync,
{
    let mut values = DMatrix::zeros(n_paths, n_points);
    let rows: Vec<Vec<f64>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut buf = vec![0.0; n_points];
            row(p, &mut buf);
            buf
        })
        .collect();
    for (p, r) in rows.into_iter().enumerate() {
        for (j, v) in r.into_iter().enumerate() {
            values[(p, j)] = v;
        }
    }
    values
}

/// I.i.d. zero-mean Gaussian draws with variance `lambda` at each grid point.
pub fn sample_white(grid: &TimeGrid, lambda: f64, seed: u64, n_paths: usize) -> Result<ProcessPaths> {
    check_positive("lambda", lambda)?;
    check_paths(n_paths)?;
    let sd = lambda.sqrt();
    let n = grid.len();
    let values = sample_rows(n_paths, n, |p, buf| {
        let mut rng = path_rng(seed, p);
        for v in buf.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v = sd * z;
        }
    });
    Ok(ProcessPaths {
        values,
        grid: grid.clone(),
        seed,
        tag: ProcessTag::White,
    })
}

/// Cumulative-sum construction of the discrete-time Wiener process:
/// `g(t_0) = 0`, `g(t_n) = sum_i h(t_i) sqrt(t_i - t_{i-1})` with `h` white.
pub fn sample_wiener(grid: &TimeGrid, lambda: f64, seed: u64, n_paths: usize) -> Result<ProcessPaths> {
    check_positive("lambda", lambda)?;
    check_paths(n_paths)?;
    let sd = lambda.sqrt();
    let n = grid.len();
    let sqrt_gaps: Vec<f64> = grid.spacings().iter().map(|d| d.sqrt()).collect();
    let values = sample_rows(n_paths, n, |p, buf| {
        let mut rng = path_rng(seed, p);
        buf[0] = 0.0;
        let mut acc = 0.0;
        for (i, sg) in sqrt_gaps.iter().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            acc += sd * z * sg;
            buf[i + 1] = acc;
        }
    });
    Ok(ProcessPaths {
        values,
        grid: grid.clone(),
        seed,
        tag: ProcessTag::Wiener,
    })
}

/// Samples the stable-spline process `f(t) = g(exp(-beta t))` by running the
/// Wiener construction over the sorted transformed instants and mapping each
/// value back to its original position.
pub fn sample_stable_spline(
    grid: &TimeGrid,
    beta: f64,
    lambda: f64,
    seed: u64,
    n_paths: usize,
) -> Result<ProcessPaths> {
    check_positive("lambda", lambda)?;
    check_paths(n_paths)?;
    let transformed = exp_transform(grid, beta)?;
    let n = grid.len();
    // taus are strictly decreasing; ascending order is simply the reverse.
    let taus_sorted: Vec<f64> = transformed.taus().iter().rev().cloned().collect();
    // Gaps from the implicit origin tau = 0 onwards.
    let mut sqrt_gaps = Vec::with_capacity(n);
    let mut prev = 0.0;
    for &tau in &taus_sorted {
        sqrt_gaps.push((tau - prev).sqrt());
        prev = tau;
    }
    let sd = lambda.sqrt();
    let values = sample_rows(n_paths, n, |p, buf| {
        let mut rng = path_rng(seed, p);
        let mut acc = 0.0;
        for (k, sg) in sqrt_gaps.iter().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            acc += sd * z * sg;
            // position k in sorted-tau order is grid index n-1-k
            buf[n - 1 - k] = acc;
        }
    });
    Ok(ProcessPaths {
        values,
        grid: grid.clone(),
        seed,
        tag: ProcessTag::StableSpline,
    })
}

/// First differences along each path: `out[i] = in[i+1] - in[i]`.
pub fn finite_difference(paths: &ProcessPaths) -> Result<ProcessPaths> {
    let n = paths.n_points();
    if n < 2 {
        return Err(Error::GridTooSmall { needed: 2, got: n });
    }
    let p = paths.n_paths();
    let mut values = DMatrix::zeros(p, n - 1);
    for r in 0..p {
        for c in 0..n - 1 {
            values[(r, c)] = paths.values[(r, c + 1)] - paths.values[(r, c)];
        }
    }
    let grid = TimeGrid::new(paths.grid.times()[..n - 1].to_vec())?;
    Ok(ProcessPaths {
        values,
        grid,
        seed: paths.seed,
        tag: paths.tag,
    })
}

/// Lower-triangular `A` with `g = A w` for the stacked levels and
/// innovations on `t_1..t_n`.
pub fn increment_matrix(grid: &TimeGrid) -> Result<IncrementMatrix> {
    let n = grid.len();
    if n < 2 {
        return Err(Error::GridTooSmall { needed: 2, got: n });
    }
    let sqrt_gaps: Vec<f64> = grid.spacings().iter().map(|d| d.sqrt()).collect();
    let m = n - 1;
    let mut entries = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            entries[(i, j)] = sqrt_gaps[j];
        }
    }
    Ok(IncrementMatrix {
        entries,
        grid: grid.clone(),
    })
}

/// Unbiased sample covariance across paths, per grid-point pair.
pub fn empirical_covariance(paths: &ProcessPaths) -> Result<DMatrix<f64>> {
    let p = paths.n_paths();
    if p < 2 {
        return Err(Error::TooFewPaths { needed: 2, got: p });
    }
    let n = paths.n_points();
    let v = &paths.values;
    let mut means = vec![0.0; n];
    for c in 0..n {
        means[c] = v.column(c).sum() / p as f64;
    }
    let mut cov = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = 0.0;
            for r in 0..p {
                acc += (v[(r, i)] - means[i]) * (v[(r, j)] - means[j]);
            }
            let c = acc / (p as f64 - 1.0);
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    Ok(cov)
}
