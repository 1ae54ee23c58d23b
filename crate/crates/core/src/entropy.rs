//! Differential entropy of Gaussian vectors, entropy-rate curves, the
//! chain-rule identity between level and innovation coordinates, and the
//! constrained-covariance machinery used to verify the maximum-entropy
//! claims.
//!
//! Entropies are in nats throughout.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::kernels::{gram, min_eigenvalue_sym, KernelSpec};

/// `log(2 pi e)`.
pub const LOG_2PIE: f64 = 2.837877066409345;

/// Joint entropy of `n` points of a process together with the running rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub n: usize,
    /// Joint entropy in nats; `-inf` when the covariance is singular.
    pub joint_entropy: f64,
    /// `joint_entropy / n`, nats per sample.
    pub rate: f64,
    /// Analytic target where one exists (white noise, uniform Wiener grids).
    pub reference_rate: Option<f64>,
}

/// Log-determinant of a symmetric PSD matrix via an unpivoted Cholesky loop.
///
/// A pivot below `1e-12 * trace` marks the matrix singular (`None`); a pivot
/// below the negated threshold means the input is indefinite and is an error.
pub fn logdet_psd(sigma: &DMatrix<f64>) -> Result<Option<f64>> {
    let n = sigma.nrows();
    if n != sigma.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    let max_abs = sigma.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in 0..i {
            if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-12 * max_abs.max(1.0) {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let trace: f64 = (0..n).map(|i| sigma[(i, i)]).sum();
    let threshold = 1e-12 * trace.abs().max(f64::MIN_POSITIVE);
    let mut l = DMatrix::zeros(n, n);
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = sigma[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d < -threshold {
            return Err(Error::NotPsd(d));
        }
        if d <= threshold {
            return Ok(None);
        }
        let root = d.sqrt();
        l[(j, j)] = root;
        logdet += 2.0 * root.ln();
        for i in j + 1..n {
            let mut s = sigma[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / root;
        }
    }
    Ok(Some(logdet))
}

/// Differential entropy of a zero-mean Gaussian vector with covariance
/// `sigma`: `1/2 (n log(2 pi e) + log det sigma)`. Singular covariances
/// return the `-inf` sentinel rather than an error.
pub fn gaussian_entropy(sigma: &DMatrix<f64>) -> Result<f64> {
    match logdet_psd(sigma)? {
        Some(logdet) => Ok(0.5 * (sigma.nrows() as f64 * LOG_2PIE + logdet)),
        None => Ok(f64::NEG_INFINITY),
    }
}

/// Entropy rate of Gaussian white noise with variance `lambda`:
/// `1/2 log(2 pi e lambda)`.
pub fn white_noise_rate(lambda: f64) -> Result<f64> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::NonPositive {
            name: "lambda",
            value: lambda,
        });
    }
    Ok(0.5 * (LOG_2PIE + lambda.ln()))
}

/// Wiener Gram over the nonzero instants `t_1..t_n` of a grid.
fn wiener_gram_interior(grid: &TimeGrid, lambda: f64) -> Result<DMatrix<f64>> {
    let full = gram(&KernelSpec::Wiener { lambda }, grid)?;
    let n = grid.len();
    Ok(full.entries().view((1, 1), (n - 1, n - 1)).into_owned())
}

/// Residual of the identity `H(levels) = H(innovations) + log|A|` computed
/// numerically; should be zero up to factorization error.
pub fn chain_rule_residual(grid: &TimeGrid, lambda: f64) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::GridTooSmall {
            needed: 2,
            got: grid.len(),
        });
    }
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::NonPositive {
            name: "lambda",
            value: lambda,
        });
    }
    let n = grid.len() - 1;
    let h_levels = gaussian_entropy(&wiener_gram_interior(grid, lambda)?)?;
    let h_white = n as f64 * white_noise_rate(lambda)?;
    let log_a: f64 = grid.spacings().iter().map(|d| d.sqrt().ln()).sum();
    Ok(h_levels - h_white - log_a)
}

/// A covariance over the levels `g(t_1)..g(t_n)` whose implied increment
/// variances satisfy `Var[g(t_{i+1}) - g(t_i)] = lambda (t_{i+1} - t_i)`
/// with `g(t_0) = 0`.
#[derive(Debug, Clone)]
pub struct ConstrainedCovariance {
    sigma: DMatrix<f64>,
    grid: TimeGrid,
    lambda: f64,
}

/// Lower-triangular all-ones cumulative-sum map from increments to levels.
fn cumsum_map(m: usize) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            l[(i, j)] = 1.0;
        }
    }
    l
}

impl ConstrainedCovariance {
    /// Builds the level covariance `L C L^T` from an increment covariance
    /// `C`, after checking that `diag(C) = lambda * gaps` and that `C` is
    /// PSD.
    pub fn from_increment_covariance(
        grid: &TimeGrid,
        lambda: f64,
        increment_cov: DMatrix<f64>,
    ) -> Result<Self> {
        let m = grid.len() - 1;
        if increment_cov.nrows() != m || increment_cov.ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "increment covariance is {}x{}, grid has {} increments",
                increment_cov.nrows(),
                increment_cov.ncols(),
                m
            )));
        }
        let gaps = grid.spacings();
        let mut worst = 0.0f64;
        for i in 0..m {
            let target = lambda * gaps[i];
            worst = worst.max((increment_cov[(i, i)] - target).abs() / target.max(1.0));
        }
        if worst > 1e-8 {
            return Err(Error::InfeasibleCandidate(worst));
        }
        let min_eig = min_eigenvalue_sym(&increment_cov)?;
        let trace: f64 = (0..m).map(|i| increment_cov[(i, i)]).sum();
        if min_eig < -1e-10 * trace.max(1.0) {
            return Err(Error::NotPsd(min_eig));
        }
        let l = cumsum_map(m);
        let sigma = &l * increment_cov * l.transpose();
        Ok(Self {
            sigma,
            grid: grid.clone(),
            lambda,
        })
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Recovers the increment covariance `B sigma B^T` with `B = L^{-1}`
    /// the first-difference map.
    pub fn increment_covariance(&self) -> DMatrix<f64> {
        let m = self.sigma.nrows();
        let mut b = DMatrix::zeros(m, m);
        for i in 0..m {
            b[(i, i)] = 1.0;
            if i > 0 {
                b[(i, i - 1)] = -1.0;
            }
        }
        &b * &self.sigma * b.transpose()
    }
}

/// Entropy advantage of the Wiener covariance over a feasible candidate on
/// the same grid; nonnegative by the Hadamard determinant inequality, zero
/// only when the candidate's increments are uncorrelated.
pub fn maxent_gap(candidate: &ConstrainedCovariance) -> Result<f64> {
    let inc = candidate.increment_covariance();
    let gaps = candidate.grid.spacings();
    for i in 0..inc.nrows() {
        let target = candidate.lambda * gaps[i];
        let violation = (inc[(i, i)] - target).abs() / target.max(1.0);
        if violation > 1e-8 {
            return Err(Error::InfeasibleCandidate(violation));
        }
    }
    let wiener = wiener_gram_interior(&candidate.grid, candidate.lambda)?;
    let h_wiener = gaussian_entropy(&wiener)?;
    let h_candidate = gaussian_entropy(candidate.sigma())?;
    Ok(h_wiener - h_candidate)
}

/// Draws a feasible [`ConstrainedCovariance`] by sampling a random increment
/// correlation matrix and rescaling its diagonal to `lambda * gaps`.
pub fn random_constrained_covariance(
    grid: &TimeGrid,
    lambda: f64,
    seed: u64,
) -> Result<ConstrainedCovariance> {
    if grid.len() < 2 {
        return Err(Error::GridTooSmall {
            needed: 2,
            got: grid.len(),
        });
    }
    let m = grid.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let s = &g * g.transpose();
    let gaps = grid.spacings();
    let mut c = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let scale =
                (lambda * gaps[i] / s[(i, i)]).sqrt() * (lambda * gaps[j] / s[(j, j)]).sqrt();
            c[(i, j)] = s[(i, j)] * scale;
        }
    }
    // Mirror to remove rounding asymmetry from the rescaling.
    let c = (&c + c.transpose()) * 0.5;
    ConstrainedCovariance::from_increment_covariance(grid, lambda, c)
}

/// Joint entropy and running rate of the first `n` points, `n = 1..n_max`.
///
/// Wiener entropies are taken over the nonzero instants (the origin value is
/// deterministic); TC and white-noise entropies start at the origin.
pub fn entropy_rate_curve(
    spec: &KernelSpec,
    grid: &TimeGrid,
    n_max: usize,
) -> Result<Vec<EntropyReport>> {
    if n_max < 1 {
        return Err(Error::GridTooSmall { needed: 1, got: 0 });
    }
    spec.validate()?;
    let full = match spec {
        KernelSpec::Wiener { lambda } => wiener_gram_interior(grid, *lambda)?,
        _ => gram(spec, grid)?.entries().clone(),
    };
    let limit = n_max.min(full.nrows());
    let gaps = grid.spacings();
    let uniform = gaps
        .iter()
        .all(|&d| (d - gaps[0]).abs() <= 1e-12 * gaps[0].abs().max(1.0));
    let reference_rate = match spec {
        KernelSpec::WhiteNoise { sigma2 } => Some(white_noise_rate(*sigma2)?),
        KernelSpec::Wiener { lambda } if uniform && !gaps.is_empty() => {
            Some(white_noise_rate(*lambda)? + gaps[0].sqrt().ln())
        }
        _ => None,
    };
    let mut out = Vec::with_capacity(limit);
    for n in 1..=limit {
        let sub = full.view((0, 0), (n, n)).into_owned();
        let joint = gaussian_entropy(&sub)?;
        out.push(EntropyReport {
            n,
            joint_entropy: joint,
            rate: joint / n as f64,
            reference_rate,
        });
    }
    Ok(out)
}
