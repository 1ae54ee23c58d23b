//! Time grids: ordered sample instants starting at the origin, and the
//! exponential time transform that warps them into (0, 1].

use crate::error::{Error, Result};

/// Two instants closer than this are treated as duplicates and rejected.
const DUPLICATE_TOL: f64 = 1e-12;

/// Ordered, strictly increasing sample instants with `times[0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    min_spacing: f64,
}

impl TimeGrid {
    /// Validates and builds a grid from raw instants.
    ///
    /// Rejects empty input, a nonzero first instant, non-increasing or
    /// near-duplicate entries, and non-finite values.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinite { index: i, value: t });
            }
        }
        if times[0] != 0.0 {
            return Err(Error::OriginMissing(times[0]));
        }
        let mut min_spacing = f64::INFINITY;
        for i in 1..times.len() {
            let gap = times[i] - times[i - 1];
            if gap <= DUPLICATE_TOL {
                return Err(Error::NotIncreasing {
                    index: i,
                    value: times[i],
                });
            }
            min_spacing = min_spacing.min(gap);
        }
        Ok(Self { times, min_spacing })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty grids
    }

    /// Smallest gap between consecutive instants; `inf` for a single point.
    pub fn min_spacing(&self) -> f64 {
        self.min_spacing
    }

    /// Consecutive gaps `times[i+1] - times[i]`, length `len() - 1`.
    pub fn spacings(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Uniform grid `0, ts, 2 ts, ..., (n-1) ts`.
    pub fn uniform(n: usize, ts: f64) -> Result<Self> {
        if ts <= 0.0 || !ts.is_finite() {
            return Err(Error::NonPositive {
                name: "ts",
                value: ts,
            });
        }
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        Self::new((0..n).map(|i| i as f64 * ts).collect())
    }
}

/// Image of a [`TimeGrid`] under `tau = exp(-beta * t)`: strictly decreasing
/// values in (0, 1] with `taus[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedGrid {
    taus: Vec<f64>,
    source: TimeGrid,
    beta: f64,
}

impl TransformedGrid {
    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn source_times(&self) -> &TimeGrid {
        &self.source
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Builds a validated [`TimeGrid`].
pub fn make_grid(times: &[f64]) -> Result<TimeGrid> {
    TimeGrid::new(times.to_vec())
}

/// Applies `tau_i = exp(-beta * t_i)`, reversing the ordering of the grid.
pub fn exp_transform(grid: &TimeGrid, beta: f64) -> Result<TransformedGrid> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::NonPositive {
            name: "beta",
            value: beta,
        });
    }
    let taus: Vec<f64> = grid.times().iter().map(|&t| (-beta * t).exp()).collect();
    Ok(TransformedGrid {
        taus,
        source: grid.clone(),
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_grid_spacing() {
        let g = make_grid(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.min_spacing(), 1.0);
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn nonuniform_min_gap() {
        let g = make_grid(&[0.0, 0.5, 0.6, 2.0]).unwrap();
        assert_relative_eq!(g.min_spacing(), 0.1, max_relative = 1e-12);
    }

    #[test]
    fn rejects_missing_origin() {
        assert!(matches!(
            make_grid(&[1.0, 2.0, 3.0]),
            Err(Error::OriginMissing(_))
        ));
    }

    #[test]
    fn rejects_non_increasing_and_duplicates() {
        assert!(make_grid(&[0.0, 1.0, 1.0]).is_err());
        assert!(make_grid(&[0.0, 2.0, 1.0]).is_err());
        assert!(make_grid(&[0.0, 1.0, 1.0 + 1e-13]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(make_grid(&[0.0, f64::NAN]).is_err());
        assert!(make_grid(&[0.0, f64::INFINITY]).is_err());
        assert!(make_grid(&[]).is_err());
    }

    #[test]
    fn transform_basic() {
        let g = make_grid(&[0.0, 1.0]).unwrap();
        let tg = exp_transform(&g, 1.0).unwrap();
        assert_eq!(tg.taus()[0], 1.0);
        assert_relative_eq!(tg.taus()[1], (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn transform_single_point() {
        let g = make_grid(&[0.0]).unwrap();
        let tg = exp_transform(&g, 7.3).unwrap();
        assert_eq!(tg.taus(), &[1.0]);
    }

    #[test]
    fn transform_powers_of_two() {
        let g = make_grid(&[0.0, 2f64.ln(), 4f64.ln()]).unwrap();
        let tg = exp_transform(&g, 1.0).unwrap();
        assert_relative_eq!(tg.taus()[1], 0.5, max_relative = 1e-14);
        assert_relative_eq!(tg.taus()[2], 0.25, max_relative = 1e-14);
    }

    #[test]
    fn transform_rejects_bad_beta() {
        let g = make_grid(&[0.0, 1.0]).unwrap();
        assert!(exp_transform(&g, 0.0).is_err());
        assert!(exp_transform(&g, -1.0).is_err());
    }

    #[test]
    fn make_grid_idempotent() {
        let g = make_grid(&[0.0, 0.3, 1.7, 2.0]).unwrap();
        let g2 = make_grid(g.times()).unwrap();
        assert_eq!(g, g2);
    }
}
