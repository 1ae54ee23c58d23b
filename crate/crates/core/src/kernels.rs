//! Closed-form kernels (TC / stable spline, Wiener, white noise), Gram
//! matrix assembly and positive-semidefiniteness checks.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Kernel family with its strictly positive parameters.
///
/// `Tc` is `lambda * min(exp(-beta t), exp(-beta s))`, `Wiener` is
/// `lambda * min(t, s)`, `WhiteNoise` is `sigma2` on the diagonal and zero
/// elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Tc { beta: f64, lambda: f64 },
    Wiener { lambda: f64 },
    WhiteNoise { sigma2: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::NonPositive { name, value: v })
            }
        };
        match *self {
            KernelSpec::Tc { beta, lambda } => {
                check("beta", beta)?;
                check("lambda", lambda)
            }
            KernelSpec::Wiener { lambda } => check("lambda", lambda),
            KernelSpec::WhiteNoise { sigma2 } => check("sigma2", sigma2),
        }
    }
}

/// Kernel evaluations at every grid-point pair, with the grid and spec that
/// produced it.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    entries: DMatrix<f64>,
    grid: TimeGrid,
    kernel: KernelSpec,
}

impl GramMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Evaluates the kernel at a single pair of instants.
///
/// The white-noise delta compares `t` and `s` with exact floating-point
/// equality; evaluation is meant for grid values, which are canonical.
pub fn eval_kernel(spec: &KernelSpec, t: f64, s: f64) -> Result<f64> {
    spec.validate()?;
    if !t.is_finite() || !s.is_finite() || t < 0.0 || s < 0.0 {
        return Err(Error::BadKernelArgs { t, s });
    }
    Ok(match *spec {
        KernelSpec::Tc { beta, lambda } => lambda * ((-beta * t).exp()).min((-beta * s).exp()),
        KernelSpec::Wiener { lambda } => lambda * t.min(s),
        KernelSpec::WhiteNoise { sigma2 } => {
            if t == s {
                sigma2
            } else {
                0.0
            }
        }
    })
}

/// Assembles the Gram matrix on a grid. The lower triangle is evaluated and
/// mirrored, so symmetry is bit-exact.
pub fn gram(spec: &KernelSpec, grid: &TimeGrid) -> Result<GramMatrix> {
    spec.validate()?;
    let t = grid.times();
    let n = t.len();
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = eval_kernel(spec, t[i], t[j])?;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(GramMatrix {
        entries,
        grid: grid.clone(),
        kernel: *spec,
    })
}

/// Smallest eigenvalue of the Gram matrix via a symmetric eigensolver.
pub fn min_eigenvalue(k: &GramMatrix) -> Result<f64> {
    min_eigenvalue_sym(k.entries())
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue_sym(m: &DMatrix<f64>) -> Result<f64> {
    for (i, v) in m.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                index: i,
                value: *v,
            });
        }
    }
    let eig = m.clone().symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}
