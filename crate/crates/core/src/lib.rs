//! Discrete-time stable spline (TC) kernels, maximum-entropy Gaussian
//! process tooling, and impulse-response estimation for stable LTI systems.
//!
//! The crate is organized around five areas:
//!
//! - [`grid`]: validated time grids and the exponential time transform;
//! - [`kernels`]: TC, Wiener and white-noise kernels with Gram assembly;
//! - [`processes`]: reproducible samplers, finite differences and the
//!   increment map;
//! - [`entropy`]: Gaussian entropies, entropy-rate curves and the
//!   constrained-covariance checks behind the maximum-entropy properties;
//! - [`sysid`]: GP regression with the TC prior and empirical-Bayes
//!   hyperparameter search.

pub mod entropy;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod processes;
pub mod sysid;

pub use entropy::{
    chain_rule_residual, entropy_rate_curve, gaussian_entropy, maxent_gap,
    random_constrained_covariance, white_noise_rate, ConstrainedCovariance, EntropyReport,
};
pub use error::{Error, Result};
pub use grid::{exp_transform, make_grid, TimeGrid, TransformedGrid};
pub use kernels::{eval_kernel, gram, min_eigenvalue, GramMatrix, KernelSpec};
pub use processes::{
    empirical_covariance, finite_difference, increment_matrix, sample_stable_spline,
    sample_white, sample_wiener, IncrementMatrix, ProcessPaths, ProcessTag,
};
pub use sysid::{
    convolution_matrix, estimate_impulse_response, gp_posterior, log_marginal_likelihood,
    log_marginal_likelihood_dual, log_space, tune_hyperparameters, EstimationConfig,
    EstimationResult, IODataset, SearchGrid,
};
