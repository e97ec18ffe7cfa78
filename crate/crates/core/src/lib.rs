//! Maximally robust pure-state ensembles for the linearized atom-laser
//! master equation.
//!
//! The model evolves Gaussian states of a single mode under damping of one
//! quadrature, a nonlinear shear of strength `chi` and phase diffusion `nu`.
//! A pure-state ensemble is a Gaussian mixture of squeezed states; its
//! robustness is the time for the average survival probability (or purity)
//! to fall to a threshold. This crate computes those times in closed form and
//! finds the ensembles that maximize them.

pub mod analysis;
pub mod ensemble;
pub mod error;
pub mod figure;
pub mod moments;
pub mod optimize;
pub mod oracle;
pub mod robustness;

pub use ensemble::{is_physically_realizable, pr_boundary_betas, stationary_mixedness, BoundaryRoots, EnsembleParams};
pub use error::{Error, Result};
pub use moments::{evolve_moments, GaussianState, ModelParams, Parameter};
pub use optimize::{maximize_robustness, maximize_robustness_with, OptimizerConfig, RobustnessResult};
pub use robustness::{ensemble_purity, ensemble_survival, robustness_time, Measure, ThresholdSearch};
