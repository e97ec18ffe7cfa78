//! Stationary pure-state Gaussian ensembles indexed by `(beta, gamma)`.
//!
//! Every member shares the second moments `var_x = gamma`, `cov_xy = beta`,
//! `var_y = alpha = (1 + beta^2)/gamma` and differs only in its mean. The mean
//! phase quadrature is uniformly distributed; the mean amplitude quadrature is
//! Gaussian with variance `1 - gamma`, so that the ensemble average reproduces
//! the unit stationary amplitude variance.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{GaussianState, ModelParams};

/// Slack on the realizability inequality; boundary points count as realizable.
pub const PR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub beta: f64,
    pub gamma: f64,
}

impl EnsembleParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidEnsemble(format!("beta must be finite, got {beta}")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidEnsemble(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        Ok(EnsembleParams { beta, gamma })
    }

    /// The coherent-state ensemble (`beta = 0`, `gamma = 1`).
    pub fn coherent() -> Self {
        EnsembleParams { beta: 0.0, gamma: 1.0 }
    }

    /// Phase-quadrature variance fixed by purity.
    pub fn alpha(&self) -> f64 {
        (1.0 + self.beta * self.beta) / self.gamma
    }

    /// Variance of the member means along x.
    pub fn spread(&self) -> f64 {
        1.0 - self.gamma
    }

    pub fn is_point_mass(&self) -> bool {
        self.gamma >= 1.0
    }
}

/// Mean amplitude of one member together with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleMemberWeight {
    pub xbar: f64,
    pub density: f64,
}

/// The member of `e` centred at `(xbar, 0)`.
pub fn member_state(e: &EnsembleParams, xbar: f64) -> GaussianState {
    GaussianState { mean_x: xbar, mean_y: 0.0, var_x: e.gamma, cov_xy: e.beta, var_y: e.alpha() }
}

/// Density of member means along x. For `gamma = 1` the distribution is a
/// point mass at zero: the density is zero away from the origin and infinite
/// on it.
pub fn weight_density(e: &EnsembleParams, xbar: f64) -> f64 {
    let var = e.spread();
    if var <= 0.0 {
        return if xbar == 0.0 { f64::INFINITY } else { 0.0 };
    }
    (-(xbar * xbar) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

pub fn member_weight(e: &EnsembleParams, xbar: f64) -> EnsembleMemberWeight {
    EnsembleMemberWeight { xbar, density: weight_density(e, xbar) }
}

/// Left-hand side of the realizability inequality,
/// `(2 + nu - 2 chi beta)(2 - 2 gamma) - (beta + chi gamma)^2`.
pub fn pr_lhs(e: &EnsembleParams, p: &ModelParams) -> f64 {
    let (b, g) = (e.beta, e.gamma);
    (2.0 + p.nu - 2.0 * p.chi * b) * (2.0 - 2.0 * g) - (b + p.chi * g).powi(2)
}

pub fn is_physically_realizable(e: &EnsembleParams, p: &ModelParams) -> bool {
    e.gamma > 0.0 && pr_lhs(e, p) >= -PR_TOLERANCE
}

/// Real roots in `beta` of the realizability boundary at fixed `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryRoots {
    None,
    Single(f64),
    Pair(f64, f64),
}

impl BoundaryRoots {
    /// The admissible closed interval of `beta`, if any.
    pub fn interval(&self) -> Option<(f64, f64)> {
        match *self {
            BoundaryRoots::None => None,
            BoundaryRoots::Single(b) => Some((b, b)),
            BoundaryRoots::Pair(lo, hi) => Some((lo, hi)),
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match *self {
            BoundaryRoots::None => vec![],
            BoundaryRoots::Single(b) => vec![b],
            BoundaryRoots::Pair(lo, hi) => vec![lo, hi],
        }
    }
}

/// Roots of the realizability boundary in `beta`, sorted ascending.
///
/// The boundary is `beta^2 + 2 chi (2 - gamma) beta - c = 0` with
/// `c = (2 + nu)(2 - 2 gamma) - chi^2 gamma^2`; its discriminant
/// `(1 - gamma)(4 chi^2 + 4 + 2 nu)` vanishes at `gamma = 1`.
pub fn pr_boundary_betas(gamma: f64, p: &ModelParams) -> Result<BoundaryRoots> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidEnsemble(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let half_b = p.chi * (2.0 - gamma);
    let c = (2.0 + p.nu) * (2.0 - 2.0 * gamma) - (p.chi * gamma).powi(2);
    let disc = (1.0 - gamma) * (4.0 * p.chi * p.chi + 4.0 + 2.0 * p.nu);
    if disc < 0.0 {
        return Ok(BoundaryRoots::None);
    }
    if disc == 0.0 {
        return Ok(BoundaryRoots::Single(-half_b));
    }
    let sq = disc.sqrt();
    // half_b >= 0, so the lower root never cancels; recover the upper one
    // from the product of roots (= -c).
    let lower = -half_b - sq;
    let upper = c / (half_b + sq);
    Ok(BoundaryRoots::Pair(lower, upper))
}

/// Purity and largest eigenvalue of the stationary number-state mixture,
/// valid for `mu >> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryMixedness {
    pub purity: f64,
    pub max_eigenvalue: f64,
    /// False when `mu` is too small for the large-`mu` formulas to apply.
    pub asymptotic: bool,
}

pub fn stationary_mixedness(mu: f64) -> Result<StationaryMixedness> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParams(format!("mu must be > 0, got {mu}")));
    }
    Ok(StationaryMixedness {
        purity: (4.0 * PI * mu).powf(-0.5),
        max_eigenvalue: (2.0 * PI * mu).powf(-0.5),
        asymptotic: mu >= 10.0,
    })
}

/// Whether `lambda` lies strictly between the stationary purity and one.
pub fn validate_threshold(lambda: f64, mu: f64) -> Result<bool> {
    let m = stationary_mixedness(mu)?;
    Ok(lambda < 1.0 && lambda > m.purity)
}
