//! Gaussian states of the linearized laser mode and their deterministic
//! moment evolution.
//!
//! The mode amplitude is written as `a = sqrt(mu) + (x + i y)/2`, so that a
//! coherent state has unit variance in both quadratures and the Heisenberg
//! bound reads `var_x * var_y - cov_xy^2 >= 1`. Time is measured in units of
//! the bare mode lifetime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack on the moment determinant when checking the Heisenberg bound.
pub const HEISENBERG_TOLERANCE: f64 = 1e-9;

/// Default survival threshold.
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// First and second phase-space moments of a Gaussian Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub cov_xy: f64,
    pub var_y: f64,
}

impl GaussianState {
    /// Builds a state, rejecting moments that violate positivity or the
    /// Heisenberg bound.
    pub fn new(mean_x: f64, mean_y: f64, var_x: f64, cov_xy: f64, var_y: f64) -> Result<Self> {
        let s = GaussianState { mean_x, mean_y, var_x, cov_xy, var_y };
        s.validate()?;
        Ok(s)
    }

    /// Coherent state centred at the origin.
    pub fn coherent() -> Self {
        GaussianState { mean_x: 0.0, mean_y: 0.0, var_x: 1.0, cov_xy: 0.0, var_y: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mean_x, self.mean_y, self.var_x, self.cov_xy, self.var_y];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite moment".into()));
        }
        if self.var_x <= 0.0 || self.var_y <= 0.0 {
            return Err(Error::InvalidState(format!(
                "variances must be positive (var_x={}, var_y={})",
                self.var_x, self.var_y
            )));
        }
        let det = self.determinant();
        if det < 1.0 - HEISENBERG_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "Heisenberg bound violated: determinant {det} < 1"
            )));
        }
        Ok(())
    }

    /// `var_x * var_y - cov_xy^2`; equal to one for pure states.
    pub fn determinant(&self) -> f64 {
        self.var_x * self.var_y - self.cov_xy * self.cov_xy
    }

    pub fn covariance(&self) -> [[f64; 2]; 2] {
        [[self.var_x, self.cov_xy], [self.cov_xy, self.var_y]]
    }

    pub fn mean(&self) -> [f64; 2] {
        [self.mean_x, self.mean_y]
    }

    /// Value of the normalized Wigner function at `(x, y)`.
    pub fn wigner(&self, x: f64, y: f64) -> f64 {
        let det = self.determinant();
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        let q = (self.var_y * dx * dx - 2.0 * self.cov_xy * dx * dy + self.var_x * dy * dy) / det;
        (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt())
    }
}

/// Dimensionless model parameters of the linearized master equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Self-energy, `4 mu C`.
    pub chi: f64,
    /// Excess phase diffusion, `4 mu N`.
    pub nu: f64,
    /// Survival threshold.
    pub lambda: f64,
    /// Mean boson number, only needed for validity checks.
    pub mu: Option<f64>,
}

impl ModelParams {
    pub fn new(chi: f64, nu: f64) -> Result<Self> {
        let p = ModelParams { chi, nu, lambda: DEFAULT_LAMBDA, mu: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        self.mu = Some(mu);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.chi.is_finite() && self.chi >= 0.0) {
            return Err(Error::InvalidParams(format!("chi must be >= 0, got {}", self.chi)));
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return Err(Error::InvalidParams(format!("nu must be >= 0, got {}", self.nu)));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidParams(format!(
                "lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        if let Some(mu) = self.mu {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::InvalidParams(format!("mu must be > 0, got {mu}")));
            }
        }
        Ok(())
    }
}

/// A model parameter that sweeps and transition searches can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Chi,
    Nu,
    Lambda,
}

impl Parameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parameter::Chi => "chi",
            Parameter::Nu => "nu",
            Parameter::Lambda => "lambda",
        }
    }

    /// Copy of `p` with this parameter set to `value`.
    pub fn apply(&self, p: &ModelParams, value: f64) -> Result<ModelParams> {
        let mut q = *p;
        match self {
            Parameter::Chi => q.chi = value,
            Parameter::Nu => q.nu = value,
            Parameter::Lambda => q.lambda = value,
        }
        q.validate()?;
        Ok(q)
    }

    pub fn get(&self, p: &ModelParams) -> f64 {
        match self {
            Parameter::Chi => p.chi,
            Parameter::Nu => p.nu,
            Parameter::Lambda => p.lambda,
        }
    }
}

impl std::fmt::Display for Parameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(Parameter::Chi),
            "nu" => Ok(Parameter::Nu),
            "lambda" => Ok(Parameter::Lambda),
            other => Err(Error::InvalidInput(format!("unknown parameter '{other}'"))),
        }
    }
}

/// Converts the physical self-interaction `c`, excess phase noise `n` and mean
/// boson number `mu` into dimensionless parameters (`chi = 4 mu c`,
/// `nu = 4 mu n`).
pub fn params_from_physical(c: f64, n: f64, mu: f64) -> Result<ModelParams> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParams(format!("mu must be > 0, got {mu}")));
    }
    if !(c >= 0.0 && n >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "C and N must be non-negative (C={c}, N={n})"
        )));
    }
    ModelParams::new(4.0 * mu * c, 4.0 * mu * n)?.with_mu(mu)
}

/// Decay factors shared by every moment at time `t`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Decay {
    pub t: f64,
    /// `e^{-t}`
    pub w: f64,
    /// `1 - e^{-t}`
    pub z: f64,
    /// `t - (1 - e^{-t})`
    pub t_minus_z: f64,
}

impl Decay {
    pub fn at(t: f64) -> Self {
        let z = -(-t).exp_m1();
        Decay { t, w: (-t).exp(), z, t_minus_z: t_minus_one_minus_exp(t) }
    }
}

/// `t - 1 + e^{-t}`, accurate for small `t`.
fn t_minus_one_minus_exp(t: f64) -> f64 {
    if t < 0.1 {
        // t^2/2 - t^3/6 + t^4/24 - ...
        let mut term = t * t / 2.0;
        let mut sum = 0.0;
        for k in 3..16 {
            sum += term;
            term *= -t / k as f64;
        }
        sum
    } else {
        t + (-t).exp_m1()
    }
}

/// Change of every moment between time 0 and time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentIncrement {
    pub d_mean_x: f64,
    pub d_mean_y: f64,
    pub d_var_x: f64,
    pub d_cov_xy: f64,
    pub d_var_y: f64,
}

impl MomentIncrement {
    /// Determinant of the second-moment increment matrix.
    pub fn determinant(&self) -> f64 {
        self.d_var_x * self.d_var_y - self.d_cov_xy * self.d_cov_xy
    }
}

/// Increments of the moments of `s0` after evolving for time `t`.
///
/// Written in increment form so that `var_y(t) - var_y(0)` does not suffer
/// cancellation when `chi` is large and `t` small.
pub fn moment_increments(s0: &GaussianState, p: &ModelParams, t: f64) -> Result<MomentIncrement> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    Ok(increments_at(s0, p, Decay::at(t)))
}

pub(crate) fn increments_at(s0: &GaussianState, p: &ModelParams, d: Decay) -> MomentIncrement {
    let chi = p.chi;
    let g = s0.var_x;
    let Decay { t, w, z, t_minus_z } = d;
    MomentIncrement {
        d_mean_x: -s0.mean_x * z,
        d_mean_y: -chi * s0.mean_x * z,
        d_var_x: (1.0 - g) * z * (2.0 - z),
        d_cov_xy: -s0.cov_xy * z - chi * z * (z + g * w),
        d_var_y: (2.0 + p.nu) * t - 2.0 * chi * s0.cov_xy * z
            + 2.0 * chi * chi * (t_minus_z - 0.5 * (1.0 - g) * z * z),
    }
}

/// Evolves the moments of `s0` for time `t` under the linearized master
/// equation.
pub fn evolve_moments(s0: &GaussianState, p: &ModelParams, t: f64) -> Result<GaussianState> {
    let inc = moment_increments(s0, p, t)?;
    Ok(GaussianState {
        mean_x: s0.mean_x + inc.d_mean_x,
        mean_y: s0.mean_y + inc.d_mean_y,
        var_x: s0.var_x + inc.d_var_x,
        cov_xy: s0.cov_xy + inc.d_cov_xy,
        var_y: s0.var_y + inc.d_var_y,
    })
}

/// `Tr[rho^2] = det^{-1/2}` for a Gaussian state.
pub fn purity_of(s: &GaussianState) -> f64 {
    1.0 / s.determinant().sqrt()
}

/// Signed angle (radians) between the major axis of the one-standard-deviation
/// ellipse and the y-axis. Positive for positive `cov_xy`.
pub fn tilt_angle(s: &GaussianState) -> f64 {
    let num = 2.0 * s.cov_xy;
    let den = s.var_y - s.var_x;
    if num == 0.0 && den == 0.0 {
        return 0.0;
    }
    0.5 * num.atan2(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn physical_params() {
        let p = params_from_physical(0.0, 0.0, 100.0).unwrap();
        assert_eq!((p.chi, p.nu), (0.0, 0.0));
        let p = params_from_physical(2.5, 0.0, 100.0).unwrap();
        assert_relative_eq!(p.chi, 1000.0);
        assert_eq!(p.lambda, 0.5);
        assert_eq!(p.mu, Some(100.0));
        let p = params_from_physical(0.125, 0.25, 2.0).unwrap();
        assert_eq!((p.chi, p.nu), (1.0, 2.0));
        assert!(params_from_physical(1.0, 1.0, 0.0).is_err());
        assert!(params_from_physical(1.0, 1.0, -3.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(-1.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0).unwrap().with_lambda(1.0).is_err());
        assert!(ModelParams::new(0.0, 0.0).unwrap().with_lambda(0.0).is_err());
    }

    #[test]
    fn coherent_pure_phase_diffusion() {
        let p = ModelParams::new(0.0, 0.0).unwrap();
        for t in [0.0, 0.3, 3.0, 10.0] {
            let s = evolve_moments(&GaussianState::coherent(), &p, t).unwrap();
            assert_relative_eq!(s.var_x, 1.0, epsilon = 1e-15);
            assert_eq!(s.cov_xy, 0.0);
            assert_relative_eq!(s.var_y, 1.0 + 2.0 * t, epsilon = 1e-13);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let p = ModelParams::new(12.0, 3.0).unwrap();
        let s0 = GaussianState::new(0.4, -1.0, 0.3, 0.2, (1.0 + 0.04) / 0.3).unwrap();
        assert_eq!(evolve_moments(&s0, &p, 0.0).unwrap(), s0);
    }

    #[test]
    fn negative_time_rejected() {
        let p = ModelParams::new(1.0, 0.0).unwrap();
        assert!(evolve_moments(&GaussianState::coherent(), &p, -1e-3).is_err());
    }

    #[test]
    fn sheared_coherent_state() {
        let chi = 50.0;
        let t = 0.0678_f64;
        let p = ModelParams::new(chi, 0.0).unwrap();
        let s = evolve_moments(&GaussianState::coherent(), &p, t).unwrap();
        let z = 1.0 - (-t).exp();
        assert_relative_eq!(s.cov_xy, -chi * z, max_relative = 1e-13);
        assert_relative_eq!(s.var_y, 1.0 + 2.0 * t + 2.0 * chi * chi * (t - z), max_relative = 1e-12);
    }

    #[test]
    fn purity_values() {
        let s = GaussianState::new(0.0, 0.0, 1.0, 0.0, 4.0).unwrap();
        assert_relative_eq!(purity_of(&s), 0.5);
        assert_relative_eq!(purity_of(&GaussianState::coherent()), 1.0);
        let p = ModelParams::new(0.0, 0.0).unwrap();
        let s = evolve_moments(&GaussianState::coherent(), &p, 3.0).unwrap();
        assert_relative_eq!(purity_of(&s), 1.0 / 7f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn heisenberg_bound_enforced() {
        assert!(GaussianState::new(0.0, 0.0, 0.5, 0.0, 1.0).is_err());
        assert!(GaussianState::new(0.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(GaussianState::new(0.0, 0.0, 1.0, 0.0, 1.0 - 1e-12).is_ok());
    }

    fn pure(gamma: f64, beta: f64) -> GaussianState {
        GaussianState { mean_x: 0.0, mean_y: 0.0, var_x: gamma, cov_xy: beta, var_y: (1.0 + beta * beta) / gamma }
    }

    #[test]
    fn tilt_angles() {
        assert_eq!(tilt_angle(&GaussianState::coherent()), 0.0);
        let deg = tilt_angle(&pure(0.100, 0.225)).to_degrees();
        assert!((deg - 1.2).abs() < 0.05, "{deg}");
        let deg = tilt_angle(&pure(0.092, -0.092)).to_degrees();
        assert!((deg + 0.48).abs() < 0.01, "{deg}");
        // small-angle form
        let s = pure(0.01, 0.02);
        assert_relative_eq!(tilt_angle(&s), 0.02 * 0.01, max_relative = 1e-3);
    }

    #[test]
    fn series_branch_matches_direct() {
        for t in [1e-9_f64, 1e-5, 1e-3, 0.05, 0.0999] {
            let direct = t - 1.0 + (-t).exp();
            let series = t_minus_one_minus_exp(t);
            let tol = 1e-15 / (t * t) + 1e-13;
            assert!(((direct - series) / series).abs() < tol, "t={t}");
        }
        assert_relative_eq!(t_minus_one_minus_exp(0.1), 0.1 - 1.0 + (-0.1f64).exp(), max_relative = 1e-12);
    }
}
