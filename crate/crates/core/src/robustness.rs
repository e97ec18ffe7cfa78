//! Survival probability, purity decay and threshold-crossing times.
//!
//! The overlap of two Gaussian Wigner functions `W0`, `Wt` with covariances
//! `S0`, `St` and mean difference `d` is
//! `4 pi \int W0 Wt = 2 exp(-d^T (S0+St)^{-1} d / 2) / sqrt(det(S0+St))`.
//! For an ensemble member with mean `xbar` the mean difference is
//! `xbar * (z, chi z)` with `z = 1 - e^{-t}`, so averaging over the Gaussian
//! distribution of `xbar` (variance `1 - gamma`) gives
//! `S(t) = 2 / sqrt(det M * (1 + (1 - gamma) v^T M^{-1} v))`, `v = (z, chi z)`,
//! `M = S0 + St`.
//!
//! `det M` is evaluated as `4 det S0 + 2 tr(adj(S0) D) + det D` with `D` the
//! moment increment. Strongly squeezed members have `alpha ~ 1/gamma` and the
//! direct determinant would lose every significant digit.

use serde::{Deserialize, Serialize};

use crate::ensemble::{member_state, EnsembleParams};
use crate::error::{Error, Result};
use crate::moments::{increments_at, moment_increments, Decay, GaussianState, MomentIncrement, ModelParams};

/// Robustness measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Ensemble-averaged survival probability, threshold `lambda`.
    Survival,
    /// Member purity, threshold one half.
    Purity,
}

impl Measure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Survival => "survival",
            Measure::Purity => "purity",
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "survival" => Ok(Measure::Survival),
            "purity" => Ok(Measure::Purity),
            other => Err(Error::InvalidInput(format!("unknown measure '{other}'"))),
        }
    }
}

/// Sampled survival or purity curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: Measure,
}

impl SurvivalCurve {
    /// Samples the requested curve at `times`, which must start at zero and
    /// increase strictly.
    pub fn sample(e: &EnsembleParams, p: &ModelParams, kind: Measure, times: &[f64]) -> Result<Self> {
        if times.first() != Some(&0.0) {
            return Err(Error::InvalidInput("curve times must start at 0".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("curve times must increase strictly".into()));
        }
        let values = times
            .iter()
            .map(|&t| match kind {
                Measure::Survival => ensemble_survival(e, p, t),
                Measure::Purity => ensemble_purity(e, p, t),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SurvivalCurve { times: times.to_vec(), values, kind })
    }
}

/// `det(S0 + S0 + D)` via the 2x2 identity `det(A+B) = det A + det B + tr(adj(A) B)`.
fn doubled_det(s0: &GaussianState, det0: f64, inc: &MomentIncrement) -> f64 {
    let tr = s0.var_y * inc.d_var_x - 2.0 * s0.cov_xy * inc.d_cov_xy + s0.var_x * inc.d_var_y;
    4.0 * det0 + 2.0 * tr + inc.determinant()
}

/// Overlap `4 pi \int W_a W_b` of two arbitrary Gaussian states.
pub fn state_overlap(a: &GaussianState, b: &GaussianState) -> f64 {
    let m11 = a.var_x + b.var_x;
    let m12 = a.cov_xy + b.cov_xy;
    let m22 = a.var_y + b.var_y;
    let det = m11 * m22 - m12 * m12;
    let dx = b.mean_x - a.mean_x;
    let dy = b.mean_y - a.mean_y;
    let q = (m22 * dx * dx - 2.0 * m12 * dx * dy + m11 * dy * dy) / det;
    2.0 * (-0.5 * q).exp() / det.sqrt()
}

/// Survival probability of the member of `e` with mean amplitude `xbar`.
pub fn member_survival(e: &EnsembleParams, xbar: f64, p: &ModelParams, t: f64) -> Result<f64> {
    let s0 = member_state(e, xbar);
    let inc = moment_increments(&s0, p, t)?;
    let det = doubled_det(&s0, 1.0, &inc);
    if !(det > 0.0) {
        return Err(Error::InvalidState(format!("singular overlap matrix (det = {det})")));
    }
    let (m11, m12, m22) = (2.0 * s0.var_x + inc.d_var_x, 2.0 * s0.cov_xy + inc.d_cov_xy, 2.0 * s0.var_y + inc.d_var_y);
    let (dx, dy) = (inc.d_mean_x, inc.d_mean_y);
    let q = (m22 * dx * dx - 2.0 * m12 * dx * dy + m11 * dy * dy) / det;
    Ok((2.0 * (-0.5 * q).exp() / det.sqrt()).min(1.0))
}

/// Ensemble-averaged survival probability in closed form.
pub fn ensemble_survival(e: &EnsembleParams, p: &ModelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    Ok(survival_at(e, p, Decay::at(t)))
}

pub(crate) fn survival_at(e: &EnsembleParams, p: &ModelParams, d: Decay) -> f64 {
    let s0 = member_state(e, 0.0);
    let inc = increments_at(&s0, p, d);
    let det = doubled_det(&s0, 1.0, &inc);
    let (m11, m12, m22) = (2.0 * s0.var_x + inc.d_var_x, 2.0 * s0.cov_xy + inc.d_cov_xy, 2.0 * s0.var_y + inc.d_var_y);
    // v = z (1, chi)
    let chi = p.chi;
    let quad = d.z * d.z * (m22 - 2.0 * chi * m12 + chi * chi * m11) / det;
    let s = 2.0 / (det * (1.0 + e.spread() * quad)).sqrt();
    s.min(1.0)
}

/// Purity of every member (all share the same second moments).
pub fn ensemble_purity(e: &EnsembleParams, p: &ModelParams, t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    Ok(purity_at(e, p, Decay::at(t)))
}

pub(crate) fn purity_at(e: &EnsembleParams, p: &ModelParams, d: Decay) -> f64 {
    let s0 = member_state(e, 0.0);
    let inc = increments_at(&s0, p, d);
    let tr = s0.var_y * inc.d_var_x - 2.0 * s0.cov_xy * inc.d_cov_xy + s0.var_x * inc.d_var_y;
    let det = 1.0 + tr + inc.determinant();
    (1.0 / det.sqrt()).min(1.0)
}

/// Maximum overlap of any pure state with a Gaussian state of purity `p`.
pub fn max_overlap_purity(purity: f64) -> f64 {
    2.0 / (1.0 + 1.0 / purity)
}

/// Settings for the first-crossing search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSearch {
    /// First probe time of the forward scan.
    pub start: f64,
    /// Geometric growth factor of the forward scan.
    pub growth: f64,
    /// Relative width at which bisection stops.
    pub rtol: f64,
    /// Search horizon.
    pub t_max: f64,
}

/// Horizon beyond which the linearized description is meaningless anyway.
pub const DEFAULT_HORIZON: f64 = 1e3;

impl Default for ThresholdSearch {
    fn default() -> Self {
        ThresholdSearch { start: 1e-6, growth: 1.5, rtol: 1e-10, t_max: DEFAULT_HORIZON }
    }
}

impl ThresholdSearch {
    /// Scan starting at `1e-6 * max(1, 1/chi, 1/nu)`, ignoring vanishing rates.
    pub fn for_model(p: &ModelParams) -> Self {
        let mut scale = 1.0_f64;
        for rate in [p.chi, p.nu] {
            if rate > 0.0 {
                scale = scale.max(1.0 / rate);
            }
        }
        ThresholdSearch { start: 1e-6 * scale, ..Default::default() }
    }

    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }

    /// First time at which `curve` falls to `threshold`.
    ///
    /// The curve is scanned forward geometrically until it drops below the
    /// threshold, then the bracketing step is bisected. If the very first probe
    /// is already below, the bracket is `[0, start]`.
    pub fn first_crossing<F: FnMut(f64) -> f64>(&self, mut curve: F, threshold: f64) -> Result<f64> {
        if !(threshold > 0.0) {
            return Err(Error::InvalidInput(format!("threshold must be positive, got {threshold}")));
        }
        let v0 = curve(0.0);
        if !(v0 > threshold) {
            return Err(Error::NotAboveThreshold { start: v0, threshold });
        }
        let mut lo = 0.0;
        let mut hi = self.start.min(self.t_max);
        loop {
            if curve(hi) <= threshold {
                break;
            }
            if hi >= self.t_max {
                return Err(Error::ExceedsHorizon { threshold, horizon: self.t_max });
            }
            lo = hi;
            hi = (hi * self.growth).min(self.t_max);
        }
        while hi - lo > self.rtol * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if curve(mid) > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// First crossing of `threshold` with the default search settings.
pub fn threshold_time<F: FnMut(f64) -> f64>(curve: F, threshold: f64, t_max: f64) -> Result<f64> {
    ThresholdSearch { t_max, ..Default::default() }.first_crossing(curve, threshold)
}

/// Time at which the ensemble-averaged survival probability reaches `lambda`.
pub fn survival_time(e: &EnsembleParams, p: &ModelParams) -> Result<f64> {
    survival_time_with(e, p, &ThresholdSearch::for_model(p))
}

pub fn survival_time_with(e: &EnsembleParams, p: &ModelParams, search: &ThresholdSearch) -> Result<f64> {
    search.first_crossing(|t| survival_at(e, p, Decay::at(t)), p.lambda)
}

/// Time at which member purity drops to one half.
pub fn purity_halflife(e: &EnsembleParams, p: &ModelParams) -> Result<f64> {
    purity_halflife_with(e, p, &ThresholdSearch::for_model(p))
}

pub fn purity_halflife_with(e: &EnsembleParams, p: &ModelParams, search: &ThresholdSearch) -> Result<f64> {
    search.first_crossing(|t| purity_at(e, p, Decay::at(t)), 0.5)
}

/// Robustness time for the chosen measure.
pub fn robustness_time(e: &EnsembleParams, p: &ModelParams, measure: Measure, search: &ThresholdSearch) -> Result<f64> {
    match measure {
        Measure::Survival => survival_time_with(e, p, search),
        Measure::Purity => purity_halflife_with(e, p, search),
    }
}
