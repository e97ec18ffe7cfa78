//! Parameter sweeps, power-law fits, asymptotic formulas and regime checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::moments::{ModelParams, Parameter};
use crate::optimize::{maximize_robustness_with, map_cells, OptimizerConfig};
use crate::robustness::{robustness_time, Measure, ThresholdSearch};

/// How the points of a sweep are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// One point after the other, each warm-started from the previous optimum.
    #[default]
    WarmSerial,
    /// Every point independently, in parallel when the feature is enabled.
    ColdParallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub beta_star: f64,
    pub gamma_star: f64,
    pub alpha_star: f64,
    pub tau_star: f64,
    /// Robustness time of the coherent ensemble at the same parameters.
    pub tau_coherent: f64,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub param_value: f64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Standard error of the fitted exponent.
    pub stderr: f64,
    /// Parameter range the fit was taken over.
    pub fit_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub param: Parameter,
    pub template: ModelParams,
    pub constrained: bool,
    pub measure: Measure,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
    pub fitted_exponents: BTreeMap<String, PowerLawFit>,
}

/// The sweep columns that can be fitted, by name.
pub const FIT_COLUMNS: [&str; 5] = ["alpha", "gamma", "tau", "beta_mag", "tau_coherent"];

fn column(row: &SweepRow, name: &str) -> f64 {
    match name {
        "alpha" => row.alpha_star,
        "gamma" => row.gamma_star,
        "tau" => row.tau_star,
        "beta" => row.beta_star,
        "beta_mag" => row.beta_star.abs(),
        "tau_coherent" => row.tau_coherent,
        _ => f64::NAN,
    }
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Vec<f64> {
        self.rows.iter().map(|r| column(r, name)).collect()
    }

    pub fn param_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.param_value).collect()
    }

    /// Fits every column in [`FIT_COLUMNS`] over rows with parameter in
    /// `[lo, hi]` and stores the results. Columns that cannot be fitted
    /// (too few points, non-positive values) are skipped.
    pub fn fit_exponents(&mut self, lo: f64, hi: f64) -> &BTreeMap<String, PowerLawFit> {
        self.fitted_exponents.clear();
        let rows: Vec<&SweepRow> = self.rows.iter().filter(|r| r.param_value >= lo && r.param_value <= hi).collect();
        let xs: Vec<f64> = rows.iter().map(|r| r.param_value).collect();
        for name in FIT_COLUMNS {
            let ys: Vec<f64> = rows.iter().map(|r| column(r, name)).collect();
            if let Ok(fit) = fit_power_law(&xs, &ys) {
                self.fitted_exponents.insert(name.to_string(), fit);
            }
        }
        &self.fitted_exponents
    }

    /// Fits over the top `decades` decades of the swept range.
    pub fn fit_top_decades(&mut self, decades: f64) -> &BTreeMap<String, PowerLawFit> {
        let hi = self.rows.last().map_or(0.0, |r| r.param_value);
        self.fit_exponents(hi / 10f64.powf(decades), hi)
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect(),
    }
}

fn sweep_point(
    template: &ModelParams,
    param: Parameter,
    value: f64,
    constrained: bool,
    measure: Measure,
    cfg: &OptimizerConfig,
    warm: Option<(f64, f64)>,
) -> Result<SweepRow> {
    let p = param.apply(template, value)?;
    let r = maximize_robustness_with(&p, constrained, measure, cfg, warm)?;
    let tau_coherent = robustness_time(&EnsembleParams::coherent(), &p, measure, &ThresholdSearch::for_model(&p))?;
    Ok(SweepRow {
        param_value: value,
        beta_star: r.beta_star,
        gamma_star: r.gamma_star,
        alpha_star: r.alpha_star,
        tau_star: r.tau_star,
        tau_coherent,
        on_boundary: r.on_boundary,
    })
}

/// Optimizes at every value of `param`. Per-point failures are recorded in
/// the table and do not stop the sweep.
pub fn sweep(
    template: &ModelParams,
    param: Parameter,
    values: &[f64],
    constrained: bool,
    measure: Measure,
    mode: SweepMode,
) -> Result<SweepTable> {
    sweep_with(template, param, values, constrained, measure, mode, &OptimizerConfig::default())
}

pub fn sweep_with(
    template: &ModelParams,
    param: Parameter,
    values: &[f64],
    constrained: bool,
    measure: Measure,
    mode: SweepMode,
    cfg: &OptimizerConfig,
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::InvalidInput("sweep needs at least one value".into()));
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput("sweep values must be positive and finite".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("sweep values must be strictly increasing".into()));
    }
    let outcomes: Vec<Result<SweepRow>> = match mode {
        SweepMode::WarmSerial => {
            let mut warm = None;
            values
                .iter()
                .map(|&v| {
                    let row = sweep_point(template, param, v, constrained, measure, cfg, warm);
                    if let Ok(r) = &row {
                        warm = Some((r.beta_star, r.gamma_star));
                    }
                    row
                })
                .collect()
        }
        SweepMode::ColdParallel => {
            map_cells(values.len(), |k| sweep_point(template, param, values[k], constrained, measure, cfg, None))
        }
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&v, out) in values.iter().zip(outcomes) {
        match out {
            Ok(r) => rows.push(r),
            Err(e) => failures.push(SweepFailure { param_value: v, error: e.to_string() }),
        }
    }
    Ok(SweepTable {
        param,
        template: *template,
        constrained,
        measure,
        rows,
        failures,
        fitted_exponents: BTreeMap::new(),
    })
}

/// Least-squares fit of `ln y = ln c + k ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("xs and ys differ in length".into()));
    }
    if xs.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput("power-law fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all x values coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let k = sxy / sxx;
    let c = my - k * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - c - k * x).powi(2)).sum();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit { exponent: k, prefactor: c.exp(), stderr: (ssr / (n - 2.0) / sxx).sqrt(), fit_range: (lo, hi) })
}

/// Large-parameter exponents of the optimal ensemble, keyed like
/// [`FIT_COLUMNS`]. Combinations without a known asymptote give an empty map.
pub fn predicted_scalings(param: Parameter, measure: Measure, constrained: bool) -> BTreeMap<&'static str, f64> {
    let entries: &[(&str, f64)] = match (param, measure, constrained) {
        (Parameter::Chi, Measure::Survival, _) => &[
            ("alpha", 2.0 / 3.0),
            ("beta_mag", -1.0 / 3.0),
            ("gamma", -2.0 / 3.0),
            ("tau", -2.0 / 3.0),
            ("tau_coherent", -1.0),
        ],
        (Parameter::Nu, Measure::Survival, true) => {
            &[("alpha", 0.5), ("gamma", -0.5), ("tau", -0.5), ("tau_coherent", -1.0)]
        }
        (Parameter::Chi, Measure::Purity, true) => &[("alpha", 0.5), ("beta_mag", 0.0), ("gamma", -0.5), ("tau", -0.5)],
        _ => &[],
    };
    entries.iter().copied().collect()
}

/// Parameters at least this large count as "large" in the asymptotic regimes.
pub const LARGE_PARAMETER: f64 = 10.0;

/// Ratio by which one coherent decay channel must dominate the other.
pub const DOMINANCE_RATIO: f64 = 100.0;

/// Asymptotic coherent-ensemble robustness time.
///
/// With the shear dominant (`2 chi^2 >= 100 nu`) this is `sqrt(8)/chi`; with
/// phase diffusion dominant it is the short-time estimate
/// `4 (1 - lambda) / nu`, valid only for `lambda` close to one.
pub fn tau_coherent_asymptotic(p: &ModelParams) -> Result<f64> {
    p.validate()?;
    let shear = 2.0 * p.chi * p.chi;
    if p.chi > 0.0 && shear >= DOMINANCE_RATIO * p.nu {
        Ok(8f64.sqrt() / p.chi)
    } else if p.nu > 0.0 && p.nu >= DOMINANCE_RATIO * shear {
        Ok(4.0 * (1.0 - p.lambda) / p.nu)
    } else {
        Err(Error::Regime(format!("neither chi = {} nor nu = {} dominates", p.chi, p.nu)))
    }
}

/// Initial slope `-nu/4` of the coherent survival probability when phase
/// diffusion dominates.
pub fn coherent_short_time_slope(p: &ModelParams) -> f64 {
    // `+ 0.0` turns -0 into 0 when nu = 0
    -p.nu / 4.0 + 0.0
}

/// Asymptotic parameters of the quantum-state-diffusion ensemble.
pub fn qsd_ensemble(p: &ModelParams) -> Result<EnsembleParams> {
    p.validate()?;
    let chi_large = p.chi >= LARGE_PARAMETER;
    let nu_large = p.nu >= LARGE_PARAMETER;
    match (chi_large, nu_large) {
        (true, false) => EnsembleParams::new(-1.0, 2f64.sqrt() / p.chi.sqrt()),
        (false, true) => EnsembleParams::new(0.0, 2f64.sqrt() / p.nu.sqrt()),
        _ => Err(Error::Regime(format!(
            "asymptotic ensemble needs exactly one of chi = {}, nu = {} to be >= {LARGE_PARAMETER}",
            p.chi, p.nu
        ))),
    }
}

/// One inequality `value < bound`, with `margin = bound / value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    pub margin: f64,
}

impl Condition {
    fn below(value: f64, bound: f64) -> Self {
        let margin = if value == 0.0 { f64::INFINITY } else { bound / value };
        Condition { value, bound, holds: value < bound, margin }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub mu: f64,
    /// `chi < mu^(3/2)`.
    pub chi_coherence: Condition,
    /// `nu < mu^2`.
    pub nu_coherence: Condition,
    /// Output coherence; both conditions above.
    pub output_coherent: bool,
    /// Validity of the linearization (same inequalities as coherence).
    pub linearization_valid: bool,
    /// `chi < mu^2`, where purity stays a meaningful robustness measure.
    pub purity_regime: Condition,
    /// `mu^(3/2) <= chi < mu^2`: conditionally but not unconditionally coherent.
    pub conditional_coherence_window: bool,
}

pub fn regime_checks(p: &ModelParams) -> Result<RegimeReport> {
    let mu = p.mu.ok_or_else(|| Error::Regime("cannot evaluate regime conditions without mu".into()))?;
    let chi_coherence = Condition::below(p.chi, mu.powf(1.5));
    let nu_coherence = Condition::below(p.nu, mu * mu);
    let purity_regime = Condition::below(p.chi, mu * mu);
    let output_coherent = chi_coherence.holds && nu_coherence.holds;
    Ok(RegimeReport {
        mu,
        chi_coherence,
        nu_coherence,
        output_coherent,
        linearization_valid: output_coherent,
        purity_regime,
        conditional_coherence_window: !chi_coherence.holds && purity_regime.holds,
    })
}

/// Smallest positive root of the large-shear purity equation
/// `chi^2 t^4/3 + 2 chi^2 gamma t^3/3 - 2 chi beta t^2 + 2 (1 + beta^2) t/gamma = 3`.
pub fn purity_tau_quartic_check(beta: f64, gamma: f64, chi: f64) -> Result<f64> {
    if !(gamma > 0.0 && chi >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("bad quartic inputs beta={beta}, gamma={gamma}, chi={chi}")));
    }
    let f = |t: f64| {
        let c2 = chi * chi;
        ((c2 * t / 3.0 + 2.0 * c2 * gamma / 3.0) * t - 2.0 * chi * beta) * t * t + 2.0 * (1.0 + beta * beta) * t / gamma - 3.0
    };
    let mut lo = 0.0;
    let mut hi = 1e-12;
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 1.25;
        if hi > 1e12 {
            return Err(Error::NoPositiveRoot);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robustness::survival_time;
    use approx::assert_relative_eq;

    #[test]
    fn exact_power_law() {
        let xs = log_space(1.0, 1e4, 20);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.0 / 3.0)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent + 2.0 / 3.0).abs() < 1e-12);
        assert_relative_eq!(fit.prefactor, 3.0, max_relative = 1e-12);
        assert!(fit.stderr < 1e-12);
        assert_eq!(fit.fit_range, (1.0, 1e4));
    }

    #[test]
    fn fit_rejects_bad_data() {
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0, -2.0, 3.0, 4.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 0.0, 4.0], &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn scalings_lookup() {
        let s = predicted_scalings(Parameter::Chi, Measure::Survival, true);
        assert_eq!(s["alpha"], 2.0 / 3.0);
        assert_eq!(s["beta_mag"], -1.0 / 3.0);
        let s = predicted_scalings(Parameter::Nu, Measure::Survival, true);
        assert_eq!(s["gamma"], -0.5);
        let s = predicted_scalings(Parameter::Chi, Measure::Purity, true);
        assert_eq!(s["tau"], -0.5);
        assert!(predicted_scalings(Parameter::Lambda, Measure::Survival, true).is_empty());
    }

    #[test]
    fn coherent_asymptote() {
        let p = ModelParams::new(1000.0, 0.0).unwrap();
        assert_relative_eq!(tau_coherent_asymptotic(&p).unwrap(), 0.002_828_427_124_746_19, max_relative = 1e-12);
        assert!(tau_coherent_asymptotic(&ModelParams::new(30.0, 30.0).unwrap()).is_err());
        assert!(tau_coherent_asymptotic(&ModelParams::new(0.0, 0.0).unwrap()).is_err());
        // phase-diffusion branch against the exact time near lambda = 1
        let p = ModelParams::new(0.0, 1e4).unwrap().with_lambda(0.999).unwrap();
        let exact = survival_time(&EnsembleParams::coherent(), &p).unwrap();
        assert_relative_eq!(tau_coherent_asymptotic(&p).unwrap(), exact, max_relative = 2e-3);
    }

    #[test]
    fn coherent_exact_time_tends_to_sqrt12_over_chi() {
        // the exact large-shear limit of chi * tau for the coherent ensemble
        let p = ModelParams::new(1e5, 0.0).unwrap();
        let tau = survival_time(&EnsembleParams::coherent(), &p).unwrap();
        assert_relative_eq!(p.chi * tau, 12f64.sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn phase_diffusion_short_time_slope() {
        let p = ModelParams::new(0.0, 1e3).unwrap();
        let h = 1e-9;
        let s = crate::robustness::ensemble_survival(&EnsembleParams::coherent(), &p, h).unwrap();
        let slope = (s - 1.0) / h;
        assert_relative_eq!(slope, coherent_short_time_slope(&p), max_relative = 5e-3);
    }

    #[test]
    fn qsd_anchors() {
        let e = qsd_ensemble(&ModelParams::new(1e4, 0.0).unwrap()).unwrap();
        assert_relative_eq!(e.gamma, 0.014_142_135_623_730_95, max_relative = 1e-12);
        assert_eq!(e.beta, -1.0);
        assert_relative_eq!(e.alpha(), 2f64.sqrt() * 100.0, max_relative = 1e-12);
        let e = qsd_ensemble(&ModelParams::new(0.0, 1e4).unwrap()).unwrap();
        assert_relative_eq!(e.gamma, 0.014_142_135_623_730_95, max_relative = 1e-12);
        assert_eq!(e.beta, 0.0);
        assert_relative_eq!(e.alpha() * e.gamma, 1.0, max_relative = 1e-12);
        assert!(qsd_ensemble(&ModelParams::new(100.0, 100.0).unwrap()).is_err());
        assert!(qsd_ensemble(&ModelParams::new(1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn regimes() {
        let r = regime_checks(&ModelParams::new(1e3, 0.0).unwrap().with_mu(1e6).unwrap()).unwrap();
        assert!(r.output_coherent && r.linearization_valid);
        assert_relative_eq!(r.chi_coherence.margin, 1e6, max_relative = 1e-12);
        let r = regime_checks(&ModelParams::new(1e4, 0.0).unwrap().with_mu(100.0).unwrap()).unwrap();
        assert!(!r.linearization_valid);
        let r = regime_checks(&ModelParams::new(3e3, 0.0).unwrap().with_mu(100.0).unwrap()).unwrap();
        assert!(r.conditional_coherence_window);
        assert!(matches!(regime_checks(&ModelParams::new(1.0, 0.0).unwrap()), Err(Error::Regime(_))));
    }

    #[test]
    fn quartic_root() {
        // chi = 0 leaves a linear equation
        assert_relative_eq!(purity_tau_quartic_check(0.0, 1.0, 0.0).unwrap(), 1.5, max_relative = 1e-12);
        // root scales like chi^(-1/2) along gamma = c chi^(-1/2)
        let r1 = purity_tau_quartic_check(-0.25, 2.0 / 1e3f64.sqrt(), 1e3).unwrap();
        let r2 = purity_tau_quartic_check(-0.25, 2.0 / 1e5f64.sqrt(), 1e5).unwrap();
        assert_relative_eq!((r2 / r1).log10(), -1.0, epsilon = 1e-9);
        assert!(purity_tau_quartic_check(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn sweep_validates_values() {
        let p = ModelParams::new(0.0, 0.0).unwrap();
        assert!(sweep(&p, Parameter::Chi, &[], true, Measure::Survival, SweepMode::WarmSerial).is_err());
        assert!(sweep(&p, Parameter::Chi, &[2.0, 1.0], true, Measure::Survival, SweepMode::WarmSerial).is_err());
        assert!(sweep(&p, Parameter::Chi, &[-1.0, 1.0], true, Measure::Survival, SweepMode::WarmSerial).is_err());
    }

    #[test]
    fn sweep_records_failures() {
        // lambda = 1 is not a valid threshold, so that point fails
        let p = ModelParams::new(5.0, 0.0).unwrap();
        let t = sweep(&p, Parameter::Lambda, &[0.5, 1.5], true, Measure::Survival, SweepMode::WarmSerial).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.failures.len(), 1);
        assert_eq!(t.failures[0].param_value, 1.5);
    }
}
