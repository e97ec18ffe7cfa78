//! Browser bindings: optimize an ensemble, plot its survival curve against
//! the coherent ensemble, draw the robustness-time map, and show how member
//! states shear over time. Figures come back as SVG strings.

use wasm_bindgen::prelude::*;

use robust_ensembles::ensemble::member_state;
use robust_ensembles::figure::{contour_figure, ellipse_figure, line_plot, EllipsePanel, FigureOptions, Series};
use robust_ensembles::optimize::{contour_grid, GridRange};
use robust_ensembles::robustness::SurvivalCurve;
use robust_ensembles::{
    evolve_moments, maximize_robustness, robustness_time, EnsembleParams, Measure, ModelParams, Result, ThresholdSearch,
};

const CURVE_POINTS: usize = 161;
const MEMBER_XBAR: f64 = 1.224_744_871_391_589;

fn model(chi: f64, nu: f64, lambda: f64) -> Result<ModelParams> {
    ModelParams::new(chi, nu)?.with_lambda(lambda)
}

fn measure(purity: bool) -> Measure {
    if purity {
        Measure::Purity
    } else {
        Measure::Survival
    }
}

fn js(e: robust_ensembles::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// The most robust ensemble, as shown in the page's result table.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub beta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub tau: f64,
    /// NaN when the coherent ensemble never reaches the threshold.
    pub tau_coherent: f64,
    pub on_boundary: bool,
}

pub fn optimum(chi: f64, nu: f64, lambda: f64, constrained: bool, purity: bool) -> Result<Optimum> {
    let p = model(chi, nu, lambda)?;
    let m = measure(purity);
    let r = maximize_robustness(&p, constrained, m)?;
    let tau_coherent =
        robustness_time(&EnsembleParams::coherent(), &p, m, &ThresholdSearch::for_model(&p)).unwrap_or(f64::NAN);
    Ok(Optimum {
        beta: r.beta_star,
        gamma: r.gamma_star,
        alpha: r.alpha_star,
        tau: r.tau_star,
        tau_coherent,
        on_boundary: r.on_boundary,
    })
}

/// Survival (or purity) of the `(beta, gamma)` ensemble and of the coherent
/// ensemble, up to `t_max`, with the threshold drawn in.
pub fn survival_svg(chi: f64, nu: f64, lambda: f64, beta: f64, gamma: f64, purity: bool, t_max: f64) -> Result<String> {
    let p = model(chi, nu, lambda)?;
    let e = EnsembleParams::new(beta, gamma)?;
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(robust_ensembles::Error::InvalidInput(format!("t_max must be positive, got {t_max}")));
    }
    let m = measure(purity);
    let times: Vec<f64> = (0..CURVE_POINTS).map(|k| t_max * k as f64 / (CURVE_POINTS - 1) as f64).collect();
    let pts = |c: SurvivalCurve| c.times.into_iter().zip(c.values).collect::<Vec<_>>();
    let series = [
        Series::new("ensemble", pts(SurvivalCurve::sample(&e, &p, m, &times)?)),
        Series::new("coherent", pts(SurvivalCurve::sample(&EnsembleParams::coherent(), &p, m, &times)?)),
        Series::new("lambda", vec![(0.0, lambda), (t_max, lambda)]),
    ];
    line_plot(&series, "t", m.as_str(), &FigureOptions::titled(format!("{} probability", m.as_str())))
}

/// Robustness-time map over log-spaced `gamma` and linear `beta`, with the
/// physically realizable region hatched.
pub fn contour_svg(chi: f64, nu: f64, lambda: f64, purity: bool, gamma_points: usize, beta_points: usize) -> Result<String> {
    let p = model(chi, nu, lambda)?;
    let beta_max = 1.0f64.max(0.05 * chi.max(nu));
    let grid = contour_grid(
        &p,
        measure(purity),
        GridRange::log(1e-2, 1.0, gamma_points),
        GridRange::linear(-beta_max, beta_max, beta_points),
    )?;
    contour_figure(&grid, 12, &FigureOptions::titled("robustness time"))
}

/// Members at `xbar = 0, ±sqrt(3/2)` at `t = 0, t_end/2, t_end`.
pub fn ellipse_svg(chi: f64, nu: f64, beta: f64, gamma: f64, t_end: f64) -> Result<String> {
    let p = model(chi, nu, 0.5)?;
    let e = EnsembleParams::new(beta, gamma)?;
    let xbars: &[f64] = if e.is_point_mass() { &[0.0] } else { &[-MEMBER_XBAR, 0.0, MEMBER_XBAR] };
    let panels = [0.0, 0.5 * t_end, t_end]
        .iter()
        .map(|&t| {
            let states = xbars.iter().map(|&x| evolve_moments(&member_state(&e, x), &p, t)).collect::<Result<Vec<_>>>()?;
            Ok(EllipsePanel { title: format!("t = {t:.3}"), states })
        })
        .collect::<Result<Vec<_>>>()?;
    ellipse_figure(&panels, &FigureOptions::titled("ensemble members"))
}

#[wasm_bindgen(js_name = optimize)]
pub fn optimize_js(chi: f64, nu: f64, lambda: f64, constrained: bool, purity: bool) -> std::result::Result<Optimum, JsError> {
    optimum(chi, nu, lambda, constrained, purity).map_err(js)
}

#[wasm_bindgen(js_name = survivalSvg)]
pub fn survival_svg_js(
    chi: f64,
    nu: f64,
    lambda: f64,
    beta: f64,
    gamma: f64,
    purity: bool,
    t_max: f64,
) -> std::result::Result<String, JsError> {
    survival_svg(chi, nu, lambda, beta, gamma, purity, t_max).map_err(js)
}

#[wasm_bindgen(js_name = contourSvg)]
pub fn contour_svg_js(
    chi: f64,
    nu: f64,
    lambda: f64,
    purity: bool,
    gamma_points: usize,
    beta_points: usize,
) -> std::result::Result<String, JsError> {
    contour_svg(chi, nu, lambda, purity, gamma_points, beta_points).map_err(js)
}

#[wasm_bindgen(js_name = ellipseSvg)]
pub fn ellipse_svg_js(chi: f64, nu: f64, beta: f64, gamma: f64, t_end: f64) -> std::result::Result<String, JsError> {
    ellipse_svg(chi, nu, beta, gamma, t_end).map_err(js)
}
