//! Dependency-free SVG figures: ellipse panels, line and log-log plots, and
//! filled contour maps with a realizability overlay.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::moments::GaussianState;
use crate::optimize::ContourGrid;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Options shared by every figure.
#[derive(Debug, Clone, Default)]
pub struct FigureOptions {
    pub title: String,
    /// Written as an XML comment after the root element, e.g. a timestamp.
    pub comment: Option<String>,
}

impl FigureOptions {
    pub fn titled(title: impl Into<String>) -> Self {
        FigureOptions { title: title.into(), comment: None }
    }
}

/// A named sequence of `(x, y)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers only, without connecting lines.
    pub markers_only: bool,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.into(), points, markers_only: false }
    }

    pub fn markers(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.into(), points, markers_only: true }
    }
}

/// One panel of an ellipse figure.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsePanel {
    pub title: String,
    pub states: Vec<GaussianState>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Compact number formatting for tick labels.
fn label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e4).contains(&a) {
        let e = a.log10().floor() as i32;
        let m = v / 10f64.powi(e);
        if (m.abs() - 1.0).abs() < 1e-9 {
            return format!("{}1e{e}", if v < 0.0 { "-" } else { "" });
        }
        return format!("{m:.1}e{e}");
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Option<Axis> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return None;
        }
        if log {
            let (l, h) = (lo.log10(), hi.log10());
            let (l, h) = if h - l < 1e-9 { (l - 0.5, h + 0.5) } else { (l, h) };
            Some(Axis { lo: l, hi: h, log })
        } else {
            let pad = if hi - lo < 1e-12 * (1.0 + hi.abs()) { 0.5 * (1.0 + hi.abs()) } else { 0.05 * (hi - lo) };
            Some(Axis { lo: lo - pad, hi: hi + pad, log })
        }
    }

    fn exact(lo: f64, hi: f64, log: bool) -> Axis {
        if log {
            Axis { lo: lo.log10(), hi: hi.log10(), log }
        } else {
            Axis { lo, hi, log }
        }
    }

    /// Position in [0, 1].
    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
            let step = ((b - a) / 6 + 1).max(1);
            let mut t: Vec<f64> = (a..=b).step_by(step as usize).map(|e| 10f64.powi(e)).collect();
            if t.is_empty() {
                t = vec![10f64.powf(self.lo), 10f64.powf(self.hi)];
            }
            t
        } else {
            let span = self.hi - self.lo;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last).map(|k| k as f64 * step).collect()
        }
    }
}

struct Frame {
    x: Axis,
    y: Axis,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + self.x.frac(x) * self.w
    }
    fn py(&self, y: f64) -> f64 {
        self.top + (1.0 - self.y.frac(y)) * self.h
    }

    fn draw_axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let (l, t, w, h) = (self.left, self.top, self.w, self.h);
        let _ = writeln!(out, r##"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#333"/>"##);
        for v in self.x.ticks() {
            let x = self.px(v);
            let _ = writeln!(out, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, t + h, t + h + 5.0);
            let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#, t + h + 18.0, label(v));
        }
        for v in self.y.ticks() {
            let y = self.py(v);
            let _ = writeln!(out, r##"<line x1="{:.2}" y1="{y:.2}" x2="{l:.2}" y2="{y:.2}" stroke="#333"/>"##, l - 5.0);
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"#, l - 8.0, y + 4.0, label(v));
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
            l + w / 2.0,
            t + h + 40.0,
            escape(x_label)
        );
        let (yx, yy) = (l - 54.0, t + h / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{yx:.2}" y="{yy:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 {yx:.2} {yy:.2})">{}</text>"#,
            escape(y_label)
        );
    }
}

fn open(out: &mut String, width: f64, height: f64, opts: &FigureOptions) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    if let Some(c) = &opts.comment {
        let _ = writeln!(out, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    if !opts.title.is_empty() {
        let _ = writeln!(out, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#, width / 2.0, escape(&opts.title));
    }
}

fn default_frame(x: Axis, y: Axis) -> Frame {
    Frame { x, y, left: MARGIN_L, top: MARGIN_T, w: WIDTH - MARGIN_L - MARGIN_R, h: HEIGHT - MARGIN_T - MARGIN_B }
}

fn draw_series(out: &mut String, frame: &Frame, series: &[Series]) {
    let visible = |&(x, y): &(f64, f64)| {
        x.is_finite() && y.is_finite() && (!frame.x.log || x > 0.0) && (!frame.y.log || y > 0.0)
    };
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(visible).collect();
        if !s.markers_only && pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
            let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, path.join(" "));
        }
        if s.markers_only || pts.len() == 1 {
            for &(x, y) in &pts {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#, frame.px(x), frame.py(y));
            }
        }
        let ly = frame.top + 16.0 + 16.0 * k as f64;
        let lx = frame.left + frame.w - 150.0;
        let _ = writeln!(out, r#"<rect x="{lx:.2}" y="{:.2}" width="12" height="3" fill="{colour}"/>"#, ly - 4.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{ly:.2}" font-size="11">{}</text>"#, lx + 18.0, escape(&s.name));
    }
}

fn xy_plot(series: &[Series], x_label: &str, y_label: &str, log: bool, opts: &FigureOptions) -> Result<String> {
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    let x = Axis::fit(all().map(|p| p.0), log);
    let y = Axis::fit(all().filter(|p| !log || p.0 > 0.0).map(|p| p.1), log);
    let (Some(x), Some(y)) = (x, y) else {
        return Err(Error::InvalidInput("no plottable data".into()));
    };
    let frame = default_frame(x, y);
    let mut out = String::new();
    open(&mut out, WIDTH, HEIGHT, opts);
    frame.draw_axes(&mut out, x_label, y_label);
    draw_series(&mut out, &frame, series);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Log-log plot of positive data; non-positive points are dropped.
pub fn loglog_plot(series: &[Series], x_label: &str, y_label: &str, opts: &FigureOptions) -> Result<String> {
    xy_plot(series, x_label, y_label, true, opts)
}

/// Plot on linear axes, e.g. survival curves.
pub fn line_plot(series: &[Series], x_label: &str, y_label: &str, opts: &FigureOptions) -> Result<String> {
    xy_plot(series, x_label, y_label, false, opts)
}

/// Points on the one-standard-deviation ellipse of `s`, from the
/// eigendecomposition of its covariance.
pub fn ellipse_points(s: &GaussianState, n: usize) -> Vec<(f64, f64)> {
    let half_tr = 0.5 * (s.var_x + s.var_y);
    let root = (0.25 * (s.var_x - s.var_y).powi(2) + s.cov_xy * s.cov_xy).sqrt();
    let (l1, l2) = (half_tr + root, (half_tr - root).max(0.0));
    let phi = 0.5 * (2.0 * s.cov_xy).atan2(s.var_x - s.var_y);
    let (c, sn) = (phi.cos(), phi.sin());
    let (a, b) = (l1.sqrt(), l2.sqrt());
    (0..=n)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / n as f64;
            let (u, v) = (a * th.cos(), b * th.sin());
            (s.mean_x + c * u - sn * v, s.mean_y + sn * u + c * v)
        })
        .collect()
}

/// Side-by-side panels of one-standard-deviation Wigner ellipses, each panel
/// scaled to its own contents.
pub fn ellipse_figure(panels: &[EllipsePanel], opts: &FigureOptions) -> Result<String> {
    if panels.is_empty() || panels.iter().all(|p| p.states.is_empty()) {
        return Err(Error::InvalidInput("no states to draw".into()));
    }
    let panel_w = 300.0;
    let width = MARGIN_L + panels.len() as f64 * (panel_w + MARGIN_L) - MARGIN_L + MARGIN_R;
    let height = 380.0;
    let mut out = String::new();
    open(&mut out, width, height, opts);
    for (i, panel) in panels.iter().enumerate() {
        let curves: Vec<Vec<(f64, f64)>> = panel.states.iter().map(|s| ellipse_points(s, 96)).collect();
        let all = || curves.iter().flatten().copied();
        let (Some(x), Some(y)) = (Axis::fit(all().map(|p| p.0), false), Axis::fit(all().map(|p| p.1), false)) else {
            continue;
        };
        let frame = Frame { x, y, left: MARGIN_L + i as f64 * (panel_w + MARGIN_L), top: MARGIN_T + 16.0, w: panel_w, h: height - MARGIN_T - 16.0 - MARGIN_B };
        frame.draw_axes(&mut out, "x", "y");
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
            frame.left + panel_w / 2.0,
            frame.top - 6.0,
            escape(&panel.title)
        );
        for (k, (curve, s)) in curves.iter().zip(&panel.states).enumerate() {
            let colour = PALETTE[k % PALETTE.len()];
            let path: Vec<String> = curve.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
            let _ = writeln!(out, r#"<polygon points="{}" fill="{colour}" fill-opacity="0.15" stroke="{colour}" stroke-width="1.5"/>"#, path.join(" "));
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{colour}"/>"#, frame.px(s.mean_x), frame.py(s.mean_y));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Colour for `f` in [0, 1] on a blue-to-yellow ramp.
fn ramp(f: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let f = f.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (f.floor() as usize).min(STOPS.len() - 2);
    let u = f - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + u * (y - x)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Filled contour map of the robustness time over `(gamma, beta)`, quantized
/// into `levels` bands, with realizable cells hatched and the largest cell
/// marked.
pub fn contour_figure(grid: &ContourGrid, levels: usize, opts: &FigureOptions) -> Result<String> {
    let values: Vec<f64> = grid.tau.iter().flatten().flatten().copied().filter(|v| v.is_finite()).collect();
    if values.is_empty() || grid.gamma_axis.is_empty() || grid.beta_axis.is_empty() {
        return Err(Error::InvalidInput("contour grid has no finite cells".into()));
    }
    let levels = levels.max(2);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let edges = |axis: &[f64]| -> Vec<f64> {
        if axis.len() == 1 {
            return vec![axis[0] - 0.5, axis[0] + 0.5];
        }
        let mut e = vec![axis[0] - 0.5 * (axis[1] - axis[0])];
        e.extend(axis.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        let n = axis.len();
        e.push(axis[n - 1] + 0.5 * (axis[n - 1] - axis[n - 2]));
        e
    };
    let (ge, be) = (edges(&grid.gamma_axis), edges(&grid.beta_axis));
    let frame = default_frame(Axis::exact(ge[0], ge[ge.len() - 1], false), Axis::exact(be[0], be[be.len() - 1], false));
    let mut out = String::new();
    open(&mut out, WIDTH, HEIGHT, opts);
    out.push_str(
        r##"<defs><pattern id="pr" width="6" height="6" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" stroke="white" stroke-opacity="0.6" stroke-width="2"/></pattern></defs>
"##,
    );
    for (i, row) in grid.tau.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let (x0, x1) = (frame.px(ge[i]), frame.px(ge[i + 1]));
            let (y0, y1) = (frame.py(be[j + 1]), frame.py(be[j]));
            let fill = match v {
                Some(v) if hi > lo => {
                    let band = (((v - lo) / (hi - lo)) * levels as f64).floor().min(levels as f64 - 1.0);
                    ramp(band / (levels - 1) as f64)
                }
                Some(_) => ramp(1.0),
                None => "#bbbbbb".into(),
            };
            let _ = writeln!(
                out,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                x1 - x0,
                y1 - y0
            );
            if grid.pr_mask[i][j] {
                let _ = writeln!(
                    out,
                    r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="url(#pr)"/>"#,
                    x1 - x0,
                    y1 - y0
                );
            }
        }
    }
    frame.draw_axes(&mut out, "gamma", "beta");
    if let Some((i, j, v)) = grid.argmax(false) {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="#d62728" stroke-width="2"><title>max {}</title></circle>"##,
            frame.px(grid.gamma_axis[i]),
            frame.py(grid.beta_axis[j]),
            label(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{} from {} to {}; hatched: realizable</text>"#,
        frame.left + frame.w,
        frame.top - 6.0,
        grid.measure,
        label(lo),
        label(hi)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::ModelParams;
    use crate::optimize::{contour_grid, GridRange};
    use crate::robustness::Measure;

    #[test]
    fn ellipse_is_one_standard_deviation() {
        let s = GaussianState { mean_x: 1.0, mean_y: -2.0, var_x: 0.1, cov_xy: 0.225, var_y: (1.0 + 0.225f64.powi(2)) / 0.1 };
        let inv = {
            let d = s.determinant();
            [[s.var_y / d, -s.cov_xy / d], [-s.cov_xy / d, s.var_x / d]]
        };
        for (x, y) in ellipse_points(&s, 32) {
            let (dx, dy) = (x - s.mean_x, y - s.mean_y);
            let q = dx * dx * inv[0][0] + 2.0 * dx * dy * inv[0][1] + dy * dy * inv[1][1];
            assert!((q - 1.0).abs() < 1e-9, "{q}");
        }
    }

    #[test]
    fn single_point_plot_has_marker_and_axes() {
        let svg = loglog_plot(&[Series::new("tau", vec![(10.0, 0.5)])], "chi", "tau", &FigureOptions::titled("one")).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<circle"));
        assert!(svg.contains(">chi</text>"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_data_rejected() {
        assert!(loglog_plot(&[Series::new("x", vec![])], "a", "b", &FigureOptions::default()).is_err());
        assert!(loglog_plot(&[Series::new("x", vec![(-1.0, 2.0)])], "a", "b", &FigureOptions::default()).is_err());
        assert!(ellipse_figure(&[], &FigureOptions::default()).is_err());
    }

    #[test]
    fn comment_and_escaping() {
        let opts = FigureOptions { title: "a<b".into(), comment: Some("generated 1 -- x".into()) };
        let svg = line_plot(&[Series::new("s", vec![(0.0, 1.0), (1.0, 0.5)])], "t", "S", &opts).unwrap();
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("<!-- generated 1 - - x -->"));
    }

    #[test]
    fn contour_renders_every_cell() {
        let p = ModelParams::new(50.0, 0.0).unwrap();
        let g = contour_grid(&p, Measure::Survival, GridRange::linear(0.05, 1.0, 6), GridRange::linear(-0.5, 0.5, 5)).unwrap();
        let svg = contour_figure(&g, 8, &FigureOptions::default()).unwrap();
        let cells = svg.matches("<rect x=").count();
        let hatched = g.pr_mask.iter().flatten().filter(|m| **m).count();
        // frame rectangle + cells + hatch overlays
        assert_eq!(cells, 1 + 30 + hatched);
    }

    #[test]
    fn tick_labels() {
        assert_eq!(label(0.5), "0.5");
        assert_eq!(label(1e-5), "1e-5");
        assert_eq!(label(100.0), "100");
    }
}
