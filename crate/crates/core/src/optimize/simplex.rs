//! Small derivative-free maximizers used by the robustness search.

/// Outcome of a local search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMax {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Absolute stopping size per coordinate.
    pub xtol: [f64; 2],
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { xtol: [1e-9, 1e-9], max_iter: 1500 }
    }
}

fn score(v: Option<f64>) -> f64 {
    v.filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY)
}

/// Nelder–Mead maximization of `f` in two dimensions, started from the
/// simplex `x0`, `x0 + step[0] e0`, `x0 + step[1] e1`. Points where `f`
/// returns `None` are treated as minus infinity.
pub fn nelder_mead_max<F>(mut f: F, x0: [f64; 2], step: [f64; 2], opts: &SimplexOptions) -> LocalMax
where
    F: FnMut([f64; 2]) -> Option<f64>,
{
    let mut pts = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut vals = pts.map(|p| score(f(p)));
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        // order best..worst
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);

        let converged = (0..2).all(|k| {
            let spread = pts.iter().map(|p| (p[k] - pts[0][k]).abs()).fold(0.0, f64::max);
            spread <= opts.xtol[k]
        });
        if converged {
            break;
        }

        let centroid = [0.5 * (pts[0][0] + pts[1][0]), 0.5 * (pts[0][1] + pts[1][1])];
        let along = |c: f64| [centroid[0] + c * (pts[2][0] - centroid[0]), centroid[1] + c * (pts[2][1] - centroid[1])];

        let xr = along(-1.0);
        let fr = score(f(xr));
        if fr > vals[0] {
            let xe = along(-2.0);
            let fe = score(f(xe));
            if fe > fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
            continue;
        }
        if fr > vals[1] {
            pts[2] = xr;
            vals[2] = fr;
            continue;
        }
        let accepted = if fr > vals[2] {
            let xc = along(-0.5);
            let fc = score(f(xc));
            (fc >= fr).then_some((xc, fc))
        } else {
            let xc = along(0.5);
            let fc = score(f(xc));
            (fc > vals[2]).then_some((xc, fc))
        };
        if let Some((xc, fc)) = accepted {
            pts[2] = xc;
            vals[2] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..3 {
            pts[i] = [0.5 * (pts[0][0] + pts[i][0]), 0.5 * (pts[0][1] + pts[i][1])];
            vals[i] = score(f(pts[i]));
        }
    }
    let best = (0..3).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    LocalMax { x: pts[best], value: vals[best], iterations }
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
pub fn golden_max<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> Option<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(f(c));
    let mut fd = score(f(d));
    let mut guard = 0;
    while (b - a).abs() > xtol && guard < 200 {
        guard += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(f(d));
        }
    }
    let (fa, fb) = (score(f(a)), score(f(b)));
    [(c, fc), (d, fd), (a, fa), (b, fb)]
        .into_iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: [f64; 2]| Some(-((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)));
        let r = nelder_mead_max(f, [-1.2, 1.0], [0.1, 0.1], &SimplexOptions { xtol: [1e-10, 1e-10], max_iter: 5000 });
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        // maximum of -(x-2)^2 - y^2 restricted to x <= 1
        let f = |x: [f64; 2]| if x[0] > 1.0 { None } else { Some(-(x[0] - 2.0).powi(2) - x[1] * x[1]) };
        let r = nelder_mead_max(f, [0.0, 0.5], [0.1, 0.1], &SimplexOptions::default());
        assert!(r.x[0] <= 1.0 && r.x[0] > 0.999, "{:?}", r);
        assert!(r.x[1].abs() < 1e-6);
    }

    #[test]
    fn golden() {
        let (x, v) = golden_max(|x| Some(-(x - 0.3).powi(2)), -2.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(v <= 0.0);
    }
}
