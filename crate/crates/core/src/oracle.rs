//! Quadrature routes to the survival probability, independent of the closed
//! forms in [`crate::robustness`].
//!
//! * Gauss–Hermite averaging over the member mean `xbar`.
//! * Adaptive nested Gauss–Kronrod integration of `4 pi W0 Wt` over the plane.

use std::f64::consts::PI;

use crate::ensemble::{member_state, EnsembleParams};
use crate::error::Result;
use crate::moments::{evolve_moments, GaussianState, ModelParams};
use crate::robustness::member_survival;

/// Nodes and weights of the `n`-point Gauss–Hermite rule for weight `e^{-x^2}`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0_f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // orthonormal Hermite recurrence
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    (nodes, weights)
}

/// `E[f(X)]` for `X ~ N(0, var)` by `n`-point Gauss–Hermite.
pub fn gaussian_expectation<F: FnMut(f64) -> f64>(mut f: F, var: f64, n: usize) -> f64 {
    if var <= 0.0 {
        return f(0.0);
    }
    let (x, w) = gauss_hermite(n);
    let scale = (2.0 * var).sqrt();
    x.iter().zip(&w).map(|(&xi, &wi)| wi * f(scale * xi)).sum::<f64>() / PI.sqrt()
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, whole: f64, err: f64, tol: f64, depth: u32) -> f64 {
    if err <= tol || depth == 0 {
        return whole;
    }
    let m = 0.5 * (a + b);
    let (l, el) = gk15(f, a, m);
    let (r, er) = gk15(f, m, b);
    adapt(f, a, m, l, el, 0.5 * tol, depth - 1) + adapt(f, m, b, r, er, 0.5 * tol, depth - 1)
}

/// Adaptive 15-point Gauss–Kronrod integral of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (whole, err) = gk15(&mut f, a, b);
    adapt(&mut f, a, b, whole, err, tol, 40)
}

/// `4 pi \int\int W_a W_b dx dy` by nested adaptive quadrature over twelve
/// standard deviations of `a`.
pub fn wigner_overlap_quadrature(a: &GaussianState, b: &GaussianState, tol: f64) -> f64 {
    const WIDTH: f64 = 12.0;
    let sx = a.var_x.sqrt();
    let slope = a.cov_xy / a.var_x;
    let sy_cond = (a.determinant() / a.var_x).sqrt();
    let outer = |x: f64| {
        let yc = a.mean_y + slope * (x - a.mean_x);
        integrate(|y| a.wigner(x, y) * b.wigner(x, y), yc - WIDTH * sy_cond, yc + WIDTH * sy_cond, tol * 1e-2 / sx)
    };
    4.0 * PI * integrate(outer, a.mean_x - WIDTH * sx, a.mean_x + WIDTH * sx, tol / (4.0 * PI))
}

/// Member survival probability by direct integration of the Wigner overlap.
pub fn member_survival_quadrature(e: &EnsembleParams, xbar: f64, p: &ModelParams, t: f64, tol: f64) -> Result<f64> {
    let s0 = member_state(e, xbar);
    let st = evolve_moments(&s0, p, t)?;
    Ok(wigner_overlap_quadrature(&s0, &st, tol))
}

/// Ensemble survival as a Gauss–Hermite average of closed-form member values.
pub fn ensemble_survival_hermite(e: &EnsembleParams, p: &ModelParams, t: f64, n: usize) -> Result<f64> {
    let mut failure = None;
    let v = gaussian_expectation(
        |xbar| match member_survival(e, xbar, p, t) {
            Ok(s) => s,
            Err(err) => {
                failure = Some(err);
                f64::NAN
            }
        },
        e.spread(),
        n,
    );
    match failure {
        Some(err) => Err(err),
        None => Ok(v),
    }
}

/// Ensemble survival as a Gauss–Hermite average of quadrature member values.
pub fn ensemble_survival_quadrature(e: &EnsembleParams, p: &ModelParams, t: f64, n: usize, tol: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(crate::error::Error::NegativeTime(t));
    }
    Ok(gaussian_expectation(
        |xbar| member_survival_quadrature(e, xbar, p, t, tol).unwrap_or(f64::NAN),
        e.spread(),
        n,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_moments() {
        for n in [5, 20, 64] {
            let (x, w) = gauss_hermite(n);
            let m0: f64 = w.iter().sum();
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert_relative_eq!(m0, PI.sqrt(), max_relative = 1e-13);
            assert_relative_eq!(m2, PI.sqrt() / 2.0, max_relative = 1e-12);
        }
        assert_relative_eq!(gaussian_expectation(|x| x.powi(4), 0.3, 10), 3.0 * 0.09, max_relative = 1e-12);
    }

    #[test]
    fn kronrod_integrals() {
        assert_relative_eq!(integrate(|x| x.sin(), 0.0, PI, 1e-13), 2.0, max_relative = 1e-12);
        let g = integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-14);
        assert_relative_eq!(g, PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn overlap_of_identical_pure_states_is_one() {
        let s = GaussianState { mean_x: 0.3, mean_y: -1.0, var_x: 0.1, cov_xy: 0.225, var_y: (1.0 + 0.225f64.powi(2)) / 0.1 };
        assert_relative_eq!(wigner_overlap_quadrature(&s, &s, 1e-11), 1.0, max_relative = 1e-9);
    }
}
