//! Closed-form moment evolution against a direct RK4 integration of the
//! moment equations, plus invariants of the evolution.

use proptest::prelude::*;

use robust_ensembles::ensemble::member_state;
use robust_ensembles::moments::{evolve_moments, purity_of, GaussianState};
use robust_ensembles::{EnsembleParams, ModelParams};

type Moments = [f64; 5];

fn rhs(m: &Moments, p: &ModelParams) -> Moments {
    let [x, _, v20, v11, _] = *m;
    [-x, -p.chi * x, -2.0 * v20 + 2.0, -v11 - p.chi * v20, -2.0 * p.chi * v11 + 2.0 + p.nu]
}

fn rk4(m0: Moments, p: &ModelParams, t: f64, steps: usize) -> Moments {
    let h = t / steps as f64;
    let mut m = m0;
    let add = |a: &Moments, b: &Moments, s: f64| -> Moments { std::array::from_fn(|i| a[i] + s * b[i]) };
    for _ in 0..steps {
        let k1 = rhs(&m, p);
        let k2 = rhs(&add(&m, &k1, h / 2.0), p);
        let k3 = rhs(&add(&m, &k2, h / 2.0), p);
        let k4 = rhs(&add(&m, &k3, h), p);
        m = std::array::from_fn(|i| m[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    m
}

/// RK4 with step doubling and Richardson extrapolation.
fn integrate(m0: Moments, p: &ModelParams, t: f64) -> Moments {
    let n = 400 + (200.0 * t * (1.0 + p.chi)) as usize;
    let coarse = rk4(m0, p, t, n);
    let fine = rk4(m0, p, t, 2 * n);
    std::array::from_fn(|i| fine[i] + (fine[i] - coarse[i]) / 15.0)
}

fn as_array(s: &GaussianState) -> Moments {
    [s.mean_x, s.mean_y, s.var_x, s.cov_xy, s.var_y]
}

fn state() -> impl Strategy<Value = GaussianState> {
    (-1.5f64..1.5, 0.05f64..=1.0, -2.0f64..2.0).prop_map(|(b, g, xbar)| member_state(&EnsembleParams::new(b, g).unwrap(), xbar))
}

#[test]
fn matches_rk4_on_fixed_cases() {
    let cases = [
        (0.0, 0.0, 3.0),
        (50.0, 0.0, 0.1),
        (50.0, 0.0, 0.2),
        (7.7, 2.3, 1.0),
        (0.0, 100.0, 0.05),
        (1000.0, 0.0, 0.002),
    ];
    for (chi, nu, t) in cases {
        let p = ModelParams::new(chi, nu).unwrap();
        let s0 = member_state(&EnsembleParams::new(0.225, 0.1).unwrap(), 1.2247);
        let exact = as_array(&evolve_moments(&s0, &p, t).unwrap());
        let numeric = integrate(as_array(&s0), &p, t);
        for i in 0..5 {
            let scale = exact[i].abs().max(1.0);
            assert!((exact[i] - numeric[i]).abs() / scale < 1e-8, "chi={chi} nu={nu} t={t} i={i}: {} vs {}", exact[i], numeric[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_rk4(s0 in state(), chi in 0.0f64..30.0, nu in 0.0f64..5.0, t in 0.0f64..2.0) {
        let p = ModelParams::new(chi, nu).unwrap();
        let exact = as_array(&evolve_moments(&s0, &p, t).unwrap());
        let numeric = integrate(as_array(&s0), &p, t);
        for i in 0..5 {
            let scale = exact[i].abs().max(1.0);
            prop_assert!((exact[i] - numeric[i]).abs() / scale < 1e-8, "i={} {} vs {}", i, exact[i], numeric[i]);
        }
    }

    #[test]
    fn stays_physical(s0 in state(), chi in 0.0f64..1e3, nu in 0.0f64..1e3, t in 0.0f64..50.0) {
        let p = ModelParams::new(chi, nu).unwrap();
        let st = evolve_moments(&s0, &p, t).unwrap();
        prop_assert!(st.validate().is_ok(), "{:?}", st);
        let purity = purity_of(&st);
        prop_assert!(purity > 0.0 && purity <= 1.0 + 1e-12);
    }

    #[test]
    fn semigroup(s0 in state(), chi in 0.0f64..100.0, nu in 0.0f64..10.0, t1 in 0.0f64..2.0, t2 in 0.0f64..2.0) {
        let p = ModelParams::new(chi, nu).unwrap();
        let direct = as_array(&evolve_moments(&s0, &p, t1 + t2).unwrap());
        let stepped = as_array(&evolve_moments(&evolve_moments(&s0, &p, t1).unwrap(), &p, t2).unwrap());
        for i in 0..5 {
            prop_assert!((direct[i] - stepped[i]).abs() / direct[i].abs().max(1.0) < 1e-12);
        }
    }

    #[test]
    fn purity_decreases(s0 in state(), chi in 0.0f64..100.0, nu in 0.0f64..10.0, t in 0.0f64..5.0, dt in 1e-3f64..1.0) {
        let p = ModelParams::new(chi, nu).unwrap();
        let a = purity_of(&evolve_moments(&s0, &p, t).unwrap());
        let b = purity_of(&evolve_moments(&s0, &p, t + dt).unwrap());
        prop_assert!(b <= a * (1.0 + 1e-12));
    }
}
