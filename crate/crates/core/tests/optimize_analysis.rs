use robust_ensembles::analysis::{log_space, purity_tau_quartic_check, sweep, sweep_with, SweepMode};
use robust_ensembles::ensemble::{is_physically_realizable, pr_boundary_betas};
use robust_ensembles::optimize::{contour_grid, restart_stability, GridRange, OptimizerConfig};
use robust_ensembles::robustness::{purity_halflife, robustness_time, ThresholdSearch};
use robust_ensembles::{maximize_robustness, EnsembleParams, Measure, ModelParams, Parameter};

#[test]
fn constrained_never_beats_unconstrained() {
    for (chi, nu) in [(0.0, 0.0), (1.0, 0.0), (7.7, 0.0), (50.0, 0.0), (300.0, 0.0), (0.0, 5.0), (10.0, 3.0), (100.0, 50.0)] {
        let p = ModelParams::new(chi, nu).unwrap();
        let free = maximize_robustness(&p, false, Measure::Survival).unwrap();
        let pr = maximize_robustness(&p, true, Measure::Survival).unwrap();
        assert!(pr.tau_star <= free.tau_star * (1.0 + 1e-9), "chi={chi} nu={nu}: {} > {}", pr.tau_star, free.tau_star);
        assert!(is_physically_realizable(&pr.ensemble(), &p), "chi={chi} nu={nu}");
        for r in [&free, &pr] {
            assert!(!r.railed);
            assert!((r.alpha_star - (1.0 + r.beta_star.powi(2)) / r.gamma_star).abs() <= 1e-12 * r.alpha_star);
            // reported tau is a true evaluation at the reported point
            let direct = robustness_time(&r.ensemble(), &p, Measure::Survival, &ThresholdSearch::for_model(&p)).unwrap();
            assert!((direct - r.tau_star).abs() <= 1e-9 * direct);
        }
    }
}

#[test]
fn large_chi_constrained_optimum_on_boundary() {
    for chi in [10.0, 30.0, 100.0, 1e3, 1e4] {
        let p = ModelParams::new(chi, 0.0).unwrap();
        let r = maximize_robustness(&p, true, Measure::Survival).unwrap();
        let (_, hi) = pr_boundary_betas(r.gamma_star, &p).unwrap().interval().unwrap();
        assert!(r.on_boundary && r.beta_star < 0.0, "chi={chi}: {r:?}");
        assert!((r.beta_star - hi).abs() <= 1e-8 * (1.0 + hi.abs()), "chi={chi}");
    }
}

#[test]
fn restarts_agree() {
    for (chi, nu, constrained) in [(50.0, 0.0, true), (50.0, 0.0, false), (1e3, 0.0, true), (0.0, 100.0, true)] {
        let p = ModelParams::new(chi, nu).unwrap();
        let report = restart_stability(&p, constrained, Measure::Survival, 5).unwrap();
        assert!(report.agrees_within(0.01), "chi={chi} nu={nu}: {report:?}");
    }
}

#[test]
fn bit_reproducible() {
    let p = ModelParams::new(123.0, 0.7).unwrap();
    let a = maximize_robustness(&p, true, Measure::Survival).unwrap();
    let b = maximize_robustness(&p, true, Measure::Survival).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.tau_star.to_bits(), b.tau_star.to_bits());
}

#[test]
fn near_transition_contour_has_two_maxima() {
    // around chi = 7.7 the gamma = 1 edge and an interior point compete
    let p = ModelParams::new(7.7, 0.0).unwrap();
    let g = contour_grid(&p, Measure::Survival, GridRange::log(0.02, 1.0, 60), GridRange::linear(-1.0, 1.0, 81)).unwrap();
    let edge = g.tau.last().unwrap().iter().flatten().copied().fold(0.0, f64::max);
    let interior = g.tau[..g.tau.len() - 3].iter().flatten().flatten().copied().fold(0.0, f64::max);
    assert!((edge - interior).abs() / edge < 0.03, "edge {edge} interior {interior}");
    let free = maximize_robustness(&p, false, Measure::Survival).unwrap();
    let runner = free.runner_up.expect("runner-up recorded");
    assert!((runner.tau - free.tau_star).abs() / free.tau_star < 0.03);
    assert!((runner.gamma == 1.0) != (free.gamma_star == 1.0));
}

#[test]
fn free_field_contour_peaks_at_coherent_state() {
    let p = ModelParams::new(0.0, 0.0).unwrap();
    let g = contour_grid(&p, Measure::Survival, GridRange::log(0.05, 1.0, 15), GridRange::linear(-1.0, 1.0, 21)).unwrap();
    let (i, j, _) = g.argmax(true).unwrap();
    assert_eq!((g.gamma_axis[i], g.beta_axis[j].abs() < 1e-12), (1.0, true));
}

#[test]
fn chi_sweep_trends() {
    let p = ModelParams::new(0.0, 0.0).unwrap();
    let t = sweep(&p, Parameter::Chi, &log_space(1.0, 1e4, 14), true, Measure::Survival, SweepMode::WarmSerial).unwrap();
    assert!(t.failures.is_empty());
    assert!(t.rows.windows(2).all(|w| w[1].tau_star < w[0].tau_star));
    assert!(t.rows.windows(2).all(|w| w[1].tau_coherent < w[0].tau_coherent));
}

#[test]
fn nu_sweep_has_zero_beta() {
    let p = ModelParams::new(0.0, 0.0).unwrap();
    let t = sweep(&p, Parameter::Nu, &log_space(1.0, 1e4, 9), true, Measure::Survival, SweepMode::WarmSerial).unwrap();
    assert!(t.rows.iter().all(|r| r.beta_star.abs() < 1e-3), "{:?}", t.rows);
}

#[test]
fn lambda_sweep_tau_grows_as_threshold_drops() {
    let p = ModelParams::new(50.0, 0.0).unwrap();
    let t = sweep(&p, Parameter::Lambda, &[0.05, 0.1, 0.2, 0.5], true, Measure::Survival, SweepMode::WarmSerial).unwrap();
    assert!(t.rows.windows(2).all(|w| w[1].tau_star < w[0].tau_star));
}

#[test]
fn warm_and_cold_sweeps_agree() {
    let p = ModelParams::new(0.0, 0.0).unwrap();
    let values = log_space(3.0, 3e3, 7);
    let cfg = OptimizerConfig::default();
    let warm = sweep_with(&p, Parameter::Chi, &values, true, Measure::Survival, SweepMode::WarmSerial, &cfg).unwrap();
    let cold = sweep_with(&p, Parameter::Chi, &values, true, Measure::Survival, SweepMode::ColdParallel, &cfg).unwrap();
    for (a, b) in warm.rows.iter().zip(&cold.rows) {
        assert!((a.gamma_star - b.gamma_star).abs() <= 0.01 * a.gamma_star);
        assert!((a.beta_star - b.beta_star).abs() <= 0.01 * a.beta_star.abs().max(0.01));
    }
}

#[test]
fn survival_tau_tracks_gamma_only_at_half() {
    let ratio = |lambda: f64| {
        let p = ModelParams::new(1e4, 0.0).unwrap().with_lambda(lambda).unwrap();
        let r = maximize_robustness(&p, true, Measure::Survival).unwrap();
        r.tau_star / r.gamma_star
    };
    let half = ratio(0.5);
    assert!((0.8..=1.25).contains(&half), "{half}");
    let low = ratio(0.05);
    assert!(!(0.8..=1.25).contains(&low), "{low}");
}

#[test]
fn purity_quartic_agrees_with_halflife() {
    let p = ModelParams::new(1e4, 0.0).unwrap();
    let r = maximize_robustness(&p, true, Measure::Purity).unwrap();
    let root = purity_tau_quartic_check(r.beta_star, r.gamma_star, p.chi).unwrap();
    let exact = purity_halflife(&EnsembleParams::new(r.beta_star, r.gamma_star).unwrap(), &p).unwrap();
    assert!((root - exact).abs() / exact < 0.15, "quartic {root} vs exact {exact}");
}
