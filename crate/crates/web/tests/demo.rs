use robust_ensembles_web::{contour_svg, ellipse_svg, optimum, survival_svg};

#[test]
fn optimum_beats_coherent_at_strong_shear() {
    let o = optimum(50.0, 0.0, 0.5, true, false).unwrap();
    assert!(o.on_boundary && o.beta < 0.0);
    assert!(o.tau > o.tau_coherent);
    assert!((o.alpha - (1.0 + o.beta * o.beta) / o.gamma).abs() < 1e-12 * o.alpha);
}

#[test]
fn figures_are_svg() {
    let o = optimum(50.0, 0.0, 0.5, true, false).unwrap();
    for svg in [
        survival_svg(50.0, 0.0, 0.5, o.beta, o.gamma, false, 3.0 * o.tau).unwrap(),
        contour_svg(7.7, 0.0, 0.5, false, 12, 13).unwrap(),
        ellipse_svg(50.0, 0.0, o.beta, o.gamma, o.tau).unwrap(),
    ] {
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn bad_inputs_are_errors() {
    assert!(optimum(-1.0, 0.0, 0.5, true, false).is_err());
    assert!(survival_svg(1.0, 0.0, 0.5, 0.0, 2.0, false, 1.0).is_err());
    assert!(survival_svg(1.0, 0.0, 0.5, 0.0, 1.0, false, 0.0).is_err());
    assert!(contour_svg(1.0, 0.0, 1.5, false, 10, 10).is_err());
}
