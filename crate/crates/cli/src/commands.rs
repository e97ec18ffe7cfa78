use serde_json::{json, Map, Value};

use robust_ensembles::analysis::{
    coherent_short_time_slope, log_space, predicted_scalings, qsd_ensemble, regime_checks, sweep_with,
    tau_coherent_asymptotic, SweepMode, SweepTable,
};
use robust_ensembles::ensemble::{member_state, validate_threshold};
use robust_ensembles::figure::{
    contour_figure, ellipse_figure, line_plot, loglog_plot, EllipsePanel, FigureOptions, Series,
};
use robust_ensembles::moments::tilt_angle;
use robust_ensembles::optimize::{contour_grid, detect_transition, GridRange};
use robust_ensembles::robustness::{state_overlap, survival_time, SurvivalCurve};
use robust_ensembles::{
    evolve_moments, maximize_robustness_with, robustness_time, stationary_mixedness, EnsembleParams, Measure,
    ModelParams, OptimizerConfig, Parameter, ThresholdSearch,
};

use crate::args::*;
use crate::error::CliError;
use crate::output::{csv_document, fmt_num, json_document, Provenance};

/// Member offsets drawn in ellipse figures.
const FIGURE_XBAR: f64 = 1.224_744_871_391_589; // sqrt(3/2)

pub struct Artifact {
    pub text: String,
}

pub fn run(cmd: &Command) -> Result<Artifact, CliError> {
    let text = match cmd {
        Command::Evolve(a) => evolve(a),
        Command::Survival(a) => survival(a),
        Command::Tau(a) => tau(a),
        Command::Optimize(a) => optimize(a),
        Command::Sweep(a) => sweep(a),
        Command::Contour(a) => contour(a),
        Command::Transition(a) => transition(a),
        Command::Report(a) => report(a),
    }?;
    Ok(Artifact { text })
}

fn model(m: &ModelArgs) -> Result<ModelParams, CliError> {
    let p = ModelParams::new(m.chi, m.nu)?.with_lambda(m.lambda)?;
    Ok(match m.mu {
        Some(mu) => p.with_mu(mu)?,
        None => p,
    })
}

fn model_provenance(cmd: &'static str, m: &ModelArgs) -> Provenance {
    let prov = Provenance::new(cmd).num("chi", m.chi).num("nu", m.nu).num("lambda", m.lambda);
    match m.mu {
        Some(mu) => prov.num("mu", mu),
        None => prov.text("mu", "none"),
    }
}

fn format_or(out: &OutputArgs, default: Format, allowed: &[Format], cmd: &str) -> Result<Format, CliError> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Config(format!("{cmd} does not produce {f:?} output").to_lowercase()))
    }
}

fn svg_opts(title: String, prov: &Provenance, out: &OutputArgs) -> FigureOptions {
    FigureOptions { title, comment: Some(prov.svg_comment(out.no_timestamp)) }
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_else(|| "nan".into())
}

fn result_json<T: serde::Serialize, E: std::fmt::Display>(r: &Result<T, E>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("serializable"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn member_xbars(e: &EnsembleParams, xbar: f64) -> Vec<f64> {
    if e.is_point_mass() || xbar == 0.0 {
        vec![0.0]
    } else {
        vec![-xbar.abs(), 0.0, xbar.abs()]
    }
}

fn ellipse_panels(e: &EnsembleParams, p: &ModelParams, times: &[f64], xbar: f64) -> Result<Vec<EllipsePanel>, CliError> {
    let xbars = member_xbars(e, xbar);
    times
        .iter()
        .map(|&t| {
            let states = xbars
                .iter()
                .map(|&x| evolve_moments(&member_state(e, x), p, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(EllipsePanel { title: format!("t = {}", fmt_short(t)), states })
        })
        .collect()
}

fn fmt_short(v: f64) -> String {
    format!("{:.4}", v).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn evolve(a: &EvolveArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json, Format::Svg], "evolve")?;
    let p = model(&a.model)?;
    let e = EnsembleParams::new(a.ensemble.beta, a.ensemble.gamma)?;
    if a.times.is_empty() {
        return Err(CliError::Config("--times needs at least one value".into()));
    }
    let times: Vec<String> = a.times.iter().map(|t| fmt_num(*t)).collect();
    let prov = model_provenance("evolve", &a.model)
        .num("beta", e.beta)
        .num("gamma", e.gamma)
        .num("xbar", a.xbar)
        .text("times", times.join(";"));

    if fmt == Format::Svg {
        let panels = ellipse_panels(&e, &p, &a.times, a.xbar)?;
        let title = format!("members at xbar = ±{}, chi = {}, nu = {}", fmt_short(a.xbar), p.chi, p.nu);
        return Ok(ellipse_figure(&panels, &svg_opts(title, &prov, &a.out))?);
    }

    let s0 = member_state(&e, a.xbar);
    let header = ["t", "mean_x", "mean_y", "var_x", "cov_xy", "var_y", "purity", "tilt_deg", "overlap"];
    let mut rows = Vec::new();
    for &t in &a.times {
        let s = evolve_moments(&s0, &p, t)?;
        let purity = robust_ensembles::moments::purity_of(&s);
        let tilt = tilt_angle(&s).to_degrees();
        let overlap = state_overlap(&s0, &s).min(1.0);
        rows.push([t, s.mean_x, s.mean_y, s.var_x, s.cov_xy, s.var_y, purity, tilt, overlap]);
    }
    Ok(match fmt {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect()))
                .collect();
            json_document(&prov, json!({ "ensemble": { "beta": e.beta, "gamma": e.gamma, "alpha": e.alpha() }, "xbar": a.xbar, "rows": rows }))
        }
        _ => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| fmt_num(*v)).collect()).collect();
            csv_document(&prov, &[], &header, &rows)
        }
    })
}

fn survival(a: &SurvivalArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json, Format::Svg], "survival")?;
    let p = model(&a.model)?;
    let e = EnsembleParams::new(a.ensemble.beta, a.ensemble.gamma)?;
    if a.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let t_max = match a.t_max {
        Some(t) if t.is_finite() && t > 0.0 => t,
        Some(t) => return Err(CliError::Config(format!("--t-max must be positive, got {t}"))),
        None => survival_time(&e, &p).map(|t| 3.0 * t).unwrap_or(10.0),
    };
    let times: Vec<f64> = (0..a.points).map(|k| t_max * k as f64 / (a.points - 1) as f64).collect();
    let surv = SurvivalCurve::sample(&e, &p, Measure::Survival, &times)?;
    let pur = SurvivalCurve::sample(&e, &p, Measure::Purity, &times)?;
    let prov = model_provenance("survival", &a.model)
        .num("beta", e.beta)
        .num("gamma", e.gamma)
        .num("t_max", t_max)
        .text("points", a.points);

    Ok(match fmt {
        Format::Svg => {
            let pts = |c: &SurvivalCurve| c.times.iter().copied().zip(c.values.iter().copied()).collect::<Vec<_>>();
            let series = [
                Series::new("survival", pts(&surv)),
                Series::new("purity", pts(&pur)),
                Series::new("lambda", vec![(0.0, p.lambda), (t_max, p.lambda)]),
            ];
            let title = format!("beta = {}, gamma = {}", fmt_short(e.beta), fmt_short(e.gamma));
            line_plot(&series, "t", "probability", &svg_opts(title, &prov, &a.out))?
        }
        Format::Json => json_document(&prov, json!({ "t": surv.times, "survival": surv.values, "purity": pur.values })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..times.len())
                .map(|k| vec![fmt_num(times[k]), fmt_num(surv.values[k]), fmt_num(pur.values[k])])
                .collect();
            csv_document(&prov, &[], &["t", "survival", "purity"], &rows)
        }
    })
}

fn tau(a: &TauArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json], "tau")?;
    let p = model(&a.model)?;
    let e = EnsembleParams::new(a.ensemble.beta, a.ensemble.gamma)?;
    let measure = Measure::from(a.measure);
    let t = robustness_time(&e, &p, measure, &ThresholdSearch::for_model(&p))?;
    let prov = model_provenance("tau", &a.model)
        .num("beta", e.beta)
        .num("gamma", e.gamma)
        .text("measure", measure.as_str());
    Ok(match fmt {
        Format::Json => json_document(&prov, json!({ "tau": t })),
        _ => csv_document(&prov, &[], &["tau"], &[vec![fmt_num(t)]]),
    })
}

fn optimize(a: &OptimizeArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Json, &[Format::Csv, Format::Json, Format::Svg], "optimize")?;
    let p = model(&a.model)?;
    let measure = Measure::from(a.search.measure);
    let cfg = OptimizerConfig { seed: a.search.seed, ..OptimizerConfig::default() };
    let r = maximize_robustness_with(&p, a.search.constrained, measure, &cfg, None)?;
    let e = r.ensemble();
    let tilt = tilt_angle(&member_state(&e, 0.0)).to_degrees();
    let tau_coherent = robustness_time(&EnsembleParams::coherent(), &p, measure, &ThresholdSearch::for_model(&p)).ok();
    let prov = model_provenance("optimize", &a.model)
        .text("constrained", a.search.constrained)
        .text("measure", measure.as_str())
        .text("seed", a.search.seed);

    Ok(match fmt {
        Format::Json => json_document(&prov, json!({ "result": r, "tilt_deg": tilt, "tau_coherent": tau_coherent })),
        Format::Csv => {
            let header = [
                "beta_star", "gamma_star", "alpha_star", "tau_star", "tau_coherent", "on_boundary", "tilt_deg",
                "constrained", "measure", "lambda",
            ];
            let row = vec![
                fmt_num(r.beta_star),
                fmt_num(r.gamma_star),
                fmt_num(r.alpha_star),
                fmt_num(r.tau_star),
                opt_num(tau_coherent),
                r.on_boundary.to_string(),
                fmt_num(tilt),
                a.search.constrained.to_string(),
                measure.as_str().to_string(),
                fmt_num(p.lambda),
            ];
            csv_document(&prov, &[], &header, &[row])
        }
        Format::Svg => {
            let panels = ellipse_panels(&e, &p, &[0.0, 0.5 * r.tau_star, r.tau_star], FIGURE_XBAR)?;
            let title = format!(
                "optimal ensemble: beta = {}, gamma = {}, tau = {}",
                fmt_short(r.beta_star),
                fmt_short(r.gamma_star),
                fmt_short(r.tau_star)
            );
            ellipse_figure(&panels, &svg_opts(title, &prov, &a.out))?
        }
    })
}

fn sweep_comments(table: &SweepTable) -> Vec<String> {
    let mut c = Vec::new();
    let predicted = predicted_scalings(table.param, table.measure, table.constrained);
    for (name, fit) in &table.fitted_exponents {
        let mut line = format!(
            "fit {name} exponent={} stderr={} prefactor={} range={}..{}",
            fmt_num(fit.exponent),
            fmt_num(fit.stderr),
            fmt_num(fit.prefactor),
            fmt_num(fit.fit_range.0),
            fmt_num(fit.fit_range.1)
        );
        if let Some(pred) = predicted.get(name.as_str()) {
            line.push_str(&format!(" predicted={}", fmt_num(*pred)));
        }
        c.push(line);
    }
    for f in &table.failures {
        c.push(format!("failure {}={} error={}", table.param.as_str(), fmt_num(f.param_value), f.error));
    }
    c
}

fn sweep(a: &SweepArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json, Format::Svg], "sweep")?;
    let p = model(&a.model)?;
    let param = Parameter::from(a.param);
    let measure = Measure::from(a.search.measure);
    if a.points < 2 || !(a.from > 0.0 && a.to > a.from) {
        return Err(CliError::Config("sweep needs 0 < --from < --to and --points >= 2".into()));
    }
    if a.fit && !(a.fit_decades > 0.0) {
        return Err(CliError::Config("--fit-decades must be positive".into()));
    }
    let values = log_space(a.from, a.to, a.points);
    let mode = match a.mode {
        ModeArg::Warm => SweepMode::WarmSerial,
        ModeArg::Cold => SweepMode::ColdParallel,
    };
    let cfg = OptimizerConfig { seed: a.search.seed, ..OptimizerConfig::default() };
    let mut table = sweep_with(&p, param, &values, a.search.constrained, measure, mode, &cfg)?;
    if a.fit {
        table.fit_top_decades(a.fit_decades);
    }
    let mut prov = model_provenance("sweep", &a.model)
        .text("param", param.as_str())
        .num("from", a.from)
        .num("to", a.to)
        .text("points", a.points)
        .text("constrained", a.search.constrained)
        .text("measure", measure.as_str())
        .text("mode", format!("{:?}", a.mode).to_lowercase())
        .text("seed", a.search.seed);
    if a.fit {
        prov = prov.num("fit_decades", a.fit_decades);
    }
    for f in &table.failures {
        eprintln!("warning: {}={}: {}", param.as_str(), fmt_num(f.param_value), f.error);
    }

    Ok(match fmt {
        Format::Json => {
            let predicted = predicted_scalings(param, measure, a.search.constrained);
            json_document(&prov, json!({ "table": table, "predicted_exponents": predicted }))
        }
        Format::Svg => {
            let col = |name: &str| -> Vec<(f64, f64)> {
                table.param_values().into_iter().zip(table.column(name)).filter(|(_, y)| *y > 0.0).collect()
            };
            let series = [
                Series::new("tau*", col("tau")),
                Series::new("tau coherent", col("tau_coherent")),
                Series::new("gamma*", col("gamma")),
                Series::new("|beta*|", col("beta_mag")),
            ];
            let title = format!(
                "{} sweep, {} ({})",
                param.as_str(),
                measure.as_str(),
                if a.search.constrained { "constrained" } else { "unconstrained" }
            );
            loglog_plot(&series, param.as_str(), "value", &svg_opts(title, &prov, &a.out))?
        }
        Format::Csv => {
            let header =
                ["param", "beta_star", "gamma_star", "alpha_star", "tau_star", "tau_coherent", "constrained", "measure", "lambda"];
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    let lambda = if param == Parameter::Lambda { r.param_value } else { p.lambda };
                    vec![
                        fmt_num(r.param_value),
                        fmt_num(r.beta_star),
                        fmt_num(r.gamma_star),
                        fmt_num(r.alpha_star),
                        fmt_num(r.tau_star),
                        fmt_num(r.tau_coherent),
                        a.search.constrained.to_string(),
                        measure.as_str().to_string(),
                        fmt_num(lambda),
                    ]
                })
                .collect();
            csv_document(&prov, &sweep_comments(&table), &header, &rows)
        }
    })
}

fn contour(a: &ContourArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json, Format::Svg], "contour")?;
    let p = model(&a.model)?;
    let measure = Measure::from(a.measure);
    let gamma = GridRange { lo: a.gamma_from, hi: a.gamma_to, points: a.gamma_points, log: a.gamma_log };
    let beta = GridRange::linear(a.beta_from, a.beta_to, a.beta_points);
    let grid = contour_grid(&p, measure, gamma, beta)?;
    let prov = model_provenance("contour", &a.model)
        .text("measure", measure.as_str())
        .num("gamma_from", a.gamma_from)
        .num("gamma_to", a.gamma_to)
        .text("gamma_points", a.gamma_points)
        .text("gamma_log", a.gamma_log)
        .num("beta_from", a.beta_from)
        .num("beta_to", a.beta_to)
        .text("beta_points", a.beta_points);

    Ok(match fmt {
        Format::Json => json_document(&prov, json!({ "grid": grid })),
        Format::Svg => {
            let title = format!("{} time, chi = {}, nu = {}", measure.as_str(), p.chi, p.nu);
            contour_figure(&grid, a.levels, &svg_opts(title, &prov, &a.out))?
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, g) in grid.gamma_axis.iter().enumerate() {
                for (j, b) in grid.beta_axis.iter().enumerate() {
                    rows.push(vec![fmt_num(*g), fmt_num(*b), opt_num(grid.tau[i][j]), grid.pr_mask[i][j].to_string()]);
                }
            }
            let mut comments = Vec::new();
            if let Some((i, j, t)) = grid.argmax(false) {
                comments.push(format!("max gamma={} beta={} tau={}", fmt_num(grid.gamma_axis[i]), fmt_num(grid.beta_axis[j]), fmt_num(t)));
            }
            if let Some((i, j, t)) = grid.argmax(true) {
                comments.push(format!(
                    "max_realizable gamma={} beta={} tau={}",
                    fmt_num(grid.gamma_axis[i]),
                    fmt_num(grid.beta_axis[j]),
                    fmt_num(t)
                ));
            }
            csv_document(&prov, &comments, &["gamma", "beta", "tau", "realizable"], &rows)
        }
    })
}

fn transition(a: &TransitionArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Csv, &[Format::Csv, Format::Json], "transition")?;
    let p = model(&a.model)?;
    let param = Parameter::from(a.param);
    let measure = Measure::from(a.measure);
    let value = detect_transition(&p, param, a.from, a.to, a.constrained, measure)?;
    let prov = model_provenance("transition", &a.model)
        .text("param", param.as_str())
        .num("from", a.from)
        .num("to", a.to)
        .text("constrained", a.constrained)
        .text("measure", measure.as_str());
    Ok(match fmt {
        Format::Json => json_document(&prov, json!({ "param": param.as_str(), "transition": value })),
        _ => csv_document(&prov, &[], &["param", "transition"], &[vec![param.as_str().to_string(), fmt_num(value)]]),
    })
}

fn report_body(p: &ModelParams) -> Value {
    let search = ThresholdSearch::for_model(p);
    let coherent = EnsembleParams::coherent();
    let mut body = Map::new();
    body.insert("model".into(), json!(p));
    if let Some(mu) = p.mu {
        body.insert("stationary_mixedness".into(), result_json(&stationary_mixedness(mu)));
        body.insert("threshold_above_stationary_purity".into(), result_json(&validate_threshold(p.lambda, mu)));
    }
    body.insert("regime".into(), result_json(&regime_checks(p)));
    body.insert(
        "coherent".into(),
        json!({
            "tau_survival": result_json(&robustness_time(&coherent, p, Measure::Survival, &search)),
            "tau_purity": result_json(&robustness_time(&coherent, p, Measure::Purity, &search)),
            "tau_asymptotic": result_json(&tau_coherent_asymptotic(p)),
            "short_time_slope": coherent_short_time_slope(p),
        }),
    );
    let qsd = qsd_ensemble(p).map(|e| {
        json!({
            "beta": e.beta,
            "gamma": e.gamma,
            "alpha": e.alpha(),
            "tau_survival": result_json(&robustness_time(&e, p, Measure::Survival, &search)),
        })
    });
    body.insert(
        "qsd_ensemble".into(),
        qsd.unwrap_or_else(|e| json!({ "error": e.to_string() })),
    );
    Value::Object(body)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Number(n) => out.push(vec![prefix.to_string(), n.as_f64().map(fmt_num).unwrap_or_else(|| n.to_string())]),
        Value::Null => out.push(vec![prefix.to_string(), "nan".into()]),
        Value::String(s) => out.push(vec![prefix.to_string(), format!("\"{}\"", s.replace('"', "\"\""))]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn report(a: &ReportArgs) -> Result<String, CliError> {
    let fmt = format_or(&a.out, Format::Json, &[Format::Csv, Format::Json], "report")?;
    let p = model(&a.model)?;
    let prov = model_provenance("report", &a.model);
    let body = report_body(&p);
    Ok(match fmt {
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &body, &mut rows);
            csv_document(&prov, &[], &["key", "value"], &rows)
        }
        _ => json_document(&prov, body),
    })
}
