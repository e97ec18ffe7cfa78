//! Maximization of the robustness time over `(beta, gamma)`.
//!
//! The search runs over `ln gamma` in `[ln gamma_min, 0]` and `beta` in
//! `[-B, B]`. A coarse multistart grid picks starting points, Nelder–Mead
//! refines them, and under the realizability constraint every trial point is
//! projected onto the admissible `beta` interval at its `gamma`, with an extra
//! line search along each branch of the boundary. The `gamma = 1` edge is
//! maximized separately and wins any near-tie with an interior maximum.

pub mod simplex;
mod contour;

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use contour::{contour_grid, ContourGrid, GridRange};
use simplex::{golden_max, nelder_mead_max, SimplexOptions};

use crate::ensemble::{pr_boundary_betas, EnsembleParams};
use crate::error::{Error, Result};
use crate::moments::{ModelParams, Parameter};
use crate::robustness::{robustness_time, Measure, ThresholdSearch};

pub const DEFAULT_SEED: u64 = 0x5eed_2001;

/// Search box for the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBox {
    pub gamma_min: f64,
    pub beta_max: f64,
}

impl SearchBox {
    /// `gamma_min = 1e-4 min(1, chi^{-2/3}, nu^{-1/2})`,
    /// `B = max(4, 4 sqrt(chi), 4 sqrt(nu))`.
    pub fn for_model(p: &ModelParams) -> Self {
        let mut floor = 1.0_f64;
        if p.chi > 0.0 {
            floor = floor.min(p.chi.powf(-2.0 / 3.0));
        }
        if p.nu > 0.0 {
            floor = floor.min(p.nu.powf(-0.5));
        }
        SearchBox {
            gamma_min: 1e-4 * floor,
            beta_max: 4.0_f64.max(4.0 * p.chi.sqrt()).max(4.0 * p.nu.sqrt()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub gamma_points: usize,
    /// Grid points per sign of `beta` (plus `beta = 0`).
    pub beta_points: usize,
    /// Number of grid cells refined locally.
    pub local_starts: usize,
    /// Relative margin within which the `gamma = 1` edge is preferred.
    pub tie_tolerance: f64,
    /// Seeds the jitter of the multistart grid.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { gamma_points: 40, beta_points: 24, local_starts: 4, tie_tolerance: 1e-3, seed: DEFAULT_SEED }
    }
}

/// An evaluated point of the search space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
}

impl Candidate {
    /// Deterministic order: larger `tau`, then smaller `gamma`, then larger `beta`.
    fn beats(&self, other: &Candidate) -> bool {
        (self.tau, -self.gamma, self.beta)
            .partial_cmp(&(other.tau, -other.gamma, other.beta))
            .map(|o| o.is_gt())
            .unwrap_or(false)
    }

    fn on_edge(&self) -> bool {
        self.gamma >= 1.0
    }
}

fn best_of<I: IntoIterator<Item = Candidate>>(it: I) -> Option<Candidate> {
    it.into_iter().fold(None, |acc, c| match acc {
        Some(a) if !c.beats(&a) => Some(a),
        _ => Some(c),
    })
}

/// Optimal ensemble for one set of model parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessResult {
    pub beta_star: f64,
    pub gamma_star: f64,
    pub alpha_star: f64,
    pub tau_star: f64,
    pub constrained: bool,
    pub measure: Measure,
    /// On the realizability boundary or on the `gamma = 1` edge.
    pub on_boundary: bool,
    /// The best candidate from the other side of the edge/interior split.
    pub runner_up: Option<Candidate>,
    /// `beta_star` sits on the artificial `|beta| = B` box.
    pub railed: bool,
    pub n_evals: usize,
}

impl RobustnessResult {
    pub fn ensemble(&self) -> EnsembleParams {
        EnsembleParams { beta: self.beta_star, gamma: self.gamma_star }
    }
}

struct Problem<'a> {
    p: &'a ModelParams,
    constrained: bool,
    measure: Measure,
    bounds: SearchBox,
    search: ThresholdSearch,
    evals: AtomicUsize,
}

impl<'a> Problem<'a> {
    fn new(p: &'a ModelParams, constrained: bool, measure: Measure) -> Self {
        Problem {
            p,
            constrained,
            measure,
            bounds: SearchBox::for_model(p),
            search: ThresholdSearch::for_model(p),
            evals: AtomicUsize::new(0),
        }
    }

    /// Admissible `beta` interval at `gamma`.
    fn beta_interval(&self, gamma: f64) -> (f64, f64) {
        let b = self.bounds.beta_max;
        if !self.constrained {
            return (-b, b);
        }
        let (lo, hi) = pr_boundary_betas(gamma, self.p)
            .ok()
            .and_then(|r| r.interval())
            .expect("realizable interval exists for 0 < gamma <= 1");
        // the realizability interval takes precedence over the box
        let (clo, chi) = (lo.max(-b), hi.min(b));
        if clo <= chi {
            (clo, chi)
        } else {
            (lo, hi)
        }
    }

    fn project(&self, ln_gamma: f64, beta: f64) -> (f64, f64) {
        let gamma = ln_gamma.min(0.0).max(self.bounds.gamma_min.ln()).exp().min(1.0);
        let (lo, hi) = self.beta_interval(gamma);
        (gamma, beta.clamp(lo, hi))
    }

    fn tau(&self, gamma: f64, beta: f64) -> Option<f64> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let e = EnsembleParams { beta, gamma };
        robustness_time(&e, self.p, self.measure, &self.search).ok()
    }

    fn candidate(&self, ln_gamma: f64, beta: f64) -> Option<Candidate> {
        let (gamma, beta) = self.project(ln_gamma, beta);
        self.tau(gamma, beta).map(|tau| Candidate { beta, gamma, tau })
    }

    fn refine(&self, start: Candidate, step_u: f64) -> Option<Candidate> {
        let step_b = (0.25 * start.beta.abs()).max(1e-3);
        let opts = SimplexOptions { xtol: [1e-9, 1e-10_f64.max(1e-9 * start.beta.abs())], max_iter: 1500 };
        let r = nelder_mead_max(|x| self.candidate(x[0], x[1]).map(|c| c.tau), [start.gamma.ln(), start.beta], [-step_u, step_b], &opts);
        self.candidate(r.x[0], r.x[1])
    }

    /// Line search along one branch of the realizability boundary.
    fn boundary_search(&self, ln_grid: &[f64], upper: bool) -> Option<Candidate> {
        let at = |u: f64| -> Option<Candidate> {
            let gamma = u.min(0.0).exp();
            let (lo, hi) = self.beta_interval(gamma);
            let beta = if upper { hi } else { lo };
            self.tau(gamma, beta).map(|tau| Candidate { beta, gamma, tau })
        };
        let scored: Vec<Option<Candidate>> = ln_grid.iter().map(|&u| at(u)).collect();
        let (k, _) = scored
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|c| (k, c)))
            .fold(None, |acc: Option<(usize, Candidate)>, (k, c)| match acc {
                Some((_, a)) if !c.beats(&a) => acc,
                _ => Some((k, c)),
            })?;
        let a = ln_grid[k.saturating_sub(1)];
        let b = ln_grid[(k + 1).min(ln_grid.len() - 1)];
        let (u, _) = golden_max(|u| at(u).map(|c| c.tau), a, b, 1e-10);
        best_of([at(u), scored[k]].into_iter().flatten())
    }

    /// Best point on the `gamma = 1` edge.
    fn edge_search(&self, betas: &[f64]) -> Option<Candidate> {
        let (lo, hi) = self.beta_interval(1.0);
        if lo == hi {
            return self.tau(1.0, lo).map(|tau| Candidate { beta: lo, gamma: 1.0, tau });
        }
        let at = |b: f64| self.tau(1.0, b.clamp(lo, hi)).map(|tau| Candidate { beta: b.clamp(lo, hi), gamma: 1.0, tau });
        let mut grid: Vec<f64> = betas.iter().map(|b| b.clamp(lo, hi)).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let scored: Vec<Option<Candidate>> = grid.iter().map(|&b| at(b)).collect();
        let k = scored
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|c| (k, c)))
            .fold(None, |acc: Option<(usize, Candidate)>, (k, c)| match acc {
                Some((_, a)) if !c.beats(&a) => acc,
                _ => Some((k, c)),
            })?
            .0;
        let a = grid[k.saturating_sub(1)];
        let b = grid[(k + 1).min(grid.len() - 1)];
        let (x, _) = golden_max(|b| at(b).map(|c| c.tau), a, b, 1e-11 * (1.0 + a.abs().max(b.abs())));
        best_of([at(x), scored[k]].into_iter().flatten())
    }
}

fn beta_grid(beta_max: f64, per_sign: usize, scale: f64) -> Vec<f64> {
    let lo = 1e-4_f64;
    let mut out = vec![0.0];
    for j in 0..per_sign {
        let f = if per_sign == 1 { 1.0 } else { j as f64 / (per_sign - 1) as f64 };
        let mag = (lo * (beta_max / lo).powf(f) * scale).min(beta_max);
        out.push(mag);
        out.push(-mag);
    }
    out.sort_by(f64::total_cmp);
    out
}

pub(crate) fn map_cells<T: Send, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maximizes the robustness time with default settings.
pub fn maximize_robustness(p: &ModelParams, constrained: bool, measure: Measure) -> Result<RobustnessResult> {
    maximize_robustness_with(p, constrained, measure, &OptimizerConfig::default(), None)
}

/// Maximizes the robustness time, optionally adding a warm-start point
/// `(beta, gamma)` to the multistart set.
pub fn maximize_robustness_with(
    p: &ModelParams,
    constrained: bool,
    measure: Measure,
    cfg: &OptimizerConfig,
    warm_start: Option<(f64, f64)>,
) -> Result<RobustnessResult> {
    p.validate()?;
    let prob = Problem::new(p, constrained, measure);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ng = cfg.gamma_points.max(3);
    let u_min = prob.bounds.gamma_min.ln();
    let step_u = -u_min / (ng - 1) as f64;
    let jitter_u: f64 = rng.gen_range(0.0..1.0);
    let mut ln_grid: Vec<f64> = (0..ng).map(|k| (u_min + (k as f64 + jitter_u) * step_u).min(0.0)).collect();
    ln_grid.insert(0, u_min);
    ln_grid.dedup();
    let betas = beta_grid(prob.bounds.beta_max, cfg.beta_points.max(2), rng.gen_range(0.85..1.15));
    let nb = betas.len();

    let cells: Vec<Option<Candidate>> = map_cells(ln_grid.len() * nb, |k| prob.candidate(ln_grid[k / nb], betas[k % nb]));
    if cells.iter().all(Option::is_none) {
        return Err(Error::NoOptimum);
    }

    // pick well-separated grid maxima as local starts
    let mut order: Vec<usize> = (0..cells.len()).filter(|&k| cells[k].is_some()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (cells[a].unwrap(), cells[b].unwrap());
        if ca.beats(&cb) {
            std::cmp::Ordering::Less
        } else if cb.beats(&ca) {
            std::cmp::Ordering::Greater
        } else {
            a.cmp(&b)
        }
    });
    let mut starts: Vec<(usize, Candidate)> = Vec::new();
    for k in order {
        if starts.len() >= cfg.local_starts.max(1) {
            break;
        }
        let (i, j) = (k / nb, k % nb);
        let near = starts.iter().any(|&(s, _)| (s / nb).abs_diff(i) <= 1 && (s % nb).abs_diff(j) <= 1);
        if !near {
            starts.push((k, cells[k].unwrap()));
        }
    }
    let mut seeds: Vec<Candidate> = starts.into_iter().map(|(_, c)| c).collect();
    if let Some((b, g)) = warm_start {
        if g > 0.0 && g <= 1.0 {
            if let Some(c) = prob.candidate(g.ln(), b) {
                seeds.push(c);
            }
        }
    }

    let mut found: Vec<Candidate> = map_cells(seeds.len(), |k| prob.refine(seeds[k], step_u)).into_iter().flatten().collect();
    found.extend(seeds.iter().copied());
    if constrained {
        for upper in [true, false] {
            found.extend(prob.boundary_search(&ln_grid, upper));
        }
    }
    found.extend(prob.edge_search(&betas));

    let edge = best_of(found.iter().copied().filter(Candidate::on_edge));
    let interior = best_of(found.iter().copied().filter(|c| !c.on_edge()));
    let (winner, runner_up) = match (edge, interior) {
        (Some(e), Some(i)) => {
            if e.tau >= i.tau * (1.0 - cfg.tie_tolerance) {
                (e, Some(i))
            } else {
                (i, Some(e))
            }
        }
        (Some(e), None) => (e, None),
        (None, Some(i)) => (i, None),
        (None, None) => return Err(Error::NoOptimum),
    };

    let on_pr_boundary = constrained && {
        let (lo, hi) = prob.beta_interval(winner.gamma);
        let tol = 1e-8 * (1.0 + winner.beta.abs());
        (winner.beta - lo).abs() <= tol || (winner.beta - hi).abs() <= tol
    };
    let b = prob.bounds.beta_max;
    Ok(RobustnessResult {
        beta_star: winner.beta,
        gamma_star: winner.gamma,
        alpha_star: (1.0 + winner.beta * winner.beta) / winner.gamma,
        tau_star: winner.tau,
        constrained,
        measure,
        on_boundary: winner.on_edge() || on_pr_boundary,
        runner_up,
        railed: winner.beta.abs() >= b * (1.0 - 1e-9),
        n_evals: prob.evals.load(Ordering::Relaxed),
    })
}

/// Spread of optima across independently seeded multistarts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartReport {
    pub results: Vec<RobustnessResult>,
    /// Largest deviation of `beta_star` from the first run, relative to
    /// `max(|beta_star|, 0.01)`.
    pub beta_spread: f64,
    /// Largest relative deviation of `gamma_star` from the first run.
    pub gamma_spread: f64,
}

impl RestartReport {
    pub fn agrees_within(&self, rel: f64) -> bool {
        self.beta_spread <= rel && self.gamma_spread <= rel
    }
}

/// Re-runs the optimizer with `n` different seeds.
pub fn restart_stability(p: &ModelParams, constrained: bool, measure: Measure, n: usize) -> Result<RestartReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0xa5a5);
    let results = (0..n.max(1))
        .map(|_| {
            let cfg = OptimizerConfig { seed: rng.gen(), ..Default::default() };
            maximize_robustness_with(p, constrained, measure, &cfg, None)
        })
        .collect::<Result<Vec<_>>>()?;
    let first = &results[0];
    let beta_scale = first.beta_star.abs().max(1e-2);
    let beta_spread = results.iter().map(|r| (r.beta_star - first.beta_star).abs() / beta_scale).fold(0.0, f64::max);
    let gamma_spread = results.iter().map(|r| (r.gamma_star - first.gamma_star).abs() / first.gamma_star).fold(0.0, f64::max);
    Ok(RestartReport { results, beta_spread, gamma_spread })
}

/// Whether the global optimum lies strictly inside `gamma < 1`.
///
/// Ties are not broken in favour of the edge. A maximum that has just left
/// the edge continuously is caught by probing `gamma = 1 - h`.
pub fn interior_wins(p: &ModelParams, constrained: bool, measure: Measure) -> Result<bool> {
    let cfg = OptimizerConfig { tie_tolerance: 0.0, ..Default::default() };
    let r = maximize_robustness_with(p, constrained, measure, &cfg, None)?;
    if r.gamma_star < 1.0 {
        return Ok(true);
    }
    let mut prob = Problem::new(p, constrained, measure);
    prob.search = prob.search.with_rtol(1e-14);
    let edge = prob.tau(1.0, r.beta_star).ok_or(Error::NoOptimum)?;
    const H: f64 = 1e-3;
    let gamma = 1.0 - H;
    let (lo, hi) = prob.beta_interval(gamma);
    let (a, b) = ((r.beta_star - 1.0).max(lo), (r.beta_star + 1.0).min(hi));
    let (_, probe) = golden_max(|beta| prob.tau(gamma, beta), a, b, 1e-12 * (1.0 + a.abs().max(b.abs())));
    Ok(probe > edge * (1.0 + 1e-9))
}

/// Locates the parameter value at which the global optimum leaves the
/// `gamma = 1` edge, by bisection on [`interior_wins`].
pub fn detect_transition(
    template: &ModelParams,
    param: Parameter,
    lo: f64,
    hi: f64,
    constrained: bool,
    measure: Measure,
) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let wins = |v: f64| -> Result<bool> { interior_wins(&param.apply(template, v)?, constrained, measure) };
    let (mut a, mut b) = (lo, hi);
    let (wa, wb) = (wins(a)?, wins(b)?);
    if wa == wb {
        return Err(Error::TransitionNotFound { lo, hi });
    }
    while (b - a) > 1e-3 * 0.5 * (a + b).abs() {
        let m = 0.5 * (a + b);
        if wins(m)? == wa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
