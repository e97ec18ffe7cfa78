use serde::Serialize;

use crate::ensemble::{is_physically_realizable, EnsembleParams};
use crate::error::{Error, Result};
use crate::moments::ModelParams;
use crate::robustness::{robustness_time, Measure, ThresholdSearch};

/// Axis specification for a contour grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log: bool,
}

impl GridRange {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        GridRange { lo, hi, points, log: false }
    }

    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        GridRange { lo, hi, points, log: true }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::InvalidInput("grid resolution must be positive".into()));
        }
        if !(self.lo <= self.hi) || (self.log && self.lo <= 0.0) {
            return Err(Error::InvalidInput(format!("bad grid range [{}, {}]", self.lo, self.hi)));
        }
        if self.points == 1 {
            return Ok(vec![self.lo]);
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                let f = k as f64 / n;
                if self.log {
                    self.lo * (self.hi / self.lo).powf(f)
                } else {
                    self.lo + f * (self.hi - self.lo)
                }
            })
            .collect())
    }
}

/// Robustness time sampled on a `(gamma, beta)` grid.
///
/// `tau[i][j]` and `pr_mask[i][j]` refer to `gamma_axis[i]`, `beta_axis[j]`.
/// Cells whose time could not be found are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid {
    pub gamma_axis: Vec<f64>,
    pub beta_axis: Vec<f64>,
    pub tau: Vec<Vec<Option<f64>>>,
    pub pr_mask: Vec<Vec<bool>>,
    pub measure: Measure,
}

impl ContourGrid {
    /// Largest finite cell as `(i, j, tau)`, optionally restricted to the
    /// realizable cells.
    pub fn argmax(&self, realizable_only: bool) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, row) in self.tau.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if realizable_only && !self.pr_mask[i][j] {
                    continue;
                }
                if let Some(v) = *v {
                    if best.map_or(true, |b| v > b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        best
    }
}

pub fn contour_grid(p: &ModelParams, measure: Measure, gamma: GridRange, beta: GridRange) -> Result<ContourGrid> {
    p.validate()?;
    let gamma_axis = gamma.values()?;
    if gamma_axis.iter().any(|&g| !(g > 0.0 && g <= 1.0)) {
        return Err(Error::InvalidInput("gamma axis must lie in (0, 1]".into()));
    }
    let beta_axis = beta.values()?;
    let search = ThresholdSearch::for_model(p);
    let nb = beta_axis.len();
    let cells = super::map_cells(gamma_axis.len() * nb, |k| {
        let e = EnsembleParams { gamma: gamma_axis[k / nb], beta: beta_axis[k % nb] };
        (robustness_time(&e, p, measure, &search).ok(), is_physically_realizable(&e, p))
    });
    let mut tau = Vec::with_capacity(gamma_axis.len());
    let mut pr_mask = Vec::with_capacity(gamma_axis.len());
    for row in cells.chunks(nb) {
        tau.push(row.iter().map(|c| c.0).collect());
        pr_mask.push(row.iter().map(|c| c.1).collect());
    }
    Ok(ContourGrid { gamma_axis, beta_axis, tau, pr_mask, measure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::pr_boundary_betas;

    #[test]
    fn free_field_maximum_at_coherent_corner() {
        let p = ModelParams::new(0.0, 0.0).unwrap();
        let g = contour_grid(&p, Measure::Survival, GridRange::linear(0.05, 1.0, 20), GridRange::linear(-1.0, 1.0, 21)).unwrap();
        let (i, j, tau) = g.argmax(false).unwrap();
        assert_eq!(g.gamma_axis[i], 1.0);
        assert!(g.beta_axis[j].abs() < 1e-12);
        assert!((tau - 3.0).abs() < 1e-8);
    }

    #[test]
    fn mask_matches_boundary_roots() {
        let p = ModelParams::new(50.0, 0.0).unwrap();
        let g = contour_grid(&p, Measure::Survival, GridRange::linear(0.02, 0.3, 8), GridRange::linear(-0.6, 0.2, 41)).unwrap();
        for (i, &gamma) in g.gamma_axis.iter().enumerate() {
            let (lo, hi) = pr_boundary_betas(gamma, &p).unwrap().interval().unwrap();
            for (j, &beta) in g.beta_axis.iter().enumerate() {
                let inside = beta >= lo - 1e-9 && beta <= hi + 1e-9;
                assert_eq!(g.pr_mask[i][j], inside, "gamma={gamma} beta={beta}");
            }
        }
    }

    #[test]
    fn zero_resolution_rejected() {
        let p = ModelParams::new(1.0, 0.0).unwrap();
        assert!(contour_grid(&p, Measure::Survival, GridRange::linear(0.1, 1.0, 0), GridRange::linear(-1.0, 1.0, 3)).is_err());
    }
}
