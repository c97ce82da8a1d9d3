//! Population quantities of a regressogram under a known truth: the
//! projection `s_m`, its bias, and the decomposition of the ideal penalty.

use serde::{Deserialize, Serialize};

use super::truth::TrueModelSpec;
use super::FittedRegressogram;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_split, CELL_ABS_TOL};
use crate::types::{Interval, PartitionModel, Sample};

/// Population moments of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationCell {
    /// `P(X in I)`.
    pub prob: f64,
    /// `E[s(X) | X in I]`, the value of `s_m` on the cell.
    pub mean: f64,
    /// `E[(s(X) - mean)^2 | X in I]`.
    pub bias: f64,
    /// `E[sigma(X)^2 | X in I]`.
    pub noise: f64,
}

impl PopulationCell {
    /// `E[(Y - s_m(X))^2 | X in I]`.
    pub fn residual_variance(&self) -> f64 {
        self.bias + self.noise
    }
}

/// The projection of the truth onto one partition model. Independent of the
/// sample, so it can be computed once and shared across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationModel {
    pub model: PartitionModel,
    pub cells: Vec<PopulationCell>,
}

impl PopulationModel {
    pub fn new(truth: &TrueModelSpec, model: &PartitionModel) -> Result<Self> {
        let breaks = truth.breaks();
        let cells = model
            .cells()
            .enumerate()
            .map(|(k, cell)| {
                cell_moments(truth, cell, &breaks).ok_or(Error::QuadratureFailed {
                    cell: k,
                    lo: cell.lo,
                    hi: cell.hi,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model: model.clone(),
            cells,
        })
    }

    /// `l(s, s_m) = E[(s(X) - s_m(X))^2]`.
    pub fn excess_loss_best(&self) -> f64 {
        self.cells.iter().map(|c| c.prob * c.bias).sum()
    }

    /// `E[sigma(X)^2]`, which is also `P gamma(s)`.
    pub fn mean_noise(&self) -> f64 {
        self.cells.iter().map(|c| c.prob * c.noise).sum()
    }

    /// `P gamma(s_m)`.
    pub fn expected_contrast(&self) -> f64 {
        self.excess_loss_best() + self.mean_noise()
    }
}

fn cell_moments(truth: &TrueModelSpec, cell: Interval, breaks: &[f64]) -> Option<PopulationCell> {
    let prob = truth.x_law.probability(cell);
    let width = cell.width();
    // uniform design: conditional expectations are plain averages over the cell
    let mean = integrate_split(|x| truth.s(x), cell.lo, cell.hi, breaks, CELL_ABS_TOL)? / width;
    let bias = integrate_split(
        |x| {
            let d = truth.s(x) - mean;
            d * d
        },
        cell.lo,
        cell.hi,
        breaks,
        CELL_ABS_TOL,
    )? / width;
    let noise = integrate_split(
        |x| {
            let s = truth.sigma(x);
            s * s
        },
        cell.lo,
        cell.hi,
        breaks,
        CELL_ABS_TOL,
    )? / width;
    Some(PopulationCell {
        prob,
        mean,
        bias,
        noise,
    })
}

/// Terms of the ideal-penalty decomposition for one fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleQuantities {
    /// `P(gamma(s_hat_m) - gamma(s_m))`, with `p_k sigma_k^2` for empty cells.
    pub p1: f64,
    /// `P_n(gamma(s_m) - gamma(s_hat_m))`.
    pub p2: f64,
    /// `(P_n - P) gamma(s_m)`.
    pub delta: f64,
    /// `(P_n - P)(gamma(s_m) - gamma(s))`.
    pub delta_centered: f64,
    /// `l(s, s_hat_m) = l(s, s_m) + p1`.
    pub excess_loss_estimator: f64,
    /// `l(s, s_m)`.
    pub excess_loss_best: f64,
    /// `p1 + p2 - delta = P gamma(s_hat_m) - P_n gamma(s_hat_m)`.
    pub penid: f64,
}

/// Oracle quantities for `fit`, computing the population projection on the fly.
pub fn oracle_quantities(fit: &FittedRegressogram, sample: &Sample, truth: &TrueModelSpec) -> Result<OracleQuantities> {
    let population = PopulationModel::new(truth, &fit.model)?;
    population.oracle_quantities(fit, sample, truth)
}

impl PopulationModel {
    /// Oracle quantities for a fit of the same partition model.
    pub fn oracle_quantities(
        &self,
        fit: &FittedRegressogram,
        sample: &Sample,
        truth: &TrueModelSpec,
    ) -> Result<OracleQuantities> {
        if fit.model.edges() != self.model.edges() {
            return Err(Error::InvalidPartition(format!(
                "fit of {} does not match population model {}",
                fit.model.id(),
                self.model.id()
            )));
        }
        fit.check_sample(sample)?;
        let n = sample.len() as f64;

        let p1: f64 = self
            .cells
            .iter()
            .zip(&fit.beta_hat)
            .map(|(c, b)| match b {
                Some(b) => c.prob * (c.mean - b) * (c.mean - b),
                None => c.prob * c.residual_variance(),
            })
            .sum();

        let mut emp_sm = 0.0; // P_n gamma(s_m)
        let mut emp_s = 0.0; // P_n gamma(s)
        let mut p2 = 0.0;
        for (i, (x, y)) in sample.iter().enumerate() {
            let k = fit.cell_of(i);
            let rm = self.cells[k].mean - y;
            let rh = fit.beta_hat[k].expect("observed cell is nonempty") - y;
            let rs = truth.s(x) - y;
            emp_sm += rm * rm;
            emp_s += rs * rs;
            p2 += rm * rm - rh * rh;
        }
        emp_sm /= n;
        emp_s /= n;
        p2 /= n;

        let excess_loss_best = self.excess_loss_best();
        let delta = emp_sm - self.expected_contrast();
        let delta_centered = (emp_sm - emp_s) - excess_loss_best;
        Ok(OracleQuantities {
            p1,
            p2,
            delta,
            delta_centered,
            excess_loss_estimator: excess_loss_best + p1,
            excess_loss_best,
            penid: p1 + p2 - delta,
        })
    }

    /// `l(s, s_hat_m)` from the per-cell decomposition; infinite for an
    /// inadmissible fit.
    pub fn excess_loss(&self, fit: &FittedRegressogram) -> f64 {
        if !fit.admissible {
            return f64::INFINITY;
        }
        self.cells
            .iter()
            .zip(&fit.beta_hat)
            .map(|(c, b)| {
                let b = b.expect("admissible");
                c.prob * (c.bias + (c.mean - b) * (c.mean - b))
            })
            .sum()
    }
}

/// `l(s, s_hat_m) = E[(s(X) - s_hat_m(X))^2]` by direct quadrature of the
/// squared difference over each cell. Independent of the per-cell
/// decomposition used by [`PopulationModel`].
pub fn excess_loss_direct(fit: &FittedRegressogram, truth: &TrueModelSpec) -> Result<f64> {
    if !fit.admissible {
        return Err(Error::InadmissibleModel(fit.model.id().to_string()));
    }
    let breaks = truth.breaks();
    let mut total = 0.0;
    for (k, (cell, b)) in fit.model.cells().zip(&fit.beta_hat).enumerate() {
        let b = b.expect("admissible");
        let integral = integrate_split(
            |x| {
                let d = truth.s(x) - b;
                d * d
            },
            cell.lo,
            cell.hi,
            &breaks,
            CELL_ABS_TOL,
        )
        .ok_or(Error::QuadratureFailed {
            cell: k,
            lo: cell.lo,
            hi: cell.hi,
        })?;
        total += truth.x_law.probability(cell) * integral / cell.width();
    }
    Ok(total)
}
