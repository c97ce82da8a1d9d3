//! Regressograms: least-squares estimators that are constant on each cell of
//! a fixed partition.
//!
//! On a partition `(I_k)`, the estimator is the per-cell mean of the
//! responses. It is only uniquely defined when every cell holds at least one
//! observation; a model with an empty cell is flagged inadmissible and cannot
//! be scored.

mod oracle;
mod truth;

pub use oracle::{excess_loss_direct, oracle_quantities, OracleQuantities, PopulationCell, PopulationModel};
pub use truth::{generate, FeatureLaw, NoiseLaw, RealFunction, TrueModelSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{PartitionModel, Sample};

/// A regressogram fitted on one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedRegressogram {
    pub model: PartitionModel,
    /// Per-cell mean response; `None` for empty cells.
    pub beta_hat: Vec<Option<f64>>,
    /// Per-cell empirical frequency.
    pub p_hat: Vec<f64>,
    pub counts: Vec<usize>,
    pub admissible: bool,
    /// Cell index of each observation of the fitting sample.
    assignment: Vec<usize>,
}

impl FittedRegressogram {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Cell index of observation `i` of the fitting sample.
    pub fn cell_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Value of the estimator at `x`; `None` outside the domain or on an empty cell.
    pub fn predict(&self, x: f64) -> Option<f64> {
        self.model.locate(x).and_then(|k| self.beta_hat[k])
    }

    fn check_sample(&self, sample: &Sample) -> Result<()> {
        if sample.len() != self.assignment.len() {
            return Err(Error::InvalidSample(format!(
                "fit was built on {} observations, got {}",
                self.assignment.len(),
                sample.len()
            )));
        }
        Ok(())
    }
}

/// Fits the regressogram of `model` on `sample`.
pub fn fit(sample: &Sample, model: &PartitionModel) -> Result<FittedRegressogram> {
    let dim = model.dim();
    let mut sums = vec![0.0; dim];
    let mut counts = vec![0usize; dim];
    let mut assignment = Vec::with_capacity(sample.len());
    let domain = model.domain();
    for (index, (x, y)) in sample.iter().enumerate() {
        let k = model.locate(x).ok_or(Error::FeatureOutOfDomain {
            index,
            x,
            lo: domain.lo,
            hi: domain.hi,
        })?;
        sums[k] += y;
        counts[k] += 1;
        assignment.push(k);
    }
    let n = sample.len() as f64;
    let beta_hat = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
        .collect();
    let p_hat = counts.iter().map(|&c| c as f64 / n).collect();
    let admissible = counts.iter().all(|&c| c > 0);
    Ok(FittedRegressogram {
        model: model.clone(),
        beta_hat,
        p_hat,
        counts,
        admissible,
        assignment,
    })
}

/// Mean squared residual `n^-1 sum (s_hat(X_i) - Y_i)^2` on the fitting sample.
pub fn empirical_risk(fit: &FittedRegressogram, sample: &Sample) -> Result<f64> {
    if !fit.admissible {
        return Err(Error::InadmissibleModel(fit.model.id().to_string()));
    }
    fit.check_sample(sample)?;
    let rss: f64 = sample
        .ys()
        .iter()
        .zip(&fit.assignment)
        .map(|(&y, &k)| {
            let r = fit.beta_hat[k].expect("admissible fit") - y;
            r * r
        })
        .sum();
    Ok(rss / sample.len() as f64)
}
