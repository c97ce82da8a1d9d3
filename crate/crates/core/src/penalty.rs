//! Penalty shapes `g(m)` handed to the path computation.
//!
//! Three shapes are available: the model dimension, a plug-in estimate of
//! `(2/n) sum_k E[sigma(X)^2 | X in I_k]` built from within-cell sample
//! variances, and the same quantity computed exactly from a known truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regressogram::{empirical_risk, fit, PopulationModel, TrueModelSpec};
use crate::types::{PartitionModel, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Dimension,
    HeteroscedasticPlugin,
    HeteroscedasticKnown,
}

/// One penalty shape value per model, in the order of the model list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyShape {
    pub kind: ShapeKind,
    pub values: Vec<f64>,
}

impl PenaltyShape {
    fn new(kind: ShapeKind, values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidScore(format!("penalty shape value {v}")));
        }
        Ok(Self { kind, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The same shape multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kind: self.kind,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// `g(m) = D_m`.
pub fn shape_dimension(models: &[PartitionModel]) -> PenaltyShape {
    PenaltyShape {
        kind: ShapeKind::Dimension,
        values: models.iter().map(|m| m.dim() as f64).collect(),
    }
}

/// Unbiased variance of `values` (divisor `len - 1`); `None` below two points.
fn unbiased_variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    Some(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
}

/// Residual variance used for cells with fewer than two observations: the
/// residual mean square of the finest admissible model (divisor `n - D`),
/// or the sample variance of `Y` when no such model exists.
pub fn fallback_variance(sample: &Sample, models: &[PartitionModel]) -> Result<f64> {
    let n = sample.len();
    let mut finest: Option<(usize, f64)> = None;
    for model in models {
        let d = model.dim();
        if d >= n || finest.is_some_and(|(best, _)| best >= d) {
            continue;
        }
        let fitted = fit(sample, model)?;
        if fitted.admissible {
            let risk = empirical_risk(&fitted, sample)?;
            finest = Some((d, risk * n as f64 / (n - d) as f64));
        }
    }
    Ok(match finest {
        Some((_, v)) => v,
        None => unbiased_variance(sample.ys()).unwrap_or(0.0),
    })
}

/// `g(m) = (2/n) sum_k v_k` with `v_k` the within-cell unbiased variance of `Y`.
pub fn shape_plugin(sample: &Sample, models: &[PartitionModel]) -> Result<PenaltyShape> {
    let n = sample.len() as f64;
    let mut fallback: Option<f64> = None;
    let mut values = Vec::with_capacity(models.len());
    for model in models {
        let mut per_cell: Vec<Vec<f64>> = vec![Vec::new(); model.dim()];
        let domain = model.domain();
        for (index, (x, y)) in sample.iter().enumerate() {
            let k = model.locate(x).ok_or(Error::FeatureOutOfDomain {
                index,
                x,
                lo: domain.lo,
                hi: domain.hi,
            })?;
            per_cell[k].push(y);
        }
        let mut total = 0.0;
        for ys in &per_cell {
            total += match unbiased_variance(ys) {
                Some(v) => v,
                None => match fallback {
                    Some(v) => v,
                    None => *fallback.insert(fallback_variance(sample, models)?),
                },
            };
        }
        values.push(2.0 * total / n);
    }
    PenaltyShape::new(ShapeKind::HeteroscedasticPlugin, values)
}

/// `g(m) = (2/n) sum_k E[sigma(X)^2 | X in I_k]` under the known truth.
pub fn shape_known(truth: &TrueModelSpec, models: &[PartitionModel], n: usize) -> Result<PenaltyShape> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be >= 1".into()));
    }
    let values = models
        .iter()
        .map(|m| {
            let pop = PopulationModel::new(truth, m)?;
            Ok(2.0 * pop.cells.iter().map(|c| c.noise).sum::<f64>() / n as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    PenaltyShape::new(ShapeKind::HeteroscedasticKnown, values)
}

/// Same as [`shape_known`] from precomputed population models.
pub fn shape_known_from(populations: &[PopulationModel], n: usize) -> PenaltyShape {
    PenaltyShape {
        kind: ShapeKind::HeteroscedasticKnown,
        values: populations
            .iter()
            .map(|p| 2.0 * p.cells.iter().map(|c| c.noise).sum::<f64>() / n as f64)
            .collect(),
    }
}
