//! Empirical check of the dimension jump around the minimal penalty.
//!
//! The known shape `(2/n) sum_k E[sigma(X)^2 | X in I_k]` is twice the
//! expected minimal penalty of a regressogram. Multipliers here apply to
//! half of it, so the minimal multiplier is `K = 1`: below it the selected
//! dimension should stay close to the largest available, above it the
//! selected dimension should be small.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::median;
use super::{fit_collection, replicate_rng, BenchmarkConfig};
use crate::error::{Error, Result};
use crate::path::compute_path;
use crate::penalty::PenaltyShape;
use crate::types::ModelScore;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionJumpConfig {
    pub multipliers: Vec<f64>,
    /// Multiplier below the minimal value used for the lower-bound check.
    pub low: f64,
    /// Multiplier above the minimal value used for the upper-bound check.
    pub high: f64,
    /// Constant in the lower bound `c_low n / (ln n)^2`.
    pub c_low: f64,
    /// Exponent in the upper bound `n^(1 - eta)`.
    pub eta: f64,
}

impl Default for DimensionJumpConfig {
    fn default() -> Self {
        Self {
            multipliers: vec![0.5, 0.75, 1.25, 2.0],
            low: 0.5,
            high: 2.0,
            c_low: 1.0,
            eta: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionJumpReport {
    pub multipliers: Vec<f64>,
    /// Selected dimension per replicate, aligned with `multipliers`.
    pub dims: Vec<Vec<usize>>,
    /// Selected dimension without penalty, per replicate.
    pub unpenalized_dims: Vec<usize>,
    /// Largest admissible dimension, per replicate.
    pub max_admissible_dims: Vec<usize>,
    pub median_dims: Vec<f64>,
    pub low_bound: f64,
    pub high_bound: f64,
    /// Fraction of replicates with `D(low) >= low_bound`.
    pub fraction_low: f64,
    /// Fraction of replicates with `D(high) <= high_bound`.
    pub fraction_high: f64,
    /// Fraction of replicates satisfying both.
    pub fraction_both: f64,
    pub failed: usize,
}

impl DimensionJumpReport {
    pub fn median_at(&self, k: f64) -> Option<f64> {
        self.multipliers
            .iter()
            .position(|&m| m == k)
            .map(|i| self.median_dims[i])
    }

    pub fn dims_at(&self, k: f64) -> Option<Vec<usize>> {
        let i = self.multipliers.iter().position(|&m| m == k)?;
        Some(self.dims.iter().map(|d| d[i]).collect())
    }
}

/// Records the dimension selected at each multiplier over `cfg.replicates`
/// simulated samples, with penalty `K * shape / 2`.
pub fn verify_dimension_jump(
    cfg: &BenchmarkConfig,
    shape: &PenaltyShape,
    jcfg: &DimensionJumpConfig,
) -> Result<DimensionJumpReport> {
    cfg.validate()?;
    let models = cfg.collection()?;
    if shape.len() != models.len() {
        return Err(Error::InvalidConfig(format!(
            "shape has {} values for {} models",
            shape.len(),
            models.len()
        )));
    }
    let mut ks = jcfg.multipliers.clone();
    for k in [jcfg.low, jcfg.high] {
        if !ks.contains(&k) {
            ks.push(k);
        }
    }
    if ks.iter().any(|k| k.is_nan() || *k < 0.0) {
        return Err(Error::InvalidConfig("multipliers must be >= 0".into()));
    }

    let per_rep: Vec<Option<(Vec<usize>, usize, usize)>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(cfg.seed, r);
            let sample = cfg.truth.generate_with(cfg.n, &mut rng).ok()?;
            let fc = fit_collection(&sample, &models).ok()?;
            let scores: Vec<ModelScore> = fc
                .admissible()
                .map(|i| ModelScore {
                    model_id: models[i].id().clone(),
                    f: fc.risks[i].expect("admissible"),
                    g: 0.5 * shape.values[i],
                    dim: models[i].dim(),
                })
                .collect();
            let max_dim = scores.iter().map(|s| s.dim).max()?;
            let path = compute_path(&scores).ok()?;
            let dims = ks.iter().map(|&k| path.model_at(k).dim).collect();
            Some((dims, path.model_at(0.0).dim, max_dim))
        })
        .collect();

    let ok: Vec<_> = per_rep.iter().flatten().cloned().collect();
    let failed = per_rep.len() - ok.len();
    if ok.is_empty() {
        return Err(Error::InvalidConfig("every replicate failed".into()));
    }
    let nf = cfg.n as f64;
    let low_bound = jcfg.c_low * nf / (nf.ln() * nf.ln());
    let high_bound = nf.powf(1.0 - jcfg.eta);
    let i_low = ks.iter().position(|&k| k == jcfg.low).unwrap();
    let i_high = ks.iter().position(|&k| k == jcfg.high).unwrap();
    let total = ok.len() as f64;
    let count = |pred: &dyn Fn(&Vec<usize>) -> bool| ok.iter().filter(|(d, _, _)| pred(d)).count() as f64 / total;
    let low_ok = |d: &Vec<usize>| d[i_low] as f64 >= low_bound;
    let high_ok = |d: &Vec<usize>| d[i_high] as f64 <= high_bound;

    let dims: Vec<Vec<usize>> = ok.iter().map(|(d, _, _)| d.clone()).collect();
    let median_dims = (0..ks.len())
        .map(|j| median(&dims.iter().map(|d| d[j]).collect::<Vec<_>>()))
        .collect();
    Ok(DimensionJumpReport {
        multipliers: ks,
        median_dims,
        low_bound,
        high_bound,
        fraction_low: count(&low_ok),
        fraction_high: count(&high_ok),
        fraction_both: count(&|d| low_ok(d) && high_ok(d)),
        unpenalized_dims: ok.iter().map(|o| o.1).collect(),
        max_admissible_dims: ok.iter().map(|o| o.2).collect(),
        dims,
        failed,
    })
}
