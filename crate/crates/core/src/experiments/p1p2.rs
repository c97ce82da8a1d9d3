//! Monte-Carlo comparison of `E[p1(m)]` and `E[p2(m)]` for one model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{replicate_rng, BenchmarkConfig, Estimate, DEGENERATE_ORACLE_LOSS};
use crate::error::{Error, Result};
use crate::regressogram::{fit, PopulationModel};
use crate::types::PartitionModel;

/// Bounds `(lower, upper)` such that
/// `lower * E[p2] <= E[p1] <= upper * E[p2]` whenever `min n p_k >= b`.
pub fn p1_p2_bracket(b: f64) -> (f64, f64) {
    let lower = (1.0 - (-b).exp()).powi(2);
    let bm = b.max(1.0);
    let upper = 2.0_f64.min(1.0 + 5.1 * b.powf(-0.25)) + bm * (-bm).exp();
    (lower, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P1P2Report {
    pub model_id: String,
    pub n: usize,
    pub replicates: usize,
    pub p1: Estimate,
    pub p2: Estimate,
    /// `E[p1] / E[p2]`; `None` when `E[p2]` is numerically zero.
    pub ratio: Option<Estimate>,
    /// `min_k n p_k`.
    pub b: f64,
    pub lower: f64,
    pub upper: f64,
    /// `None` when the ratio is undefined.
    pub within_bracket: Option<bool>,
}

/// Estimates `E[p1(m)]` and `E[p2(m)]` over `cfg.replicates` samples of
/// `cfg.truth`. Every cell must carry probability at least `ln(n) / n`.
/// Empty cells contribute `p_k sigma_k^2` to `p1` and nothing to `p2`.
pub fn verify_p1_p2(cfg: &BenchmarkConfig, model: &PartitionModel) -> Result<P1P2Report> {
    if cfg.n < 2 || cfg.replicates == 0 {
        return Err(Error::InvalidConfig("need n >= 2 and at least one replicate".into()));
    }
    cfg.truth.validate()?;
    let population = PopulationModel::new(&cfg.truth, model)?;
    let nf = cfg.n as f64;
    let b = population
        .cells
        .iter()
        .map(|c| nf * c.prob)
        .fold(f64::INFINITY, f64::min);
    if b < nf.ln() {
        return Err(Error::InvalidConfig(format!(
            "min n p_k = {b} is below ln n = {}",
            nf.ln()
        )));
    }

    let pairs: Vec<(f64, f64)> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(cfg.seed, r);
            let sample = cfg.truth.generate_with(cfg.n, &mut rng)?;
            let fitted = fit(&sample, model)?;
            let q = population.oracle_quantities(&fitted, &sample, &cfg.truth)?;
            Ok((q.p1, q.p2))
        })
        .collect::<Result<_>>()?;
    let (p1s, p2s): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    let p1 = Estimate::mean_of(&p1s);
    let p2 = Estimate::mean_of(&p2s);
    let ratio = (p2.value > DEGENERATE_ORACLE_LOSS)
        .then(|| Estimate::ratio_of_means(&p1s, &p2s))
        .flatten();
    let (lower, upper) = p1_p2_bracket(b);
    Ok(P1P2Report {
        model_id: model.id().to_string(),
        n: cfg.n,
        replicates: cfg.replicates,
        p1,
        p2,
        within_bracket: ratio.map(|r| r.value >= lower && r.value <= upper),
        ratio,
        b,
        lower,
        upper,
    })
}
