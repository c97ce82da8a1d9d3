//! Oracle-constant benchmark: repeated simulation of the regressogram
//! selection problem, comparing the threshold and largest-jump calibrations
//! with Mallows' Cp against the per-sample oracle model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, Estimate};
use super::{fit_collection, replicate_rng, FittedCollection};
use crate::calibrate::{run_calibration, CalibrationConfig, JumpCase, ThresholdConfig};
use crate::error::{Error, Result};
use crate::path::brute_force_argmin_index;
use crate::regressogram::{PopulationModel, TrueModelSpec};
use crate::types::{default_max_dim, ModelScore, PartitionModel};

/// Below this mean oracle loss the oracle constant is reported as undefined.
pub const DEGENERATE_ORACLE_LOSS: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub n: usize,
    pub replicates: usize,
    pub truth: TrueModelSpec,
    pub dims: Vec<usize>,
    pub d_thresh: usize,
    pub seed: u64,
    /// Additional large dimensions appended to the collection to sharpen the
    /// largest jump. Empty by default.
    #[serde(default)]
    pub extra_dims: Vec<usize>,
}

impl BenchmarkConfig {
    /// Regular partitions of dimensions `1..=floor(n / ln n)` and the
    /// default threshold for `n`.
    pub fn with_defaults(truth: TrueModelSpec, n: usize, replicates: usize, seed: u64) -> Self {
        Self {
            n,
            replicates,
            truth,
            dims: (1..=default_max_dim(n)).collect(),
            d_thresh: ThresholdConfig::default_for(n).d_thresh,
            seed,
            extra_dims: Vec::new(),
        }
    }

    /// `n = 200`, `s(x) = sin(pi x)`, `sigma = 1`, uniform design, dimensions
    /// 1 to 37, threshold 19.
    pub fn sine_benchmark(replicates: usize, seed: u64) -> Self {
        Self::with_defaults(TrueModelSpec::sine_homoscedastic(), 200, replicates, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().chain(&self.extra_dims).any(|&d| d == 0) {
            return Err(Error::InvalidConfig("dims must be nonempty and >= 1".into()));
        }
        ThresholdConfig::new(self.d_thresh)?;
        self.truth.validate()
    }

    /// The model collection: `dims` followed by `extra_dims`, duplicates removed.
    pub fn collection(&self) -> Result<Vec<PartitionModel>> {
        let mut dims: Vec<usize> = Vec::new();
        for &d in self.dims.iter().chain(&self.extra_dims) {
            if !dims.contains(&d) {
                dims.push(d);
            }
        }
        PartitionModel::regular_family(&dims, self.truth.domain())
    }
}

/// Outcome of one successful replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub k_min_thresh: f64,
    pub k_min_maxjump: f64,
    pub dim_thresh: usize,
    pub dim_maxjump: usize,
    pub dim_mallows: usize,
    pub dim_oracle: usize,
    pub loss_thresh: f64,
    pub loss_maxjump: f64,
    pub loss_mallows: f64,
    pub loss_oracle: f64,
    pub sigma2_hat: f64,
    pub case: JumpCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedReplicate {
    pub replicate: usize,
    pub reason: String,
}

/// Frequencies of the three jump configurations over successful replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseFrequencies {
    pub one_jump: f64,
    pub close_jumps: f64,
    pub distant_jumps: f64,
}

impl CaseFrequencies {
    /// Frequency of agreement between the two selections.
    pub fn agreement(&self) -> f64 {
        self.one_jump + self.close_jumps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub d_thresh: usize,
    /// `None` when the oracle risk is zero and the ratio is undefined.
    pub c_or_thresh: Option<Estimate>,
    pub c_or_maxjump: Option<Estimate>,
    pub c_or_mallows: Option<Estimate>,
    pub mean_oracle_loss: f64,
    pub case_freqs: CaseFrequencies,
    pub failed: Vec<FailedReplicate>,
    pub records: Vec<ReplicateRecord>,
}

impl BenchmarkResult {
    pub fn degenerate(&self) -> bool {
        self.c_or_thresh.is_none()
    }
}

/// Residual mean square of the highest-dimension admissible model with
/// `D < n`, divisor `n - D`.
fn classical_variance(fc: &FittedCollection) -> Option<f64> {
    let n = fc.n;
    fc.admissible()
        .filter(|&i| fc.fits[i].dim() < n)
        .max_by_key(|&i| fc.fits[i].dim())
        .map(|i| fc.risks[i].expect("admissible") * n as f64 / (n - fc.fits[i].dim()) as f64)
}

pub(crate) fn dimension_scores(fc: &FittedCollection) -> (Vec<ModelScore>, Vec<usize>) {
    let idx: Vec<usize> = fc.admissible().collect();
    let scores = idx
        .iter()
        .map(|&i| {
            let m = &fc.fits[i].model;
            ModelScore {
                model_id: m.id().clone(),
                f: fc.risks[i].expect("admissible"),
                g: m.dim() as f64,
                dim: m.dim(),
            }
        })
        .collect();
    (scores, idx)
}

fn run_replicate(
    cfg: &BenchmarkConfig,
    models: &[PartitionModel],
    populations: &[PopulationModel],
    calib: &CalibrationConfig,
    replicate: usize,
) -> std::result::Result<ReplicateRecord, String> {
    let mut rng = replicate_rng(cfg.seed, replicate);
    let sample = cfg.truth.generate_with(cfg.n, &mut rng).map_err(|e| e.to_string())?;
    let fc = fit_collection(&sample, models).map_err(|e| e.to_string())?;
    let (scores, idx) = dimension_scores(&fc);
    if scores.is_empty() {
        return Err("no admissible model".into());
    }
    let losses: Vec<f64> = idx.iter().map(|&i| populations[i].excess_loss(&fc.fits[i])).collect();

    let (k_thresh, k_jump, pos_thresh, pos_jump, case) = match run_calibration(&scores, calib) {
        Ok(cal) => {
            let pos = |id: &crate::types::ModelId| scores.iter().position(|s| &s.model_id == id).expect("path model");
            (
                cal.report.k_min_thresh,
                cal.report.k_min_maxjump,
                pos(&cal.report.selected_thresh),
                pos(&cal.report.selected_maxjump),
                cal.case(),
            )
        }
        // a constant path selects the same model whatever the multiplier
        Err(Error::NoJump) => {
            let only = brute_force_argmin_index(&scores, 0.0).map_err(|e| e.to_string())?;
            (0.0, 0.0, only, only, JumpCase::OneJump)
        }
        Err(e) => return Err(e.to_string()),
    };

    let sigma2 = classical_variance(&fc).unwrap_or(0.0);
    let pos_mallows = brute_force_argmin_index(&scores, 2.0 * sigma2 / cfg.n as f64).map_err(|e| e.to_string())?;

    let pos_oracle = (0..losses.len())
        .min_by(|&a, &b| losses[a].total_cmp(&losses[b]).then(scores[a].dim.cmp(&scores[b].dim)))
        .expect("nonempty");

    Ok(ReplicateRecord {
        replicate,
        k_min_thresh: k_thresh,
        k_min_maxjump: k_jump,
        dim_thresh: scores[pos_thresh].dim,
        dim_maxjump: scores[pos_jump].dim,
        dim_mallows: scores[pos_mallows].dim,
        dim_oracle: scores[pos_oracle].dim,
        loss_thresh: losses[pos_thresh],
        loss_maxjump: losses[pos_jump],
        loss_mallows: losses[pos_mallows],
        loss_oracle: losses[pos_oracle],
        sigma2_hat: sigma2,
        case,
    })
}

/// Runs the benchmark. Replicates are independent and run in parallel; each
/// draws from its own stream of the seeded generator, so results do not
/// depend on the number of worker threads.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkResult> {
    cfg.validate()?;
    let models = cfg.collection()?;
    let populations = models
        .par_iter()
        .map(|m| PopulationModel::new(&cfg.truth, m))
        .collect::<Result<Vec<_>>>()?;
    let calib = CalibrationConfig::new(cfg.d_thresh)?;

    let outcomes: Vec<_> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| run_replicate(cfg, &models, &populations, &calib, r))
        .collect();

    let mut records = Vec::with_capacity(cfg.replicates);
    let mut failed = Vec::new();
    for (replicate, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(rec) => records.push(rec),
            Err(reason) => {
                log::warn!("replicate {replicate} failed: {reason}");
                failed.push(FailedReplicate { replicate, reason });
            }
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "all {} replicates failed; first reason: {}",
            cfg.replicates, failed[0].reason
        )));
    }

    let col = |f: fn(&ReplicateRecord) -> f64| records.iter().map(f).collect::<Vec<f64>>();
    let oracle = col(|r| r.loss_oracle);
    let mean_oracle_loss = mean(&oracle);
    let c_or = |num: Vec<f64>| {
        if mean_oracle_loss <= DEGENERATE_ORACLE_LOSS {
            None
        } else {
            Estimate::ratio_of_means(&num, &oracle)
        }
    };
    let total = records.len() as f64;
    let freq = |c: JumpCase| records.iter().filter(|r| r.case == c).count() as f64 / total;

    Ok(BenchmarkResult {
        n: cfg.n,
        replicates: cfg.replicates,
        seed: cfg.seed,
        d_thresh: cfg.d_thresh,
        c_or_thresh: c_or(col(|r| r.loss_thresh)),
        c_or_maxjump: c_or(col(|r| r.loss_maxjump)),
        c_or_mallows: c_or(col(|r| r.loss_mallows)),
        mean_oracle_loss,
        case_freqs: CaseFrequencies {
            one_jump: freq(JumpCase::OneJump),
            close_jumps: freq(JumpCase::CloseJumps),
            distant_jumps: freq(JumpCase::DistantJumps),
        },
        failed,
        records,
    })
}
