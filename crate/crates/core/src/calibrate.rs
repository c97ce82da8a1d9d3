//! Estimation of the minimal penalty constant from the selection path, and
//! selection of the model at twice that constant.
//!
//! Two estimates are computed from the same path: the first multiplier at
//! which the selected dimension falls to a threshold, and the multiplier at
//! the largest dimension drop. When the models selected at twice each
//! estimate differ, the report carries a warning asking for a look at the
//! `K -> D` curve. A third estimate regresses the empirical risk on the
//! penalty shape over large models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::compute_path;
use crate::types::{CalibrationReport, ModelScore, SelectionPath};

/// Dimension threshold for the threshold estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub d_thresh: usize,
}

impl ThresholdConfig {
    pub fn new(d_thresh: usize) -> Result<Self> {
        if d_thresh == 0 {
            return Err(Error::InvalidConfig("d_thresh must be >= 1".into()));
        }
        Ok(Self { d_thresh })
    }

    /// `n / (2 ln n)` rounded to the nearest integer (19 for n = 200).
    pub fn default_for(n: usize) -> Self {
        let nf = n.max(3) as f64;
        Self {
            d_thresh: ((nf / (2.0 * nf.ln())).round() as usize).max(1),
        }
    }
}

/// Inclusive range of dimensions used by the slope estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimWindow {
    pub min: usize,
    pub max: usize,
}

impl DimWindow {
    /// Every model with `D >= max(floor(sqrt(n)), 3)`.
    pub fn default_for(n: usize) -> Self {
        Self {
            min: ((n as f64).sqrt().floor() as usize).max(3),
            max: usize::MAX,
        }
    }

    pub fn contains(&self, d: usize) -> bool {
        d >= self.min && d <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub threshold: ThresholdConfig,
    pub slope_window: Option<DimWindow>,
}

impl CalibrationConfig {
    pub fn new(d_thresh: usize) -> Result<Self> {
        Ok(Self {
            threshold: ThresholdConfig::new(d_thresh)?,
            slope_window: None,
        })
    }

    pub fn with_slope_window(mut self, window: DimWindow) -> Self {
        self.slope_window = Some(window);
        self
    }
}

/// Smallest breakpoint whose segment has dimension `<= d_thresh`.
///
/// Returns 0 when the first segment already satisfies the threshold; the
/// calibration is then degenerate and a warning is logged.
pub fn kmin_thresh(path: &SelectionPath, cfg: ThresholdConfig) -> Result<f64> {
    let (k, _) = path
        .segments()
        .find(|(_, m)| m.dim <= cfg.d_thresh)
        .ok_or(Error::ThresholdNeverReached { d_thresh: cfg.d_thresh })?;
    if k == 0.0 {
        log::warn!(
            "degenerate calibration: the unpenalized model already has dimension <= {}",
            cfg.d_thresh
        );
    }
    Ok(k)
}

/// Breakpoint at the largest dimension drop along the path, the earliest one
/// on ties.
pub fn kmin_maxjump(path: &SelectionPath) -> Result<f64> {
    if path.i_max() == 0 {
        return Err(Error::NoJump);
    }
    let mut best_drop = i64::MIN;
    let mut best_k = f64::NAN;
    for (i, w) in path.models.windows(2).enumerate() {
        let drop = w[0].dim as i64 - w[1].dim as i64;
        if drop > best_drop {
            best_drop = drop;
            best_k = path.breakpoints[i + 1];
        }
    }
    Ok(best_k)
}

/// Minus the least-squares slope of `f` against `g` over the models whose
/// dimension lies in `window`.
pub fn kmin_slope(scores: &[ModelScore], window: DimWindow) -> Result<f64> {
    let pts: Vec<(f64, f64)> = scores
        .iter()
        .filter(|s| window.contains(s.dim))
        .map(|s| (s.g, s.f))
        .collect();
    if pts.len() < 2 {
        return Err(Error::SlopeWindowTooSmall { found: pts.len() });
    }
    let n = pts.len() as f64;
    let gbar = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let fbar = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - gbar) * (p.0 - gbar)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - gbar) * (p.1 - fbar)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidScore(
            "penalty shape is constant on the slope window".into(),
        ));
    }
    Ok(-sxy / sxx)
}

/// Which of the three jump configurations a calibration falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpCase {
    /// Both estimates hit the same breakpoint.
    OneJump,
    /// Different breakpoints, same final model.
    CloseJumps,
    /// Different final models.
    DistantJumps,
}

impl JumpCase {
    pub fn classify(report: &CalibrationReport) -> Self {
        if !report.agreement {
            Self::DistantJumps
        } else if report.k_min_thresh == report.k_min_maxjump {
            Self::OneJump
        } else {
            Self::CloseJumps
        }
    }
}

/// Everything computed by [`run_calibration`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub path: SelectionPath,
    pub report: CalibrationReport,
    pub selected_thresh: ModelScore,
    pub selected_maxjump: ModelScore,
}

impl Calibration {
    pub fn case(&self) -> JumpCase {
        JumpCase::classify(&self.report)
    }
}

fn disagreement_warning(k_thresh: f64, a: &ModelScore, k_jump: f64, b: &ModelScore) -> String {
    format!(
        "the minimal-penalty estimates disagree: threshold K_min = {k_thresh:.6e} selects {} (D = {}), \
         largest jump K_min = {k_jump:.6e} selects {} (D = {}); inspect the curve K -> D(m(K)) before \
         trusting the automatic choice",
        a.model_id, a.dim, b.model_id, b.dim
    )
}

/// Computes the path once, both jump estimates (and the slope estimate when
/// a window is configured), and the models selected at twice each estimate.
pub fn run_calibration(scores: &[ModelScore], cfg: &CalibrationConfig) -> Result<Calibration> {
    let path = compute_path(scores)?;
    let k_thresh = kmin_thresh(&path, cfg.threshold)?;
    let k_jump = kmin_maxjump(&path)?;
    let k_slope = cfg.slope_window.map(|w| kmin_slope(scores, w)).transpose()?;
    let sel_thresh = path.model_at(2.0 * k_thresh).clone();
    let sel_jump = path.model_at(2.0 * k_jump).clone();
    let agreement = sel_thresh.model_id == sel_jump.model_id;
    let warning = (!agreement).then(|| disagreement_warning(k_thresh, &sel_thresh, k_jump, &sel_jump));
    let report = CalibrationReport {
        k_min_thresh: k_thresh,
        k_min_maxjump: k_jump,
        k_min_slope: k_slope,
        selected_thresh: sel_thresh.model_id.clone(),
        selected_maxjump: sel_jump.model_id.clone(),
        agreement,
        warning,
    };
    Ok(Calibration {
        path,
        report,
        selected_thresh: sel_thresh,
        selected_maxjump: sel_jump,
    })
}

pub fn calibrate(scores: &[ModelScore], cfg: &CalibrationConfig) -> Result<CalibrationReport> {
    run_calibration(scores, cfg).map(|c| c.report)
}
