use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use slope_core::experiments::{run_benchmark, BenchmarkConfig};
use slope_core::{
    compute_path, default_max_dim, empirical_risk, fit, run_calibration, shape_dimension, shape_plugin,
    CalibrationConfig, Interval, ModelScore, PartitionModel, ThresholdConfig, TrueModelSpec,
};

use crate::input::{parse_dims, parse_window, read_sample, read_scores};
use crate::{BenchmarkArgs, CalibrateArgs, ScoreArgs, ShapeArg};

/// Scores of every admissible model, and the sample size when the scores
/// come from data.
fn load_scores(args: &ScoreArgs) -> Result<(Vec<ModelScore>, Option<usize>)> {
    if let Some(path) = &args.scores_file {
        return Ok((read_scores(path)?, None));
    }
    let input = args.input.as_ref().expect("clap requires input or --scores-file");
    let sample = read_sample(input)?;
    let n = sample.len();
    let dims = match &args.dims {
        Some(spec) => parse_dims(spec)?,
        None => (1..=default_max_dim(n)).collect(),
    };
    let models = PartitionModel::regular_family(&dims, Interval::UNIT)?;
    let shape = match args.shape {
        ShapeArg::Dimension => shape_dimension(&models),
        ShapeArg::Plugin => shape_plugin(&sample, &models)?,
    };
    let mut scores = Vec::new();
    for (model, &g) in models.iter().zip(&shape.values) {
        let fitted = fit(&sample, model)?;
        if !fitted.admissible {
            log::info!("{} has an empty cell and is skipped", model.id());
            continue;
        }
        let f = empirical_risk(&fitted, &sample)?;
        scores.push(ModelScore::new(model.id().clone(), f, g, model.dim())?);
    }
    if scores.is_empty() {
        bail!("no admissible model: every partition has an empty cell");
    }
    Ok((scores, Some(n)))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display())),
        None => io::stdout().write_all(bytes).context("cannot write to stdout"),
    }
}

pub fn calibrate(args: &CalibrateArgs) -> Result<ExitCode> {
    let (scores, n) = load_scores(&args.scores)?;
    let d_thresh = match (args.d_thresh, n) {
        (Some(d), _) => d,
        (None, Some(n)) => ThresholdConfig::default_for(n).d_thresh,
        (None, None) => bail!("--d-thresh is required with --scores-file"),
    };
    let mut cfg = CalibrationConfig::new(d_thresh)?;
    if let Some(w) = &args.slope_window {
        cfg = cfg.with_slope_window(parse_window(w)?);
    }
    let cal = run_calibration(&scores, &cfg)?;
    let mut json = serde_json::to_vec_pretty(&cal.report)?;
    json.push(b'\n');
    write_output(args.scores.out.as_deref(), &json)?;
    match &cal.report.warning {
        Some(w) => {
            eprintln!("warning: {w}");
            Ok(ExitCode::from(2))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

/// One path segment: `model_id` is selected for `K` in `[k, next k)`.
#[derive(Serialize)]
struct PathRow<'a> {
    k: f64,
    model_id: &'a str,
    dim: usize,
    f: f64,
    g: f64,
}

pub fn path(args: &ScoreArgs) -> Result<()> {
    let (scores, _) = load_scores(args)?;
    let path = compute_path(&scores)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, m) in path.models.iter().enumerate() {
        w.serialize(PathRow {
            k: path.breakpoints[i],
            model_id: m.model_id.as_str(),
            dim: m.dim,
            f: m.f,
            g: m.g,
        })?;
    }
    let bytes = w.into_inner().context("cannot flush CSV")?;
    write_output(args.out.as_deref(), &bytes)
}

fn load_truth(spec: &str) -> Result<TrueModelSpec> {
    let truth = if spec == "fig1" {
        TrueModelSpec::sine_homoscedastic()
    } else {
        let text = fs::read_to_string(spec).with_context(|| format!("cannot read truth file {spec}"))?;
        serde_json::from_str(&text).with_context(|| format!("invalid truth specification in {spec}"))?
    };
    truth.validate().context("invalid truth specification")?;
    Ok(truth)
}

pub fn benchmark(args: &BenchmarkArgs) -> Result<()> {
    let truth = load_truth(&args.truth)?;
    let mut cfg = BenchmarkConfig::with_defaults(truth, args.n, args.replicates, args.seed);
    if let Some(d) = args.d_thresh {
        cfg.d_thresh = d;
    }
    if let Some(spec) = &args.dims {
        cfg.dims = parse_dims(spec)?;
    }
    let result = run_benchmark(&cfg)?;
    for f in &result.failed {
        log::warn!("replicate {} failed: {}", f.replicate, f.reason);
    }
    let mut summary = serde_json::to_vec_pretty(&result)?;
    summary.push(b'\n');
    match &args.out {
        None => write_output(None, &summary),
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            write_output(Some(&dir.join("summary.json")), &summary)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &result.records {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().context("cannot flush CSV")?;
            write_output(Some(&dir.join("replicates.csv")), &bytes)
        }
    }
}
