//! CSV and flag parsing.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use slope_core::{DimWindow, ModelScore, Sample};

/// Reads a `x,y` CSV into a sample on `[0, 1]`. Row numbers in errors are
/// line numbers in the file, the header being line 1.
pub fn read_sample(path: &Path) -> Result<Sample> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_sample_from(file)
}

pub fn read_sample_from(reader: impl Read) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().context("row 1: cannot read header")?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        bail!("empty input: expected a header `x,y`");
    }
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        bail!(
            "row 1: expected header `x,y`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let row = e.position().map(|p| p.line()).unwrap_or(0);
            anyhow::anyhow!("row {row}: malformed CSV: {e}")
        })?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            bail!("row {row}: expected 2 fields, found {}", record.len());
        }
        let parse = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = record[i]
                .parse()
                .map_err(|_| anyhow::anyhow!("row {row}: cannot parse {name} = `{}`", &record[i]))?;
            if !v.is_finite() {
                bail!("row {row}: {name} is not finite");
            }
            Ok(v)
        };
        let x = parse(0, "x")?;
        let y = parse(1, "y")?;
        if !(0.0..=1.0).contains(&x) {
            bail!("row {row}: x = {x} is outside [0, 1]");
        }
        xs.push(x);
        ys.push(y);
    }
    if xs.is_empty() {
        bail!("empty input: no observations");
    }
    Ok(Sample::new(xs, ys)?)
}

/// One row of a scores file. Unknown columns are ignored, so a path export
/// can be read back.
#[derive(Debug, Serialize, Deserialize)]
struct ScoreRow {
    model_id: String,
    f: f64,
    g: f64,
    dim: usize,
}

pub fn read_scores(path: &Path) -> Result<Vec<ModelScore>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut scores = Vec::new();
    for (i, row) in rdr.deserialize::<ScoreRow>().enumerate() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(i as u64 + 2);
            anyhow::anyhow!("row {line}: {e}")
        })?;
        let score = ModelScore::new(row.model_id, row.f, row.g, row.dim).with_context(|| format!("row {}", i + 2))?;
        scores.push(score);
    }
    if scores.is_empty() {
        bail!("empty scores file");
    }
    Ok(scores)
}

/// `A..B` (inclusive) or a comma-separated list, or a mix: `1..10,20,40`.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let mut dims = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().with_context(|| format!("bad range `{part}`"))?;
            let b: usize = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .with_context(|| format!("bad range `{part}`"))?;
            if a > b {
                bail!("empty range `{part}`");
            }
            dims.extend(a..=b);
        } else {
            dims.push(part.parse().with_context(|| format!("bad dimension `{part}`"))?);
        }
    }
    if dims.is_empty() || dims.contains(&0) {
        bail!("dimensions must be a nonempty list of positive integers");
    }
    dims.sort_unstable();
    dims.dedup();
    Ok(dims)
}

/// `MIN..MAX` (inclusive).
pub fn parse_window(spec: &str) -> Result<DimWindow> {
    let (a, b) = spec
        .split_once("..")
        .with_context(|| format!("slope window must look like MIN..MAX, got `{spec}`"))?;
    let min = a.trim().parse().with_context(|| format!("bad window `{spec}`"))?;
    let max = b
        .trim_start_matches('=')
        .trim()
        .parse()
        .with_context(|| format!("bad window `{spec}`"))?;
    if min > max {
        bail!("empty slope window `{spec}`");
    }
    Ok(DimWindow { min, max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_rows_are_reported() {
        let ok = read_sample_from("x,y\n0.1,2\n0.5, -1\n".as_bytes()).unwrap();
        assert_eq!(ok.len(), 2);
        let e = read_sample_from("x,y\n0.1,2\n0.5,oops\n".as_bytes()).unwrap_err();
        assert!(e.to_string().contains("row 3"), "{e}");
        let e = read_sample_from("x,y\n1.5,2\n".as_bytes()).unwrap_err();
        assert!(
            e.to_string().contains("row 2") && e.to_string().contains("outside"),
            "{e}"
        );
        assert!(read_sample_from("".as_bytes()).is_err());
        assert!(read_sample_from("x,y\n".as_bytes()).is_err());
        assert!(read_sample_from("a,b\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn dims_and_windows() {
        assert_eq!(parse_dims("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_dims("8, 2,1..=2").unwrap(), vec![1, 2, 8]);
        assert!(parse_dims("0..3").is_err());
        assert!(parse_dims("5..3").is_err());
        assert_eq!(parse_window("14..37").unwrap(), DimWindow { min: 14, max: 37 });
        assert!(parse_window("14").is_err());
    }
}
