//! Domain types shared by every stage of the pipeline: samples, partition
//! models, per-model scores, selection paths and calibration reports.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by invariant checks.
pub const INVARIANT_RTOL: f64 = 1e-9;

/// A closed interval `[lo, hi]` of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidPartition(format!(
                "interval bounds must be finite with lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Observed `(x, y)` pairs together with the feature domain they live in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    xs: Vec<f64>,
    ys: Vec<f64>,
    domain: Interval,
}

impl Sample {
    /// Builds a sample on the unit interval.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Self::with_domain(xs, ys, Interval::UNIT)
    }

    pub fn with_domain(xs: Vec<f64>, ys: Vec<f64>, domain: Interval) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSample(format!(
                "xs has {} values but ys has {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::InvalidSample("sample is empty".into()));
        }
        for (index, &x) in xs.iter().enumerate() {
            if !domain.contains(x) {
                return Err(Error::FeatureOutOfDomain {
                    index,
                    x,
                    lo: domain.lo,
                    hi: domain.hi,
                });
            }
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(Error::InvalidSample(format!("response {i} is not finite")));
        }
        Ok(Self { xs, ys, domain })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false: a `Sample` holds at least one observation.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }
}

/// Identifier of a model in a collection. Ordered lexicographically, which
/// is the last tie-break of [`total_order`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelId(pub String);

impl ModelId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    /// Identifier used for the regular partition with `dim` cells.
    pub fn regular(dim: usize) -> Self {
        Self(format!("regular-{dim}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ModelId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

/// A partition of the feature domain into consecutive intervals.
///
/// Cells are `[e_k, e_{k+1})`, except the last one which is closed on the
/// right so the union is exactly the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionModel {
    id: ModelId,
    edges: Vec<f64>,
}

impl PartitionModel {
    /// Builds a partition from its strictly increasing cell edges; the first
    /// and last edges are the domain bounds.
    pub fn from_edges(id: ModelId, edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidPartition(format!("model {id}: need at least two edges")));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidPartition(format!("model {id}: non-finite edge")));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "model {id}: edges must be strictly increasing"
            )));
        }
        Ok(Self { id, edges })
    }

    /// Regular partition of `domain` into `dim` cells of equal width.
    pub fn regular(dim: usize, domain: Interval) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPartition("dimension must be >= 1".into()));
        }
        let width = domain.width();
        let mut edges: Vec<f64> = (0..=dim)
            .map(|k| domain.lo + width * (k as f64) / (dim as f64))
            .collect();
        // pin the ends exactly
        edges[0] = domain.lo;
        edges[dim] = domain.hi;
        Self::from_edges(ModelId::regular(dim), edges)
    }

    /// Regular partitions for every dimension in `dims`, in the given order.
    pub fn regular_family(dims: &[usize], domain: Interval) -> Result<Vec<Self>> {
        dims.iter().map(|&d| Self::regular(d, domain)).collect()
    }

    pub fn id(&self) -> &ModelId {
        &self.id
    }

    /// Number of cells `D_m`.
    pub fn dim(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.edges[0],
            hi: self.edges[self.edges.len() - 1],
        }
    }

    pub fn cell(&self, k: usize) -> Interval {
        Interval {
            lo: self.edges[k],
            hi: self.edges[k + 1],
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Interval> + '_ {
        self.edges.windows(2).map(|w| Interval { lo: w[0], hi: w[1] })
    }

    /// Index of the cell containing `x`, or `None` if `x` is outside the domain.
    pub fn locate(&self, x: f64) -> Option<usize> {
        let last = self.edges.len() - 1;
        if !(x >= self.edges[0] && x <= self.edges[last]) {
            return None;
        }
        let k = self.edges.partition_point(|&e| e <= x);
        Some((k.max(1) - 1).min(last - 1))
    }
}

/// Largest dimension of the default regular collection, `floor(n / ln n)`,
/// clamped to `[1, n]`.
pub fn default_max_dim(n: usize) -> usize {
    if n < 3 {
        return n.max(1);
    }
    let nf = n as f64;
    ((nf / nf.ln()).floor() as usize).clamp(1, n)
}

/// Score of one model: empirical risk `f`, penalty shape `g`, complexity `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub model_id: ModelId,
    pub f: f64,
    pub g: f64,
    pub dim: usize,
}

impl ModelScore {
    pub fn new(model_id: impl Into<ModelId>, f: f64, g: f64, dim: usize) -> Result<Self> {
        let model_id = model_id.into();
        if !f.is_finite() || !g.is_finite() {
            return Err(Error::InvalidScore(format!(
                "model {model_id}: f and g must be finite (f={f}, g={g})"
            )));
        }
        if g < 0.0 {
            return Err(Error::InvalidScore(format!(
                "model {model_id}: penalty shape must be >= 0, got {g}"
            )));
        }
        Ok(Self { model_id, f, g, dim })
    }

    /// `f + K g`.
    pub fn criterion(&self, k: f64) -> f64 {
        self.f + k * self.g
    }
}

impl From<String> for ModelId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

/// Compares two scores under the model ordering: `g` ascending, then
/// dimension ascending, then identifier ascending.
pub fn precedes(a: &ModelScore, b: &ModelScore) -> Ordering {
    a.g.total_cmp(&b.g)
        .then(a.dim.cmp(&b.dim))
        .then_with(|| a.model_id.cmp(&b.model_id))
}

/// Returns the indices of `models` sorted by the model ordering, making `g`
/// non-decreasing. Deterministic for any permutation of the input.
pub fn total_order(models: &[ModelScore]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..models.len()).collect();
    idx.sort_by(|&i, &j| precedes(&models[i], &models[j]).then(i.cmp(&j)));
    idx
}

/// The piecewise-constant map `K -> m(K)`: on `[breakpoints[i], breakpoints[i+1])`
/// the selected model is `models[i]`. The first breakpoint is 0, the last is +inf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionPath {
    pub breakpoints: Vec<f64>,
    pub models: Vec<ModelScore>,
}

impl SelectionPath {
    /// Number of jumps.
    pub fn i_max(&self) -> usize {
        self.models.len() - 1
    }

    /// Selected model at multiplier `k >= 0`.
    pub fn model_at(&self, k: f64) -> &ModelScore {
        // largest i with breakpoints[i] <= k
        let i = self.breakpoints[..self.models.len()].partition_point(|&b| b <= k);
        &self.models[i.max(1) - 1]
    }

    /// Segments as `(K_start, model)` pairs.
    pub fn segments(&self) -> impl Iterator<Item = (f64, &ModelScore)> {
        self.breakpoints.iter().copied().zip(self.models.iter())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.models.iter().map(|m| m.dim).collect()
    }

    /// Checks every structural invariant; `collection_size` bounds the
    /// number of jumps.
    pub fn check_invariants(&self, collection_size: usize) -> std::result::Result<(), String> {
        let n = self.models.len();
        if n == 0 {
            return Err("path has no models".into());
        }
        if self.breakpoints.len() != n + 1 {
            return Err(format!(
                "expected {} breakpoints, found {}",
                n + 1,
                self.breakpoints.len()
            ));
        }
        if self.breakpoints[0] != 0.0 {
            return Err(format!("first breakpoint is {}", self.breakpoints[0]));
        }
        if self.breakpoints[n] != f64::INFINITY {
            return Err("last breakpoint is not +inf".into());
        }
        if let Some(w) = self.breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(format!("breakpoints not increasing: {} >= {}", w[0], w[1]));
        }
        for w in self.models.windows(2) {
            if w[1].g >= w[0].g {
                return Err(format!(
                    "g not strictly decreasing: {} then {}",
                    w[0].model_id, w[1].model_id
                ));
            }
            if w[1].f <= w[0].f {
                return Err(format!(
                    "f not strictly increasing: {} then {}",
                    w[0].model_id, w[1].model_id
                ));
            }
        }
        if self.i_max() + 1 > collection_size {
            return Err(format!("{} segments for a collection of {collection_size}", n));
        }
        Ok(())
    }
}

/// Outcome of the two-definition calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub k_min_thresh: f64,
    pub k_min_maxjump: f64,
    pub k_min_slope: Option<f64>,
    pub selected_thresh: ModelId,
    pub selected_maxjump: ModelId,
    pub agreement: bool,
    pub warning: Option<String>,
}
