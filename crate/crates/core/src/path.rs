//! Exact computation of the selection path `K -> argmin_m { f(m) + K g(m) }`.
//!
//! The selected model is piecewise constant in `K`. Starting from the
//! smallest minimizer of `f` at `K = 0`, each step scans the models with a
//! larger `f` and a smaller `g` than the current one and jumps to the one
//! reached first as `K` grows, i.e. the one minimizing
//! `(f(m) - f(cur)) / (g(cur) - g(m))`. Ties go to the model that comes
//! first in [`total_order`]. Each step is a linear scan and `g` strictly
//! decreases along the path, so the whole path costs at most
//! `O(card(M)^2)` operations.

use crate::error::{Error, Result};
use crate::types::{total_order, ModelScore, SelectionPath};

/// Relative tolerance for ratio ties and duplicate detection.
pub const PATH_RTOL: f64 = 1e-12;

/// Relative tolerance for criterion ties in [`brute_force_argmin`].
pub const ARGMIN_RTOL: f64 = 1e-13;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATH_RTOL * a.abs().max(b.abs())
}

/// Indices of `scores` in model order, with near-duplicates (both `f` and
/// `g` equal within [`PATH_RTOL`]) collapsed onto the earliest one.
fn ordered_candidates(scores: &[ModelScore]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::with_capacity(scores.len());
    for i in total_order(scores) {
        let dup = kept
            .iter()
            .any(|&k| close(scores[k].f, scores[i].f) && close(scores[k].g, scores[i].g));
        if !dup {
            kept.push(i);
        }
    }
    kept
}

/// Computes the full selection path.
pub fn compute_path(scores: &[ModelScore]) -> Result<SelectionPath> {
    compute_path_with_cost(scores).map(|(p, _)| p)
}

/// Like [`compute_path`], also returning the number of model evaluations
/// performed by the step scans.
pub fn compute_path_with_cost(scores: &[ModelScore]) -> Result<(SelectionPath, usize)> {
    if scores.is_empty() {
        return Err(Error::EmptyCollection);
    }
    if let Some(s) = scores.iter().find(|s| !s.f.is_finite() || !s.g.is_finite()) {
        return Err(Error::InvalidScore(format!(
            "model {} has non-finite score",
            s.model_id
        )));
    }
    let cand = ordered_candidates(scores);
    let mut cost = cand.len();

    let f_min = cand.iter().map(|&i| scores[i].f).fold(f64::INFINITY, f64::min);
    let first = *cand
        .iter()
        .find(|&&i| scores[i].f - f_min <= ARGMIN_RTOL * (scores[i].f.abs() + f_min.abs()))
        .expect("nonempty");

    let mut models = vec![first];
    let mut breakpoints = vec![0.0];
    loop {
        let cur = &scores[*models.last().unwrap()];
        let ratio =
            |m: &ModelScore| -> Option<f64> { (m.f > cur.f && m.g < cur.g).then(|| (m.f - cur.f) / (cur.g - m.g)) };
        let best = cand
            .iter()
            .filter_map(|&i| ratio(&scores[i]))
            .fold(f64::INFINITY, f64::min);
        cost += cand.len();
        if best == f64::INFINITY {
            break;
        }
        // first in model order among the ratio minimizers
        let next = *cand
            .iter()
            .find(|&&i| ratio(&scores[i]).is_some_and(|r| r <= best + PATH_RTOL * best.abs()))
            .expect("minimizer exists");
        cost += cand.len();

        let k_prev = *breakpoints.last().unwrap();
        if best <= k_prev && models.len() > 1 {
            // rounding put this jump at or before the previous one: the new
            // model takes over the previous segment
            *models.last_mut().unwrap() = next;
        } else {
            breakpoints.push(best.max(f64::MIN_POSITIVE).max(k_prev));
            models.push(next);
        }
    }
    breakpoints.push(f64::INFINITY);
    let path = SelectionPath {
        breakpoints,
        models: models.into_iter().map(|i| scores[i].clone()).collect(),
    };
    Ok((path, cost))
}

/// Index of the model selected at multiplier `k` by scanning every model:
/// the first model in [`total_order`] among the minimizers of `f + k g`.
/// Independent of [`compute_path`] and used to check it.
pub fn brute_force_argmin_index(scores: &[ModelScore], k: f64) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::EmptyCollection);
    }
    if k.is_nan() || k < 0.0 {
        return Err(Error::InvalidConfig(format!("multiplier must be >= 0, got {k}")));
    }
    let crit: Vec<f64> = scores.iter().map(|s| s.criterion(k)).collect();
    let min = crit.iter().copied().fold(f64::INFINITY, f64::min);
    let idx = total_order(scores)
        .into_iter()
        .find(|&i| {
            let scale = scores[i].f.abs() + k * scores[i].g.abs() + min.abs();
            crit[i] - min <= ARGMIN_RTOL * scale
        })
        .expect("nonempty");
    Ok(idx)
}

/// The model selected at multiplier `k` by exhaustive scan.
pub fn brute_force_argmin(scores: &[ModelScore], k: f64) -> Result<&ModelScore> {
    brute_force_argmin_index(scores, k).map(|i| &scores[i])
}
