//! Adaptive Gauss-Legendre quadrature on bounded intervals.

/// Absolute tolerance used for per-cell population moments.
pub const CELL_ABS_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

// 10-point Gauss-Legendre rule on [-1, 1], positive half.
const NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
        let dx = half * x;
        acc += w * (f(mid - dx) + f(mid + dx));
    }
    acc * half
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Option<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre(f, a, mid);
    let right = gauss_legendre(f, mid, b);
    let halves = left + right;
    if !halves.is_finite() {
        return None;
    }
    if (halves - whole).abs() <= tol {
        return Some(halves);
    }
    if depth >= MAX_DEPTH || mid <= a || mid >= b {
        return None;
    }
    let l = adapt(f, a, mid, left, 0.5 * tol, depth + 1)?;
    let r = adapt(f, mid, b, right, 0.5 * tol, depth + 1)?;
    Some(l + r)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns `None` if the subdivision does not converge. `f` should be smooth
/// on `[a, b]`; split at known discontinuities with [`integrate_split`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Option<f64> {
    if a == b {
        return Some(0.0);
    }
    let whole = gauss_legendre(&f, a, b);
    if !whole.is_finite() {
        return None;
    }
    adapt(&f, a, b, whole, tol, 0)
}

/// Integrates over `[a, b]` after splitting at every point of `breaks` lying
/// strictly inside the interval. The tolerance is shared across pieces.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Option<f64> {
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = (cuts.len() - 1).max(1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(&f, w[0], w[1], tol / pieces)?;
    }
    Some(total)
}
