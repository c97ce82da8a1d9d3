use serde::{Deserialize, Serialize};

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Sample mean and its standard error.
    pub fn mean_of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let m = mean(values);
        let dev: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
        let var = if values.len() > 1 {
            pairwise_sum(&dev) / (n - 1.0)
        } else {
            0.0
        };
        Self {
            value: m,
            std_error: (var / n).sqrt(),
        }
    }

    /// `mean(num) / mean(den)` with a delta-method standard error; `None`
    /// when the denominator mean is not positive.
    pub fn ratio_of_means(num: &[f64], den: &[f64]) -> Option<Self> {
        assert_eq!(num.len(), den.len());
        let n = num.len() as f64;
        let a = mean(num);
        let b = mean(den);
        if b.is_nan() || b <= 0.0 || !a.is_finite() {
            return None;
        }
        let r = a / b;
        let resid: Vec<f64> = num
            .iter()
            .zip(den)
            .map(|(x, y)| {
                let e = x - r * y;
                e * e
            })
            .collect();
        let se = if num.len() > 1 {
            (pairwise_sum(&resid) / (n * (n - 1.0))).sqrt() / b
        } else {
            0.0
        };
        Some(Self {
            value: r,
            std_error: se,
        })
    }
}

pub fn median(values: &[usize]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2]) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_exact_values() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
    }

    #[test]
    fn mean_estimate() {
        let e = Estimate::mean_of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.value, 2.5);
        // var = 5/3, se = sqrt(5/12)
        assert!((e.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ratio_estimate() {
        let r = Estimate::ratio_of_means(&[2.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.std_error, 0.0);
        assert!(Estimate::ratio_of_means(&[1.0], &[0.0]).is_none());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
