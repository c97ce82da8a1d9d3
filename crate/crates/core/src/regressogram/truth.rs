//! Known data-generating processes `Y = s(X) + sigma(X) eps` for simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Interval, Sample};

/// A real function of one variable from a small closed family, so that truth
/// specifications can be read from and written to files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealFunction {
    Constant {
        value: f64,
    },
    /// `amplitude * sin(pi * frequency * x + phase)`.
    Sine {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Coefficients in ascending powers of `x`.
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// Step function: `values[k]` on `[breaks[k-1], breaks[k])`.
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

impl RealFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (std::f64::consts::PI * frequency * x + phase).sin(),
            Self::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Self::Piecewise { breaks, values } => values[breaks.partition_point(|&b| b <= x)],
        }
    }

    /// Points where the function may be discontinuous.
    pub fn discontinuities(&self) -> &[f64] {
        match self {
            Self::Piecewise { breaks, .. } => breaks,
            _ => &[],
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(format!("{what}: {msg}")));
        match self {
            Self::Constant { value } if !value.is_finite() => bad("non-finite constant".into()),
            Self::Sine {
                amplitude,
                frequency,
                phase,
            } if !(amplitude.is_finite() && frequency.is_finite() && phase.is_finite()) => {
                bad("non-finite sine parameter".into())
            }
            Self::Polynomial { coefficients } if coefficients.iter().any(|c| !c.is_finite()) => {
                bad("non-finite coefficient".into())
            }
            Self::Piecewise { breaks, values } => {
                if values.len() != breaks.len() + 1 {
                    return bad(format!(
                        "{} values for {} breaks (need breaks + 1)",
                        values.len(),
                        breaks.len()
                    ));
                }
                if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks.iter().any(|b| !b.is_finite()) {
                    return bad("breaks must be finite and strictly increasing".into());
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("non-finite value".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Distribution of the feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureLaw {
    Uniform { lo: f64, hi: f64 },
}

impl FeatureLaw {
    pub fn support(&self) -> Interval {
        match *self {
            Self::Uniform { lo, hi } => Interval { lo, hi },
        }
    }

    /// `P(X in cell)`.
    pub fn probability(&self, cell: Interval) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => {
                let a = cell.lo.max(lo);
                let b = cell.hi.min(hi);
                ((b - a) / (hi - lo)).max(0.0)
            }
        }
    }
}

/// Distribution of the standardized noise `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseLaw {
    #[default]
    StandardNormal,
}

/// A fully specified regression problem `Y = s(X) + sigma(X) eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueModelSpec {
    pub regression: RealFunction,
    pub noise_level: RealFunction,
    pub x_law: FeatureLaw,
    #[serde(default)]
    pub noise_law: NoiseLaw,
}

impl TrueModelSpec {
    /// `s(x) = sin(pi x)`, `sigma = 1`, `X ~ U[0, 1]`, Gaussian noise.
    pub fn sine_homoscedastic() -> Self {
        Self {
            regression: RealFunction::Sine {
                amplitude: 1.0,
                frequency: 1.0,
                phase: 0.0,
            },
            noise_level: RealFunction::Constant { value: 1.0 },
            x_law: FeatureLaw::Uniform { lo: 0.0, hi: 1.0 },
            noise_law: NoiseLaw::StandardNormal,
        }
    }

    pub fn s(&self, x: f64) -> f64 {
        self.regression.eval(x)
    }

    pub fn sigma(&self, x: f64) -> f64 {
        self.noise_level.eval(x)
    }

    pub fn domain(&self) -> Interval {
        self.x_law.support()
    }

    /// Union of the discontinuities of `s` and `sigma`.
    pub fn breaks(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .regression
            .discontinuities()
            .iter()
            .chain(self.noise_level.discontinuities())
            .copied()
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    pub fn validate(&self) -> Result<()> {
        let FeatureLaw::Uniform { lo, hi } = self.x_law;
        Interval::new(lo, hi).map_err(|_| Error::InvalidConfig(format!("bad feature support [{lo}, {hi}]")))?;
        self.regression.validate("regression function")?;
        self.noise_level.validate("noise level")?;
        // sigma >= 0 on a grid plus every break
        let grid = (0..=1000).map(|k| lo + (hi - lo) * k as f64 / 1000.0);
        for x in grid.chain(self.breaks()) {
            if self.sigma(x) < 0.0 {
                return Err(Error::InvalidConfig(format!("noise level is negative at x = {x}")));
            }
        }
        Ok(())
    }

    /// Draws one observation.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x = match self.x_law {
            FeatureLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
        };
        let eps: f64 = match self.noise_law {
            NoiseLaw::StandardNormal => rng.sample(StandardNormal),
        };
        (x, self.s(x) + self.sigma(x) * eps)
    }

    pub fn generate_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        if n == 0 {
            return Err(Error::InvalidSample("n must be >= 1".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n).map(|_| self.draw(rng)).unzip();
        Sample::with_domain(xs, ys, self.domain())
    }
}

/// Deterministic i.i.d. sample of size `n` for a given seed.
pub fn generate(truth: &TrueModelSpec, n: usize, seed: u64) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    truth.generate_with(n, &mut rng)
}
