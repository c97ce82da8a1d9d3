//! Monte-Carlo harness: oracle-constant benchmark, dimension-jump check and
//! the comparison of `E[p1]` with `E[p2]`.

mod benchmark;
mod dimension_jump;
mod p1p2;
pub mod stats;

pub use benchmark::{
    run_benchmark, BenchmarkConfig, BenchmarkResult, CaseFrequencies, FailedReplicate, ReplicateRecord,
    DEGENERATE_ORACLE_LOSS,
};
pub use dimension_jump::{verify_dimension_jump, DimensionJumpConfig, DimensionJumpReport};
pub use p1p2::{p1_p2_bracket, verify_p1_p2, P1P2Report};
pub use stats::Estimate;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::regressogram::{empirical_risk, fit, FittedRegressogram};
use crate::types::{PartitionModel, Sample};

/// Generator for replicate `replicate` of a run seeded with `seed`: one
/// independent ChaCha stream per replicate.
pub fn replicate_rng(seed: u64, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    rng
}

/// Fits of a whole collection on one sample, with the empirical risk of
/// every admissible model.
pub(crate) struct FittedCollection {
    pub n: usize,
    pub fits: Vec<FittedRegressogram>,
    pub risks: Vec<Option<f64>>,
}

impl FittedCollection {
    pub fn admissible(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.fits.len()).filter(|&i| self.fits[i].admissible)
    }
}

pub(crate) fn fit_collection(sample: &Sample, models: &[PartitionModel]) -> Result<FittedCollection> {
    let fits = models.iter().map(|m| fit(sample, m)).collect::<Result<Vec<_>>>()?;
    let risks = fits
        .iter()
        .map(|f| f.admissible.then(|| empirical_risk(f, sample)).transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(FittedCollection {
        n: sample.len(),
        fits,
        risks,
    })
}
