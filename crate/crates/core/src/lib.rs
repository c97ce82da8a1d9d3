//! Data-driven calibration of penalties for least-squares model selection
//! among regressograms.
//!
//! A collection of models is summarized by one [`ModelScore`] per model: the
//! empirical risk `f`, a nonnegative penalty shape `g` and a dimension. For
//! every multiplier `K >= 0` the selected model minimizes `f + K g`;
//! [`compute_path`] finds all selections at once, and [`calibrate`] estimates
//! the minimal multiplier `K_min` from the dimension jump along that path and
//! selects with `2 K_min`.
//!
//! ```
//! use slope_core::{compute_path, ModelScore};
//!
//! let scores = vec![
//!     ModelScore::new("a", 4.0, 0.0, 1).unwrap(),
//!     ModelScore::new("b", 3.0, 1.0, 2).unwrap(),
//!     ModelScore::new("c", 1.0, 2.0, 3).unwrap(),
//! ];
//! let path = compute_path(&scores).unwrap();
//! assert_eq!(path.model_at(0.0).model_id.as_str(), "c");
//! assert_eq!(path.model_at(10.0).model_id.as_str(), "a");
//! ```

pub mod calibrate;
pub mod error;
pub mod experiments;
pub mod path;
pub mod penalty;
pub mod quadrature;
pub mod regressogram;
pub mod types;

pub use calibrate::{
    calibrate, kmin_maxjump, kmin_slope, kmin_thresh, run_calibration, Calibration, CalibrationConfig, DimWindow,
    JumpCase, ThresholdConfig,
};
pub use error::{Error, Result};
pub use path::{brute_force_argmin, brute_force_argmin_index, compute_path, compute_path_with_cost};
pub use penalty::{shape_dimension, shape_known, shape_plugin, PenaltyShape, ShapeKind};
pub use regressogram::{
    empirical_risk, fit, generate, FittedRegressogram, OracleQuantities, PopulationModel, RealFunction, TrueModelSpec,
};
pub use types::{
    default_max_dim, precedes, total_order, CalibrationReport, Interval, ModelId, ModelScore, PartitionModel, Sample,
    SelectionPath,
};
