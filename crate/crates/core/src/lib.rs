//! Multivariate time-series augmentation benchmark.
//!
//! Data model and `.ts` I/O ([`series`], [`ts_format`]), dataset profiling
//! ([`metrics`]), augmentation operators and balancing ([`augment`]), ROCKET
//! features with a ridge head ([`rocket`]) and the experiment driver
//! ([`experiment`]).

pub mod augment;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod rng;
pub mod rocket;
pub mod series;
pub mod ts_format;

pub use augment::{AugmenterSpec, SynthesisRecord, Technique};
pub use error::{Error, ParseErrorKind, Result};
pub use experiment::{ExperimentConfig, ExperimentReport};
pub use metrics::{DatasetProfile, GainRecord};
pub use rng::RngStream;
pub use rocket::{KernelBank, RidgeModel};
pub use series::{LabeledDataset, LabeledItem, Series};
pub use ts_format::{ImputePolicy, TsHeader};
