//! Metric evaluation for regression, classification, clustering,
//! segmentation and image tasks, with input validation and a metric
//! registry for discovery.

/// Crate version, shared by the command line and the C ABI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod classification;
pub mod cli;
pub mod clustering;
pub mod error;
pub mod facade;
pub mod image;
pub mod inputs;
pub mod io;
pub mod registry;
pub mod regression;
pub mod segmentation;
pub mod types;
pub mod validation;
pub mod value;

pub use error::{EvaluationError, Result};
pub use types::{AverageMode, Image, Mask, PixelKind, Task};
pub use value::{Evaluation, MetricValue, WarningCode, WarningRecord, INF_SENTINEL};
pub use inputs::Inputs;
pub use registry::{describe_metric, list_metrics, registry, MetricDescriptor, RawParams, Registry};
pub use facade::{evaluate, EvaluateOptions, Outcome, RunError};
pub use validation::{validate_all, Severity, ValidationConfig, ValidationReport};
