//! Validated metric evaluation: run the task validators, then the metric.

use thiserror::Error;

use crate::error::EvaluationError;
use crate::inputs::Inputs;
use crate::registry::{registry, ParamValue, RawParams, ResolvedParams};
use crate::validation::{validate_all, Severity, ValidationConfig, ValidationReport};
use crate::value::Evaluation;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvaluateOptions {
    /// Skip validation entirely.
    pub no_validate: bool,
    /// Compute despite error findings. Has no effect in strict mode.
    pub allow_errors: bool,
    pub config: ValidationConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub evaluation: Evaluation,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("validation blocked the computation: {}", summary(.0))]
    Blocked(ValidationReport),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
}

fn summary(report: &ValidationReport) -> String {
    format!(
        "{} error(s), {} warning(s)",
        report.count(Severity::Error),
        report.count(Severity::Warning)
    )
}

/// Whether a report stops the metric from running. Errors always block
/// unless overridden outside strict mode; in strict mode warnings block too.
pub fn blocks(report: &ValidationReport, options: &EvaluateOptions) -> bool {
    let strict = options.config.strict;
    let errors = report.count(Severity::Error) > 0;
    let warnings = report.count(Severity::Warning) > 0;
    if strict {
        errors || warnings
    } else {
        errors && !options.allow_errors
    }
}

fn declared_range(params: &ResolvedParams) -> Option<f64> {
    match params.values().get("data_range")? {
        ParamValue::Real(r) => Some(*r),
        ParamValue::Int(i) => Some(*i as f64),
        _ => None,
    }
}

/// Validates `inputs` for `metric` and, if nothing blocks, evaluates it.
pub fn evaluate(metric: &str, inputs: &Inputs, params: &RawParams, options: &EvaluateOptions) -> Result<Outcome, RunError> {
    let reg = registry();
    let descriptor = reg.describe(metric)?;
    let resolved = ResolvedParams::resolve(descriptor, params)?;
    let report = if options.no_validate {
        ValidationReport::skipped()
    } else {
        let config = ValidationConfig {
            target_metric: Some(metric.to_string()),
            data_range: options.config.data_range.or_else(|| declared_range(&resolved)),
            ..options.config.clone()
        };
        let report = validate_all(descriptor.task, inputs, &config)?;
        if blocks(&report, options) {
            return Err(RunError::Blocked(report));
        }
        report
    };
    let evaluation = reg.evaluate_resolved(metric, inputs, &resolved)?;
    Ok(Outcome { evaluation, report })
}
