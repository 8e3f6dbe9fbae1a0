use thiserror::Error;

/// Failure raised by a metric, the registry, or the file loaders.
///
/// Every variant carries a message that names the offending input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("non-finite value: {0}")]
    NonFiniteValue(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("label error: {0}")]
    LabelError(String),
    #[error("i/o error: {0}")]
    IoError(String),
}

impl EvaluationError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ShapeMismatch(_) => "ShapeMismatch",
            Self::EmptyInput(_) => "EmptyInput",
            Self::NonFiniteValue(_) => "NonFiniteValue",
            Self::DomainError(_) => "DomainError",
            Self::DegenerateInput(_) => "DegenerateInput",
            Self::InvalidParameter(_) => "InvalidParameter",
            Self::LabelError(_) => "LabelError",
            Self::IoError(_) => "IoError",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::ShapeMismatch(m)
            | Self::EmptyInput(m)
            | Self::NonFiniteValue(m)
            | Self::DomainError(m)
            | Self::DegenerateInput(m)
            | Self::InvalidParameter(m)
            | Self::LabelError(m)
            | Self::IoError(m) => m,
        }
    }
}

impl From<std::io::Error> for EvaluationError {
    fn from(err: std::io::Error) -> Self {
        Self::IoError(err.to_string())
    }
}

pub type Result<T, E = EvaluationError> = std::result::Result<T, E>;

pub(crate) fn ensure_same_len(what: &str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(EvaluationError::ShapeMismatch(format!(
            "{what}: lengths differ ({left} vs {right})"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_non_empty(what: &str, len: usize) -> Result<()> {
    if len == 0 {
        return Err(EvaluationError::EmptyInput(format!("{what} has no elements")));
    }
    Ok(())
}

pub(crate) fn ensure_finite(what: &str, values: &[f64]) -> Result<()> {
    if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
        return Err(EvaluationError::NonFiniteValue(format!(
            "{what}[{idx}] = {}",
            values[idx]
        )));
    }
    Ok(())
}
