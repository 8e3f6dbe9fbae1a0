//! Regression metrics over paired real-valued vectors.
//!
//! All functions take `(y_true, y_pred)` of equal non-zero length with finite
//! entries. Variances are population (divide-by-n) variances.

use crate::error::{ensure_finite, ensure_non_empty, ensure_same_len, EvaluationError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuberParams {
    pub delta: f64,
}

impl Default for HuberParams {
    fn default() -> Self {
        Self { delta: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TweedieParams {
    pub power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinballParams {
    pub quantile: f64,
}

impl Default for PinballParams {
    fn default() -> Self {
        Self { quantile: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct R2Params {
    pub adjusted: bool,
    /// Number of predictors; required when `adjusted` is set.
    pub n_features: Option<usize>,
}

fn check_pair(y_true: &[f64], y_pred: &[f64]) -> Result<()> {
    ensure_same_len("y_true/y_pred", y_true.len(), y_pred.len())?;
    ensure_non_empty("y_true", y_true.len())?;
    ensure_finite("y_true", y_true)?;
    ensure_finite("y_pred", y_pred)
}

fn mean_of<I: Iterator<Item = f64>>(values: I, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

fn mean(values: &[f64]) -> f64 {
    mean_of(values.iter().copied(), values.len())
}

/// Population variance.
fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    mean_of(values.iter().map(|v| (v - m) * (v - m)), values.len())
}

pub fn mae(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(mean_of(y_true.iter().zip(y_pred).map(|(t, p)| (t - p).abs()), y_true.len()))
}

pub fn mse(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| (t - p) * (t - p)),
        y_true.len(),
    ))
}

/// Mean absolute percentage error as a fraction. Zero targets are rejected.
pub fn mape(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    if let Some(i) = y_true.iter().position(|&t| t == 0.0) {
        return Err(EvaluationError::DomainError(format!(
            "mape is undefined for zero targets (y_true[{i}] = 0)"
        )));
    }
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| ((t - p) / t).abs()),
        y_true.len(),
    ))
}

pub fn msle(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    for (name, values) in [("y_true", y_true), ("y_pred", y_pred)] {
        if let Some(i) = values.iter().position(|&v| v < 0.0) {
            return Err(EvaluationError::DomainError(format!(
                "msle requires non-negative values, {name}[{i}] = {}",
                values[i]
            )));
        }
    }
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| {
            let d = t.ln_1p() - p.ln_1p();
            d * d
        }),
        y_true.len(),
    ))
}

/// Mean of `y_pred - y_true`; positive means systematic over-prediction.
pub fn mean_bias_deviation(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(mean_of(y_true.iter().zip(y_pred).map(|(t, p)| p - t), y_true.len()))
}

pub fn median_absolute_error(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    let mut errors: Vec<f64> = y_true.iter().zip(y_pred).map(|(t, p)| (t - p).abs()).collect();
    errors.sort_by(f64::total_cmp);
    let n = errors.len();
    Ok(if n % 2 == 1 {
        errors[n / 2]
    } else {
        (errors[n / 2 - 1] + errors[n / 2]) / 2.0
    })
}

/// Symmetric MAPE, `2|y - ŷ| / (|y| + |ŷ|)` per term with 0/0 taken as 0.
/// The result lies in `[0, 2]`.
pub fn smape(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| {
            let denom = t.abs() + p.abs();
            if denom == 0.0 {
                0.0
            } else {
                2.0 * (t - p).abs() / denom
            }
        }),
        y_true.len(),
    ))
}

fn sum_squared_residuals(y_true: &[f64], y_pred: &[f64]) -> f64 {
    y_true.iter().zip(y_pred).map(|(t, p)| (t - p) * (t - p)).sum()
}

fn total_sum_of_squares(y_true: &[f64]) -> Result<f64> {
    let m = mean(y_true);
    let total: f64 = y_true.iter().map(|t| (t - m) * (t - m)).sum();
    if total == 0.0 {
        return Err(EvaluationError::DegenerateInput(
            "y_true is constant (zero variance)".to_string(),
        ));
    }
    Ok(total)
}

pub fn relative_squared_error(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    let total = total_sum_of_squares(y_true)?;
    Ok(sum_squared_residuals(y_true, y_pred) / total)
}

/// Coefficient of determination, optionally adjusted for `n_features` predictors.
pub fn r2(y_true: &[f64], y_pred: &[f64], params: &R2Params) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    let adjust_by = if params.adjusted {
        let p = params.n_features.ok_or_else(|| {
            EvaluationError::InvalidParameter("adjusted r2 requires n_features".to_string())
        })?;
        if p == 0 {
            return Err(EvaluationError::InvalidParameter(
                "n_features must be a positive integer".to_string(),
            ));
        }
        let n = y_true.len();
        if n <= p + 1 {
            return Err(EvaluationError::InvalidParameter(format!(
                "adjusted r2 needs more samples than n_features + 1 (n = {n}, n_features = {p})"
            )));
        }
        Some(((n - 1) as f64, (n - p - 1) as f64))
    } else {
        None
    };
    let score = 1.0 - relative_squared_error(y_true, y_pred)?;
    Ok(match adjust_by {
        Some((num, den)) => 1.0 - (1.0 - score) * num / den,
        None => score,
    })
}

pub fn explained_variance(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    let var_true = variance(y_true);
    if var_true == 0.0 {
        return Err(EvaluationError::DegenerateInput(
            "y_true is constant (zero variance)".to_string(),
        ));
    }
    let residuals: Vec<f64> = y_true.iter().zip(y_pred).map(|(t, p)| t - p).collect();
    Ok(1.0 - variance(&residuals) / var_true)
}

pub fn huber_loss(y_true: &[f64], y_pred: &[f64], params: &HuberParams) -> Result<f64> {
    let delta = params.delta;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(EvaluationError::InvalidParameter(format!(
            "huber delta must be positive and finite, got {delta}"
        )));
    }
    check_pair(y_true, y_pred)?;
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| {
            let r = (p - t).abs();
            if r <= delta {
                0.5 * r * r
            } else {
                delta * (r - 0.5 * delta)
            }
        }),
        y_true.len(),
    ))
}

/// `ln cosh(r)` via `|r| + ln(1 + e^{-2|r|}) - ln 2`, which does not overflow.
pub(crate) fn log_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

pub fn log_cosh_loss(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| log_cosh(p - t)),
        y_true.len(),
    ))
}

pub fn max_error(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_pair(y_true, y_pred)?;
    Ok(y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p).abs())
        .fold(0.0, f64::max))
}

fn tweedie_domain(power: f64, y_true: &[f64], y_pred: &[f64]) -> Result<()> {
    let fail = |what: &str| {
        Err(EvaluationError::DomainError(format!(
            "tweedie deviance with power {power} requires {what}"
        )))
    };
    let pred_positive = y_pred.iter().all(|&p| p > 0.0);
    if power < 0.0 {
        if !pred_positive {
            return fail("y_pred > 0");
        }
    } else if power == 0.0 {
    } else if power < 2.0 {
        if !pred_positive || y_true.iter().any(|&t| t < 0.0) {
            return fail("y_true >= 0 and y_pred > 0");
        }
    } else if !pred_positive || y_true.iter().any(|&t| t <= 0.0) {
        return fail("y_true > 0 and y_pred > 0");
    }
    Ok(())
}

fn tweedie_unit_deviance(power: f64, y: f64, mu: f64) -> f64 {
    if power == 0.0 {
        (y - mu) * (y - mu)
    } else if power == 1.0 {
        let y_log = if y == 0.0 { 0.0 } else { y * (y / mu).ln() };
        2.0 * (y_log - y + mu)
    } else if power == 2.0 {
        2.0 * ((mu / y).ln() + y / mu - 1.0)
    } else {
        let one_minus = 1.0 - power;
        let two_minus = 2.0 - power;
        2.0 * (y.max(0.0).powf(two_minus) / (one_minus * two_minus) - y * mu.powf(one_minus) / one_minus
            + mu.powf(two_minus) / two_minus)
    }
}

/// Mean Tweedie deviance. Powers in the open interval (0, 1) have no
/// distribution and are rejected.
pub fn mean_tweedie_deviance(y_true: &[f64], y_pred: &[f64], params: &TweedieParams) -> Result<f64> {
    let power = params.power;
    if !power.is_finite() || (power > 0.0 && power < 1.0) {
        return Err(EvaluationError::InvalidParameter(format!(
            "tweedie power must be finite and outside (0, 1), got {power}"
        )));
    }
    check_pair(y_true, y_pred)?;
    tweedie_domain(power, y_true, y_pred)?;
    Ok(mean_of(
        y_true
            .iter()
            .zip(y_pred)
            .map(|(&t, &p)| tweedie_unit_deviance(power, t, p)),
        y_true.len(),
    ))
}

pub fn mean_pinball_loss(y_true: &[f64], y_pred: &[f64], params: &PinballParams) -> Result<f64> {
    let alpha = params.quantile;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(EvaluationError::InvalidParameter(format!(
            "pinball quantile must lie in (0, 1), got {alpha}"
        )));
    }
    check_pair(y_true, y_pred)?;
    Ok(mean_of(
        y_true.iter().zip(y_pred).map(|(t, p)| {
            let diff = t - p;
            if diff >= 0.0 {
                alpha * diff
            } else {
                (alpha - 1.0) * diff
            }
        }),
        y_true.len(),
    ))
}
