//! Single-label classification metrics.
//!
//! Per-class rate metrics (precision, recall, F-beta, jaccard, MCC) default to
//! `AverageMode::None` and return one value per label in ascending order. The
//! evaluated label set is the explicit `labels` parameter when given, else the
//! sorted union of labels seen in `y_true` and `y_pred`.
//!
//! Averaging:
//! - `macro`: unweighted mean of the per-class values
//! - `weighted`: mean weighted by support (true count) of each class
//! - `micro`: recomputed from true/false positive and false negative counts
//!   summed over classes. For MCC, `micro` is the global multiclass coefficient.

use std::collections::{BTreeMap, BTreeSet};

use ndarray::{Array2, ArrayView2};

use crate::error::{ensure_non_empty, ensure_same_len, EvaluationError, Result};
use crate::types::AverageMode;
use crate::value::{Evaluation, MetricValue, WarningCode, WarningRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationParams {
    pub average: AverageMode,
    pub beta: f64,
    /// Value substituted for an empty denominator; 0 or 1.
    pub zero_division: f64,
    pub labels: Option<Vec<i64>>,
    /// Number of top-ranked classes for `top_k_accuracy`.
    pub k: usize,
    /// Log-loss clipping bound.
    pub eps: f64,
}

impl Default for ClassificationParams {
    fn default() -> Self {
        Self {
            average: AverageMode::None,
            beta: 1.0,
            zero_division: 0.0,
            labels: None,
            k: 2,
            eps: 1e-15,
        }
    }
}

impl ClassificationParams {
    pub fn with_average(average: AverageMode) -> Self {
        Self {
            average,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(EvaluationError::InvalidParameter(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        if self.zero_division != 0.0 && self.zero_division != 1.0 {
            return Err(EvaluationError::InvalidParameter(format!(
                "zero_division must be 0 or 1, got {}",
                self.zero_division
            )));
        }
        if self.k == 0 {
            return Err(EvaluationError::InvalidParameter("k must be at least 1".to_string()));
        }
        if !(self.eps > 0.0 && self.eps < 1e-3) {
            return Err(EvaluationError::InvalidParameter(format!(
                "eps must lie in (0, 1e-3), got {}",
                self.eps
            )));
        }
        Ok(())
    }
}

/// Counts of samples with true label `labels[i]` predicted as `labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<i64>,
    counts: Array2<u64>,
}

impl ConfusionMatrix {
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn counts(&self) -> &Array2<u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.sum()
    }

    pub fn correct(&self) -> u64 {
        self.counts.diag().sum()
    }

    /// Row sums: number of true samples per class.
    pub fn support(&self) -> Vec<u64> {
        self.counts.rows().into_iter().map(|r| r.sum()).collect()
    }

    /// Column sums: number of predictions per class.
    pub fn predicted(&self) -> Vec<u64> {
        self.counts.columns().into_iter().map(|c| c.sum()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.rows().into_iter().map(|r| r.to_vec()).collect()
    }

    fn class_counts(&self) -> Vec<ClassCounts> {
        let total = self.total();
        let support = self.support();
        let predicted = self.predicted();
        (0..self.labels.len())
            .map(|k| {
                let tp = self.counts[[k, k]];
                let fp = predicted[k] - tp;
                let fn_ = support[k] - tp;
                ClassCounts {
                    tp,
                    fp,
                    fn_,
                    tn: total - tp - fp - fn_,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct ClassCounts {
    tp: u64,
    fp: u64,
    fn_: u64,
    tn: u64,
}

impl ClassCounts {
    fn support(&self) -> u64 {
        self.tp + self.fn_
    }
}

fn check_labels(y_true: &[i64], y_pred: &[i64]) -> Result<()> {
    ensure_same_len("y_true/y_pred", y_true.len(), y_pred.len())?;
    ensure_non_empty("y_true", y_true.len())
}

fn resolve_labels<'a, I>(observed: I, explicit: Option<&[i64]>) -> Result<Vec<i64>>
where
    I: IntoIterator<Item = &'a i64>,
{
    let seen: BTreeSet<i64> = observed.into_iter().copied().collect();
    match explicit {
        None => Ok(seen.into_iter().collect()),
        Some(labels) => {
            if labels.is_empty() {
                return Err(EvaluationError::InvalidParameter("labels must not be empty".to_string()));
            }
            if labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(EvaluationError::InvalidParameter(format!(
                    "labels must be strictly ascending, got {labels:?}"
                )));
            }
            let missing: Vec<i64> = seen
                .iter()
                .filter(|l| labels.binary_search(l).is_err())
                .copied()
                .collect();
            if !missing.is_empty() {
                return Err(EvaluationError::LabelError(format!(
                    "observed labels {missing:?} are not in the labels parameter {labels:?}"
                )));
            }
            Ok(labels.to_vec())
        }
    }
}

/// Confusion matrix with rows indexed by true label and columns by prediction.
pub fn confusion_matrix(y_true: &[i64], y_pred: &[i64], labels: Option<&[i64]>) -> Result<ConfusionMatrix> {
    check_labels(y_true, y_pred)?;
    let labels = resolve_labels(y_true.iter().chain(y_pred), labels)?;
    let index: BTreeMap<i64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut counts = Array2::<u64>::zeros((labels.len(), labels.len()));
    for (t, p) in y_true.iter().zip(y_pred) {
        counts[[index[t], index[p]]] += 1;
    }
    Ok(ConfusionMatrix { labels, counts })
}

pub fn accuracy(y_true: &[i64], y_pred: &[i64]) -> Result<f64> {
    check_labels(y_true, y_pred)?;
    let correct = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    Ok(correct as f64 / y_true.len() as f64)
}

/// Fraction of mismatched labels (single-label setting).
pub fn hamming_loss(y_true: &[i64], y_pred: &[i64]) -> Result<f64> {
    check_labels(y_true, y_pred)?;
    let wrong = y_true.iter().zip(y_pred).filter(|(t, p)| t != p).count();
    Ok(wrong as f64 / y_true.len() as f64)
}

/// Tracks labels whose rate fell back to the zero-division value.
struct ZeroDivision<'a> {
    metric: &'static str,
    reason: &'static str,
    fallback: f64,
    labels: &'a [i64],
    hit: Vec<i64>,
}

impl<'a> ZeroDivision<'a> {
    fn new(metric: &'static str, reason: &'static str, fallback: f64, labels: &'a [i64]) -> Self {
        Self {
            metric,
            reason,
            fallback,
            labels,
            hit: Vec::new(),
        }
    }

    fn ratio(&mut self, class: usize, num: u64, den: u64) -> f64 {
        if den == 0 {
            self.hit.push(self.labels[class]);
            self.fallback
        } else {
            num as f64 / den as f64
        }
    }

    fn warnings(&self) -> Vec<WarningRecord> {
        if self.hit.is_empty() {
            return Vec::new();
        }
        vec![WarningRecord::new(
            WarningCode::ZeroDivision,
            format!(
                "{} is ill-defined for labels {:?} ({}); set to {}",
                self.metric, self.hit, self.reason, self.fallback
            ),
        )]
    }
}

fn per_class_map(labels: &[i64], values: &[f64]) -> MetricValue {
    MetricValue::PerClass(labels.iter().copied().zip(values.iter().copied()).collect())
}

fn macro_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn weighted_mean(values: &[f64], counts: &[ClassCounts]) -> f64 {
    let total: u64 = counts.iter().map(ClassCounts::support).sum();
    let weighted: f64 = values
        .iter()
        .zip(counts)
        .map(|(v, c)| v * c.support() as f64)
        .sum();
    weighted / total as f64
}

/// Shared path for metrics of the form `num_k / den_k` per class.
fn ratio_metric(
    y_true: &[i64],
    y_pred: &[i64],
    params: &ClassificationParams,
    metric: &'static str,
    reason: &'static str,
    parts: fn(&ClassCounts) -> (u64, u64),
) -> Result<Evaluation> {
    params.check()?;
    let cm = confusion_matrix(y_true, y_pred, params.labels.as_deref())?;
    let counts = cm.class_counts();
    let mut zd = ZeroDivision::new(metric, reason, params.zero_division, cm.labels());
    let value = if params.average == AverageMode::Micro {
        let (num, den) = counts.iter().map(parts).fold((0, 0), |(a, b), (n, d)| (a + n, b + d));
        if den == 0 {
            zd.hit.extend_from_slice(cm.labels());
            MetricValue::Scalar(params.zero_division)
        } else {
            MetricValue::Scalar(num as f64 / den as f64)
        }
    } else {
        let values: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let (num, den) = parts(c);
                zd.ratio(k, num, den)
            })
            .collect();
        reduce(params.average, cm.labels(), &values, &counts)
    };
    Ok(Evaluation::with_warnings(value, zd.warnings()))
}

fn reduce(mode: AverageMode, labels: &[i64], values: &[f64], counts: &[ClassCounts]) -> MetricValue {
    match mode {
        AverageMode::None => per_class_map(labels, values),
        AverageMode::Macro => MetricValue::Scalar(macro_mean(values)),
        AverageMode::Weighted => MetricValue::Scalar(weighted_mean(values, counts)),
        AverageMode::Micro => unreachable!("micro averaging is computed from pooled counts"),
    }
}

pub fn precision(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    ratio_metric(y_true, y_pred, params, "precision", "no predicted samples", |c| {
        (c.tp, c.tp + c.fp)
    })
}

pub fn recall(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    ratio_metric(y_true, y_pred, params, "recall", "no true samples", |c| (c.tp, c.tp + c.fn_))
}

pub fn jaccard(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    ratio_metric(y_true, y_pred, params, "jaccard", "no true or predicted samples", |c| {
        (c.tp, c.tp + c.fp + c.fn_)
    })
}

/// F-beta score, `(1 + β²)·P·R / (β²·P + R)` per class.
///
/// Precision and recall with empty denominators take the zero-division value
/// first; a zero F denominator (P = R = 0) also falls back to it.
pub fn fbeta(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    params.check()?;
    let cm = confusion_matrix(y_true, y_pred, params.labels.as_deref())?;
    let counts = cm.class_counts();
    let b2 = params.beta * params.beta;
    let combine = |p: f64, r: f64| {
        let den = b2 * p + r;
        if den == 0.0 {
            None
        } else {
            Some((1.0 + b2) * p * r / den)
        }
    };
    let mut zd = ZeroDivision::new("f-score", "precision and recall are both zero", params.zero_division, cm.labels());
    let mut zd_p = ZeroDivision::new("precision", "no predicted samples", params.zero_division, cm.labels());
    let mut zd_r = ZeroDivision::new("recall", "no true samples", params.zero_division, cm.labels());
    let value = if params.average == AverageMode::Micro {
        let (tp, fp, fn_) = counts
            .iter()
            .fold((0, 0, 0), |(a, b, c), k| (a + k.tp, b + k.fp, c + k.fn_));
        let p = zd_p.ratio(0, tp, tp + fp);
        let r = zd_r.ratio(0, tp, tp + fn_);
        MetricValue::Scalar(combine(p, r).unwrap_or_else(|| {
            zd.hit.extend_from_slice(cm.labels());
            params.zero_division
        }))
    } else {
        let values: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let p = zd_p.ratio(k, c.tp, c.tp + c.fp);
                let r = zd_r.ratio(k, c.tp, c.tp + c.fn_);
                combine(p, r).unwrap_or_else(|| {
                    zd.hit.push(cm.labels()[k]);
                    params.zero_division
                })
            })
            .collect();
        reduce(params.average, cm.labels(), &values, &counts)
    };
    if params.average == AverageMode::Micro {
        // pooled counts: report the whole label set rather than a single index
        for z in [&mut zd_p, &mut zd_r] {
            if !z.hit.is_empty() {
                z.hit = cm.labels().to_vec();
            }
        }
    }
    let mut warnings = zd_p.warnings();
    warnings.extend(zd_r.warnings());
    warnings.extend(zd.warnings());
    Ok(Evaluation::with_warnings(value, warnings))
}

/// F1 score: `fbeta` with β = 1 regardless of `params.beta`.
pub fn f1(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    let params = ClassificationParams {
        beta: 1.0,
        ..params.clone()
    };
    fbeta(y_true, y_pred, &params)
}

/// Unweighted mean of per-class recall over the evaluated label set, i.e.
/// `recall` with `average = macro`. No chance adjustment is applied.
pub fn balanced_accuracy(y_true: &[i64], y_pred: &[i64]) -> Result<Evaluation> {
    recall(y_true, y_pred, &ClassificationParams::with_average(AverageMode::Macro))
}

fn correlation(num: f64, den_sq: f64) -> Option<f64> {
    if den_sq == 0.0 {
        None
    } else {
        Some(num / den_sq.sqrt())
    }
}

/// Matthews correlation coefficient.
///
/// Per class it is the one-vs-rest binary coefficient; `micro` gives the global
/// multiclass coefficient. A zero denominator yields 0 with a warning.
pub fn mcc(y_true: &[i64], y_pred: &[i64], params: &ClassificationParams) -> Result<Evaluation> {
    params.check()?;
    let cm = confusion_matrix(y_true, y_pred, params.labels.as_deref())?;
    let mut undefined = Vec::new();
    let value = if params.average == AverageMode::Micro {
        let s = cm.total() as f64;
        let c = cm.correct() as f64;
        let t = cm.support();
        let p = cm.predicted();
        let cross: f64 = t.iter().zip(&p).map(|(&a, &b)| a as f64 * b as f64).sum();
        let p2: f64 = p.iter().map(|&v| (v as f64) * (v as f64)).sum();
        let t2: f64 = t.iter().map(|&v| (v as f64) * (v as f64)).sum();
        let v = correlation(c * s - cross, (s * s - p2) * (s * s - t2)).unwrap_or_else(|| {
            undefined.extend_from_slice(cm.labels());
            0.0
        });
        MetricValue::Scalar(v)
    } else {
        let counts = cm.class_counts();
        let values: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let (tp, fp, fn_, tn) = (c.tp as f64, c.fp as f64, c.fn_ as f64, c.tn as f64);
                correlation(tp * tn - fp * fn_, (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_))
                    .unwrap_or_else(|| {
                        undefined.push(cm.labels()[k]);
                        0.0
                    })
            })
            .collect();
        reduce(params.average, cm.labels(), &values, &counts)
    };
    let warnings = if undefined.is_empty() {
        Vec::new()
    } else {
        vec![WarningRecord::new(
            WarningCode::UndefinedCorrelation,
            format!("mcc has a zero denominator for labels {undefined:?}; set to 0"),
        )]
    };
    Ok(Evaluation::with_warnings(value, warnings))
}

/// Cohen's kappa. When chance agreement is 1 the result is 1 if agreement is
/// perfect and `DegenerateInput` otherwise.
pub fn cohens_kappa(y_true: &[i64], y_pred: &[i64]) -> Result<f64> {
    let cm = confusion_matrix(y_true, y_pred, None)?;
    let n = cm.total() as f64;
    let observed = cm.correct() as f64 / n;
    let expected: f64 = cm
        .support()
        .iter()
        .zip(cm.predicted())
        .map(|(&t, p)| t as f64 * p as f64)
        .sum::<f64>()
        / (n * n);
    if expected == 1.0 {
        return if observed == 1.0 {
            Ok(1.0)
        } else {
            Err(EvaluationError::DegenerateInput(
                "cohen's kappa is undefined when chance agreement is 1".to_string(),
            ))
        };
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Maps score-matrix columns to labels.
///
/// Uses the explicit labels when given, else the sorted distinct `y_true`
/// labels when their count matches the column count, else positional labels
/// `0..cols` when every true label falls in that range.
fn column_labels(y_true: &[i64], cols: usize, explicit: Option<&[i64]>) -> Result<Vec<i64>> {
    let labels = match explicit {
        Some(_) => resolve_labels(y_true, explicit)?,
        None => {
            let distinct = resolve_labels(y_true, None)?;
            if distinct.len() == cols {
                distinct
            } else if y_true.iter().all(|&l| l >= 0 && (l as usize) < cols) {
                (0..cols as i64).collect()
            } else {
                return Err(EvaluationError::LabelError(format!(
                    "score matrix has {cols} columns but y_true has {} distinct labels {distinct:?}; pass labels explicitly",
                    distinct.len()
                )));
            }
        }
    };
    if labels.len() != cols {
        return Err(EvaluationError::LabelError(format!(
            "score matrix has {cols} columns but {} labels were given",
            labels.len()
        )));
    }
    Ok(labels)
}

fn check_scores(y_true: &[i64], scores: &ArrayView2<f64>) -> Result<()> {
    ensure_non_empty("y_true", y_true.len())?;
    ensure_same_len("y_true/score rows", y_true.len(), scores.nrows())?;
    if scores.ncols() < 2 {
        return Err(EvaluationError::ShapeMismatch(format!(
            "score matrix needs at least 2 columns, got {}",
            scores.ncols()
        )));
    }
    if let Some(((i, j), v)) = scores.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(EvaluationError::NonFiniteValue(format!("scores[{i}, {j}] = {v}")));
    }
    Ok(())
}

/// Cross-entropy of the true labels under row-stochastic probabilities.
///
/// Rows must sum to 1 within 1e-6. Entries are clipped to `[eps, 1 - eps]`
/// and each row is renormalized before taking logs.
pub fn log_loss(y_true: &[i64], proba: ArrayView2<f64>, params: &ClassificationParams) -> Result<f64> {
    params.check()?;
    check_scores(y_true, &proba)?;
    let labels = column_labels(y_true, proba.ncols(), params.labels.as_deref())?;
    let eps = params.eps;
    let mut total = 0.0;
    for (i, (row, label)) in proba.rows().into_iter().zip(y_true).enumerate() {
        if let Some(v) = row.iter().find(|v| **v < 0.0 || **v > 1.0) {
            return Err(EvaluationError::DomainError(format!(
                "probability row {i} has entry {v} outside [0, 1]"
            )));
        }
        let sum: f64 = row.sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(EvaluationError::DomainError(format!(
                "probability row {i} sums to {sum}, expected 1 within 1e-6"
            )));
        }
        let clipped_sum: f64 = row.iter().map(|v| v.clamp(eps, 1.0 - eps)).sum();
        let col = labels.binary_search(label).expect("labels cover y_true");
        let p = row[col].clamp(eps, 1.0 - eps) / clipped_sum;
        total -= p.ln();
    }
    Ok(total / y_true.len() as f64)
}

/// Fraction of samples whose true-label score is at least the k-th largest
/// score in its row. Ties at the k-th score count as hits.
pub fn top_k_accuracy(y_true: &[i64], scores: ArrayView2<f64>, params: &ClassificationParams) -> Result<f64> {
    params.check()?;
    check_scores(y_true, &scores)?;
    if params.k > scores.ncols() {
        return Err(EvaluationError::InvalidParameter(format!(
            "k = {} exceeds the number of classes {}",
            params.k,
            scores.ncols()
        )));
    }
    let labels = column_labels(y_true, scores.ncols(), params.labels.as_deref())?;
    let hits = scores
        .rows()
        .into_iter()
        .zip(y_true)
        .filter(|(row, label)| {
            let col = labels.binary_search(label).expect("labels cover y_true");
            let target = row[col];
            row.iter().filter(|&&s| s > target).count() < params.k
        })
        .count();
    Ok(hits as f64 / y_true.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    const T: [i64; 6] = [0, 1, 2, 0, 1, 2];
    const P: [i64; 6] = [0, 2, 1, 0, 0, 1];

    fn per_class(e: &Evaluation) -> Vec<(i64, f64)> {
        e.expect_per_class().iter().map(|(k, v)| (*k, *v)).collect()
    }

    fn avg(mode: AverageMode) -> ClassificationParams {
        ClassificationParams::with_average(mode)
    }

    #[test]
    fn confusion_matrix_fixture() {
        let cm = confusion_matrix(&T, &P, None).unwrap();
        assert_eq!(cm.to_rows(), vec![vec![2, 0, 0], vec![1, 0, 1], vec![0, 2, 0]]);
        let ident = confusion_matrix(&[0, 1], &[0, 1], None).unwrap();
        assert_eq!(ident.to_rows(), vec![vec![1, 0], vec![0, 1]]);
        let padded = confusion_matrix(&T, &P, Some(&[0, 1, 2, 3])).unwrap();
        assert_eq!(padded.labels(), &[0, 1, 2, 3]);
        assert_eq!(padded.to_rows()[3], vec![0, 0, 0, 0]);
        assert!(padded.to_rows().iter().all(|r| r[3] == 0));
        assert!(matches!(
            confusion_matrix(&T, &P, Some(&[0, 1])),
            Err(EvaluationError::LabelError(_))
        ));
        assert!(matches!(
            confusion_matrix(&T, &P, Some(&[2, 1, 0])),
            Err(EvaluationError::InvalidParameter(_))
        ));
    }

    #[test]
    fn accuracy_and_hamming() {
        assert_abs_diff_eq!(accuracy(&T, &P).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hamming_loss(&T, &P).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert_eq!(accuracy(&T, &T).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 0], &[1, 1]).unwrap(), 0.0);
        assert_eq!(hamming_loss(&[0, 0], &[1, 1]).unwrap(), 1.0);
        assert!(matches!(accuracy(&[], &[]), Err(EvaluationError::EmptyInput(_))));
        assert!(matches!(accuracy(&[0], &[0, 1]), Err(EvaluationError::ShapeMismatch(_))));
    }

    #[test]
    fn precision_fixture() {
        let p = precision(&T, &P, &avg(AverageMode::None)).unwrap();
        assert_eq!(per_class(&p), vec![(0, 2.0 / 3.0), (1, 0.0), (2, 0.0)]);
        assert_abs_diff_eq!(precision(&T, &P, &avg(AverageMode::Macro)).unwrap().expect_scalar(), 2.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(precision(&T, &P, &avg(AverageMode::Micro)).unwrap().expect_scalar(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(precision(&T, &P, &avg(AverageMode::Weighted)).unwrap().expect_scalar(), 2.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn recall_fscore_jaccard_fixture() {
        let r = recall(&T, &P, &avg(AverageMode::None)).unwrap();
        assert_eq!(per_class(&r), vec![(0, 1.0), (1, 0.0), (2, 0.0)]);
        assert_abs_diff_eq!(recall(&T, &P, &avg(AverageMode::Macro)).unwrap().expect_scalar(), 1.0 / 3.0, epsilon = 1e-12);

        let f = f1(&T, &P, &avg(AverageMode::None)).unwrap();
        let f = per_class(&f);
        assert_abs_diff_eq!(f[0].1, 0.8, epsilon = 1e-12);
        assert_eq!((f[1].1, f[2].1), (0.0, 0.0));
        assert_abs_diff_eq!(f1(&T, &P, &avg(AverageMode::Macro)).unwrap().expect_scalar(), 0.266_666_666_666_666_66, epsilon = 1e-12);
        let f2 = fbeta(&T, &P, &ClassificationParams { beta: 2.0, ..Default::default() }).unwrap();
        assert_abs_diff_eq!(f2.expect_per_class()[&0], 0.909_090_909_090_909_1, epsilon = 1e-12);

        let j = jaccard(&T, &P, &avg(AverageMode::None)).unwrap();
        let j0 = j.expect_per_class()[&0];
        assert_abs_diff_eq!(j0, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(2.0 * j0 / (1.0 + j0), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(jaccard(&T, &P, &avg(AverageMode::Micro)).unwrap().expect_scalar(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn identity_gives_all_ones() {
        for metric in [precision, recall, f1, jaccard, mcc] {
            let e = metric(&T, &T, &avg(AverageMode::None)).unwrap();
            assert!(e.expect_per_class().values().all(|&v| v == 1.0));
            assert!(e.warnings.is_empty());
        }
    }

    #[test]
    fn zero_division_warns() {
        // label 2 is never predicted
        let e = precision(&[0, 1, 2], &[0, 1, 1], &avg(AverageMode::None)).unwrap();
        assert!(e.has_warning(WarningCode::ZeroDivision));
        assert_eq!(e.expect_per_class()[&2], 0.0);
        let one = ClassificationParams { zero_division: 1.0, ..Default::default() };
        assert_eq!(precision(&[0, 1, 2], &[0, 1, 1], &one).unwrap().expect_per_class()[&2], 1.0);
        let bad = ClassificationParams { zero_division: 0.5, ..Default::default() };
        assert!(matches!(precision(&T, &P, &bad), Err(EvaluationError::InvalidParameter(_))));
        let bad_beta = ClassificationParams { beta: 0.0, ..Default::default() };
        assert!(matches!(fbeta(&T, &P, &bad_beta), Err(EvaluationError::InvalidParameter(_))));
    }

    #[test]
    fn balanced_accuracy_cases() {
        assert_abs_diff_eq!(balanced_accuracy(&T, &P).unwrap().expect_scalar(), 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(balanced_accuracy(&T, &T).unwrap().expect_scalar(), 1.0);
        assert_eq!(balanced_accuracy(&[0, 0, 1, 1], &[0, 0, 0, 0]).unwrap().expect_scalar(), 0.5);
    }

    #[test]
    fn mcc_cases() {
        let e = mcc(&T, &P, &avg(AverageMode::None)).unwrap();
        assert_abs_diff_eq!(e.expect_per_class()[&0], 6.0 / 72f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(mcc(&T, &P, &avg(AverageMode::Micro)).unwrap().expect_scalar(), 0.0, epsilon = 1e-12);
        // a constant prediction leaves the one-vs-rest denominator at zero
        let flat = mcc(&[0, 1], &[0, 0], &avg(AverageMode::Micro)).unwrap();
        assert_eq!(flat.expect_scalar(), 0.0);
        assert!(flat.has_warning(WarningCode::UndefinedCorrelation));
    }

    #[test]
    fn kappa_cases() {
        assert_abs_diff_eq!(cohens_kappa(&T, &P).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(cohens_kappa(&T, &T).unwrap(), 1.0);
        assert_eq!(cohens_kappa(&[0, 1], &[1, 0]).unwrap(), -1.0);
        assert_eq!(cohens_kappa(&[3, 3], &[3, 3]).unwrap(), 1.0);
    }

    #[test]
    fn log_loss_cases() {
        let p = ClassificationParams::default();
        assert_abs_diff_eq!(log_loss(&[1], array![[0.2, 0.8]].view(), &p).unwrap(), 0.223_143_551_314_209_7, epsilon = 1e-12);
        assert_abs_diff_eq!(log_loss(&[0], array![[0.0, 1.0]].view(), &p).unwrap(), 34.538_776_394_910_684, epsilon = 1e-9);
        let one_hot = log_loss(&[0, 1], array![[1.0, 0.0], [0.0, 1.0]].view(), &p).unwrap();
        assert!((0.0..1e-12).contains(&one_hot));
        let proba = array![[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.3, 0.3, 0.4], [0.5, 0.25, 0.25]];
        assert_abs_diff_eq!(log_loss(&[0, 1, 2, 1], proba.view(), &p).unwrap(), 0.720_600_897_061_747, epsilon = 1e-12);
        assert!(matches!(
            log_loss(&[0], array![[0.7, 0.7]].view(), &p),
            Err(EvaluationError::DomainError(_))
        ));
        assert!(matches!(
            log_loss(&[5, 9], array![[0.5, 0.5], [0.5, 0.5]].view(), &ClassificationParams { labels: Some(vec![5, 6, 9]), ..p.clone() }),
            Err(EvaluationError::LabelError(_))
        ));
        assert!(matches!(
            log_loss(&[0], array![[f64::NAN, 1.0]].view(), &p),
            Err(EvaluationError::NonFiniteValue(_))
        ));
    }

    #[test]
    fn top_k_cases() {
        let scores = array![[0.1, 0.6, 0.3]];
        let k = |k| ClassificationParams { k, ..Default::default() };
        assert_eq!(top_k_accuracy(&[2], scores.view(), &k(2)).unwrap(), 1.0);
        assert_eq!(top_k_accuracy(&[2], scores.view(), &k(1)).unwrap(), 0.0);
        assert_eq!(top_k_accuracy(&[0], scores.view(), &k(3)).unwrap(), 1.0);
        assert!(matches!(
            top_k_accuracy(&[2], scores.view(), &k(4)),
            Err(EvaluationError::InvalidParameter(_))
        ));
        // ties at the k-th score count as hits
        assert_eq!(top_k_accuracy(&[0], array![[0.5, 0.5, 0.0]].view(), &k(1)).unwrap(), 1.0);
    }
}
