//! Input validation: shared data-integrity checks plus task-specific ones.
//!
//! Validators never fail on bad data; problems become findings in a
//! [`ValidationReport`]. Only misconfiguration returns an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EvaluationError, Result};
use crate::inputs::{wrong_task, Inputs};
use crate::types::{Image, Mask, Task};

/// Most offending indices listed in a single finding.
pub const MAX_REPORTED_INDICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Error => "error",
            Self::Warning => "warning",
            Self::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check_id: String,
    pub severity: Severity,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_indices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub findings: Vec<Finding>,
    pub sampled: bool,
    /// Set when validation was bypassed rather than run.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

impl ValidationReport {
    pub fn skipped() -> Self {
        Self {
            passed: true,
            findings: Vec::new(),
            sampled: false,
            skipped: true,
        }
    }

    fn from_findings(mut findings: Vec<Finding>, sampled: bool) -> Self {
        findings.sort_by_key(|f| f.severity);
        Self {
            passed: !findings.iter().any(|f| f.severity == Severity::Error),
            findings,
            sampled,
            skipped: false,
        }
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.findings.iter().filter(|f| f.severity == severity).count()
    }

    pub fn has(&self, check_id: &str, severity: Severity) -> bool {
        self.findings
            .iter()
            .any(|f| f.check_id == check_id && f.severity == severity)
    }

    pub fn by_check(&self, check_id: &str) -> impl Iterator<Item = &Finding> {
        let id = check_id.to_string();
        self.findings.iter().filter(move |f| f.check_id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckInfo {
    pub id: &'static str,
    pub severity: Severity,
    pub tasks: &'static [Task],
    pub description: &'static str,
}

const ALL_TASKS: &[Task] = &Task::ALL;

/// Every check a validator can report, with its usual severity.
pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "structure",
        severity: Severity::Error,
        tasks: ALL_TASKS,
        description: "required arrays are present and non-empty",
    },
    CheckInfo {
        id: "finite",
        severity: Severity::Error,
        tasks: ALL_TASKS,
        description: "no NaN or infinite values",
    },
    CheckInfo {
        id: "shape",
        severity: Severity::Error,
        tasks: &[Task::Regression, Task::Classification, Task::Clustering, Task::Image],
        description: "paired inputs have matching lengths or spatial extents",
    },
    CheckInfo {
        id: "variance",
        severity: Severity::Warning,
        tasks: &[Task::Regression],
        description: "y_true is not constant; an error when the target metric is in the R2 family",
    },
    CheckInfo {
        id: "non_negative",
        severity: Severity::Error,
        tasks: &[Task::Regression],
        description: "no negative values when the target metric takes logarithms",
    },
    CheckInfo {
        id: "outlier",
        severity: Severity::Warning,
        tasks: &[Task::Regression, Task::Clustering],
        description: "no values with |z| above outlier_z",
    },
    CheckInfo {
        id: "multicollinearity",
        severity: Severity::Warning,
        tasks: &[Task::Regression],
        description: "no feature pair with |Pearson r| above corr_threshold",
    },
    CheckInfo {
        id: "label_consistency",
        severity: Severity::Warning,
        tasks: &[Task::Classification],
        description: "predicted labels appear among the true labels",
    },
    CheckInfo {
        id: "probability",
        severity: Severity::Error,
        tasks: &[Task::Classification],
        description: "probability entries lie in [0, 1] and rows sum to 1 within 1e-6",
    },
    CheckInfo {
        id: "imbalance",
        severity: Severity::Warning,
        tasks: &[Task::Classification],
        description: "minority/majority class count ratio is at least imbalance_ratio",
    },
    CheckInfo {
        id: "sample_count",
        severity: Severity::Error,
        tasks: &[Task::Clustering],
        description: "more samples than clusters",
    },
    CheckInfo {
        id: "feature_dim",
        severity: Severity::Error,
        tasks: &[Task::Clustering],
        description: "feature matrix has at least one column",
    },
    CheckInfo {
        id: "cluster_separation",
        severity: Severity::Warning,
        tasks: &[Task::Clustering],
        description: "no two standardized cluster centroids closer than 1e-8",
    },
    CheckInfo {
        id: "empty_mask",
        severity: Severity::Warning,
        tasks: &[Task::Segmentation],
        description: "each mask has foreground",
    },
    CheckInfo {
        id: "binary",
        severity: Severity::Error,
        tasks: &[Task::Segmentation],
        description: "mask values lie in {0, 1}",
    },
    CheckInfo {
        id: "spatial",
        severity: Severity::Error,
        tasks: &[Task::Segmentation],
        description: "masks share shape and voxel spacing",
    },
    CheckInfo {
        id: "pixel_range",
        severity: Severity::Warning,
        tasks: &[Task::Image],
        description: "pixel values lie in [0, data_range] when a range is declared",
    },
    CheckInfo {
        id: "channels",
        severity: Severity::Error,
        tasks: &[Task::Image],
        description: "images have the same channel count",
    },
    CheckInfo {
        id: "sampling",
        severity: Severity::Info,
        tasks: ALL_TASKS,
        description: "statistical checks ran on a seeded subsample",
    },
];

pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

/// Metrics whose result is undefined for a constant target.
pub const R2_FAMILY: &[&str] = &["r2", "adjusted_r2", "explained_variance", "relative_squared_error"];
/// Metrics that take logarithms of the targets.
pub const LOG_METRICS: &[&str] = &["msle"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    /// `None` enables every check.
    pub enabled_checks: Option<BTreeSet<String>>,
    pub outlier_z: f64,
    pub imbalance_ratio: f64,
    pub corr_threshold: f64,
    pub sample_threshold: usize,
    pub sample_size: usize,
    pub seed: u64,
    /// Warnings block metric computation too.
    pub strict: bool,
    /// Metric the inputs are destined for; selects target-dependent rules.
    pub target_metric: Option<String>,
    /// Declared pixel range for image checks.
    pub data_range: Option<f64>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            enabled_checks: None,
            outlier_z: 3.0,
            imbalance_ratio: 0.1,
            corr_threshold: 0.95,
            sample_threshold: 1_000_000,
            sample_size: 100_000,
            seed: 0,
            strict: false,
            target_metric: None,
            data_range: None,
        }
    }
}

impl ValidationConfig {
    pub fn with_checks<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.enabled_checks = Some(ids.into_iter().map(Into::into).collect());
        self
    }

    pub fn for_metric(mut self, metric: &str) -> Self {
        self.target_metric = Some(metric.to_string());
        self
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(EvaluationError::InvalidParameter(msg));
        if let Some(ids) = &self.enabled_checks {
            if let Some(unknown) = ids.iter().find(|id| check_info(id).is_none()) {
                let known: Vec<&str> = CHECKS.iter().map(|c| c.id).collect();
                return bad(format!("unknown check id `{unknown}` (known: {})", known.join(", ")));
            }
        }
        if !(self.outlier_z.is_finite() && self.outlier_z > 0.0) {
            return bad(format!("outlier_z must be positive, got {}", self.outlier_z));
        }
        if !(self.imbalance_ratio > 0.0 && self.imbalance_ratio < 1.0) {
            return bad(format!("imbalance_ratio must lie in (0, 1), got {}", self.imbalance_ratio));
        }
        if !(self.corr_threshold > 0.0 && self.corr_threshold <= 1.0) {
            return bad(format!("corr_threshold must lie in (0, 1], got {}", self.corr_threshold));
        }
        if self.sample_size == 0 || self.sample_size > self.sample_threshold {
            return bad(format!(
                "sample_size must lie in [1, sample_threshold = {}], got {}",
                self.sample_threshold, self.sample_size
            ));
        }
        if let Some(l) = self.data_range {
            if !(l.is_finite() && l > 0.0) {
                return bad(format!("data_range must be positive, got {l}"));
            }
        }
        Ok(())
    }

    fn enabled(&self, id: &str) -> bool {
        self.enabled_checks.as_ref().is_none_or(|s| s.contains(id))
    }

    fn target_in(&self, names: &[&str]) -> bool {
        self.target_metric.as_deref().is_some_and(|t| names.contains(&t))
    }
}

fn capped(indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    indices.into_iter().take(MAX_REPORTED_INDICES).collect()
}

struct Collector<'a> {
    cfg: &'a ValidationConfig,
    findings: Vec<Finding>,
    /// Sorted subsample of sample-axis indices when sampling engaged.
    subsample: Option<Vec<usize>>,
}

impl<'a> Collector<'a> {
    fn new(cfg: &'a ValidationConfig, largest: usize, n_samples: usize) -> Self {
        let mut c = Self {
            cfg,
            findings: Vec::new(),
            subsample: None,
        };
        if largest > cfg.sample_threshold {
            let m = cfg.sample_size.min(n_samples);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut idx = rand::seq::index::sample(&mut rng, n_samples, m).into_vec();
            idx.sort_unstable();
            c.push(
                "sampling",
                Severity::Info,
                format!(
                    "statistical checks ran on a seeded subsample of {m} of {n_samples} samples ({largest} elements > {})",
                    cfg.sample_threshold
                ),
                None,
            );
            c.subsample = Some(idx);
        }
        c
    }

    fn on(&self, id: &str) -> bool {
        self.cfg.enabled(id)
    }

    fn push(&mut self, id: &str, severity: Severity, message: String, indices: Option<Vec<usize>>) {
        if self.on(id) {
            self.findings.push(Finding {
                check_id: id.to_string(),
                severity,
                message,
                sample_indices: indices,
            });
        }
    }

    fn finish(self) -> ValidationReport {
        let sampled = self.subsample.is_some();
        ValidationReport::from_findings(self.findings, sampled)
    }

    /// Sample-axis indices the statistical checks should read.
    fn sample_indices(&self, n: usize) -> Vec<usize> {
        match &self.subsample {
            Some(idx) => idx.iter().copied().filter(|&i| i < n).collect(),
            None => (0..n).collect(),
        }
    }

    fn structure_empty(&mut self, name: &str, len: usize) -> bool {
        if len == 0 {
            self.push("structure", Severity::Error, format!("{name} is empty"), None);
            return true;
        }
        false
    }

    /// Reports non-finite entries; returns whether any were found.
    fn finite(&mut self, name: &str, values: impl Iterator<Item = f64>) -> bool {
        let bad: Vec<usize> = values
            .enumerate()
            .filter(|(_, v)| !v.is_finite())
            .map(|(i, _)| i)
            .collect();
        if bad.is_empty() {
            return false;
        }
        self.push(
            "finite",
            Severity::Error,
            format!("{name} has {} NaN or infinite value(s)", bad.len()),
            Some(capped(bad)),
        );
        true
    }

    fn length(&mut self, what: &str, left: usize, right: usize) -> bool {
        if left != right {
            self.push(
                "shape",
                Severity::Error,
                format!("{what}: lengths differ ({left} vs {right})"),
                None,
            );
            return true;
        }
        false
    }

    fn outliers(&mut self, name: &str, values: &[f64]) {
        if !self.on("outlier") {
            return;
        }
        let idx = self.sample_indices(values.len());
        if idx.len() < 2 {
            return;
        }
        let n = idx.len() as f64;
        let mean = idx.iter().map(|&i| values[i]).sum::<f64>() / n;
        let var = idx.iter().map(|&i| (values[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let sd = var.sqrt();
        if sd.is_nan() || sd == 0.0 {
            return;
        }
        let z = self.cfg.outlier_z;
        let hits: Vec<(usize, f64)> = idx
            .iter()
            .map(|&i| (i, (values[i] - mean) / sd))
            .filter(|(_, zi)| zi.abs() > z)
            .collect();
        if hits.is_empty() {
            return;
        }
        let worst = hits.iter().map(|(_, zi)| zi.abs()).fold(0.0, f64::max);
        self.push(
            "outlier",
            Severity::Warning,
            format!(
                "{name} has {} value(s) with |z| > {z} (largest |z| = {worst:.4})",
                hits.len()
            ),
            Some(capped(hits.into_iter().map(|(i, _)| i))),
        );
    }
}

fn column(x: &Array2<f64>, j: usize) -> Vec<f64> {
    x.column(j).to_vec()
}

fn regression_checks(
    c: &mut Collector,
    y_true: &[f64],
    y_pred: &[f64],
    features: Option<&Array2<f64>>,
    task_checks: bool,
) {
    let empty_t = c.structure_empty("y_true", y_true.len());
    let empty_p = c.structure_empty("y_pred", y_pred.len());
    if empty_t || empty_p {
        return;
    }
    let bad_t = c.finite("y_true", y_true.iter().copied());
    let bad_p = c.finite("y_pred", y_pred.iter().copied());
    let bad_x = features.is_some_and(|x| c.finite("features", x.iter().copied()));
    c.length("y_true/y_pred", y_true.len(), y_pred.len());
    if let Some(x) = features {
        c.length("y_true/feature rows", y_true.len(), x.nrows());
    }
    if !bad_t && c.on("variance") {
        let first = y_true[0];
        if y_true.iter().all(|&v| v == first) {
            let (severity, tail) = if c.cfg.target_in(R2_FAMILY) {
                (Severity::Error, "the target metric is undefined")
            } else {
                (Severity::Warning, "R2-type metrics would be undefined")
            };
            c.push(
                "variance",
                severity,
                format!("y_true is constant ({first}); {tail}"),
                None,
            );
        }
    }
    if c.cfg.target_in(LOG_METRICS) {
        for (name, v) in [("y_true", y_true), ("y_pred", y_pred)] {
            let neg: Vec<usize> = v.iter().enumerate().filter(|(_, x)| **x < 0.0).map(|(i, _)| i).collect();
            if !neg.is_empty() {
                c.push(
                    "non_negative",
                    Severity::Error,
                    format!("{name} has {} negative value(s) but the target metric takes logarithms", neg.len()),
                    Some(capped(neg)),
                );
            }
        }
    }
    if !bad_t {
        c.outliers("y_true", y_true);
    }
    if !bad_p {
        c.outliers("y_pred", y_pred);
    }
    if task_checks && !bad_x && c.on("multicollinearity") {
        if let Some(x) = features {
            multicollinearity(c, x);
        }
    }
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}

fn multicollinearity(c: &mut Collector, x: &Array2<f64>) {
    let rows = c.sample_indices(x.nrows());
    if rows.len() < 2 {
        return;
    }
    let cols: Vec<Vec<f64>> = (0..x.ncols())
        .map(|j| rows.iter().map(|&i| x[[i, j]]).collect())
        .collect();
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            if let Some(r) = pearson(&cols[i], &cols[j]) {
                if r.abs() > c.cfg.corr_threshold {
                    c.push(
                        "multicollinearity",
                        Severity::Warning,
                        format!(
                            "feature columns {i} and {j} have |r| = {:.4} > {}",
                            r.abs(),
                            c.cfg.corr_threshold
                        ),
                        None,
                    );
                }
            }
        }
    }
}

fn label_counts(labels: &[i64]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

fn classification_checks(
    c: &mut Collector,
    y_true: &[i64],
    y_pred: Option<&[i64]>,
    scores: Option<&Array2<f64>>,
    task_checks: bool,
) {
    if c.structure_empty("y_true", y_true.len()) {
        return;
    }
    if y_pred.is_none() && scores.is_none() {
        c.push(
            "structure",
            Severity::Error,
            "classification needs y_pred or a score matrix".to_string(),
            None,
        );
        return;
    }
    if let Some(p) = y_pred {
        if c.structure_empty("y_pred", p.len()) {
            return;
        }
    }
    if let Some(s) = scores {
        if s.ncols() < 2 {
            c.push(
                "structure",
                Severity::Error,
                format!("score matrix needs at least 2 columns, got {}", s.ncols()),
                None,
            );
            return;
        }
    }
    let bad_scores = scores.is_some_and(|s| c.finite("scores", s.iter().copied()));
    if let Some(p) = y_pred {
        c.length("y_true/y_pred", y_true.len(), p.len());
    }
    if let Some(s) = scores {
        c.length("y_true/score rows", y_true.len(), s.nrows());
    }
    if !task_checks {
        return;
    }
    let counts = label_counts(y_true);
    if let Some(p) = y_pred {
        let unseen: Vec<usize> = p
            .iter()
            .enumerate()
            .filter(|(_, l)| !counts.contains_key(l))
            .map(|(i, _)| i)
            .collect();
        if !unseen.is_empty() {
            let labels: BTreeSet<i64> = unseen.iter().map(|&i| p[i]).collect();
            c.push(
                "label_consistency",
                Severity::Warning,
                format!("y_pred contains labels {labels:?} absent from y_true"),
                Some(capped(unseen)),
            );
        }
    }
    if let Some(s) = scores {
        if !bad_scores && !c.cfg.target_in(&["top_k_accuracy"]) {
            let bad: Vec<usize> = s
                .rows()
                .into_iter()
                .enumerate()
                .filter(|(_, row)| {
                    row.iter().any(|v| !(0.0..=1.0).contains(v)) || (row.sum() - 1.0).abs() > 1e-6
                })
                .map(|(i, _)| i)
                .collect();
            if !bad.is_empty() {
                c.push(
                    "probability",
                    Severity::Error,
                    format!(
                        "{} score row(s) are not probability distributions (entries in [0, 1], sum 1 within 1e-6)",
                        bad.len()
                    ),
                    Some(capped(bad)),
                );
            }
        }
    }
    if counts.len() >= 2 {
        let (min_label, min) = counts.iter().min_by_key(|(_, n)| **n).map(|(l, n)| (*l, *n)).unwrap_or_default();
        let (max_label, max) = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(l, n)| (*l, *n))
            .unwrap_or_default();
        let ratio = min as f64 / max as f64;
        if ratio < c.cfg.imbalance_ratio {
            c.push(
                "imbalance",
                Severity::Warning,
                format!(
                    "class imbalance ratio {ratio:.4} < {} (minority label {min_label}: {min}, majority label {max_label}: {max})",
                    c.cfg.imbalance_ratio
                ),
                None,
            );
        }
    }
}

fn clustering_checks(
    c: &mut Collector,
    labels_true: Option<&[i64]>,
    labels: &[i64],
    features: Option<&Array2<f64>>,
    task_checks: bool,
) {
    if c.structure_empty("labels", labels.len()) {
        return;
    }
    if let Some(t) = labels_true {
        if c.structure_empty("labels_true", t.len()) {
            return;
        }
    }
    let bad_x = features.is_some_and(|x| c.finite("x", x.iter().copied()));
    if let Some(t) = labels_true {
        c.length("labels_true/labels_pred", t.len(), labels.len());
    }
    let Some(x) = features else { return };
    let rows_ok = !c.length("feature rows/labels", x.nrows(), labels.len());
    if !bad_x && x.ncols() > 0 {
        for j in 0..x.ncols() {
            c.outliers(&format!("x column {j}"), &column(x, j));
        }
    }
    if !task_checks {
        return;
    }
    if x.ncols() == 0 {
        c.push("feature_dim", Severity::Error, "feature matrix has no columns".to_string(), None);
    }
    let k = label_counts(labels).len();
    if labels.len() <= k {
        c.push(
            "sample_count",
            Severity::Error,
            format!("{} samples for {k} clusters; need more samples than clusters", labels.len()),
            None,
        );
    }
    if rows_ok && !bad_x && x.ncols() > 0 && c.on("cluster_separation") {
        separation(c, x, labels);
    }
}

fn separation(c: &mut Collector, x: &Array2<f64>, labels: &[i64]) {
    let rows = c.sample_indices(x.nrows());
    let d = x.ncols();
    let n = rows.len() as f64;
    let mut scale = vec![(0.0, 0.0); d];
    for (j, s) in scale.iter_mut().enumerate() {
        let mean = rows.iter().map(|&i| x[[i, j]]).sum::<f64>() / n;
        let sd = (rows.iter().map(|&i| (x[[i, j]] - mean).powi(2)).sum::<f64>() / n).sqrt();
        *s = (mean, if sd > 0.0 { sd } else { 1.0 });
    }
    let mut sums: BTreeMap<i64, (Vec<f64>, usize)> = BTreeMap::new();
    for &i in &rows {
        let e = sums.entry(labels[i]).or_insert_with(|| (vec![0.0; d], 0));
        for (j, &(mean, sd)) in scale.iter().enumerate() {
            e.0[j] += (x[[i, j]] - mean) / sd;
        }
        e.1 += 1;
    }
    let centroids: Vec<(i64, Vec<f64>)> = sums
        .into_iter()
        .map(|(l, (s, m))| (l, s.into_iter().map(|v| v / m as f64).collect()))
        .collect();
    for a in 0..centroids.len() {
        for b in a + 1..centroids.len() {
            let dist = centroids[a]
                .1
                .iter()
                .zip(&centroids[b].1)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
            if dist < 1e-8 {
                c.push(
                    "cluster_separation",
                    Severity::Warning,
                    format!(
                        "clusters {} and {} are indistinguishable (standardized centroid distance {dist:.3e})",
                        centroids[a].0, centroids[b].0
                    ),
                    None,
                );
            }
        }
    }
}

fn segmentation_checks(c: &mut Collector, y_true: &Mask, y_pred: &Mask, task_checks: bool) {
    let e1 = c.structure_empty("y_true mask", y_true.len());
    let e2 = c.structure_empty("y_pred mask", y_pred.len());
    if e1 || e2 || !task_checks {
        return;
    }
    if y_true.shape() != y_pred.shape() {
        c.push(
            "spatial",
            Severity::Error,
            format!("mask shapes differ: {:?} vs {:?}", y_true.shape(), y_pred.shape()),
            None,
        );
    }
    if let (Some(a), Some(b)) = (y_true.spacing(), y_pred.spacing()) {
        if a != b {
            c.push(
                "spatial",
                Severity::Error,
                format!("mask spacings differ: {a:?} vs {b:?}"),
                None,
            );
        }
    }
    for (name, m) in [("y_true", y_true), ("y_pred", y_pred)] {
        let bad: Vec<usize> = m
            .data()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0 && **v != 1)
            .map(|(i, _)| i)
            .collect();
        if !bad.is_empty() {
            c.push(
                "binary",
                Severity::Error,
                format!("{name} has {} value(s) outside {{0, 1}}", bad.len()),
                Some(capped(bad)),
            );
        } else if m.foreground_count() == 0 {
            c.push(
                "empty_mask",
                Severity::Warning,
                format!("{name} has no foreground"),
                None,
            );
        }
    }
}

fn image_checks(c: &mut Collector, reference: &Image, test: &Image, task_checks: bool) {
    let bad_r = c.finite("reference", reference.data().iter().copied());
    let bad_t = c.finite("test", test.data().iter().copied());
    if (reference.height(), reference.width()) != (test.height(), test.width()) {
        c.push(
            "shape",
            Severity::Error,
            format!(
                "image sizes differ: {}x{} vs {}x{}",
                reference.height(),
                reference.width(),
                test.height(),
                test.width()
            ),
            None,
        );
    }
    if !task_checks {
        return;
    }
    if reference.shape().len() != test.shape().len() || reference.channels() != test.channels() {
        c.push(
            "channels",
            Severity::Error,
            format!(
                "channel layouts differ: {:?} vs {:?}",
                reference.shape(),
                test.shape()
            ),
            None,
        );
    }
    if let Some(l) = c.cfg.data_range {
        for (name, img, bad) in [("reference", reference, bad_r), ("test", test, bad_t)] {
            if bad {
                continue;
            }
            let flat: Vec<f64> = img.data().iter().copied().collect();
            let idx = c.sample_indices(flat.len());
            let out: Vec<usize> = idx.into_iter().filter(|&i| flat[i] < 0.0 || flat[i] > l).collect();
            if !out.is_empty() {
                let (lo, hi) = flat
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                c.push(
                    "pixel_range",
                    Severity::Warning,
                    format!("{name} values span [{lo}, {hi}], outside the declared range [0, {l}]"),
                    Some(capped(out)),
                );
            }
        }
    }
}

fn sample_axis_len(inputs: &Inputs) -> usize {
    match inputs {
        Inputs::Regression { y_true, .. } => y_true.len(),
        Inputs::Classification { y_true, .. } => y_true.len(),
        Inputs::Clustering { labels_pred, .. } => labels_pred.len(),
        Inputs::Segmentation { y_true, .. } => y_true.len(),
        Inputs::Image { reference, .. } => reference.data().len(),
    }
}

fn run(inputs: &Inputs, cfg: &ValidationConfig, task_checks: bool) -> Result<ValidationReport> {
    cfg.check()?;
    let mut c = Collector::new(cfg, inputs.largest_len(), sample_axis_len(inputs));
    match inputs {
        Inputs::Regression { y_true, y_pred, features } => {
            regression_checks(&mut c, y_true, y_pred, features.as_ref(), task_checks)
        }
        Inputs::Classification { y_true, y_pred, scores } => {
            classification_checks(&mut c, y_true, y_pred.as_deref(), scores.as_ref(), task_checks)
        }
        Inputs::Clustering { labels_true, labels_pred, features } => clustering_checks(
            &mut c,
            labels_true.as_deref(),
            labels_pred,
            features.as_ref(),
            task_checks,
        ),
        Inputs::Segmentation { y_true, y_pred } => segmentation_checks(&mut c, y_true, y_pred, task_checks),
        Inputs::Image { reference, test } => image_checks(&mut c, reference, test, task_checks),
    }
    Ok(c.finish())
}

/// Shared checks only: structure, finiteness, lengths, variance,
/// non-negativity, outliers and sampling.
pub fn validate_core(inputs: &Inputs, config: &ValidationConfig) -> Result<ValidationReport> {
    run(inputs, config, false)
}

pub fn validate_regression(
    y_true: &[f64],
    y_pred: &[f64],
    features: Option<&Array2<f64>>,
    config: &ValidationConfig,
) -> Result<ValidationReport> {
    let inputs = Inputs::Regression {
        y_true: y_true.to_vec(),
        y_pred: y_pred.to_vec(),
        features: features.cloned(),
    };
    run(&inputs, config, true)
}

pub fn validate_classification(
    y_true: &[i64],
    y_pred: Option<&[i64]>,
    proba: Option<&Array2<f64>>,
    config: &ValidationConfig,
) -> Result<ValidationReport> {
    let inputs = Inputs::Classification {
        y_true: y_true.to_vec(),
        y_pred: y_pred.map(<[i64]>::to_vec),
        scores: proba.cloned(),
    };
    run(&inputs, config, true)
}

pub fn validate_clustering(x: &Array2<f64>, labels: &[i64], config: &ValidationConfig) -> Result<ValidationReport> {
    run(&Inputs::internal(x.clone(), labels.to_vec()), config, true)
}

pub fn validate_segmentation(y_true: &Mask, y_pred: &Mask, config: &ValidationConfig) -> Result<ValidationReport> {
    run(&Inputs::segmentation(y_true.clone(), y_pred.clone()), config, true)
}

pub fn validate_image(
    reference: &Image,
    test: &Image,
    declared_range: Option<f64>,
    config: &ValidationConfig,
) -> Result<ValidationReport> {
    let config = ValidationConfig {
        data_range: declared_range.or(config.data_range),
        ..config.clone()
    };
    run(&Inputs::image(reference.clone(), test.clone()), &config, true)
}

/// Shared and task-specific checks for `task`. Findings are ordered errors,
/// then warnings, then info.
pub fn validate_all(task: Task, inputs: &Inputs, config: &ValidationConfig) -> Result<ValidationReport> {
    if inputs.task() != task {
        return Err(wrong_task(task, inputs.task()));
    }
    run(inputs, config, true)
}
