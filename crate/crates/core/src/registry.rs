//! Metric registry: descriptors for discovery and a uniform calling
//! convention over every built-in metric.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::classification::{self, ClassificationParams};
use crate::clustering::{self, Distance, InternalIndexParams};
use crate::error::{EvaluationError, Result};
use crate::image::{self, PsnrParams, SsimParams};
use crate::inputs::{wrong_task, Inputs};
use crate::regression::{self, HuberParams, PinballParams, R2Params, TweedieParams};
use crate::segmentation::{self, HausdorffParams};
use crate::types::{AverageMode, Task};
use crate::value::{Evaluation, MetricValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Scalar,
    PerClassOrScalar,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Boolean,
    Integer,
    Real,
    String,
    IntegerList,
    RealList,
}

impl ParamKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Boolean => "boolean",
            Self::Integer => "integer",
            Self::Real => "real",
            Self::String => "string",
            Self::IntegerList => "integer_list",
            Self::RealList => "real_list",
        }
    }
}

/// A parameter value. `Null` marks an optional parameter left unset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Null,
    Bool(bool),
    Int(u64),
    Real(f64),
    Text(String),
    Ints(Vec<i64>),
    Reals(Vec<f64>),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(",");
        match self {
            Self::Null => f.write_str("null"),
            Self::Bool(b) => write!(f, "{b}"),
            Self::Int(i) => write!(f, "{i}"),
            Self::Real(r) => write!(f, "{r}"),
            Self::Text(s) => f.write_str(s),
            Self::Ints(v) => f.write_str(&join(v.iter().map(i64::to_string).collect())),
            Self::Reals(v) => f.write_str(&join(v.iter().map(f64::to_string).collect())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    pub default: ParamValue,
    pub constraint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDescriptor {
    pub name: String,
    pub task: Task,
    pub value_kind: ValueKind,
    pub params: Vec<ParamSpec>,
    /// Input roles the metric reads, in CLI order.
    pub inputs: Vec<String>,
    pub doc: String,
}

impl MetricDescriptor {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }
}

/// Raw parameter strings keyed by name, as given on a command line.
pub type RawParams = BTreeMap<String, String>;

pub type MetricFn = Arc<dyn Fn(&Inputs, &ResolvedParams) -> Result<Evaluation> + Send + Sync>;

/// Parameters parsed against a descriptor, with defaults filled in.
///
/// Reads are recorded so tests can compare what a metric consumed with what
/// its descriptor declares.
#[derive(Debug)]
pub struct ResolvedParams {
    values: BTreeMap<String, ParamValue>,
    accessed: RefCell<BTreeSet<String>>,
}

fn invalid(msg: String) -> EvaluationError {
    EvaluationError::InvalidParameter(msg)
}

fn parse_value(spec: &ParamSpec, raw: &str) -> Result<ParamValue> {
    let name = &spec.name;
    let raw = raw.trim();
    let bad = |what: &str| invalid(format!("parameter `{name}` expects {what}, got `{raw}`"));
    Ok(match spec.kind {
        ParamKind::Boolean => match raw.to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" => ParamValue::Bool(true),
            "false" | "0" | "no" => ParamValue::Bool(false),
            _ => return Err(bad("a boolean")),
        },
        ParamKind::Integer => ParamValue::Int(raw.parse().map_err(|_| bad("a non-negative integer"))?),
        ParamKind::Real => ParamValue::Real(raw.parse().map_err(|_| bad("a real number"))?),
        ParamKind::String => ParamValue::Text(raw.to_string()),
        ParamKind::IntegerList => ParamValue::Ints(
            raw.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| bad("a comma-separated integer list")))
                .collect::<Result<_>>()?,
        ),
        ParamKind::RealList => ParamValue::Reals(
            raw.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| bad("a comma-separated real list")))
                .collect::<Result<_>>()?,
        ),
    })
}

impl ResolvedParams {
    pub fn resolve(descriptor: &MetricDescriptor, raw: &RawParams) -> Result<Self> {
        for key in raw.keys() {
            if descriptor.param(key).is_none() {
                let known: Vec<&str> = descriptor.params.iter().map(|p| p.name.as_str()).collect();
                return Err(invalid(format!(
                    "metric `{}` has no parameter `{key}` (accepted: {known:?})",
                    descriptor.name
                )));
            }
        }
        let mut values = BTreeMap::new();
        for spec in &descriptor.params {
            let value = match raw.get(&spec.name) {
                Some(r) => parse_value(spec, r)?,
                None => spec.default.clone(),
            };
            values.insert(spec.name.clone(), value);
        }
        Ok(Self {
            values,
            accessed: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn values(&self) -> &BTreeMap<String, ParamValue> {
        &self.values
    }

    /// Names read so far.
    pub fn accessed(&self) -> BTreeSet<String> {
        self.accessed.borrow().clone()
    }

    fn get(&self, name: &str) -> Result<&ParamValue> {
        self.accessed.borrow_mut().insert(name.to_string());
        self.values
            .get(name)
            .ok_or_else(|| invalid(format!("parameter `{name}` is not declared for this metric")))
    }

    fn mismatch(name: &str, v: &ParamValue) -> EvaluationError {
        invalid(format!("parameter `{name}` has unexpected value `{v}`"))
    }

    pub fn bool(&self, name: &str) -> Result<bool> {
        match self.get(name)? {
            ParamValue::Bool(b) => Ok(*b),
            v => Err(Self::mismatch(name, v)),
        }
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        self.opt_real(name)?
            .ok_or_else(|| invalid(format!("parameter `{name}` is required")))
    }

    pub fn opt_real(&self, name: &str) -> Result<Option<f64>> {
        match self.get(name)? {
            ParamValue::Null => Ok(None),
            ParamValue::Real(r) => Ok(Some(*r)),
            ParamValue::Int(i) => Ok(Some(*i as f64)),
            v => Err(Self::mismatch(name, v)),
        }
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        self.opt_usize(name)?
            .ok_or_else(|| invalid(format!("parameter `{name}` is required")))
    }

    pub fn opt_usize(&self, name: &str) -> Result<Option<usize>> {
        match self.get(name)? {
            ParamValue::Null => Ok(None),
            ParamValue::Int(i) => usize::try_from(*i)
                .map(Some)
                .map_err(|_| invalid(format!("parameter `{name}` is too large"))),
            v => Err(Self::mismatch(name, v)),
        }
    }

    pub fn text(&self, name: &str) -> Result<&str> {
        match self.get(name)? {
            ParamValue::Text(s) => Ok(s),
            v => Err(Self::mismatch(name, v)),
        }
    }

    pub fn opt_ints(&self, name: &str) -> Result<Option<Vec<i64>>> {
        match self.get(name)? {
            ParamValue::Null => Ok(None),
            ParamValue::Ints(v) => Ok(Some(v.clone())),
            v => Err(Self::mismatch(name, v)),
        }
    }

    pub fn opt_reals(&self, name: &str) -> Result<Option<Vec<f64>>> {
        match self.get(name)? {
            ParamValue::Null => Ok(None),
            ParamValue::Reals(v) => Ok(Some(v.clone())),
            ParamValue::Ints(v) => Ok(Some(v.iter().map(|&i| i as f64).collect())),
            v => Err(Self::mismatch(name, v)),
        }
    }
}

struct Entry {
    descriptor: MetricDescriptor,
    func: MetricFn,
}

/// Name-keyed metric table. Built once, then read-only.
#[derive(Default)]
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("metrics", &self.entries.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A registry holding every built-in metric.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        builtins::register_all(&mut reg).expect("built-in metric names are unique");
        reg
    }

    pub fn register(&mut self, descriptor: MetricDescriptor, func: MetricFn) -> Result<()> {
        if self.entries.contains_key(&descriptor.name) {
            return Err(invalid(format!("metric `{}` is already registered", descriptor.name)));
        }
        let mut seen = BTreeSet::new();
        for p in &descriptor.params {
            if !seen.insert(p.name.as_str()) {
                return Err(invalid(format!(
                    "metric `{}` declares parameter `{}` twice",
                    descriptor.name, p.name
                )));
            }
        }
        self.entries.insert(descriptor.name.clone(), Entry { descriptor, func });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Metric names in ascending order, optionally restricted to one task.
    pub fn list(&self, task: Option<Task>) -> Vec<String> {
        self.entries
            .values()
            .filter(|e| task.is_none_or(|t| e.descriptor.task == t))
            .map(|e| e.descriptor.name.clone())
            .collect()
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &MetricDescriptor> {
        self.entries.values().map(|e| &e.descriptor)
    }

    pub fn describe(&self, name: &str) -> Result<&MetricDescriptor> {
        self.entry(name).map(|e| &e.descriptor)
    }

    fn entry(&self, name: &str) -> Result<&Entry> {
        self.entries.get(name).ok_or_else(|| {
            let mut near: Vec<(f64, &str)> = self
                .entries
                .keys()
                .map(|k| (strsim::jaro_winkler(name, k), k.as_str()))
                .filter(|(score, k)| *score >= 0.8 || k.contains(name) || (!name.is_empty() && name.contains(*k)))
                .collect();
            near.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
            let names: Vec<&str> = near.into_iter().take(5).map(|(_, k)| k).collect();
            let hint = if names.is_empty() {
                String::new()
            } else {
                format!("; did you mean {}?", names.join(", "))
            };
            EvaluationError::LabelError(format!("unknown metric `{name}`{hint}"))
        })
    }

    /// Resolves parameters and runs the metric.
    pub fn evaluate(&self, name: &str, inputs: &Inputs, raw: &RawParams) -> Result<Evaluation> {
        let entry = self.entry(name)?;
        let params = ResolvedParams::resolve(&entry.descriptor, raw)?;
        self.evaluate_resolved(name, inputs, &params)
    }

    pub fn evaluate_resolved(&self, name: &str, inputs: &Inputs, params: &ResolvedParams) -> Result<Evaluation> {
        let entry = self.entry(name)?;
        if inputs.task() != entry.descriptor.task {
            return Err(wrong_task(entry.descriptor.task, inputs.task()));
        }
        (entry.func)(inputs, params)
    }
}

static GLOBAL: OnceLock<Registry> = OnceLock::new();

/// The process-wide registry of built-in metrics.
pub fn registry() -> &'static Registry {
    GLOBAL.get_or_init(Registry::with_builtins)
}

/// Sorted metric names, optionally for one task given by name.
pub fn list_metrics(task: Option<&str>) -> Result<Vec<String>> {
    let task = task.map(str::parse::<Task>).transpose()?;
    Ok(registry().list(task))
}

pub fn describe_metric(name: &str) -> Result<MetricDescriptor> {
    registry().describe(name).cloned()
}

mod builtins {
    use super::*;

    fn spec(name: &str) -> ParamSpec {
        let (kind, default, constraint) = match name {
            "average" => (ParamKind::String, ParamValue::Text("none".into()), "one of none, macro, micro, weighted"),
            "beta" => (ParamKind::Real, ParamValue::Real(1.0), "> 0"),
            "zero_division" => (ParamKind::Real, ParamValue::Real(0.0), "0 or 1"),
            "labels" => (ParamKind::IntegerList, ParamValue::Null, "strictly ascending; covers every observed label"),
            "k" => (ParamKind::Integer, ParamValue::Int(2), ">= 1 and <= number of score columns"),
            "eps" => (ParamKind::Real, ParamValue::Real(1e-15), "0 < eps < 1e-3"),
            "delta" => (ParamKind::Real, ParamValue::Real(1.0), "> 0"),
            "power" => (ParamKind::Real, ParamValue::Real(0.0), "<= 0 or >= 1"),
            "quantile" => (ParamKind::Real, ParamValue::Real(0.5), "0 < quantile < 1"),
            "adjusted" => (ParamKind::Boolean, ParamValue::Bool(false), "requires n_features when true"),
            "n_features" => (ParamKind::Integer, ParamValue::Null, ">= 1 and < n - 1"),
            "distance" => (ParamKind::String, ParamValue::Text("euclidean".into()), "euclidean or manhattan"),
            "percentile" => (ParamKind::Real, ParamValue::Real(100.0), "0 < percentile <= 100"),
            "spacing" => (ParamKind::RealList, ParamValue::Null, "one positive entry per mask axis; defaults to 1"),
            "window_size" => (ParamKind::Integer, ParamValue::Int(7), "odd, >= 3, <= min(height, width)"),
            "data_range" => (ParamKind::Real, ParamValue::Null, "> 0; inferred as 255 for 8-bit images"),
            "k1" => (ParamKind::Real, ParamValue::Real(0.01), "> 0"),
            "k2" => (ParamKind::Real, ParamValue::Real(0.03), "> 0"),
            other => unreachable!("no catalog entry for parameter {other}"),
        };
        ParamSpec {
            name: name.to_string(),
            kind,
            default,
            constraint: constraint.to_string(),
        }
    }

    struct Def {
        name: &'static str,
        task: Task,
        kind: ValueKind,
        inputs: &'static [&'static str],
        params: &'static [&'static str],
        doc: &'static str,
    }

    fn add<F>(reg: &mut Registry, d: Def, f: F) -> Result<()>
    where
        F: Fn(&Inputs, &ResolvedParams) -> Result<Evaluation> + Send + Sync + 'static,
    {
        let descriptor = MetricDescriptor {
            name: d.name.to_string(),
            task: d.task,
            value_kind: d.kind,
            params: d.params.iter().map(|p| spec(p)).collect(),
            inputs: d.inputs.iter().map(|s| s.to_string()).collect(),
            doc: d.doc.to_string(),
        };
        reg.register(descriptor, Arc::new(f))
    }

    const REG_IN: &[&str] = &["y_true", "y_pred"];
    const CLS_IN: &[&str] = &["y_true", "y_pred"];
    const SCORE_IN: &[&str] = &["y_true", "scores"];
    const EXT_IN: &[&str] = &["labels_true", "labels_pred"];
    const INT_IN: &[&str] = &["x", "labels"];
    const SEG_IN: &[&str] = &["y_true", "y_pred"];
    const IMG_IN: &[&str] = &["reference", "test"];

    fn plain_regression(
        reg: &mut Registry,
        name: &'static str,
        doc: &'static str,
        f: fn(&[f64], &[f64]) -> Result<f64>,
    ) -> Result<()> {
        let d = Def { name, task: Task::Regression, kind: ValueKind::Scalar, inputs: REG_IN, params: &[], doc };
        add(reg, d, move |inp, _| {
            let (t, p) = inp.regression_pair()?;
            f(t, p).map(Evaluation::scalar)
        })
    }

    fn classification_params(p: &ResolvedParams, names: &[&str]) -> Result<ClassificationParams> {
        let mut c = ClassificationParams::default();
        for name in names {
            match *name {
                "average" => c.average = p.text("average")?.parse::<AverageMode>()?,
                "beta" => c.beta = p.real("beta")?,
                "zero_division" => c.zero_division = p.real("zero_division")?,
                "labels" => c.labels = p.opt_ints("labels")?,
                "k" => c.k = p.usize("k")?,
                "eps" => c.eps = p.real("eps")?,
                other => unreachable!("{other} is not a classification parameter"),
            }
        }
        Ok(c)
    }

    fn averaged(
        reg: &mut Registry,
        name: &'static str,
        params: &'static [&'static str],
        doc: &'static str,
        f: fn(&[i64], &[i64], &ClassificationParams) -> Result<Evaluation>,
    ) -> Result<()> {
        let d = Def { name, task: Task::Classification, kind: ValueKind::PerClassOrScalar, inputs: CLS_IN, params, doc };
        add(reg, d, move |inp, p| {
            let c = classification_params(p, params)?;
            let (t, y) = inp.label_pair()?;
            f(t, y, &c)
        })
    }

    fn plain_labels(
        reg: &mut Registry,
        name: &'static str,
        doc: &'static str,
        f: fn(&[i64], &[i64]) -> Result<f64>,
    ) -> Result<()> {
        let d = Def { name, task: Task::Classification, kind: ValueKind::Scalar, inputs: CLS_IN, params: &[], doc };
        add(reg, d, move |inp, _| {
            let (t, y) = inp.label_pair()?;
            f(t, y).map(Evaluation::scalar)
        })
    }

    fn external(
        reg: &mut Registry,
        name: &'static str,
        doc: &'static str,
        f: fn(&[i64], &[i64]) -> Result<f64>,
    ) -> Result<()> {
        let d = Def { name, task: Task::Clustering, kind: ValueKind::Scalar, inputs: EXT_IN, params: &[], doc };
        add(reg, d, move |inp, _| {
            let (t, p) = inp.partition_pair()?;
            f(t, p).map(Evaluation::scalar)
        })
    }

    fn overlap(
        reg: &mut Registry,
        name: &'static str,
        doc: &'static str,
        f: fn(&crate::Mask, &crate::Mask) -> Result<Evaluation>,
    ) -> Result<()> {
        let d = Def { name, task: Task::Segmentation, kind: ValueKind::Scalar, inputs: SEG_IN, params: &[], doc };
        add(reg, d, move |inp, _| {
            let (t, p) = inp.masks()?;
            f(t, p)
        })
    }

    pub(super) fn register_all(reg: &mut Registry) -> Result<()> {
        regression_metrics(reg)?;
        classification_metrics(reg)?;
        clustering_metrics(reg)?;
        segmentation_metrics(reg)?;
        image_metrics(reg)
    }

    fn regression_metrics(reg: &mut Registry) -> Result<()> {
        plain_regression(reg, "mae", "Mean absolute error, mean |y - y_hat|.", regression::mae)?;
        plain_regression(reg, "mse", "Mean squared error, mean (y - y_hat)^2.", regression::mse)?;
        plain_regression(
            reg,
            "mape",
            "Mean absolute percentage error as a fraction, mean |(y - y_hat) / y|. Zero targets are a domain error.",
            regression::mape,
        )?;
        plain_regression(
            reg,
            "msle",
            "Mean squared log error, mean (ln(1 + y) - ln(1 + y_hat))^2. Inputs must be non-negative.",
            regression::msle,
        )?;
        plain_regression(
            reg,
            "mean_bias_deviation",
            "Mean of y_hat - y; positive values mean over-prediction.",
            regression::mean_bias_deviation,
        )?;
        plain_regression(
            reg,
            "median_absolute_error",
            "Median of |y - y_hat|; the mean of the two central values for even counts.",
            regression::median_absolute_error,
        )?;
        plain_regression(
            reg,
            "smape",
            "Symmetric MAPE as a fraction, mean 2|y - y_hat| / (|y| + |y_hat|) with 0/0 terms counted as 0.",
            regression::smape,
        )?;
        plain_regression(
            reg,
            "relative_squared_error",
            "Sum of squared residuals over the total sum of squares around mean(y).",
            regression::relative_squared_error,
        )?;
        add(
            reg,
            Def {
                name: "r2",
                task: Task::Regression,
                kind: ValueKind::Scalar,
                inputs: REG_IN,
                params: &["adjusted", "n_features"],
                doc: "Coefficient of determination 1 - RSE. With adjusted=true returns 1 - (1 - R2)(n - 1)/(n - p - 1) for p = n_features.",
            },
            |inp, p| {
                let params = R2Params { adjusted: p.bool("adjusted")?, n_features: p.opt_usize("n_features")? };
                let (t, y) = inp.regression_pair()?;
                regression::r2(t, y, &params).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "adjusted_r2",
                task: Task::Regression,
                kind: ValueKind::Scalar,
                inputs: REG_IN,
                params: &["n_features"],
                doc: "Adjusted R2, 1 - (1 - R2)(n - 1)/(n - p - 1). n_features (p) is required.",
            },
            |inp, p| {
                let params = R2Params { adjusted: true, n_features: p.opt_usize("n_features")? };
                let (t, y) = inp.regression_pair()?;
                regression::r2(t, y, &params).map(Evaluation::scalar)
            },
        )?;
        plain_regression(
            reg,
            "explained_variance",
            "1 - Var(y - y_hat) / Var(y) with population variances.",
            regression::explained_variance,
        )?;
        add(
            reg,
            Def {
                name: "huber_loss",
                task: Task::Regression,
                kind: ValueKind::Scalar,
                inputs: REG_IN,
                params: &["delta"],
                doc: "Mean Huber loss: r^2/2 when |r| <= delta, else delta(|r| - delta/2).",
            },
            |inp, p| {
                let params = HuberParams { delta: p.real("delta")? };
                let (t, y) = inp.regression_pair()?;
                regression::huber_loss(t, y, &params).map(Evaluation::scalar)
            },
        )?;
        plain_regression(
            reg,
            "log_cosh_loss",
            "Mean ln cosh(y_hat - y), evaluated in an overflow-safe form.",
            regression::log_cosh_loss,
        )?;
        plain_regression(reg, "max_error", "Largest absolute residual.", regression::max_error)?;
        add(
            reg,
            Def {
                name: "mean_tweedie_deviance",
                task: Task::Regression,
                kind: ValueKind::Scalar,
                inputs: REG_IN,
                params: &["power"],
                doc: "Mean Tweedie unit deviance. power 0 is squared error, 1 Poisson, 2 Gamma.",
            },
            |inp, p| {
                let params = TweedieParams { power: p.real("power")? };
                let (t, y) = inp.regression_pair()?;
                regression::mean_tweedie_deviance(t, y, &params).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "mean_pinball_loss",
                task: Task::Regression,
                kind: ValueKind::Scalar,
                inputs: REG_IN,
                params: &["quantile"],
                doc: "Mean quantile loss, alpha max(y - y_hat, 0) + (1 - alpha) max(y_hat - y, 0).",
            },
            |inp, p| {
                let params = PinballParams { quantile: p.real("quantile")? };
                let (t, y) = inp.regression_pair()?;
                regression::mean_pinball_loss(t, y, &params).map(Evaluation::scalar)
            },
        )
    }

    fn classification_metrics(reg: &mut Registry) -> Result<()> {
        plain_labels(reg, "accuracy", "Fraction of samples with y_pred == y_true.", classification::accuracy)?;
        averaged(
            reg,
            "precision",
            &["average", "zero_division", "labels"],
            "Per-class TP / (TP + FP). average=none returns a map keyed by label; macro, micro and weighted return a scalar.",
            classification::precision,
        )?;
        averaged(
            reg,
            "recall",
            &["average", "zero_division", "labels"],
            "Per-class TP / (TP + FN), averaged like precision.",
            classification::recall,
        )?;
        averaged(
            reg,
            "f1",
            &["average", "zero_division", "labels"],
            "Per-class harmonic mean of precision and recall, averaged like precision.",
            classification::f1,
        )?;
        averaged(
            reg,
            "fbeta",
            &["average", "beta", "zero_division", "labels"],
            "Per-class (1 + beta^2)PR / (beta^2 P + R), averaged like precision.",
            classification::fbeta,
        )?;
        add(
            reg,
            Def {
                name: "balanced_accuracy",
                task: Task::Classification,
                kind: ValueKind::Scalar,
                inputs: CLS_IN,
                params: &[],
                doc: "Unweighted mean of per-class recall over the observed labels, without chance adjustment.",
            },
            |inp, _| {
                let (t, y) = inp.label_pair()?;
                classification::balanced_accuracy(t, y)
            },
        )?;
        averaged(
            reg,
            "mcc",
            &["average", "labels"],
            "Matthews correlation. average=none gives one-vs-rest values per class; micro gives the global multiclass coefficient; macro and weighted average the per-class values.",
            classification::mcc,
        )?;
        plain_labels(
            reg,
            "cohens_kappa",
            "(p_o - p_e) / (1 - p_e) with chance agreement p_e from the marginals.",
            classification::cohens_kappa,
        )?;
        averaged(
            reg,
            "jaccard",
            &["average", "zero_division", "labels"],
            "Per-class TP / (TP + FP + FN), averaged like precision.",
            classification::jaccard,
        )?;
        plain_labels(reg, "hamming_loss", "Fraction of mismatched labels.", classification::hamming_loss)?;
        add(
            reg,
            Def {
                name: "log_loss",
                task: Task::Classification,
                kind: ValueKind::Scalar,
                inputs: SCORE_IN,
                params: &["labels", "eps"],
                doc: "Mean negative log probability of the true label. Rows must sum to 1; entries are clipped to [eps, 1 - eps] and renormalized. Columns follow the sorted labels.",
            },
            |inp, p| {
                let c = classification_params(p, &["labels", "eps"])?;
                let (t, s) = inp.score_pair()?;
                classification::log_loss(t, s.view(), &c).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "confusion_matrix",
                task: Task::Classification,
                kind: ValueKind::Matrix,
                inputs: CLS_IN,
                params: &["labels"],
                doc: "Counts with rows as true labels and columns as predicted labels, both in ascending label order.",
            },
            |inp, p| {
                let labels = p.opt_ints("labels")?;
                let (t, y) = inp.label_pair()?;
                let cm = classification::confusion_matrix(t, y, labels.as_deref())?;
                Ok(Evaluation::with_warnings(MetricValue::Matrix(cm.to_rows()), Vec::new()))
            },
        )?;
        add(
            reg,
            Def {
                name: "top_k_accuracy",
                task: Task::Classification,
                kind: ValueKind::Scalar,
                inputs: SCORE_IN,
                params: &["labels", "k"],
                doc: "Fraction of samples whose true-label score ranks within the top k of its row; ties count as hits.",
            },
            |inp, p| {
                let c = classification_params(p, &["labels", "k"])?;
                let (t, s) = inp.score_pair()?;
                classification::top_k_accuracy(t, s.view(), &c).map(Evaluation::scalar)
            },
        )
    }

    fn clustering_metrics(reg: &mut Registry) -> Result<()> {
        external(
            reg,
            "rand_score",
            "Fraction of sample pairs on which the two partitions agree.",
            clustering::rand_score,
        )?;
        external(
            reg,
            "adjusted_rand_index",
            "Rand index corrected for chance; 1 for identical partitions.",
            clustering::adjusted_rand_index,
        )?;
        external(reg, "mutual_info", "Mutual information in nats.", clustering::mutual_info)?;
        external(
            reg,
            "normalized_mutual_info",
            "Mutual information over the arithmetic mean of the two entropies.",
            clustering::normalized_mutual_info,
        )?;
        external(
            reg,
            "adjusted_mutual_info",
            "Mutual information corrected by its exact expectation under random labelings, arithmetic-mean normalized.",
            clustering::adjusted_mutual_info,
        )?;
        add(
            reg,
            Def {
                name: "silhouette",
                task: Task::Clustering,
                kind: ValueKind::Scalar,
                inputs: INT_IN,
                params: &["distance"],
                doc: "Mean silhouette coefficient (b - a) / max(a, b); singleton clusters score 0.",
            },
            |inp, p| {
                let params = InternalIndexParams { distance: p.text("distance")?.parse::<Distance>()? };
                let (x, l) = inp.feature_labels()?;
                clustering::silhouette(x.view(), l, &params).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "calinski_harabasz",
                task: Task::Clustering,
                kind: ValueKind::Scalar,
                inputs: INT_IN,
                params: &[],
                doc: "Between-cluster over within-cluster dispersion, each divided by its degrees of freedom.",
            },
            |inp, _| {
                let (x, l) = inp.feature_labels()?;
                clustering::calinski_harabasz(x.view(), l).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "davies_bouldin",
                task: Task::Clustering,
                kind: ValueKind::Scalar,
                inputs: INT_IN,
                params: &[],
                doc: "Mean over clusters of the worst (s_i + s_j) / d(c_i, c_j) ratio; lower is better.",
            },
            |inp, _| {
                let (x, l) = inp.feature_labels()?;
                clustering::davies_bouldin(x.view(), l).map(Evaluation::scalar)
            },
        )?;
        external(
            reg,
            "homogeneity",
            "MI / H(true); 1 when every cluster holds a single class.",
            clustering::homogeneity,
        )?;
        external(
            reg,
            "completeness",
            "MI / H(pred); 1 when every class falls in a single cluster.",
            clustering::completeness,
        )?;
        external(reg, "v_measure", "Harmonic mean of homogeneity and completeness.", clustering::v_measure)?;
        external(
            reg,
            "fowlkes_mallows",
            "Geometric mean of pair precision and pair recall.",
            clustering::fowlkes_mallows,
        )
    }

    fn segmentation_metrics(reg: &mut Registry) -> Result<()> {
        overlap(
            reg,
            "dice_score",
            "2|A and B| / (|A| + |B|). Two empty masks score 1 and one empty mask scores 0, both with a warning.",
            segmentation::dice_score,
        )?;
        overlap(
            reg,
            "iou_score",
            "|A and B| / |A or B|. Two empty masks score 1 and one empty mask scores 0, both with a warning.",
            segmentation::iou_score,
        )?;
        overlap(reg, "sensitivity", "Voxel-wise TP / (TP + FN).", segmentation::sensitivity)?;
        overlap(reg, "specificity", "Voxel-wise TN / (TN + FP).", segmentation::specificity)?;
        overlap(reg, "segmentation_precision", "Voxel-wise TP / (TP + FP).", segmentation::precision)?;
        add(
            reg,
            Def {
                name: "hausdorff_distance",
                task: Task::Segmentation,
                kind: ValueKind::Scalar,
                inputs: SEG_IN,
                params: &["percentile", "spacing"],
                doc: "Hausdorff distance between mask boundaries in physical units. percentile=95 gives HD95. Infinite when either mask is empty.",
            },
            |inp, p| {
                let params = HausdorffParams { percentile: p.real("percentile")?, spacing: p.opt_reals("spacing")? };
                let (t, y) = inp.masks()?;
                segmentation::hausdorff_distance(t, y, &params)
            },
        )
    }

    fn image_metrics(reg: &mut Registry) -> Result<()> {
        add(
            reg,
            Def {
                name: "psnr",
                task: Task::Image,
                kind: ValueKind::Scalar,
                inputs: IMG_IN,
                params: &["data_range"],
                doc: "Peak signal-to-noise ratio 10 log10(L^2 / MSE) in dB; infinite for identical images.",
            },
            |inp, p| {
                let params = PsnrParams { data_range: p.opt_real("data_range")? };
                let (r, t) = inp.images()?;
                image::psnr(r, t, &params).map(Evaluation::scalar)
            },
        )?;
        add(
            reg,
            Def {
                name: "ssim",
                task: Task::Image,
                kind: ValueKind::Scalar,
                inputs: IMG_IN,
                params: &["window_size", "data_range", "k1", "k2"],
                doc: "Mean structural similarity over valid positions of a uniform window with sample covariances. Channels are averaged.",
            },
            |inp, p| {
                let params = SsimParams {
                    window_size: p.usize("window_size")?,
                    data_range: p.opt_real("data_range")?,
                    k1: p.real("k1")?,
                    k2: p.real("k2")?,
                };
                let (r, t) = inp.images()?;
                image::ssim(r, t, &params).map(Evaluation::scalar)
            },
        )
    }
}
