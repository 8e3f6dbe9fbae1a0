//! Task-typed input bundles shared by the registry, validation and CLI.

use ndarray::Array2;

use crate::error::{EvaluationError, Result};
use crate::types::{Image, Mask, Task};

#[derive(Debug, Clone, PartialEq)]
pub enum Inputs {
    Regression {
        y_true: Vec<f64>,
        y_pred: Vec<f64>,
        features: Option<Array2<f64>>,
    },
    Classification {
        y_true: Vec<i64>,
        y_pred: Option<Vec<i64>>,
        /// Probabilities or scores, one column per class.
        scores: Option<Array2<f64>>,
    },
    /// External indices use both label vectors; internal indices use
    /// `features` with `labels_pred`.
    Clustering {
        labels_true: Option<Vec<i64>>,
        labels_pred: Vec<i64>,
        features: Option<Array2<f64>>,
    },
    Segmentation {
        y_true: Mask,
        y_pred: Mask,
    },
    Image {
        reference: Image,
        test: Image,
    },
}

fn missing(role: &str) -> EvaluationError {
    EvaluationError::InvalidParameter(format!("missing input `{role}`"))
}

impl Inputs {
    pub fn regression(y_true: Vec<f64>, y_pred: Vec<f64>) -> Self {
        Self::Regression { y_true, y_pred, features: None }
    }

    pub fn classification(y_true: Vec<i64>, y_pred: Vec<i64>) -> Self {
        Self::Classification { y_true, y_pred: Some(y_pred), scores: None }
    }

    pub fn scores(y_true: Vec<i64>, scores: Array2<f64>) -> Self {
        Self::Classification { y_true, y_pred: None, scores: Some(scores) }
    }

    pub fn external(labels_true: Vec<i64>, labels_pred: Vec<i64>) -> Self {
        Self::Clustering { labels_true: Some(labels_true), labels_pred, features: None }
    }

    pub fn internal(x: Array2<f64>, labels: Vec<i64>) -> Self {
        Self::Clustering { labels_true: None, labels_pred: labels, features: Some(x) }
    }

    pub fn segmentation(y_true: Mask, y_pred: Mask) -> Self {
        Self::Segmentation { y_true, y_pred }
    }

    pub fn image(reference: Image, test: Image) -> Self {
        Self::Image { reference, test }
    }

    pub fn task(&self) -> Task {
        match self {
            Self::Regression { .. } => Task::Regression,
            Self::Classification { .. } => Task::Classification,
            Self::Clustering { .. } => Task::Clustering,
            Self::Segmentation { .. } => Task::Segmentation,
            Self::Image { .. } => Task::Image,
        }
    }

    /// Element count of the largest array in the bundle.
    pub fn largest_len(&self) -> usize {
        match self {
            Self::Regression { y_true, y_pred, features } => y_true
                .len()
                .max(y_pred.len())
                .max(features.as_ref().map_or(0, |f| f.len())),
            Self::Classification { y_true, y_pred, scores } => y_true
                .len()
                .max(y_pred.as_ref().map_or(0, Vec::len))
                .max(scores.as_ref().map_or(0, |s| s.len())),
            Self::Clustering { labels_true, labels_pred, features } => labels_pred
                .len()
                .max(labels_true.as_ref().map_or(0, Vec::len))
                .max(features.as_ref().map_or(0, |f| f.len())),
            Self::Segmentation { y_true, y_pred } => y_true.len().max(y_pred.len()),
            Self::Image { reference, test } => reference.data().len().max(test.data().len()),
        }
    }

    pub(crate) fn regression_pair(&self) -> Result<(&[f64], &[f64])> {
        match self {
            Self::Regression { y_true, y_pred, .. } => Ok((y_true, y_pred)),
            other => Err(wrong_task(Task::Regression, other.task())),
        }
    }

    pub(crate) fn label_pair(&self) -> Result<(&[i64], &[i64])> {
        match self {
            Self::Classification { y_true, y_pred, .. } => {
                Ok((y_true, y_pred.as_deref().ok_or_else(|| missing("y_pred"))?))
            }
            other => Err(wrong_task(Task::Classification, other.task())),
        }
    }

    pub(crate) fn score_pair(&self) -> Result<(&[i64], &Array2<f64>)> {
        match self {
            Self::Classification { y_true, scores, .. } => {
                Ok((y_true, scores.as_ref().ok_or_else(|| missing("scores"))?))
            }
            other => Err(wrong_task(Task::Classification, other.task())),
        }
    }

    pub(crate) fn partition_pair(&self) -> Result<(&[i64], &[i64])> {
        match self {
            Self::Clustering { labels_true, labels_pred, .. } => {
                Ok((labels_true.as_deref().ok_or_else(|| missing("labels_true"))?, labels_pred))
            }
            other => Err(wrong_task(Task::Clustering, other.task())),
        }
    }

    pub(crate) fn feature_labels(&self) -> Result<(&Array2<f64>, &[i64])> {
        match self {
            Self::Clustering { labels_pred, features, .. } => {
                Ok((features.as_ref().ok_or_else(|| missing("x"))?, labels_pred))
            }
            other => Err(wrong_task(Task::Clustering, other.task())),
        }
    }

    pub(crate) fn masks(&self) -> Result<(&Mask, &Mask)> {
        match self {
            Self::Segmentation { y_true, y_pred } => Ok((y_true, y_pred)),
            other => Err(wrong_task(Task::Segmentation, other.task())),
        }
    }

    pub(crate) fn images(&self) -> Result<(&Image, &Image)> {
        match self {
            Self::Image { reference, test } => Ok((reference, test)),
            other => Err(wrong_task(Task::Image, other.task())),
        }
    }
}

pub(crate) fn wrong_task(expected: Task, got: Task) -> EvaluationError {
    EvaluationError::InvalidParameter(format!("expected {expected} inputs, got {got} inputs"))
}
