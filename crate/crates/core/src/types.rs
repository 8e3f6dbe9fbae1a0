//! Shared input containers.

use std::fmt;
use std::str::FromStr;

use ndarray::{ArrayD, IxDyn};
use serde::{Deserialize, Serialize};

use crate::error::{EvaluationError, Result};

/// Task family a metric belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Regression,
    Classification,
    Clustering,
    Segmentation,
    Image,
}

impl Task {
    pub const ALL: [Task; 5] = [
        Task::Regression,
        Task::Classification,
        Task::Clustering,
        Task::Segmentation,
        Task::Image,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Regression => "regression",
            Task::Classification => "classification",
            Task::Clustering => "clustering",
            Task::Segmentation => "segmentation",
            Task::Image => "image",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = EvaluationError;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                EvaluationError::InvalidParameter(format!(
                    "unknown task {s:?}; expected one of regression, classification, clustering, segmentation, image"
                ))
            })
    }
}

/// How per-class rates are reduced to a single number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageMode {
    /// Keep one value per class.
    #[default]
    None,
    Macro,
    Micro,
    Weighted,
}

impl AverageMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AverageMode::None => "none",
            AverageMode::Macro => "macro",
            AverageMode::Micro => "micro",
            AverageMode::Weighted => "weighted",
        }
    }
}

impl FromStr for AverageMode {
    type Err = EvaluationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(AverageMode::None),
            "macro" => Ok(AverageMode::Macro),
            "micro" => Ok(AverageMode::Micro),
            "weighted" => Ok(AverageMode::Weighted),
            other => Err(EvaluationError::InvalidParameter(format!(
                "unknown average mode {other:?}; expected none, macro, micro or weighted"
            ))),
        }
    }
}

/// Integer-valued segmentation mask of rank 2 or 3, with optional voxel spacing.
///
/// Values are not checked at construction; the validators and metrics report
/// non-binary content themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    data: ArrayD<i64>,
    spacing: Option<Vec<f64>>,
}

impl Mask {
    pub fn new(data: ArrayD<i64>) -> Result<Self> {
        let rank = data.ndim();
        if !(2..=3).contains(&rank) {
            return Err(EvaluationError::ShapeMismatch(format!(
                "mask must be 2-D or 3-D, got rank {rank}"
            )));
        }
        Ok(Self { data, spacing: None })
    }

    pub fn from_shape_vec(shape: &[usize], values: Vec<i64>) -> Result<Self> {
        let data = ArrayD::from_shape_vec(IxDyn(shape), values).map_err(|e| {
            EvaluationError::ShapeMismatch(format!("mask data does not fit shape {shape:?}: {e}"))
        })?;
        Self::new(data)
    }

    /// 2-D mask from nested rows. Rows must all have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(height * width);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(EvaluationError::ShapeMismatch(format!(
                    "mask row {i} has {} columns, expected {width}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_shape_vec(&[height, width], values)
    }

    pub fn with_spacing(mut self, spacing: Vec<f64>) -> Result<Self> {
        check_spacing(&spacing, self.rank())?;
        self.spacing = Some(spacing);
        Ok(self)
    }

    pub fn data(&self) -> &ArrayD<i64> {
        &self.data
    }

    pub fn shape(&self) -> &[usize] {
        self.data.shape()
    }

    pub fn rank(&self) -> usize {
        self.data.ndim()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn spacing(&self) -> Option<&[f64]> {
        self.spacing.as_deref()
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    /// First value that is neither 0 nor 1, with its flat index.
    pub fn first_non_binary(&self) -> Option<(usize, i64)> {
        self.data
            .iter()
            .enumerate()
            .find(|(_, &v)| v != 0 && v != 1)
            .map(|(i, &v)| (i, v))
    }
}

pub(crate) fn check_spacing(spacing: &[f64], rank: usize) -> Result<()> {
    if spacing.len() != rank {
        return Err(EvaluationError::InvalidParameter(format!(
            "spacing has {} entries but the mask has rank {rank}",
            spacing.len()
        )));
    }
    if let Some(bad) = spacing.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(EvaluationError::InvalidParameter(format!(
            "spacing entries must be finite and strictly positive, got {bad}"
        )));
    }
    Ok(())
}

/// Storage type the pixels came from. Only 8-bit unsigned images have an
/// implied data range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PixelKind {
    UInt8,
    Integer,
    Float,
}

/// H×W or H×W×C image with C ∈ {1, 3, 4}, stored as 64-bit reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    data: ArrayD<f64>,
    kind: PixelKind,
}

impl Image {
    pub fn new(data: ArrayD<f64>, kind: PixelKind) -> Result<Self> {
        let shape = data.shape();
        match shape.len() {
            2 => {}
            3 if matches!(shape[2], 1 | 3 | 4) => {}
            3 => {
                return Err(EvaluationError::ShapeMismatch(format!(
                    "image channel count must be 1, 3 or 4, got {}",
                    shape[2]
                )))
            }
            n => {
                return Err(EvaluationError::ShapeMismatch(format!(
                    "image must be H×W or H×W×C, got rank {n}"
                )))
            }
        }
        if shape[0] == 0 || shape[1] == 0 {
            return Err(EvaluationError::EmptyInput(format!(
                "image has zero extent: {shape:?}"
            )));
        }
        Ok(Self { data, kind })
    }

    pub fn from_shape_vec(shape: &[usize], values: Vec<f64>, kind: PixelKind) -> Result<Self> {
        let data = ArrayD::from_shape_vec(IxDyn(shape), values).map_err(|e| {
            EvaluationError::ShapeMismatch(format!("image data does not fit shape {shape:?}: {e}"))
        })?;
        Self::new(data, kind)
    }

    pub fn from_u8(shape: &[usize], values: &[u8]) -> Result<Self> {
        Self::from_shape_vec(shape, values.iter().map(|&v| f64::from(v)).collect(), PixelKind::UInt8)
    }

    pub fn data(&self) -> &ArrayD<f64> {
        &self.data
    }

    pub fn kind(&self) -> PixelKind {
        self.kind
    }

    pub fn shape(&self) -> &[usize] {
        self.data.shape()
    }

    pub fn height(&self) -> usize {
        self.data.shape()[0]
    }

    pub fn width(&self) -> usize {
        self.data.shape()[1]
    }

    /// Channel count; 1 for H×W images.
    pub fn channels(&self) -> usize {
        self.data.shape().get(2).copied().unwrap_or(1)
    }

    /// Whether the image was given with an explicit channel axis.
    pub fn has_channel_axis(&self) -> bool {
        self.data.ndim() == 3
    }

    /// Data range implied by the pixel type, if any.
    pub fn implied_range(&self) -> Option<f64> {
        match self.kind {
            PixelKind::UInt8 => Some(255.0),
            _ => None,
        }
    }

    /// Pixel values of channel `c` in row-major order.
    pub(crate) fn channel_plane(&self, c: usize) -> Vec<f64> {
        let (h, w) = (self.height(), self.width());
        let mut out = Vec::with_capacity(h * w);
        if self.has_channel_axis() {
            for y in 0..h {
                for x in 0..w {
                    out.push(self.data[[y, x, c]]);
                }
            }
        } else {
            out.extend(self.data.iter().copied());
        }
        out
    }
}
