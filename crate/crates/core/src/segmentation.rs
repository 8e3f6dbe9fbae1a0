//! Overlap and surface-distance metrics for binary masks.
//!
//! Surface distances are measured between boundary voxels: foreground voxels
//! with at least one face-adjacent background or out-of-bounds neighbor.
//! Coordinates are multiplied by the per-axis spacing before any distance is
//! taken.

use rayon::prelude::*;

use crate::error::{EvaluationError, Result};
use crate::types::{check_spacing, Mask};
use crate::value::{Evaluation, WarningCode, WarningRecord};

mod kdtree;

use kdtree::KdTree;

/// Both boundary sets must exceed this size before the k-d tree is used.
const KD_TREE_MIN_POINTS: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffParams {
    /// 100 gives the classic maximum; 95 gives HD95.
    pub percentile: f64,
    pub spacing: Option<Vec<f64>>,
}

impl Default for HausdorffParams {
    fn default() -> Self {
        Self {
            percentile: 100.0,
            spacing: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VoxelConfusion {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

fn check_binary(name: &str, mask: &Mask) -> Result<()> {
    if mask.is_empty() {
        return Err(EvaluationError::EmptyInput(format!("{name} has no voxels")));
    }
    if let Some((idx, v)) = mask.first_non_binary() {
        return Err(EvaluationError::DomainError(format!(
            "{name} must be binary, found value {v} at flat index {idx}"
        )));
    }
    Ok(())
}

fn check_pair(y_true: &Mask, y_pred: &Mask) -> Result<()> {
    if y_true.shape() != y_pred.shape() {
        return Err(EvaluationError::ShapeMismatch(format!(
            "y_true has shape {:?} but y_pred has shape {:?}",
            y_true.shape(),
            y_pred.shape()
        )));
    }
    check_binary("y_true", y_true)?;
    check_binary("y_pred", y_pred)
}

pub fn voxel_confusion(y_true: &Mask, y_pred: &Mask) -> Result<VoxelConfusion> {
    check_pair(y_true, y_pred)?;
    let mut c = VoxelConfusion::default();
    for (&t, &p) in y_true.data().iter().zip(y_pred.data().iter()) {
        match (t == 1, p == 1) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

fn emptiness_warning(c: &VoxelConfusion, both: f64, one: Option<f64>) -> Option<(f64, WarningRecord)> {
    let true_empty = c.tp + c.fn_ == 0;
    let pred_empty = c.tp + c.fp == 0;
    match (true_empty, pred_empty) {
        (true, true) => Some((
            both,
            WarningRecord::new(WarningCode::BothMasksEmpty, "both masks have no foreground"),
        )),
        (true, false) | (false, true) => one.map(|v| {
            let which = if true_empty { "y_true" } else { "y_pred" };
            (
                v,
                WarningRecord::new(WarningCode::EmptyMask, format!("{which} has no foreground")),
            )
        }),
        (false, false) => None,
    }
}

/// `2|A∩B| / (|A| + |B|)`. Two empty masks score 1, one empty mask scores 0;
/// both cases carry a warning.
pub fn dice_score(y_true: &Mask, y_pred: &Mask) -> Result<Evaluation> {
    let c = voxel_confusion(y_true, y_pred)?;
    if let Some((v, w)) = emptiness_warning(&c, 1.0, Some(0.0)) {
        return Ok(Evaluation::with_warnings(crate::MetricValue::Scalar(v), vec![w]));
    }
    Ok(Evaluation::scalar(2.0 * c.tp as f64 / (2 * c.tp + c.fp + c.fn_) as f64))
}

/// `|A∩B| / |A∪B|`. Two empty masks score 1, one empty mask scores 0;
/// both cases carry a warning.
pub fn iou_score(y_true: &Mask, y_pred: &Mask) -> Result<Evaluation> {
    let c = voxel_confusion(y_true, y_pred)?;
    if let Some((v, w)) = emptiness_warning(&c, 1.0, Some(0.0)) {
        return Ok(Evaluation::with_warnings(crate::MetricValue::Scalar(v), vec![w]));
    }
    Ok(Evaluation::scalar(c.tp as f64 / (c.tp + c.fp + c.fn_) as f64))
}

fn voxel_rate(metric: &str, num: u64, den: u64) -> Evaluation {
    if den == 0 {
        return Evaluation::with_warnings(
            crate::MetricValue::Scalar(0.0),
            vec![WarningRecord::new(
                WarningCode::ZeroDivision,
                format!("{metric} has an empty denominator; set to 0"),
            )],
        );
    }
    Evaluation::scalar(num as f64 / den as f64)
}

/// Voxel-wise `TP / (TP + FN)`.
pub fn sensitivity(y_true: &Mask, y_pred: &Mask) -> Result<Evaluation> {
    let c = voxel_confusion(y_true, y_pred)?;
    Ok(voxel_rate("sensitivity", c.tp, c.tp + c.fn_))
}

/// Voxel-wise `TN / (TN + FP)`.
pub fn specificity(y_true: &Mask, y_pred: &Mask) -> Result<Evaluation> {
    let c = voxel_confusion(y_true, y_pred)?;
    Ok(voxel_rate("specificity", c.tn, c.tn + c.fp))
}

/// Voxel-wise `TP / (TP + FP)`.
pub fn precision(y_true: &Mask, y_pred: &Mask) -> Result<Evaluation> {
    let c = voxel_confusion(y_true, y_pred)?;
    Ok(voxel_rate("precision", c.tp, c.tp + c.fp))
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for axis in (0..shape.len().saturating_sub(1)).rev() {
        s[axis] = s[axis + 1] * shape[axis + 1];
    }
    s
}

/// Boundary voxels of a binary mask in row-major order, with face (1-)
/// connectivity.
pub fn extract_boundary(mask: &Mask) -> Result<Vec<Vec<usize>>> {
    check_binary("mask", mask)?;
    Ok(boundary_indices(mask))
}

fn boundary_indices(mask: &Mask) -> Vec<Vec<usize>> {
    let shape = mask.shape();
    let stride = strides(shape);
    let flat: Vec<i64> = mask.data().iter().copied().collect();
    let mut coord = vec![0usize; shape.len()];
    let mut out = Vec::new();
    for (idx, &v) in flat.iter().enumerate() {
        let mut rem = idx;
        for (axis, c) in coord.iter_mut().enumerate() {
            *c = rem / stride[axis];
            rem %= stride[axis];
        }
        if v == 0 {
            continue;
        }
        let on_edge = coord.iter().zip(shape).enumerate().any(|(axis, (&c, &extent))| {
            c == 0
                || c + 1 == extent
                || flat[idx - stride[axis]] == 0
                || flat[idx + stride[axis]] == 0
        });
        if on_edge {
            out.push(coord.clone());
        }
    }
    out
}

fn resolve_spacing(y_true: &Mask, y_pred: &Mask, params: &HausdorffParams) -> Result<Vec<f64>> {
    let rank = y_true.rank();
    if let Some(s) = &params.spacing {
        check_spacing(s, rank)?;
        return Ok(s.clone());
    }
    match (y_true.spacing(), y_pred.spacing()) {
        (Some(a), Some(b)) if a != b => Err(EvaluationError::InvalidParameter(format!(
            "masks carry different spacings {a:?} and {b:?}"
        ))),
        (Some(s), _) | (_, Some(s)) => Ok(s.to_vec()),
        (None, None) => Ok(vec![1.0; rank]),
    }
}

pub(crate) type Point = [f64; 3];

fn physical_points(coords: &[Vec<usize>], spacing: &[f64]) -> Vec<Point> {
    coords
        .iter()
        .map(|c| {
            let mut p = [0.0; 3];
            for (axis, (&i, &s)) in c.iter().zip(spacing).enumerate() {
                p[axis] = i as f64 * s;
            }
            p
        })
        .collect()
}

pub(crate) fn squared_distance(a: &Point, b: &Point) -> f64 {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    d0 * d0 + d1 * d1 + d2 * d2
}

/// Distance from every point of `from` to its nearest neighbor in `to`.
fn directed_distances(from: &[Point], to: &[Point], use_tree: bool) -> Vec<f64> {
    if use_tree {
        let tree = KdTree::build(to);
        from.par_iter().map(|p| tree.nearest_squared(p).sqrt()).collect()
    } else {
        from.par_iter()
            .map(|p| {
                to.iter()
                    .map(|q| squared_distance(p, q))
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .collect()
    }
}

/// Percentile with linear interpolation between order statistics.
pub(crate) fn percentile_linear(sorted: &[f64], q: f64) -> f64 {
    let rank = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Hausdorff distance between the boundaries of two masks.
///
/// With `percentile = 100` this is the larger of the two directed maxima.
/// Below 100 it is that percentile (linear interpolation) of the pooled
/// directed distances from both sides. If either mask has no foreground the
/// distance is `+inf`, with a warning.
pub fn hausdorff_distance(y_true: &Mask, y_pred: &Mask, params: &HausdorffParams) -> Result<Evaluation> {
    let q = params.percentile;
    if !(q > 0.0 && q <= 100.0) {
        return Err(EvaluationError::InvalidParameter(format!(
            "percentile must lie in (0, 100], got {q}"
        )));
    }
    check_pair(y_true, y_pred)?;
    let spacing = resolve_spacing(y_true, y_pred, params)?;
    let a = boundary_indices(y_true);
    let b = boundary_indices(y_pred);
    if a.is_empty() || b.is_empty() {
        let which = match (a.is_empty(), b.is_empty()) {
            (true, true) => "both masks have",
            (true, false) => "y_true has",
            _ => "y_pred has",
        };
        return Ok(Evaluation::with_warnings(
            crate::MetricValue::Scalar(f64::INFINITY),
            vec![WarningRecord::new(
                WarningCode::EmptyMask,
                format!("{which} no foreground; hausdorff distance is infinite"),
            )],
        ));
    }
    let pa = physical_points(&a, &spacing);
    let pb = physical_points(&b, &spacing);
    let use_tree = pa.len() > KD_TREE_MIN_POINTS && pb.len() > KD_TREE_MIN_POINTS;
    let mut all = directed_distances(&pa, &pb, use_tree);
    all.extend(directed_distances(&pb, &pa, use_tree));
    all.sort_by(f64::total_cmp);
    Ok(Evaluation::scalar(percentile_linear(&all, q)))
}
