//! Full-reference image quality: PSNR and windowed SSIM.

use crate::error::{EvaluationError, Result};
use crate::types::Image;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PsnrParams {
    /// Dynamic range L. Inferred as 255 for 8-bit images.
    pub data_range: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub window_size: usize,
    pub data_range: Option<f64>,
    pub k1: f64,
    pub k2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window_size: 7,
            data_range: None,
            k1: 0.01,
            k2: 0.03,
        }
    }
}

fn check_pair(reference: &Image, test: &Image) -> Result<()> {
    if reference.shape() != test.shape() {
        return Err(EvaluationError::ShapeMismatch(format!(
            "reference has shape {:?} but test has shape {:?}",
            reference.shape(),
            test.shape()
        )));
    }
    for (name, img) in [("reference", reference), ("test", test)] {
        if let Some(v) = img.data().iter().find(|v| !v.is_finite()) {
            return Err(EvaluationError::NonFiniteValue(format!("{name} contains {v}")));
        }
    }
    Ok(())
}

/// Resolves L from the explicit value or the pixel type of both images.
pub fn resolve_data_range(reference: &Image, test: &Image, explicit: Option<f64>) -> Result<f64> {
    let range = match explicit {
        Some(l) => l,
        None => match (reference.implied_range(), test.implied_range()) {
            (Some(a), Some(b)) if a == b => a,
            _ => {
                return Err(EvaluationError::InvalidParameter(
                    "data_range is required unless both images are 8-bit unsigned".into(),
                ))
            }
        },
    };
    if !(range.is_finite() && range > 0.0) {
        return Err(EvaluationError::InvalidParameter(format!(
            "data_range must be finite and positive, got {range}"
        )));
    }
    Ok(range)
}

/// `10·log10(L² / MSE)` over every pixel and channel. Identical images give
/// `+inf`.
pub fn psnr(reference: &Image, test: &Image, params: &PsnrParams) -> Result<f64> {
    check_pair(reference, test)?;
    let l = resolve_data_range(reference, test, params.data_range)?;
    let n = reference.data().len() as f64;
    let sse: f64 = reference
        .data()
        .iter()
        .zip(test.data().iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let mse = sse / n;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (l * l / mse).log10())
}

/// Sums of every `w`-long window along rows then columns, each computed
/// afresh so the result does not depend on traversal history.
fn window_sums(plane: &[f64], h: usize, w: usize, win: usize) -> Vec<f64> {
    let ow = w - win + 1;
    let oh = h - win + 1;
    let mut rows = vec![0.0; h * ow];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = row[x..x + win].iter().sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for y in 0..oh {
        for x in 0..ow {
            let mut s = 0.0;
            for dy in 0..win {
                s += rows[(y + dy) * ow + x];
            }
            out[y * ow + x] = s;
        }
    }
    out
}

fn ssim_plane(a: &[f64], b: &[f64], h: usize, w: usize, win: usize, c1: f64, c2: f64) -> f64 {
    let n = (win * win) as f64;
    let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let sa = window_sums(a, h, w, win);
    let sb = window_sums(b, h, w, win);
    let saa = window_sums(&aa, h, w, win);
    let sbb = window_sums(&bb, h, w, win);
    let sab = window_sums(&ab, h, w, win);
    let mut total = 0.0;
    for i in 0..sa.len() {
        let mx = sa[i] / n;
        let my = sb[i] / n;
        let vx = (saa[i] - sa[i] * mx) / (n - 1.0);
        let vy = (sbb[i] - sb[i] * my) / (n - 1.0);
        let cov = (sab[i] - sa[i] * my) / (n - 1.0);
        let num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        let den = (mx * mx + my * my + c1) * (vx + vy + c2);
        total += num / den;
    }
    total / sa.len() as f64
}

/// Mean SSIM over all fully interior positions of a uniform square window,
/// with sample (N−1) variances. Channels are scored separately and averaged.
pub fn ssim(reference: &Image, test: &Image, params: &SsimParams) -> Result<f64> {
    check_pair(reference, test)?;
    let (h, w) = (reference.height(), reference.width());
    let win = params.window_size;
    if win < 3 || win.is_multiple_of(2) {
        return Err(EvaluationError::InvalidParameter(format!(
            "window_size must be odd and at least 3, got {win}"
        )));
    }
    if win > h.min(w) {
        return Err(EvaluationError::InvalidParameter(format!(
            "window_size {win} exceeds the smaller image side {}",
            h.min(w)
        )));
    }
    for (name, k) in [("k1", params.k1), ("k2", params.k2)] {
        if !(k.is_finite() && k > 0.0) {
            return Err(EvaluationError::InvalidParameter(format!(
                "{name} must be finite and positive, got {k}"
            )));
        }
    }
    let l = resolve_data_range(reference, test, params.data_range)?;
    let c1 = (params.k1 * l).powi(2);
    let c2 = (params.k2 * l).powi(2);
    let channels = reference.channels();
    let sum: f64 = (0..channels)
        .map(|c| {
            let a = reference.channel_plane(c);
            let b = test.channel_plane(c);
            ssim_plane(&a, &b, h, w, win, c1, c2)
        })
        .sum();
    Ok(sum / channels as f64)
}
