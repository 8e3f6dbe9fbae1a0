//! Clustering validity indices.
//!
//! External indices compare two labelings through their contingency table.
//! Information measures use natural logarithms, and normalized variants divide
//! by the arithmetic mean of the two entropies. Internal indices score a
//! labeling of a feature matrix.

use std::collections::BTreeMap;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;

use crate::error::{ensure_same_len, EvaluationError, Result};

/// Co-occurrence counts of two partitions, rows indexed by the true classes and
/// columns by the predicted clusters, both in ascending label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    row_labels: Vec<i64>,
    col_labels: Vec<i64>,
    counts: Array2<u64>,
}

impl ContingencyTable {
    pub fn counts(&self) -> &Array2<u64> {
        &self.counts
    }

    pub fn row_labels(&self) -> &[i64] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[i64] {
        &self.col_labels
    }

    pub fn total(&self) -> u64 {
        self.counts.sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.rows().into_iter().map(|r| r.sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        self.counts.columns().into_iter().map(|c| c.sum()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.rows().into_iter().map(|r| r.to_vec()).collect()
    }

    /// Pair counts: (together in both, together in pred only, together in true only).
    fn pair_counts(&self) -> (u128, u128, u128) {
        let together_both: u128 = self.counts.iter().map(|&c| choose2(c)).sum();
        let together_pred: u128 = self.col_sums().into_iter().map(choose2).sum();
        let together_true: u128 = self.row_sums().into_iter().map(choose2).sum();
        (
            together_both,
            together_pred - together_both,
            together_true - together_both,
        )
    }

    fn is_identical_partition(&self) -> bool {
        self.counts.nrows() == self.counts.ncols()
            && self
                .counts
                .rows()
                .into_iter()
                .all(|r| r.iter().filter(|&&c| c > 0).count() == 1)
            && self
                .counts
                .columns()
                .into_iter()
                .all(|c| c.iter().filter(|&&v| v > 0).count() == 1)
    }
}

fn choose2(n: u64) -> u128 {
    let n = u128::from(n);
    n * n.saturating_sub(1) / 2
}

fn check_partitions(labels_true: &[i64], labels_pred: &[i64]) -> Result<()> {
    ensure_same_len("labels_true/labels_pred", labels_true.len(), labels_pred.len())?;
    match labels_true.len() {
        0 => Err(EvaluationError::EmptyInput("labels_true has no elements".to_string())),
        1 => Err(EvaluationError::DegenerateInput(
            "at least 2 samples are needed to compare partitions".to_string(),
        )),
        _ => Ok(()),
    }
}

fn index_of(labels: &[i64]) -> (Vec<i64>, Vec<usize>) {
    let mut distinct: Vec<i64> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let pos: BTreeMap<i64, usize> = distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let idx = labels.iter().map(|l| pos[l]).collect();
    (distinct, idx)
}

pub fn contingency_table(labels_true: &[i64], labels_pred: &[i64]) -> Result<ContingencyTable> {
    check_partitions(labels_true, labels_pred)?;
    let (row_labels, rows) = index_of(labels_true);
    let (col_labels, cols) = index_of(labels_pred);
    let mut counts = Array2::<u64>::zeros((row_labels.len(), col_labels.len()));
    for (&r, &c) in rows.iter().zip(&cols) {
        counts[[r, c]] += 1;
    }
    Ok(ContingencyTable {
        row_labels,
        col_labels,
        counts,
    })
}

pub fn rand_score(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let table = contingency_table(labels_true, labels_pred)?;
    let pairs = choose2(table.total());
    let (_, fp, fn_) = table.pair_counts();
    let agree = pairs - fp - fn_;
    Ok(agree as f64 / pairs as f64)
}

/// Adjusted Rand index. When the maximum index equals its expectation the
/// result is 1 for identical partitions and 0 otherwise.
pub fn adjusted_rand_index(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let table = contingency_table(labels_true, labels_pred)?;
    let index: f64 = table.counts.iter().map(|&c| choose2(c) as f64).sum();
    let rows: f64 = table.row_sums().into_iter().map(|a| choose2(a) as f64).sum();
    let cols: f64 = table.col_sums().into_iter().map(|b| choose2(b) as f64).sum();
    let expected = rows * cols / choose2(table.total()) as f64;
    let max = 0.5 * (rows + cols);
    if max == expected {
        return Ok(if table.is_identical_partition() { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(counts: &[u64], n: u64) -> f64 {
    let n = n as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

fn mutual_info_from(table: &ContingencyTable) -> f64 {
    let n = table.total() as f64;
    let a = table.row_sums();
    let b = table.col_sums();
    let mut mi = 0.0;
    for ((i, j), &nij) in table.counts.indexed_iter() {
        if nij == 0 {
            continue;
        }
        let nij = nij as f64;
        mi += nij / n * (n * nij / (a[i] as f64 * b[j] as f64)).ln();
    }
    mi.max(0.0)
}

struct InfoTerms {
    mi: f64,
    h_true: f64,
    h_pred: f64,
}

fn info_terms(labels_true: &[i64], labels_pred: &[i64]) -> Result<(ContingencyTable, InfoTerms)> {
    let table = contingency_table(labels_true, labels_pred)?;
    let n = table.total();
    let terms = InfoTerms {
        mi: mutual_info_from(&table),
        h_true: entropy(&table.row_sums(), n),
        h_pred: entropy(&table.col_sums(), n),
    };
    Ok((table, terms))
}

/// Mutual information in nats.
pub fn mutual_info(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    Ok(mutual_info_from(&contingency_table(labels_true, labels_pred)?))
}

pub fn normalized_mutual_info(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let (_, t) = info_terms(labels_true, labels_pred)?;
    let normalizer = 0.5 * (t.h_true + t.h_pred);
    if normalizer == 0.0 {
        return Ok(1.0);
    }
    Ok(t.mi / normalizer)
}

/// ln(k!) for k in 0..=n.
fn log_factorials(n: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Exact expected mutual information under the hypergeometric model of
/// random labelings with the table's marginals.
pub fn expected_mutual_info(table: &ContingencyTable) -> f64 {
    let n = table.total();
    let nf = n as f64;
    let lf = log_factorials(n);
    let a = table.row_sums();
    let b = table.col_sums();
    let mut emi = 0.0;
    for &ai in &a {
        for &bj in &b {
            let lo = (ai + bj).saturating_sub(n).max(1);
            let hi = ai.min(bj);
            let fixed = lf[ai as usize] + lf[bj as usize] + lf[(n - ai) as usize] + lf[(n - bj) as usize]
                - lf[n as usize];
            for nij in lo..=hi {
                let log_p = fixed
                    - lf[nij as usize]
                    - lf[(ai - nij) as usize]
                    - lf[(bj - nij) as usize]
                    - lf[(n + nij - ai - bj) as usize];
                let nijf = nij as f64;
                emi += nijf / nf * (nf * nijf / (ai as f64 * bj as f64)).ln() * log_p.exp();
            }
        }
    }
    emi
}

/// Adjusted mutual information with arithmetic-mean normalization.
///
/// A zero denominator yields 1 for identical partitions and 0 otherwise.
pub fn adjusted_mutual_info(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let (table, t) = info_terms(labels_true, labels_pred)?;
    let emi = expected_mutual_info(&table);
    let normalizer = 0.5 * (t.h_true + t.h_pred);
    let denominator = normalizer - emi;
    if denominator.abs() <= 1e-12 * normalizer.max(1.0) {
        return Ok(if table.is_identical_partition() { 1.0 } else { 0.0 });
    }
    Ok((t.mi - emi) / denominator)
}

/// `MI / H(true)`; 1 when the true partition has a single class.
pub fn homogeneity(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let (_, t) = info_terms(labels_true, labels_pred)?;
    Ok(if t.h_true == 0.0 { 1.0 } else { t.mi / t.h_true })
}

/// `MI / H(pred)`; 1 when the prediction has a single cluster.
pub fn completeness(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let (_, t) = info_terms(labels_true, labels_pred)?;
    Ok(if t.h_pred == 0.0 { 1.0 } else { t.mi / t.h_pred })
}

pub fn v_measure(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let h = homogeneity(labels_true, labels_pred)?;
    let c = completeness(labels_true, labels_pred)?;
    if h + c == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * h * c / (h + c))
}

pub fn fowlkes_mallows(labels_true: &[i64], labels_pred: &[i64]) -> Result<f64> {
    let table = contingency_table(labels_true, labels_pred)?;
    let (tp, fp, fn_) = table.pair_counts();
    fowlkes_mallows_from_pairs(tp, fp, fn_)
}

pub(crate) fn fowlkes_mallows_from_pairs(tp: u128, fp: u128, fn_: u128) -> Result<f64> {
    let den = ((tp + fp) as f64) * ((tp + fn_) as f64);
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(tp as f64 / den.sqrt())
}

/// Distance used by the silhouette coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distance {
    #[default]
    Euclidean,
    Manhattan,
}

impl Distance {
    pub fn as_str(self) -> &'static str {
        match self {
            Distance::Euclidean => "euclidean",
            Distance::Manhattan => "manhattan",
        }
    }

    pub fn between(self, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
        match self {
            Distance::Euclidean => a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Distance::Manhattan => a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

impl FromStr for Distance {
    type Err = EvaluationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Distance::Euclidean),
            "manhattan" => Ok(Distance::Manhattan),
            other => Err(EvaluationError::InvalidParameter(format!(
                "unknown distance {other:?}; expected euclidean or manhattan"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InternalIndexParams {
    pub distance: Distance,
}

/// Validated view of a labeled feature matrix.
struct Labeled<'a> {
    x: ArrayView2<'a, f64>,
    cluster: Vec<usize>,
    sizes: Vec<usize>,
}

impl<'a> Labeled<'a> {
    fn new(x: ArrayView2<'a, f64>, labels: &[i64]) -> Result<Self> {
        if x.nrows() == 0 || labels.is_empty() {
            return Err(EvaluationError::EmptyInput("feature matrix has no samples".to_string()));
        }
        ensure_same_len("feature rows/labels", x.nrows(), labels.len())?;
        if x.ncols() == 0 {
            return Err(EvaluationError::EmptyInput("feature matrix has no features".to_string()));
        }
        if let Some(((i, j), v)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(EvaluationError::NonFiniteValue(format!("X[{i}, {j}] = {v}")));
        }
        let (distinct, cluster) = index_of(labels);
        let k = distinct.len();
        let n = labels.len();
        if k < 2 || k > n - 1 {
            return Err(EvaluationError::DegenerateInput(format!(
                "number of clusters must lie in [2, n - 1] = [2, {}], got {k}",
                n.saturating_sub(1)
            )));
        }
        let mut sizes = vec![0; k];
        for &c in &cluster {
            sizes[c] += 1;
        }
        Ok(Self { x, cluster, sizes })
    }

    fn k(&self) -> usize {
        self.sizes.len()
    }

    fn centroids(&self) -> Array2<f64> {
        let mut sums = Array2::<f64>::zeros((self.k(), self.x.ncols()));
        for (row, &c) in self.x.rows().into_iter().zip(&self.cluster) {
            let mut target = sums.row_mut(c);
            target += &row;
        }
        for (mut row, &size) in sums.rows_mut().into_iter().zip(&self.sizes) {
            row /= size as f64;
        }
        sums
    }
}

/// Mean silhouette coefficient. Samples in singleton clusters score 0.
///
/// Distances are streamed per sample rather than stored, so memory is
/// O(n·k). Each sample is reduced sequentially, which keeps the result
/// independent of the thread count.
pub fn silhouette(x: ArrayView2<f64>, labels: &[i64], params: &InternalIndexParams) -> Result<f64> {
    let data = Labeled::new(x, labels)?;
    let n = x.nrows();
    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let own = data.cluster[i];
            if data.sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; data.k()];
            let xi = x.row(i);
            for j in 0..n {
                if j != i {
                    sums[data.cluster[j]] += params.distance.between(xi, x.row(j));
                }
            }
            let a = sums[own] / (data.sizes[own] - 1) as f64;
            let b = sums
                .iter()
                .zip(&data.sizes)
                .enumerate()
                .filter(|(c, _)| *c != own)
                .map(|(_, (s, &size))| s / size as f64)
                .fold(f64::INFINITY, f64::min);
            let scale = a.max(b);
            if scale == 0.0 {
                0.0
            } else {
                (b - a) / scale
            }
        })
        .collect();
    Ok(scores.iter().sum::<f64>() / n as f64)
}

fn squared_distance(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn calinski_harabasz(x: ArrayView2<f64>, labels: &[i64]) -> Result<f64> {
    let data = Labeled::new(x, labels)?;
    let n = x.nrows();
    let k = data.k();
    let centroids = data.centroids();
    let overall = x.mean_axis(ndarray::Axis(0)).expect("non-empty");
    let between: f64 = centroids
        .rows()
        .into_iter()
        .zip(&data.sizes)
        .map(|(c, &size)| size as f64 * squared_distance(c, overall.view()))
        .sum();
    let within: f64 = x
        .rows()
        .into_iter()
        .zip(&data.cluster)
        .map(|(row, &c)| squared_distance(row, centroids.row(c)))
        .sum();
    if within == 0.0 {
        return Err(EvaluationError::DegenerateInput(
            "within-cluster dispersion is zero (every point sits on its centroid)".to_string(),
        ));
    }
    Ok((between / (k - 1) as f64) / (within / (n - k) as f64))
}

pub fn davies_bouldin(x: ArrayView2<f64>, labels: &[i64]) -> Result<f64> {
    let data = Labeled::new(x, labels)?;
    let k = data.k();
    let centroids = data.centroids();
    let mut scatter = vec![0.0; k];
    for (row, &c) in x.rows().into_iter().zip(&data.cluster) {
        scatter[c] += squared_distance(row, centroids.row(c)).sqrt();
    }
    for (s, &size) in scatter.iter_mut().zip(&data.sizes) {
        *s /= size as f64;
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in (0..k).filter(|&j| j != i) {
            let sep = squared_distance(centroids.row(i), centroids.row(j)).sqrt();
            if sep == 0.0 {
                return Err(EvaluationError::DegenerateInput(format!(
                    "clusters {i} and {j} have coincident centroids"
                )));
            }
            worst = worst.max((scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    const CT: [i64; 4] = [0, 0, 1, 1];
    const CP: [i64; 4] = [0, 1, 1, 1];

    #[test]
    fn contingency_fixture() {
        let t = contingency_table(&CT, &CP).unwrap();
        assert_eq!(t.to_rows(), vec![vec![1, 1], vec![0, 2]]);
        let d = contingency_table(&[4, 4, 7], &[1, 1, 2]).unwrap();
        assert_eq!(d.to_rows(), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(contingency_table(&[3, 3], &[5, 5]).unwrap().to_rows(), vec![vec![2]]);
        assert!(matches!(contingency_table(&[1], &[1]), Err(EvaluationError::DegenerateInput(_))));
        assert!(matches!(contingency_table(&[], &[]), Err(EvaluationError::EmptyInput(_))));
    }

    #[test]
    fn fixture_c1_values() {
        assert_eq!(rand_score(&CT, &CP).unwrap(), 0.5);
        assert_abs_diff_eq!(adjusted_rand_index(&CT, &CP).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_info(&CT, &CP).unwrap(), 0.215_761_554_338_835_65, epsilon = 1e-12);
        assert_abs_diff_eq!(normalized_mutual_info(&CT, &CP).unwrap(), 0.343_711_018_485_450_8, epsilon = 1e-12);
        assert_abs_diff_eq!(homogeneity(&CT, &CP).unwrap(), 0.311_278_124_459_132_83, epsilon = 1e-12);
        assert_abs_diff_eq!(completeness(&CT, &CP).unwrap(), 0.383_688_546_596_344_3, epsilon = 1e-12);
        assert_abs_diff_eq!(v_measure(&CT, &CP).unwrap(), 0.343_711_018_485_450_77, epsilon = 1e-12);
        assert_abs_diff_eq!(fowlkes_mallows(&CT, &CP).unwrap(), 1.0 / 6f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(adjusted_mutual_info(&CT, &CP).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_rules() {
        assert_eq!(adjusted_rand_index(&[0, 0, 0], &[1, 1, 1]).unwrap(), 1.0);
        assert_eq!(normalized_mutual_info(&[0, 0], &[2, 2]).unwrap(), 1.0);
        assert_eq!(adjusted_mutual_info(&[0, 0, 1, 1], &[0, 0, 0, 0]).unwrap(), 0.0);
        assert_eq!(adjusted_mutual_info(&[0, 1, 2], &[5, 6, 7]).unwrap(), 1.0);
        assert_eq!(homogeneity(&[0, 0, 1, 1], &[0, 1, 2, 3]).unwrap(), 1.0);
        assert_eq!(completeness(&[0, 0, 1, 1], &[0, 0, 0, 0]).unwrap(), 1.0);
        assert_eq!(fowlkes_mallows(&[0, 1, 2], &[0, 1, 2]).unwrap(), 0.0);
        assert_abs_diff_eq!(mutual_info(&[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap(), std::f64::consts::LN_2, epsilon = 1e-12);
        // outer-product table: independent marginals
        assert_abs_diff_eq!(mutual_info(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ami_reference_value() {
        let t = [0, 0, 0, 1, 1, 2, 2, 2, 2];
        let p = [1, 1, 0, 0, 2, 2, 2, 0, 1];
        assert_abs_diff_eq!(adjusted_mutual_info(&t, &p).unwrap(), -0.079_906_408_928_357_93, epsilon = 1e-10);
    }

    #[test]
    fn internal_fixture_p1() {
        let x = array![[0.0], [1.0], [10.0], [11.0]];
        let l = [0, 0, 1, 1];
        assert_abs_diff_eq!(silhouette(x.view(), &l, &Default::default()).unwrap(), 0.899_749_373_433_584, epsilon = 1e-12);
        assert_abs_diff_eq!(calinski_harabasz(x.view(), &l).unwrap(), 200.0, epsilon = 1e-9);
        assert_abs_diff_eq!(davies_bouldin(x.view(), &l).unwrap(), 0.1, epsilon = 1e-12);
        let far = x.mapv(|v| v * 100.0);
        assert_abs_diff_eq!(silhouette(far.view(), &l, &Default::default()).unwrap(), 0.899_749_373_433_584, epsilon = 1e-12);
        assert_abs_diff_eq!(calinski_harabasz(far.view(), &l).unwrap(), 200.0, epsilon = 1e-9);
    }

    #[test]
    fn internal_reference_values() {
        let x = array![[0.0, 0.0], [1.0, 2.0], [2.0, 1.0], [8.0, 8.0], [9.0, 7.0], [7.0, 9.0], [0.0, 9.0], [1.0, 8.0]];
        let l = [0, 0, 0, 1, 1, 1, 2, 2];
        let manhattan = InternalIndexParams { distance: Distance::Manhattan };
        assert_abs_diff_eq!(silhouette(x.view(), &l, &Default::default()).unwrap(), 0.760_908_003_118_492_3, epsilon = 1e-12);
        assert_abs_diff_eq!(silhouette(x.view(), &l, &manhattan).unwrap(), 0.696_260_351_966_873_7, epsilon = 1e-12);
        assert_abs_diff_eq!(calinski_harabasz(x.view(), &l).unwrap(), 54.166_666_666_666_664, epsilon = 1e-9);
        assert_abs_diff_eq!(davies_bouldin(x.view(), &l).unwrap(), 0.236_819_728_938_034_07, epsilon = 1e-12);
    }

    #[test]
    fn internal_error_paths() {
        let x = array![[0.0], [1.0], [2.0], [3.0]];
        assert!(matches!(calinski_harabasz(x.view(), &[0, 1, 2, 3]), Err(EvaluationError::DegenerateInput(_))));
        assert!(matches!(silhouette(x.view(), &[0, 0, 0, 0], &Default::default()), Err(EvaluationError::DegenerateInput(_))));
        let dup = array![[0.0], [0.0], [1.0], [1.0]];
        assert!(matches!(calinski_harabasz(dup.view(), &[0, 0, 1, 1]), Err(EvaluationError::DegenerateInput(_))));
        assert_eq!(davies_bouldin(dup.view(), &[0, 0, 1, 1]).unwrap(), 0.0);
        let coincident = array![[0.0], [2.0], [1.0], [1.0]];
        assert!(matches!(davies_bouldin(coincident.view(), &[0, 0, 1, 1]), Err(EvaluationError::DegenerateInput(_))));
        assert!(matches!(silhouette(x.view(), &[0, 1], &Default::default()), Err(EvaluationError::ShapeMismatch(_))));
    }

    #[test]
    fn coincident_points_score_zero() {
        // two clusters stacked on the same point: a = b = 0 for every sample
        let x = array![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0]];
        assert_eq!(silhouette(x.view(), &[0, 0, 1, 1], &Default::default()).unwrap(), 0.0);
    }
}
