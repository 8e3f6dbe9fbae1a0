//! C ABI over the metricus engine.
//!
//! Fallible calls return a [`MetricusStatus`]. On failure the message can be
//! read with [`metricus_last_error`] on the same thread. Handles are opaque
//! and must be released with the matching `_free` function. Strings handed
//! out through `char **` parameters are owned by the caller and released with
//! [`metricus_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use metricus::registry::RawParams;
use metricus::validation::CHECKS;
use metricus::{
    evaluate, registry, validate_all, EvaluateOptions, Evaluation, EvaluationError, Image, Inputs, Mask, MetricValue,
    RunError, Severity, ValidationConfig, ValidationReport,
};

/// Skip validation before computing.
pub const METRICUS_NO_VALIDATE: u32 = 1;
/// Validation warnings block the computation.
pub const METRICUS_STRICT: u32 = 2;
/// Compute despite validation errors. Ignored with `METRICUS_STRICT`.
pub const METRICUS_ALLOW_ERRORS: u32 = 4;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricusStatus {
    Ok = 0,
    ShapeMismatch = 1,
    EmptyInput = 2,
    NonFiniteValue = 3,
    DomainError = 4,
    DegenerateInput = 5,
    InvalidParameter = 6,
    LabelError = 7,
    IoError = 8,
    /// Validation reported blocking findings; no value was computed.
    ValidationFailed = 9,
    NullPointer = 10,
    InvalidUtf8 = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricusValueKind {
    Scalar = 0,
    PerClass = 1,
    Matrix = 2,
}

/// Named parameters given as strings, parsed against the metric on use.
pub struct MetricusParams {
    raw: RawParams,
}

pub struct MetricusInputs {
    inner: Inputs,
}

pub struct MetricusResult {
    evaluation: Evaluation,
    report: ValidationReport,
}

pub struct MetricusReport {
    inner: ValidationReport,
}

struct Failure {
    status: MetricusStatus,
    message: String,
}

impl Failure {
    fn new(status: MetricusStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<EvaluationError> for Failure {
    fn from(err: EvaluationError) -> Self {
        let status = match err {
            EvaluationError::ShapeMismatch(_) => MetricusStatus::ShapeMismatch,
            EvaluationError::EmptyInput(_) => MetricusStatus::EmptyInput,
            EvaluationError::NonFiniteValue(_) => MetricusStatus::NonFiniteValue,
            EvaluationError::DomainError(_) => MetricusStatus::DomainError,
            EvaluationError::DegenerateInput(_) => MetricusStatus::DegenerateInput,
            EvaluationError::InvalidParameter(_) => MetricusStatus::InvalidParameter,
            EvaluationError::LabelError(_) => MetricusStatus::LabelError,
            EvaluationError::IoError(_) => MetricusStatus::IoError,
        };
        Self::new(status, err.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(err: RunError) -> Self {
        match err {
            RunError::Blocked(report) => {
                let json = serde_json::to_string(&report).unwrap_or_default();
                Self::new(MetricusStatus::ValidationFailed, format!("validation failed: {json}"))
            }
            RunError::Evaluation(e) => e.into(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> MetricusStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MetricusStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(_) => {
            set_last_error("internal panic in metricus");
            MetricusStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::new(MetricusStatus::NullPointer, format!("`{what}` is NULL"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(MetricusStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(MetricusStatus::InvalidUtf8, e.to_string()))?;
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(c.into_raw());
    Ok(())
}

fn element_count(shape: &[usize]) -> Result<usize, Failure> {
    shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Failure::new(MetricusStatus::ShapeMismatch, "shape overflows size_t"))
}

unsafe fn boxed_inputs(out: *mut *mut MetricusInputs, inner: Inputs) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(MetricusInputs { inner })), "out")
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("metricus documents always serialize")
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn metricus_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(metricus::VERSION).expect("version has no NUL"))
        .as_ptr()
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// metricus call on the same thread.
#[no_mangle]
pub extern "C" fn metricus_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from a metricus `char **` output and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn metricus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// JSON array of metric descriptors, optionally for one task (`task` may be
/// NULL).
///
/// # Safety
/// `task` is NULL or a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_list_metrics_json(task: *const c_char, out: *mut *mut c_char) -> MetricusStatus {
    guard(|| {
        let task = opt_text(task, "task")?.map(str::parse).transpose()?;
        let reg = registry();
        let descriptors: Vec<_> = reg
            .list(task)
            .iter()
            .map(|n| reg.describe(n).expect("listed names are registered"))
            .collect();
        put_string(out, to_json(&descriptors))
    })
}

/// JSON descriptor of one metric. Unknown names fail with `LabelError` and
/// near-match suggestions.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_describe_metric_json(name: *const c_char, out: *mut *mut c_char) -> MetricusStatus {
    guard(|| {
        let d = registry().describe(text(name, "name")?)?;
        put_string(out, to_json(d))
    })
}

/// JSON array of validation checks with their ids, severities and tasks.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_check_catalog_json(out: *mut *mut c_char) -> MetricusStatus {
    guard(|| put_string(out, to_json(&CHECKS)))
}

#[no_mangle]
pub extern "C" fn metricus_params_new() -> *mut MetricusParams {
    Box::into_raw(Box::new(MetricusParams { raw: RawParams::new() }))
}

/// Sets `key` to `value`, both as they would appear on the command line,
/// e.g. `"average"` and `"macro"`.
///
/// # Safety
/// `params` comes from `metricus_params_new`; strings are NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn metricus_params_set(
    params: *mut MetricusParams,
    key: *const c_char,
    value: *const c_char,
) -> MetricusStatus {
    guard(|| {
        let params = params.as_mut().ok_or_else(|| null("params"))?;
        let key = text(key, "key")?.to_string();
        let value = text(value, "value")?.to_string();
        params.raw.insert(key, value);
        Ok(())
    })
}

/// # Safety
/// `params` is NULL or comes from `metricus_params_new` and was not freed.
#[no_mangle]
pub unsafe extern "C" fn metricus_params_free(params: *mut MetricusParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Regression inputs: two arrays of `n` doubles.
///
/// # Safety
/// Each array holds `n` readable elements; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_regression(
    y_true: *const f64,
    y_pred: *const f64,
    n: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let t = slice(y_true, n, "y_true")?.to_vec();
        let p = slice(y_pred, n, "y_pred")?.to_vec();
        boxed_inputs(out, Inputs::regression(t, p))
    })
}

/// Classification inputs from hard label vectors of length `n`.
///
/// # Safety
/// Each array holds `n` readable elements; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_classification(
    y_true: *const i64,
    y_pred: *const i64,
    n: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let t = slice(y_true, n, "y_true")?.to_vec();
        let p = slice(y_pred, n, "y_pred")?.to_vec();
        boxed_inputs(out, Inputs::classification(t, p))
    })
}

/// Classification inputs from labels and a row-major `n` × `n_classes` score
/// matrix.
///
/// # Safety
/// `y_true` holds `n` elements and `scores` `n * n_classes`; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_scores(
    y_true: *const i64,
    scores: *const f64,
    n: usize,
    n_classes: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let t = slice(y_true, n, "y_true")?.to_vec();
        let len = element_count(&[n, n_classes])?;
        let s = slice(scores, len, "scores")?.to_vec();
        let m = ndarray::Array2::from_shape_vec((n, n_classes), s)
            .map_err(|e| Failure::new(MetricusStatus::ShapeMismatch, e.to_string()))?;
        boxed_inputs(out, Inputs::scores(t, m))
    })
}

/// Two partitions of `n` points, for the external clustering indices.
///
/// # Safety
/// Each array holds `n` readable elements; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_external(
    labels_true: *const i64,
    labels_pred: *const i64,
    n: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let t = slice(labels_true, n, "labels_true")?.to_vec();
        let p = slice(labels_pred, n, "labels_pred")?.to_vec();
        boxed_inputs(out, Inputs::external(t, p))
    })
}

/// Row-major `n` × `dim` features with one cluster label per row, for the
/// internal clustering indices.
///
/// # Safety
/// `x` holds `n * dim` elements and `labels` `n`; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_internal(
    x: *const f64,
    n: usize,
    dim: usize,
    labels: *const i64,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let len = element_count(&[n, dim])?;
        let x = slice(x, len, "x")?.to_vec();
        let x = ndarray::Array2::from_shape_vec((n, dim), x)
            .map_err(|e| Failure::new(MetricusStatus::ShapeMismatch, e.to_string()))?;
        let l = slice(labels, n, "labels")?.to_vec();
        boxed_inputs(out, Inputs::internal(x, l))
    })
}

/// Two C-order masks of the same `shape` (rank 2 or 3). `spacing` may be
/// NULL, otherwise it holds `ndim` voxel sizes applied to both masks.
///
/// # Safety
/// `shape` holds `ndim` elements and each mask their product; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_segmentation(
    y_true: *const i64,
    y_pred: *const i64,
    shape: *const usize,
    ndim: usize,
    spacing: *const f64,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let shape = slice(shape, ndim, "shape")?;
        let len = element_count(shape)?;
        let mut a = Mask::from_shape_vec(shape, slice(y_true, len, "y_true")?.to_vec())?;
        let mut b = Mask::from_shape_vec(shape, slice(y_pred, len, "y_pred")?.to_vec())?;
        if !spacing.is_null() {
            let s = slice(spacing, ndim, "spacing")?.to_vec();
            a = a.with_spacing(s.clone())?;
            b = b.with_spacing(s)?;
        }
        boxed_inputs(out, Inputs::segmentation(a, b))
    })
}

/// Two C-order floating-point images, H×W or H×W×C.
///
/// # Safety
/// `shape` holds `ndim` elements and each image their product; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_image_f64(
    reference: *const f64,
    test: *const f64,
    shape: *const usize,
    ndim: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let shape = slice(shape, ndim, "shape")?;
        let len = element_count(shape)?;
        let kind = metricus::PixelKind::Float;
        let r = Image::from_shape_vec(shape, slice(reference, len, "reference")?.to_vec(), kind)?;
        let t = Image::from_shape_vec(shape, slice(test, len, "test")?.to_vec(), kind)?;
        boxed_inputs(out, Inputs::image(r, t))
    })
}

/// Two C-order 8-bit images; the data range defaults to 255.
///
/// # Safety
/// `shape` holds `ndim` elements and each image their product; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_image_u8(
    reference: *const u8,
    test: *const u8,
    shape: *const usize,
    ndim: usize,
    out: *mut *mut MetricusInputs,
) -> MetricusStatus {
    guard(|| {
        let shape = slice(shape, ndim, "shape")?;
        let len = element_count(shape)?;
        let r = Image::from_u8(shape, slice(reference, len, "reference")?)?;
        let t = Image::from_u8(shape, slice(test, len, "test")?)?;
        boxed_inputs(out, Inputs::image(r, t))
    })
}

/// # Safety
/// `inputs` is NULL or an undisposed handle from a `metricus_inputs_*` call.
#[no_mangle]
pub unsafe extern "C" fn metricus_inputs_free(inputs: *mut MetricusInputs) {
    if !inputs.is_null() {
        drop(Box::from_raw(inputs));
    }
}

/// Validates and computes `metric`. `params` may be NULL. `flags` combines
/// `METRICUS_NO_VALIDATE`, `METRICUS_STRICT` and `METRICUS_ALLOW_ERRORS`.
/// When validation blocks, the status is `ValidationFailed` and the last
/// error carries the report as JSON.
///
/// # Safety
/// Handles are live; `metric` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_evaluate(
    metric: *const c_char,
    inputs: *const MetricusInputs,
    params: *const MetricusParams,
    flags: u32,
    out: *mut *mut MetricusResult,
) -> MetricusStatus {
    guard(|| {
        let metric = text(metric, "metric")?;
        let inputs = handle(inputs, "inputs")?;
        let empty = RawParams::new();
        let raw = params.as_ref().map_or(&empty, |p| &p.raw);
        let options = EvaluateOptions {
            no_validate: flags & METRICUS_NO_VALIDATE != 0,
            allow_errors: flags & METRICUS_ALLOW_ERRORS != 0,
            config: ValidationConfig { strict: flags & METRICUS_STRICT != 0, ..Default::default() },
        };
        let outcome = evaluate(metric, &inputs.inner, raw, &options)?;
        let result = MetricusResult { evaluation: outcome.evaluation, report: outcome.report };
        put(out, Box::into_raw(Box::new(result)), "out")
    })
}

/// Runs every validator for the inputs' task. `metric` (may be NULL) selects
/// metric-specific rules; `checks` (may be NULL) is a comma-separated list of
/// check ids to enable.
///
/// # Safety
/// `inputs` is live; strings are NULL or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_validate(
    inputs: *const MetricusInputs,
    metric: *const c_char,
    checks: *const c_char,
    seed: u64,
    out: *mut *mut MetricusReport,
) -> MetricusStatus {
    guard(|| {
        let inputs = handle(inputs, "inputs")?;
        let mut config = ValidationConfig { seed, ..Default::default() };
        if let Some(m) = opt_text(metric, "metric")? {
            config = config.for_metric(m);
        }
        if let Some(c) = opt_text(checks, "checks")? {
            config = config.with_checks(c.split(',').map(str::trim).filter(|s| !s.is_empty()));
        }
        config.check()?;
        let report = validate_all(inputs.inner.task(), &inputs.inner, &config)?;
        put(out, Box::into_raw(Box::new(MetricusReport { inner: report })), "out")
    })
}

/// # Safety
/// `result` is a live handle from `metricus_evaluate`.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_kind(result: *const MetricusResult) -> MetricusValueKind {
    match result.as_ref().map(|r| &r.evaluation.value) {
        Some(MetricValue::PerClass(_)) => MetricusValueKind::PerClass,
        Some(MetricValue::Matrix(_)) => MetricusValueKind::Matrix,
        _ => MetricusValueKind::Scalar,
    }
}

/// # Safety
/// `result` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_scalar(result: *const MetricusResult, out: *mut f64) -> MetricusStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let v = r.evaluation.value.as_scalar().ok_or_else(|| {
            Failure::new(MetricusStatus::InvalidParameter, format!("value is not a scalar: {}", r.evaluation.value))
        })?;
        put(out, v, "out")
    })
}

/// Number of entries in a per-class value, or cells in a matrix value; 1 for
/// scalars.
///
/// # Safety
/// `result` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_len(result: *const MetricusResult) -> usize {
    match result.as_ref().map(|r| &r.evaluation.value) {
        Some(MetricValue::PerClass(m)) => m.len(),
        Some(MetricValue::Matrix(rows)) => rows.iter().map(Vec::len).sum(),
        Some(MetricValue::Scalar(_)) => 1,
        None => 0,
    }
}

/// Copies a per-class value into `labels` and `values` in ascending label
/// order. Both buffers hold `capacity` elements.
///
/// # Safety
/// `result` is live; both buffers hold `capacity` writable elements.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_per_class(
    result: *const MetricusResult,
    labels: *mut i64,
    values: *mut f64,
    capacity: usize,
) -> MetricusStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let map = r.evaluation.value.as_per_class().ok_or_else(|| {
            Failure::new(MetricusStatus::InvalidParameter, format!("value is not per-class: {}", r.evaluation.value))
        })?;
        if capacity < map.len() {
            return Err(Failure::new(
                MetricusStatus::BufferTooSmall,
                format!("need {} entries, got {capacity}", map.len()),
            ));
        }
        if labels.is_null() || values.is_null() {
            return Err(null("labels/values"));
        }
        for (i, (k, v)) in map.iter().enumerate() {
            labels.add(i).write(*k);
            values.add(i).write(*v);
        }
        Ok(())
    })
}

/// Copies a matrix value row-major into `cells` and its dimensions into
/// `rows` and `cols`.
///
/// # Safety
/// `result` is live; `cells` holds `capacity` writable elements; `rows` and
/// `cols` are writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_matrix(
    result: *const MetricusResult,
    cells: *mut u64,
    capacity: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> MetricusStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let m = r.evaluation.value.as_matrix().ok_or_else(|| {
            Failure::new(MetricusStatus::InvalidParameter, format!("value is not a matrix: {}", r.evaluation.value))
        })?;
        let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
        put(rows, nr, "rows")?;
        put(cols, nc, "cols")?;
        if capacity < nr * nc {
            return Err(Failure::new(
                MetricusStatus::BufferTooSmall,
                format!("need {} cells, got {capacity}", nr * nc),
            ));
        }
        if cells.is_null() && nr * nc > 0 {
            return Err(null("cells"));
        }
        for (i, v) in m.iter().flatten().enumerate() {
            cells.add(i).write(*v);
        }
        Ok(())
    })
}

/// # Safety
/// `result` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_warning_count(result: *const MetricusResult) -> usize {
    result.as_ref().map_or(0, |r| r.evaluation.warnings.len())
}

/// JSON object with `value`, `warnings` and `validation`, using the same
/// encoding as the command line (`"inf"` for infinity, string keys for
/// per-class maps).
///
/// # Safety
/// `result` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_json(result: *const MetricusResult, out: *mut *mut c_char) -> MetricusStatus {
    guard(|| {
        let r = handle(result, "result")?;
        let doc = serde_json::json!({
            "value": r.evaluation.value,
            "warnings": r.evaluation.warnings,
            "validation": r.report,
        });
        put_string(out, doc.to_string())
    })
}

/// # Safety
/// `result` is NULL or an undisposed handle from `metricus_evaluate`.
#[no_mangle]
pub unsafe extern "C" fn metricus_result_free(result: *mut MetricusResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Whether the report has no error findings.
///
/// # Safety
/// `report` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn metricus_report_passed(report: *const MetricusReport) -> bool {
    report.as_ref().is_some_and(|r| r.inner.passed)
}

/// Number of findings, optionally restricted to a severity (0 error,
/// 1 warning, 2 info, anything else for all).
///
/// # Safety
/// `report` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn metricus_report_count(report: *const MetricusReport, severity: i32) -> usize {
    let Some(r) = report.as_ref() else { return 0 };
    match severity {
        0 => r.inner.count(Severity::Error),
        1 => r.inner.count(Severity::Warning),
        2 => r.inner.count(Severity::Info),
        _ => r.inner.findings.len(),
    }
}

/// # Safety
/// `report` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn metricus_report_json(report: *const MetricusReport, out: *mut *mut c_char) -> MetricusStatus {
    guard(|| put_string(out, to_json(&handle(report, "report")?.inner)))
}

/// # Safety
/// `report` is NULL or an undisposed handle from `metricus_validate`.
#[no_mangle]
pub unsafe extern "C" fn metricus_report_free(report: *mut MetricusReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
