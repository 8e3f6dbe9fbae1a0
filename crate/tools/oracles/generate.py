"""Freeze reference metric values computed with scikit-learn, SciPy and
scikit-image into crates/core/tests/data/oracles.json.

Run from the repository root:  python3 tools/oracles/generate.py
"""

import json
from pathlib import Path

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree
from skimage.metrics import peak_signal_noise_ratio, structural_similarity
from sklearn import metrics as skm

OUT = Path(__file__).resolve().parents[2] / "crates/core/tests/data/oracles.json"
rng = np.random.default_rng(20240611)
cases = []


def add(metric, inputs, expected, params=None, tol=1e-12, note=""):
    cases.append(
        {
            "metric": metric,
            "note": note,
            "inputs": inputs,
            "params": params or {},
            "expected": expected,
            "tol": tol,
        }
    )


def fl(a):
    return [float(v) for v in np.asarray(a).ravel()]


def il(a):
    return [int(v) for v in np.asarray(a).ravel()]


# Regression -----------------------------------------------------------------

def regression_cases(t, p, tag):
    t, p = np.asarray(t, float), np.asarray(p, float)
    r = t - p
    inp = {"y_true": fl(t), "y_pred": fl(p)}
    n = len(t)
    add("mae", inp, skm.mean_absolute_error(t, p), note=tag)
    add("mse", inp, skm.mean_squared_error(t, p), note=tag)
    add("max_error", inp, skm.max_error(t, p), note=tag)
    add("median_absolute_error", inp, skm.median_absolute_error(t, p), note=tag)
    add("r2", inp, skm.r2_score(t, p), note=tag)
    rse = np.sum(r**2) / np.sum((t - t.mean()) ** 2)
    add("relative_squared_error", inp, rse, note=tag)
    adj = 1 - (1 - skm.r2_score(t, p)) * (n - 1) / (n - 2 - 1)
    add("r2", inp, adj, params={"adjusted": "true", "n_features": "2"}, note=tag)
    add("adjusted_r2", inp, adj, params={"n_features": "2"}, note=tag)
    add("explained_variance", inp, skm.explained_variance_score(t, p), note=tag)
    add("mean_bias_deviation", inp, float(np.mean(p - t)), note=tag)
    add("log_cosh_loss", inp, float(np.mean(np.log(np.cosh(r)))), note=tag)
    for delta in (0.5, 1.0, 3.0):
        a = np.abs(r)
        h = np.where(a <= delta, 0.5 * r**2, delta * (a - 0.5 * delta))
        add("huber_loss", inp, float(h.mean()), params={"delta": str(delta)}, note=tag)
    for q in (0.1, 0.5, 0.9):
        add("mean_pinball_loss", inp, skm.mean_pinball_loss(t, p, alpha=q), params={"quantile": str(q)}, note=tag)
    smape = np.mean(np.where(np.abs(t) + np.abs(p) == 0, 0, 2 * np.abs(r) / (np.abs(t) + np.abs(p))))
    add("smape", inp, float(smape), note=tag)
    if np.all(t != 0):
        add("mape", inp, skm.mean_absolute_percentage_error(t, p), note=tag)
    if np.all(t >= 0) and np.all(p >= 0):
        add("msle", inp, skm.mean_squared_log_error(t, p), note=tag)
    if np.all(t > 0) and np.all(p > 0):
        for power in (0.0, 1.0, 1.5, 2.0, 3.0):
            add(
                "mean_tweedie_deviance",
                inp,
                skm.mean_tweedie_deviance(t, p, power=power),
                params={"power": str(power)},
                tol=1e-10,
                note=tag,
            )


regression_cases([3, -0.5, 2, 7], [2.5, 0, 2, 8], "fixture R1")
for i in range(3):
    n = int(rng.integers(8, 40))
    t = rng.uniform(0.5, 20, n)
    p = t + rng.normal(0, 2, n)
    p = np.abs(p) + 0.1
    regression_cases(t, p, f"random positive {i}")
t = rng.normal(0, 5, 30)
regression_cases(t, t + rng.normal(0, 3, 30), "random signed")


# Classification -------------------------------------------------------------

def classification_cases(t, p, tag):
    t, p = np.asarray(t), np.asarray(p)
    labels = np.unique(np.concatenate([t, p]))
    inp = {"y_true": il(t), "y_pred": il(p)}

    def per_class(values):
        return {str(int(l)): float(v) for l, v in zip(labels, values)}

    add("accuracy", inp, skm.accuracy_score(t, p), note=tag)
    add("hamming_loss", inp, skm.hamming_loss(t, p), note=tag)
    add("balanced_accuracy", inp, skm.balanced_accuracy_score(t, p), note=tag)
    add("cohens_kappa", inp, skm.cohen_kappa_score(t, p), note=tag)
    add("confusion_matrix", inp, skm.confusion_matrix(t, p, labels=labels).tolist(), note=tag)
    fns = {
        "precision": skm.precision_score,
        "recall": skm.recall_score,
        "f1": skm.f1_score,
        "jaccard": skm.jaccard_score,
    }
    for name, f in fns.items():
        add(name, inp, per_class(f(t, p, labels=labels, average=None, zero_division=0)), note=tag)
        for avg in ("macro", "micro", "weighted"):
            add(name, inp, float(f(t, p, labels=labels, average=avg, zero_division=0)), params={"average": avg}, note=tag)
    for beta in (0.5, 2.0):
        add("fbeta", inp, per_class(skm.fbeta_score(t, p, beta=beta, labels=labels, average=None, zero_division=0)),
            params={"beta": str(beta)}, note=tag)
        add("fbeta", inp, float(skm.fbeta_score(t, p, beta=beta, labels=labels, average="macro", zero_division=0)),
            params={"beta": str(beta), "average": "macro"}, note=tag)
    ovr = [skm.matthews_corrcoef(t == l, p == l) for l in labels]
    add("mcc", inp, per_class(ovr), note=tag)
    add("mcc", inp, float(np.mean(ovr)), params={"average": "macro"}, note=tag)
    add("mcc", inp, skm.matthews_corrcoef(t, p), params={"average": "micro"}, note=tag)


classification_cases([0, 1, 2, 0, 1, 2], [0, 2, 1, 0, 0, 1], "fixture E1")
for i in range(3):
    n = int(rng.integers(20, 80))
    c = int(rng.integers(3, 6))
    t = rng.integers(0, c, n)
    p = np.where(rng.random(n) < 0.6, t, rng.integers(0, c, n))
    classification_cases(t, p, f"random {c}-class {i}")

for i in range(2):
    n, c = 40, 4
    t = rng.integers(0, c, n)
    t[:c] = np.arange(c)
    raw = rng.random((n, c)) + 0.05
    raw[np.arange(n), t] += rng.random(n)
    proba = raw / raw.sum(axis=1, keepdims=True)
    inp = {"y_true": il(t), "scores": proba.tolist()}
    eps = 1e-15
    clipped = np.clip(proba, eps, 1 - eps)
    clipped /= clipped.sum(axis=1, keepdims=True)
    ll = -np.mean(np.log(clipped[np.arange(n), t]))
    add("log_loss", inp, float(ll), note=f"random proba {i}")
    for k in (1, 2, 3):
        add("top_k_accuracy", inp, skm.top_k_accuracy_score(t, proba, k=k, labels=np.arange(c)),
            params={"k": str(k)}, note=f"random proba {i}")


# Clustering -----------------------------------------------------------------

def external_cases(t, p, tag):
    inp = {"labels_true": il(t), "labels_pred": il(p)}
    add("rand_score", inp, skm.rand_score(t, p), note=tag)
    add("adjusted_rand_index", inp, skm.adjusted_rand_score(t, p), note=tag)
    add("mutual_info", inp, skm.mutual_info_score(t, p), note=tag)
    add("normalized_mutual_info", inp, skm.normalized_mutual_info_score(t, p), note=tag)
    add("adjusted_mutual_info", inp, skm.adjusted_mutual_info_score(t, p), tol=1e-9, note=tag)
    add("homogeneity", inp, skm.homogeneity_score(t, p), note=tag)
    add("completeness", inp, skm.completeness_score(t, p), note=tag)
    add("v_measure", inp, skm.v_measure_score(t, p), note=tag)
    add("fowlkes_mallows", inp, skm.fowlkes_mallows_score(t, p), note=tag)


external_cases([0, 0, 1, 1], [0, 1, 1, 1], "fixture C1")
for i in range(4):
    n = int(rng.integers(20, 120))
    t = rng.integers(0, int(rng.integers(2, 6)), n)
    p = np.where(rng.random(n) < 0.5, t, rng.integers(0, int(rng.integers(2, 6)), n))
    external_cases(t, p, f"random partitions {i}")


def internal_cases(x, labels, tag):
    inp = {"x": np.asarray(x, float).tolist(), "labels": il(labels)}
    add("silhouette", inp, skm.silhouette_score(x, labels), tol=1e-10, note=tag)
    add("silhouette", inp, skm.silhouette_score(x, labels, metric="manhattan"), params={"distance": "manhattan"},
        tol=1e-10, note=tag)
    add("calinski_harabasz", inp, skm.calinski_harabasz_score(x, labels), tol=1e-9, note=tag)
    add("davies_bouldin", inp, skm.davies_bouldin_score(x, labels), tol=1e-10, note=tag)


internal_cases(np.array([[0.0], [1.0], [10.0], [11.0]]), [0, 0, 1, 1], "fixture P1")
for i in range(3):
    k = int(rng.integers(2, 5))
    centers = rng.normal(0, 6, (k, 3))
    labels = rng.integers(0, k, 60)
    labels[:k] = np.arange(k)
    labels[k:2 * k] = np.arange(k)
    x = centers[labels] + rng.normal(0, 1.5, (60, 3))
    internal_cases(x, labels, f"random blobs {i}")


# Segmentation ---------------------------------------------------------------

def boundary(mask):
    m = mask.astype(bool)
    struct = ndimage.generate_binary_structure(m.ndim, 1)
    inner = ndimage.binary_erosion(m, structure=struct, border_value=0)
    return np.argwhere(m & ~inner).astype(float)


def hausdorff(a, b, q, spacing):
    pa, pb = boundary(a) * spacing, boundary(b) * spacing
    if len(pa) == 0 or len(pb) == 0:
        return "inf"
    da = cKDTree(pb).query(pa)[0]
    db = cKDTree(pa).query(pb)[0]
    if q == 100:
        return float(max(da.max(), db.max()))
    return float(np.percentile(np.concatenate([da, db]), q))


def segmentation_cases(a, b, tag, spacing=None):
    inp = {"y_true": a.tolist(), "y_pred": b.tolist()}
    tp = np.sum((a == 1) & (b == 1))
    fp = np.sum((a == 0) & (b == 1))
    fn = np.sum((a == 1) & (b == 0))
    tn = np.sum((a == 0) & (b == 0))
    add("dice_score", inp, 2 * tp / (2 * tp + fp + fn), note=tag)
    add("iou_score", inp, tp / (tp + fp + fn), note=tag)
    add("sensitivity", inp, tp / (tp + fn), note=tag)
    add("specificity", inp, tn / (tn + fp), note=tag)
    add("segmentation_precision", inp, tp / (tp + fp), note=tag)
    sp = np.ones(a.ndim) if spacing is None else np.asarray(spacing, float)
    for q in (100, 95, 50):
        params = {"percentile": str(q)}
        if spacing is not None:
            params["spacing"] = ",".join(str(s) for s in spacing)
        add("hausdorff_distance", inp, hausdorff(a, b, q, sp), params=params, tol=1e-12, note=tag)


segmentation_cases(np.array([[1, 0], [1, 1]]), np.array([[1, 0], [0, 1]]), "fixture S1")
for i in range(3):
    a = (ndimage.gaussian_filter(rng.random((24, 24)), 2) > 0.5).astype(int)
    b = (ndimage.gaussian_filter(rng.random((24, 24)), 2) > 0.5).astype(int)
    a[5:15, 5:15] = 1
    b[7:17, 6:14] = 1
    segmentation_cases(a, b, f"random blobs 2-D {i}")
a = np.zeros((12, 12, 6), int)
b = np.zeros((12, 12, 6), int)
a[2:9, 3:10, 1:5] = 1
b[4:11, 2:8, 2:6] = 1
b[0, 0, 0] = 1
segmentation_cases(a, b, "boxes 3-D anisotropic", spacing=[0.8, 0.8, 2.5])


# Image ----------------------------------------------------------------------

def image_cases(ref, test, tag):
    u8 = ref.dtype == np.uint8
    inp = {"reference": ref.tolist(), "test": test.tolist(), "pixel_kind": "u8" if u8 else "float"}
    params = {} if u8 else {"data_range": "1.0"}
    rng_l = 255 if u8 else 1.0
    add("psnr", inp, float(peak_signal_noise_ratio(ref, test, data_range=rng_l)), params=params, tol=1e-10, note=tag)
    for win in (3, 7, 11):
        if win > min(ref.shape[:2]):
            continue
        val = structural_similarity(
            ref.astype(float), test.astype(float), win_size=win, data_range=rng_l,
            gaussian_weights=False, use_sample_covariance=True,
            channel_axis=2 if ref.ndim == 3 else None,
        )
        p = dict(params)
        p["window_size"] = str(win)
        add("ssim", inp, float(val), params=p, tol=1e-9, note=tag)


yy, xx = np.mgrid[0:32, 0:32]
ref = ((np.sin(xx / 3.0) + np.cos(yy / 5.0)) * 60 + 128).astype(np.uint8)
noise = rng.integers(-20, 21, ref.shape)
test = np.clip(ref.astype(int) + noise, 0, 255).astype(np.uint8)
image_cases(ref, test, "structured 8-bit")
ref_f = rng.random((20, 24))
test_f = np.clip(ref_f + rng.normal(0, 0.1, ref_f.shape), 0, 1)
image_cases(ref_f, test_f, "random float")
ref_c = rng.integers(0, 256, (16, 16, 3)).astype(np.uint8)
test_c = np.clip(ref_c.astype(int) + rng.integers(-30, 31, ref_c.shape), 0, 255).astype(np.uint8)
image_cases(ref_c, test_c, "random rgb 8-bit")

OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text(json.dumps({"cases": cases}, indent=1) + "\n")
print(f"wrote {len(cases)} cases to {OUT}")
