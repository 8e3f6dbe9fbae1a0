use metricus::clustering::*;
use metricus::Result;
use ndarray::Array2;
use proptest::prelude::*;

type External = fn(&[i64], &[i64]) -> Result<f64>;

const SYMMETRIC: [(&str, External); 6] = [
    ("rand", rand_score),
    ("ari", adjusted_rand_index),
    ("mi", mutual_info),
    ("nmi", normalized_mutual_info),
    ("ami", adjusted_mutual_info),
    ("fmi", fowlkes_mallows),
];

const ALL: [(&str, External); 9] = [
    ("rand", rand_score),
    ("ari", adjusted_rand_index),
    ("mi", mutual_info),
    ("nmi", normalized_mutual_info),
    ("ami", adjusted_mutual_info),
    ("fmi", fowlkes_mallows),
    ("homogeneity", homogeneity),
    ("completeness", completeness),
    ("v_measure", v_measure),
];

fn partitions(max_n: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (2usize..=max_n, 1i64..=5, 1i64..=5).prop_flat_map(|(n, ka, kb)| {
        (prop::collection::vec(0..ka, n), prop::collection::vec(0..kb, n))
    })
}

fn agree(a: Result<f64>, b: Result<f64>, tol: f64) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => (x - y).abs() <= tol,
        (Err(x), Err(y)) => x.kind() == y.kind(),
        _ => false,
    }
}

fn entropy(labels: &[i64]) -> f64 {
    let mut counts = std::collections::BTreeMap::new();
    for l in labels {
        *counts.entry(*l).or_insert(0usize) += 1;
    }
    let n = labels.len() as f64;
    -counts.values().map(|&c| c as f64 / n * (c as f64 / n).ln()).sum::<f64>()
}

fn relabel(labels: &[i64], offset: i64) -> Vec<i64> {
    labels.iter().map(|&l| (4 - l) * 11 + offset).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn external_indices_ignore_label_names((t, p) in partitions(60), off in -20i64..20) {
        let (rt, rp) = (relabel(&t, off), relabel(&p, -off));
        for (name, f) in ALL {
            prop_assert!(agree(f(&t, &p), f(&rt, &p), 1e-12), "{} true side", name);
            prop_assert!(agree(f(&t, &p), f(&t, &rp), 1e-12), "{} pred side", name);
        }
        for (name, f) in SYMMETRIC {
            prop_assert!(agree(f(&t, &p), f(&p, &t), 1e-12), "{} symmetry", name);
        }
    }

    #[test]
    fn pair_counts_match_brute_force((t, p) in partitions(30)) {
        let n = t.len();
        let (mut same_both, mut same_t, mut same_p, mut agree_pairs) = (0u64, 0u64, 0u64, 0u64);
        for i in 0..n {
            for j in i + 1..n {
                let st = t[i] == t[j];
                let sp = p[i] == p[j];
                same_both += u64::from(st && sp);
                same_t += u64::from(st);
                same_p += u64::from(sp);
                agree_pairs += u64::from(st == sp);
            }
        }
        let total = (n * (n - 1) / 2) as f64;
        prop_assert_eq!(rand_score(&t, &p).unwrap(), agree_pairs as f64 / total);
        if same_t > 0 && same_p > 0 {
            let fmi = same_both as f64 / ((same_t as f64) * (same_p as f64)).sqrt();
            prop_assert_eq!(fowlkes_mallows(&t, &p).unwrap(), fmi);
        }
    }

    #[test]
    fn information_identities((t, p) in partitions(60)) {
        let (ht, hp) = (entropy(&t), entropy(&p));
        prop_assume!(ht > 0.0 && hp > 0.0);
        let mi = mutual_info(&t, &p).unwrap();
        let v = v_measure(&t, &p).unwrap();
        let nmi = normalized_mutual_info(&t, &p).unwrap();
        prop_assert!((v - nmi).abs() <= 1e-12);
        prop_assert!((homogeneity(&t, &p).unwrap() * ht - mi).abs() <= 1e-12);
        prop_assert!((completeness(&t, &p).unwrap() * hp - mi).abs() <= 1e-12);
        prop_assert!(adjusted_mutual_info(&t, &p).unwrap() <= nmi + 1e-9);
    }

    #[test]
    fn ari_is_one_only_for_equivalent_partitions((t, p) in partitions(40)) {
        let ari = adjusted_rand_index(&t, &p).unwrap();
        prop_assert!(ari <= 1.0 + 1e-12);
        let equivalent = (0..t.len()).all(|i| (0..t.len()).all(|j| (t[i] == t[j]) == (p[i] == p[j])));
        prop_assert_eq!(equivalent, (ari - 1.0).abs() <= 1e-12);
        prop_assert!((adjusted_rand_index(&t, &relabel(&t, 3)).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn internal_indices_ignore_translation_and_scale(
        pts in prop::collection::vec(-10.0f64..10.0, 60),
        labels in prop::collection::vec(0i64..3, 20),
        shift in -100.0f64..100.0,
        scale in 0.1f64..50.0,
    ) {
        let mut with_all = labels.clone();
        with_all[0] = 0;
        with_all[1] = 1;
        with_all[2] = 2;
        let x = Array2::from_shape_vec((20, 3), pts).unwrap();
        let moved = x.mapv(|v| v + shift);
        let scaled = x.mapv(|v| v * scale);
        let params = InternalIndexParams::default();
        let rel = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs());
        let s = silhouette(x.view(), &with_all, &params).unwrap();
        prop_assert!(rel(s, silhouette(moved.view(), &with_all, &params).unwrap()));
        prop_assert!(rel(s, silhouette(scaled.view(), &with_all, &params).unwrap()));
        let ch = calinski_harabasz(x.view(), &with_all).unwrap();
        prop_assert!(rel(ch, calinski_harabasz(moved.view(), &with_all).unwrap()));
        prop_assert!(rel(ch, calinski_harabasz(scaled.view(), &with_all).unwrap()));
        let db = davies_bouldin(x.view(), &with_all).unwrap();
        prop_assert!(rel(db, davies_bouldin(moved.view(), &with_all).unwrap()));
    }
}
