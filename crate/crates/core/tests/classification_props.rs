use std::collections::BTreeMap;

use metricus::classification::*;
use metricus::AverageMode;
use ndarray::Array2;
use proptest::prelude::*;

fn labeled() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, usize)> {
    (2usize..=6, 1usize..=100).prop_flat_map(|(c, n)| {
        let l = 0..c as i64;
        (
            prop::collection::vec(l.clone(), n),
            prop::collection::vec(l, n),
            Just(c),
        )
    })
}

fn avg(a: AverageMode) -> ClassificationParams {
    ClassificationParams::with_average(a)
}

fn scalar(e: metricus::Evaluation) -> f64 {
    e.expect_scalar()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn micro_scores_equal_accuracy((t, p, _) in labeled()) {
        let acc = accuracy(&t, &p).unwrap();
        let micro = avg(AverageMode::Micro);
        prop_assert!((scalar(precision(&t, &p, &micro).unwrap()) - acc).abs() <= 1e-12);
        prop_assert!((scalar(recall(&t, &p, &micro).unwrap()) - acc).abs() <= 1e-12);
        prop_assert!((scalar(f1(&t, &p, &micro).unwrap()) - acc).abs() <= 1e-12);
        prop_assert!((hamming_loss(&t, &p).unwrap() - (1.0 - acc)).abs() <= 1e-12);
        let bal = scalar(balanced_accuracy(&t, &p).unwrap());
        let macro_recall = scalar(recall(&t, &p, &avg(AverageMode::Macro)).unwrap());
        prop_assert!((bal - macro_recall).abs() <= 1e-12);
    }

    #[test]
    fn per_class_f1_from_jaccard((t, p, _) in labeled()) {
        let none = avg(AverageMode::None);
        let f = f1(&t, &p, &none).unwrap();
        let j = jaccard(&t, &p, &none).unwrap();
        for (k, fv) in f.expect_per_class() {
            let jv = j.expect_per_class()[k];
            prop_assert!((fv - 2.0 * jv / (1.0 + jv)).abs() <= 1e-12);
        }
    }

    #[test]
    fn per_class_keys_are_observed_labels((t, p, _) in labeled()) {
        let mut observed: Vec<i64> = t.iter().chain(&p).copied().collect();
        observed.sort_unstable();
        observed.dedup();
        let none = avg(AverageMode::None);
        for e in [
            precision(&t, &p, &none).unwrap(),
            recall(&t, &p, &none).unwrap(),
            f1(&t, &p, &none).unwrap(),
            jaccard(&t, &p, &none).unwrap(),
            mcc(&t, &p, &none).unwrap(),
        ] {
            let keys: Vec<i64> = e.expect_per_class().keys().copied().collect();
            prop_assert_eq!(&keys, &observed);
        }
    }

    #[test]
    fn relabeling_and_permutation_invariance((t, p, c) in labeled(), shift in 1i64..50, rot in 0usize..6) {
        let perm: Vec<i64> = (0..c as i64).map(|l| ((l as usize + rot) % c) as i64 * 3 + shift).collect();
        let rt: Vec<i64> = t.iter().map(|&l| perm[l as usize]).collect();
        let rp: Vec<i64> = p.iter().map(|&l| perm[l as usize]).collect();
        let none = avg(AverageMode::None);
        let rename = |m: &BTreeMap<i64, f64>| -> BTreeMap<i64, f64> {
            m.iter().map(|(k, v)| (perm[*k as usize], *v)).collect()
        };
        for f in [precision, recall, f1, jaccard, mcc] {
            let a = f(&t, &p, &none).unwrap();
            let b = f(&rt, &rp, &none).unwrap();
            let expected = rename(a.expect_per_class());
            for (k, v) in b.expect_per_class() {
                prop_assert!((v - expected[k]).abs() <= 1e-12);
            }
        }
        for mode in [AverageMode::Macro, AverageMode::Micro, AverageMode::Weighted] {
            let a = scalar(f1(&t, &p, &avg(mode)).unwrap());
            let b = scalar(f1(&rt, &rp, &avg(mode)).unwrap());
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!((cohens_kappa(&t, &p).unwrap_or(0.0) - cohens_kappa(&rt, &rp).unwrap_or(0.0)).abs() <= 1e-12);
        let mut rev_t = t.clone();
        let mut rev_p = p.clone();
        rev_t.reverse();
        rev_p.reverse();
        prop_assert_eq!(accuracy(&t, &p).unwrap(), accuracy(&rev_t, &rev_p).unwrap());
        let a = scalar(f1(&t, &p, &avg(AverageMode::Macro)).unwrap());
        let b = scalar(f1(&rev_t, &rev_p, &avg(AverageMode::Macro)).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn top_k_monotone_and_log_loss_minimal(
        (t, _, c) in labeled(),
        raw in prop::collection::vec(0.01f64..1.0, 600),
    ) {
        let n = t.len();
        let mut scores = Array2::<f64>::zeros((n, c));
        for i in 0..n {
            let row: f64 = (0..c).map(|j| raw[(i * c + j) % raw.len()]).sum();
            for j in 0..c {
                scores[[i, j]] = raw[(i * c + j) % raw.len()] / row;
            }
        }
        let labels: Vec<i64> = (0..c as i64).collect();
        let mut prev = 0.0;
        for k in 1..=c {
            let params = ClassificationParams { k, labels: Some(labels.clone()), ..Default::default() };
            let v = top_k_accuracy(&t, scores.view(), &params).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
        prop_assert_eq!(prev, 1.0);
        let params = ClassificationParams { labels: Some(labels), ..Default::default() };
        let mut onehot = Array2::<f64>::zeros((n, c));
        for (i, &l) in t.iter().enumerate() {
            onehot[[i, l as usize]] = 1.0;
        }
        let best = log_loss(&t, onehot.view(), &params).unwrap();
        let other = log_loss(&t, scores.view(), &params).unwrap();
        prop_assert!(best <= other);
    }
}
