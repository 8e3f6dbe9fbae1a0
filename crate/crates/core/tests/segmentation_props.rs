use metricus::classification::{precision as cls_precision, recall, ClassificationParams};
use metricus::segmentation::*;
use metricus::{AverageMode, Mask};
use proptest::prelude::*;

fn mask_pair(shape: Vec<usize>) -> impl Strategy<Value = (Mask, Mask)> {
    let len: usize = shape.iter().product();
    (prop::collection::vec(0i64..=1, len), prop::collection::vec(0i64..=1, len)).prop_map(move |(a, b)| {
        (Mask::from_shape_vec(&shape, a).unwrap(), Mask::from_shape_vec(&shape, b).unwrap())
    })
}

fn hd(a: &Mask, b: &Mask, percentile: f64, spacing: Option<Vec<f64>>) -> f64 {
    hausdorff_distance(a, b, &HausdorffParams { percentile, spacing })
        .unwrap()
        .expect_scalar()
}

fn brute_force(a: &Mask, b: &Mask) -> f64 {
    let pa = extract_boundary(a).unwrap();
    let pb = extract_boundary(b).unwrap();
    if pa.is_empty() || pb.is_empty() {
        return f64::INFINITY;
    }
    let directed = |from: &[Vec<usize>], to: &[Vec<usize>]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| p.iter().zip(q).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum::<f64>())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(&pa, &pb).max(directed(&pb, &pa)).sqrt()
}

fn place(content: &[i64], dy: usize, dx: usize) -> Mask {
    let mut frame = vec![0i64; 20 * 20];
    for y in 0..8 {
        for x in 0..8 {
            frame[(y + dy) * 20 + x + dx] = content[y * 8 + x];
        }
    }
    Mask::from_shape_vec(&[20, 20], frame).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dice_iou_bijection(
        (a, b) in (2usize..=16, 2usize..=16, 1usize..=8)
            .prop_flat_map(|(h, w, d)| mask_pair(if d == 1 { vec![h, w] } else { vec![h, w, d] }))
    ) {
        let dice = dice_score(&a, &b).unwrap().expect_scalar();
        let iou = iou_score(&a, &b).unwrap().expect_scalar();
        prop_assert!((dice - 2.0 * iou / (1.0 + iou)).abs() <= 1e-12);
    }

    #[test]
    fn hausdorff_matches_brute_force((a, b) in mask_pair(vec![16, 16])) {
        let v = hd(&a, &b, 100.0, None);
        prop_assert_eq!(v.to_bits(), brute_force(&a, &b).to_bits());
        prop_assert_eq!(v.to_bits(), hd(&b, &a, 100.0, None).to_bits());
        if a.foreground_count() > 0 {
            prop_assert_eq!(hd(&a, &a, 100.0, None), 0.0);
        }
    }

    #[test]
    fn percentile_is_monotone((a, b) in mask_pair(vec![12, 12]), q1 in 1.0f64..100.0, q2 in 1.0f64..100.0) {
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        prop_assert!(hd(&a, &b, lo, None) <= hd(&a, &b, hi, None));
    }

    #[test]
    fn spacing_scales_linearly((a, b) in mask_pair(vec![10, 10, 3]), lambda in prop::sample::select(vec![0.5, 2.0, 4.0, 0.25])) {
        let base = vec![1.5, 0.5, 2.0];
        let scaled: Vec<f64> = base.iter().map(|s| s * lambda).collect();
        let v = hd(&a, &b, 100.0, Some(base));
        let w = hd(&a, &b, 100.0, Some(scaled));
        if v.is_finite() {
            prop_assert_eq!(w, v * lambda);
        } else {
            prop_assert!(w.is_infinite());
        }
    }

    #[test]
    fn translation_invariance(
        ca in prop::collection::vec(0i64..=1, 64),
        cb in prop::collection::vec(0i64..=1, 64),
        dy in 1usize..11,
        dx in 1usize..11,
    ) {
        let v = hd(&place(&ca, 1, 1), &place(&cb, 1, 1), 100.0, None);
        let w = hd(&place(&ca, dy, dx), &place(&cb, dy, dx), 100.0, None);
        prop_assert_eq!(v.to_bits(), w.to_bits());
    }

    #[test]
    fn rates_match_classification((a, b) in mask_pair(vec![8, 8])) {
        let t: Vec<i64> = a.data().iter().copied().collect();
        let p: Vec<i64> = b.data().iter().copied().collect();
        let params = ClassificationParams {
            average: AverageMode::None,
            labels: Some(vec![0, 1]),
            ..Default::default()
        };
        let rec = recall(&t, &p, &params).unwrap();
        let prec = cls_precision(&t, &p, &params).unwrap();
        let rec = rec.expect_per_class();
        let prec = prec.expect_per_class();
        if a.foreground_count() > 0 {
            prop_assert_eq!(sensitivity(&a, &b).unwrap().expect_scalar(), rec[&1]);
        }
        if a.foreground_count() < 64 {
            prop_assert_eq!(specificity(&a, &b).unwrap().expect_scalar(), rec[&0]);
        }
        if b.foreground_count() > 0 {
            prop_assert_eq!(precision(&a, &b).unwrap().expect_scalar(), prec[&1]);
        }
    }
}
