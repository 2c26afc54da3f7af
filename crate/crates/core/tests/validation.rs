use gazescore_core::validation::{average_ranks, mae, pearson, rmse, spearman};
use proptest::prelude::*;

fn pair_series() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..40).prop_flat_map(|n| (prop::collection::vec(-1000.0f64..1000.0, n), prop::collection::vec(-1000.0f64..1000.0, n)))
}

fn distinct(xs: &[f64]) -> bool {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.windows(2).all(|w| w[0] != w[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn mae_never_exceeds_rmse((a, b) in pair_series()) {
        prop_assert!(mae(&a, &b).unwrap() <= rmse(&a, &b).unwrap() + 1e-9);
    }

    #[test]
    fn correlations_are_bounded((a, b) in pair_series()) {
        if let Ok(r) = pearson(&a, &b) {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
        if let Ok(r) = spearman(&a, &b) {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn pearson_ignores_increasing_affine_maps((a, b) in pair_series(), k in 0.01f64..100.0, c in -100.0f64..100.0) {
        if let Ok(r) = pearson(&a, &b) {
            let a2: Vec<f64> = a.iter().map(|x| k * x + c).collect();
            prop_assert!((pearson(&a2, &b).unwrap() - r).abs() < 1e-6);
        }
    }

    #[test]
    fn spearman_ignores_monotone_maps((a, b) in pair_series()) {
        if let Ok(r) = spearman(&a, &b) {
            let a2: Vec<f64> = a.iter().map(|x| x.powi(3) + 5.0 * x).collect();
            let b2: Vec<f64> = b.iter().map(|x| (x / 500.0).exp()).collect();
            prop_assert!((spearman(&a2, &b2).unwrap() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn spearman_is_pearson_on_ranks((a, b) in pair_series()) {
        prop_assume!(distinct(&a) && distinct(&b));
        let r = spearman(&a, &b).unwrap();
        let rr = pearson(&average_ranks(&a), &average_ranks(&b)).unwrap();
        prop_assert!((r - rr).abs() < 1e-9);
    }
}
