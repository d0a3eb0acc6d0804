use langevin_unlearning::models::{
    apply_request, Dataset, LogisticObjective, MulticlassObjective, Objective, UnlearningRequest,
};
use langevin_unlearning::pngd::{clip_to_norm, project_ball};
use proptest::collection::vec;
use proptest::prelude::*;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dataset(dim: usize, classes: u32) -> impl Strategy<Value = Dataset> {
    (1usize..12).prop_flat_map(move |n| {
        (vec(-3.0f64..3.0, n * dim), vec(0..classes, n))
            .prop_map(move |(f, l)| Dataset::new(f, l, dim, classes, false).unwrap().normalize())
    })
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_inside(v in vec(-50.0f64..50.0, 1..20), r in 0.01f64..30.0) {
        let mut once = v.clone();
        project_ball(&mut once, r);
        prop_assert!(norm(&once) <= r * (1.0 + 1e-14));
        let mut twice = once.clone();
        project_ball(&mut twice, r);
        for (a, b) in once.iter().zip(&twice) {
            prop_assert!((a - b).abs() <= 1e-14 * r);
        }
        if norm(&v) <= r {
            prop_assert_eq!(&once, &v);
        }
    }

    #[test]
    fn clipping_caps_norm_and_keeps_direction(v in vec(-10.0f64..10.0, 1..20), c in 0.01f64..5.0) {
        let mut g = v.clone();
        clip_to_norm(&mut g, c);
        prop_assert!(norm(&g) <= c * (1.0 + 1e-14));
        let dot: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        prop_assert!(dot >= -1e-12);
    }

    #[test]
    fn logistic_gradient_is_bounded(data in dataset(5, 2), w in vec(-100.0f64..100.0, 5)) {
        let obj = LogisticObjective::new(5, 0.0);
        let mut g = vec![0.0; 5];
        obj.gradient(&data, &w, &mut g);
        prop_assert!(norm(&g) <= 1.0 + 1e-12);
    }

    #[test]
    fn multiclass_gradient_is_bounded(data in dataset(4, 3), w in vec(-100.0f64..100.0, 12)) {
        let obj = MulticlassObjective::new(4, 3, 0.0);
        let mut g = vec![0.0; 12];
        obj.gradient(&data, &w, &mut g);
        prop_assert!(norm(&g) <= 2.0 + 1e-12);
    }

    #[test]
    fn regularized_logistic_loss_is_strongly_convex_along_segments(
        data in dataset(3, 2),
        a in vec(-5.0f64..5.0, 3),
        b in vec(-5.0f64..5.0, 3),
        t in 0.0f64..1.0,
    ) {
        let lambda = 0.05;
        let obj = LogisticObjective::new(3, lambda);
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        let gap: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
        let chord = t * obj.loss(&data, &a) + (1.0 - t) * obj.loss(&data, &b);
        let slack = 0.5 * lambda * t * (1.0 - t) * gap;
        prop_assert!(obj.loss(&data, &mid) <= chord - slack + 1e-9);
    }

    #[test]
    fn requests_only_touch_their_rows(data in dataset(4, 2), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let i = pick.index(data.len());
        let req = UnlearningRequest::new([i], seed).unwrap();
        let a = apply_request(&data, &req, true).unwrap();
        let b = apply_request(&data, &req, true).unwrap();
        prop_assert_eq!(a.features(), b.features());
        prop_assert_eq!(a.labels(), b.labels());
        for j in (0..data.len()).filter(|&j| j != i) {
            prop_assert_eq!(a.row(j), data.row(j));
            prop_assert_eq!(a.label(j), data.label(j));
        }
        prop_assert!((norm(a.row(i)) - 1.0).abs() < 1e-12);
    }
}
