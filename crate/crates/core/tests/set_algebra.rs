//! Property checks for circle-set algebra and the content functional.

use blochlab::geometry::{normalize, symm_diff_measure, Arc, CircleSet};
use blochlab::setfun::{hausdorff_content, MeasureFunction};
use proptest::prelude::*;

fn circle_set() -> impl Strategy<Value = CircleSet> {
    prop::collection::vec((0.0..1.0f64, 0.001..0.3f64), 0..6)
        .prop_map(|v| normalize(&v.into_iter().map(|(s, l)| Arc::new(s, l).unwrap()).collect::<Vec<_>>()))
}

fn content(e: &CircleSet) -> f64 {
    hausdorff_content(e, &MeasureFunction::power(0.5).unwrap()).unwrap().value
}

proptest! {
    #[test]
    fn inclusion_exclusion(a in circle_set(), b in circle_set()) {
        let lhs = a.union(&b).measure() + a.intersection(&b).measure();
        prop_assert!((lhs - a.measure() - b.measure()).abs() < 1e-12);
        prop_assert!((a.complement().measure() + a.measure() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn difference_and_intersection_partition(a in circle_set(), b in circle_set()) {
        let split = a.difference(&b).measure() + a.intersection(&b).measure();
        prop_assert!((split - a.measure()).abs() < 1e-12);
    }

    #[test]
    fn content_is_monotone_and_subadditive(a in circle_set(), b in circle_set()) {
        let u = a.union(&b);
        let (ca, cb, cu) = (content(&a), content(&b), content(&u));
        prop_assert!(ca <= cu + 1e-12 && cb <= cu + 1e-12);
        prop_assert!(cu <= ca + cb + 1e-12);
    }

    #[test]
    fn rotation_preserves_measure_and_content(a in circle_set(), t in 0.0..1.0f64) {
        let r = a.rotated(t);
        prop_assert!((r.measure() - a.measure()).abs() < 1e-12);
        prop_assert!((content(&r) - content(&a)).abs() < 1e-12);
    }

    #[test]
    fn shifted_symmetric_difference_is_bounded(a in circle_set(), t in 0.0..0.5f64) {
        let d = symm_diff_measure(&a, t);
        prop_assert!(d >= -1e-12 && d <= 2.0 * a.measure().min(a.complement().measure()) + 1e-12);
    }
}
