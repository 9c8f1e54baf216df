mod common;

use std::collections::{BTreeMap, BTreeSet};

use clusterkit::seed::{check_skew_symmetrizable, connected_component_labels};
use clusterkit::triangulation::{
    classify_arc, exchangeable_arcs, flip_arc, flip_partner, seed_from_triangulation, triangulation_components,
    validate_triangulation, ArcKind,
};
use clusterkit::{Arc, FiniteTriangulation, InfiniteTriangulation, MarkedPoint, VarId};
use num_bigint::BigInt;
use proptest::prelude::*;

fn fan_on(points: &BTreeSet<MarkedPoint>) -> FiniteTriangulation {
    let pts: Vec<&MarkedPoint> = points.iter().collect();
    let n = pts.len();
    let mut arcs = BTreeSet::new();
    for i in 0..n {
        arcs.insert(Arc::new(pts[i].clone(), pts[(i + 1) % n].clone()).unwrap());
    }
    for k in 2..n.saturating_sub(1) {
        arcs.insert(Arc::new(pts[0].clone(), pts[k].clone()).unwrap());
    }
    validate_triangulation(points.clone(), arcs).unwrap()
}

/// A triangulation of 3 to 12 points at angles k/97, randomized by flips.
fn arb_triangulation() -> impl Strategy<Value = FiniteTriangulation> {
    (
        proptest::collection::btree_set(0i64..97, 3..=12),
        proptest::collection::vec(0usize..64, 0..30),
    )
        .prop_map(|(angles, flips)| {
            let points = angles.into_iter().map(|k| MarkedPoint::turn(k, 97)).collect();
            let mut t = fan_on(&points);
            for i in flips {
                let ex: Vec<Arc> = exchangeable_arcs(&t).into_iter().collect();
                if ex.is_empty() {
                    break;
                }
                t = flip_arc(&t, &ex[i % ex.len()]).unwrap();
            }
            t
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flips_agree_with_mutation(t in arb_triangulation()) {
        let seed = seed_from_triangulation(&t);
        for a in exchangeable_arcs(&t) {
            let partner = flip_partner(t.arcs(), &a).unwrap();
            let flipped = seed_from_triangulation(&flip_arc(&t, &a).unwrap());
            let (mutated, fresh) = seed.mutate(&a.label()).unwrap();
            let renamed = mutated.matrix().renamed(&BTreeMap::from([(fresh.clone(), partner.label())]));
            prop_assert_eq!(&renamed, flipped.matrix());
            let ex: BTreeSet<VarId> = mutated.exchangeable().iter().map(|l| if *l == fresh { partner.label() } else { l.clone() }).collect();
            prop_assert_eq!(&ex, flipped.exchangeable());
        }
    }

    #[test]
    fn exchangeable_arcs_are_internal(t in arb_triangulation()) {
        for a in exchangeable_arcs(&t) {
            prop_assert_eq!(classify_arc(&t, &a), ArcKind::Internal);
        }
        for a in t.arcs() {
            if classify_arc(&t, a) == ArcKind::Edge {
                prop_assert!(!seed_from_triangulation(&t).is_exchangeable(&a.label()));
            }
        }
    }

    #[test]
    fn seeds_are_skew_symmetric_and_locally_finite(t in arb_triangulation()) {
        let s = seed_from_triangulation(&t);
        let d = check_skew_symmetrizable(s.matrix()).unwrap();
        prop_assert!(d.values().all(|x| *x == BigInt::from(1)));
        for l in s.labels() {
            prop_assert!(s.neighbors(l).count() <= 4);
        }
    }

    #[test]
    fn components_agree_with_seed(t in arb_triangulation()) {
        let it = InfiniteTriangulation { points: t.points().clone(), arcs: t.arcs().clone(), ..Default::default() };
        let parts: Vec<BTreeSet<VarId>> = triangulation_components(&it, 0)
            .unwrap()
            .into_iter()
            .map(|p| p.iter().map(Arc::label).collect())
            .collect();
        prop_assert_eq!(parts, connected_component_labels(&seed_from_triangulation(&t)));
    }
}
