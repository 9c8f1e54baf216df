//! Independent recomputations of derived fixture values.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use clusterkit::colimit::{stable_mutation, PathQuiver};
use clusterkit::seed::enumerate_cluster_variables;
use clusterkit::triangulation::{flip_closure, limit_arcs, split_fountain};
use clusterkit::{Arc, FiniteTriangulation, LaurentPoly, Seed, VarId};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

#[test]
fn a2_exchange_graph_is_a_pentagon() {
    let s = Seed::from_arrows(&["y1", "y2"], &["y1", "y2"], &[("y1", "y2", 1)]).unwrap();
    let point: BTreeMap<VarId, BigRational> = [("y1", 3), ("y2", 7)]
        .into_iter()
        .map(|(l, n)| (v(l), BigRational::from_integer(BigInt::from(n))))
        .collect();
    let mut numeric = NumericSeed::new(&s, &point);
    let mut seen = Vec::new();
    for step in 0..5 {
        numeric.mutate(step % 2);
        let mut pair = numeric.values.clone();
        pair.sort();
        seen.push(pair);
    }
    let mut initial: Vec<BigRational> = point.values().cloned().collect();
    initial.sort();
    assert_eq!(seen[4], initial);
    assert_eq!(seen.iter().collect::<BTreeSet<_>>().len(), 5);

    // The census values are exactly the numbers met along the zigzag.
    let census: BTreeSet<BigRational> = enumerate_cluster_variables(&s, 5, 1000)
        .unwrap()
        .iter()
        .map(|p| evaluate(p, &point))
        .collect();
    let walked: BTreeSet<BigRational> = seen.into_iter().flatten().collect();
    assert_eq!(census, walked);
}

#[test]
fn path_quiver_value_from_hand_built_stage() {
    // x_{-2} -> x_{-1} -> x_0 -> x_1 -> x_2 with the inner three exchangeable.
    let hand = Seed::from_arrows(
        &["xm2", "xm1", "x0", "x1", "x2"],
        &["xm1", "x0", "x1"],
        &[("xm2", "xm1", 1), ("xm1", "x0", 1), ("x0", "x1", 1), ("x1", "x2", 1)],
    )
    .unwrap();
    let (mutated, fresh) = hand.mutate(&v("x0")).unwrap();
    let expected = mutated.value(&fresh).unwrap();
    assert_eq!(expected, &lp("x0^-1*x1 + xm1*x0^-1"));
    let stable = stable_mutation(&PathQuiver::default(), &[v("x0")], &v("x0"), 4).unwrap();
    assert_eq!(&stable.value, expected);
    assert_eq!(stable.stage, 1);
}

#[test]
fn flip_classes_have_catalan_size() {
    for n in 4..=9 {
        let count = flip_closure(&FiniteTriangulation::fan(n)).len() as u64;
        assert_eq!(count, catalan(n as u64 - 2), "n = {n}");
    }
}

#[test]
fn split_fountain_limits_from_far_arcs() {
    let it = split_fountain();
    let limits = limit_arcs(&it);
    assert_eq!(limits, BTreeSet::from([Arc::turns(0, 1, 4), Arc::turns(0, 3, 4)]));
    // Far along each family the moving endpoint is within 1/k of the
    // limit point, measured on the circle.
    for f in &it.families {
        let far = f.arc_at(10_000).unwrap();
        let (p, q) = far.endpoints();
        let dist = |a: &BigRational| {
            let x = a.to_f64().unwrap();
            x.min(1.0 - x)
        };
        assert!(dist(p.angle()).min(dist(q.angle())) < 1e-3, "{far:?}");
    }
}

#[test]
fn example_census_matches_numeric_walks() {
    let s = Seed::from_arrows(&["x1", "x2", "x3"], &["x2", "x3"], &[("x1", "x2", 1), ("x3", "x2", 1)]).unwrap();
    let point: BTreeMap<VarId, BigRational> = [("x1", 2), ("x2", 5), ("x3", 11)]
        .into_iter()
        .map(|(l, n)| (v(l), BigRational::from_integer(BigInt::from(n))))
        .collect();
    // Every admissible walk of length <= 6, run numerically.
    let mut walked = BTreeSet::new();
    let mut frontier = vec![NumericSeed::new(&s, &point)];
    walked.extend(frontier[0].values.iter().cloned());
    for _ in 0..6 {
        let mut next = Vec::new();
        for ns in &frontier {
            for k in 0..3 {
                if !ns.exchangeable[k] {
                    continue;
                }
                let mut child = NumericSeed {
                    labels: ns.labels.clone(),
                    exchangeable: ns.exchangeable.clone(),
                    b: ns.b.clone(),
                    values: ns.values.clone(),
                };
                child.mutate(k);
                walked.insert(child.values[k].clone());
                next.push(child);
            }
        }
        frontier = next;
    }
    let census: BTreeSet<BigRational> = enumerate_cluster_variables(&s, 6, 10_000)
        .unwrap()
        .iter()
        .map(|p: &LaurentPoly| evaluate(p, &point))
        .collect();
    assert_eq!(census, walked);
    assert_eq!(census.len(), 6);
}
