mod common;

use std::collections::BTreeSet;

use clusterkit::colimit::{
    build_filtration, build_stage, check_only_coefficients, inclusion_morphism, mediating_morphism, mutate_positions,
    stable_mutation, FiniteSeedOracle, PathQuiver, TriangulationOracle,
};
use clusterkit::morphism::{check_cm3, check_no_specialization_conditions, compose, isomorphism_if_similar};
use clusterkit::seed::{connected_component_labels, opposite_seed};
use clusterkit::triangulation::{one_sided_fan, split_fountain};
use clusterkit::{ClusterMap, SeedOracle, VarId};
use common::*;
use proptest::prelude::*;

fn oracle(which: usize) -> Box<dyn SeedOracle> {
    match which {
        0 => Box::new(PathQuiver::default()),
        1 => Box::new(TriangulationOracle::new(one_sided_fan()).unwrap()),
        _ => Box::new(TriangulationOracle::new(split_fountain()).unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wrapped_finite_seeds_are_exhausted(spec in arb_spec(5, 1, false)) {
        let s = spec.build("x");
        let o = FiniteSeedOracle::new(s.clone());
        let steps = s.len() + connected_component_labels(&s).len() + 1;
        let fil = build_filtration(&o, steps).unwrap();
        let union: BTreeSet<VarId> = fil.stages.iter().flat_map(|st| st.labels().cloned()).collect();
        prop_assert_eq!(union, s.label_set());
        prop_assert_eq!(fil.last().unwrap(), &s);
        prop_assert_eq!(fil.last().unwrap().label_set(), s.label_set());
        for (k, m) in fil.inclusions.iter().enumerate() {
            prop_assert!(check_no_specialization_conditions(m, 2, 100_000).unwrap().passed(), "stage {}", k);
            prop_assert!(check_cm3(m, 2, 100_000).unwrap().passed());
        }
        for st in &fil.stages {
            prop_assert_eq!(check_only_coefficients(st, &s).unwrap(), None);
        }

        let cone: Vec<ClusterMap> = fil.stages.iter().map(|st| inclusion_morphism(st, &s).unwrap()).collect();
        let (h, report) = mediating_morphism(&fil, &cone, 1, 100_000).unwrap();
        prop_assert!(report.passed());
        prop_assert_eq!(&h, &ClusterMap::identity(&s).unwrap());

        // Any map agreeing with the cone on every stage is the mediating map.
        for (i, g) in cone.iter().enumerate() {
            let restricted = compose(&h, &fil.composite(i, fil.len() - 1).unwrap()).unwrap();
            prop_assert_eq!(&restricted, g);
        }

        // Precomposing with an isomorphism onto the opposite seed.
        let t = opposite_seed(&s).relabeled_initial(&s.labels().map(|l| (l.clone(), VarId::from(format!("o{l}").as_str()))).collect()).unwrap();
        let (phi, _) = isomorphism_if_similar(&s, &t, 100_000).unwrap();
        let cone2: Vec<ClusterMap> = cone.iter().map(|g| compose(&phi, g).unwrap()).collect();
        let (h2, _) = mediating_morphism(&fil, &cone2, 0, 100_000).unwrap();
        prop_assert_eq!(h2, phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn stable_values_agree_across_stages(which in 0usize..3, picks in proptest::collection::vec(0usize..64, 0..=4), target in 0usize..64) {
        let o = oracle(which);
        let base = build_stage(o.as_ref(), 3).unwrap();
        let ex: Vec<VarId> = base.exchangeable().iter().cloned().collect();
        let labels: Vec<VarId> = base.labels().cloned().collect();
        let seq: Vec<VarId> = if ex.is_empty() { Vec::new() } else { picks.iter().map(|i| ex[i % ex.len()].clone()).collect() };
        let target = labels[target % labels.len()].clone();
        let stable = stable_mutation(o.as_ref(), &seq, &target, 7).unwrap();
        prop_assert!(stable.stage <= 3);
        prop_assert!(stable.value.has_nonnegative_coefficients());
        for later in stable.stage + 1..=(stable.stage + 2).min(7) {
            let st = build_stage(o.as_ref(), later).unwrap();
            let (mutated, pos) = mutate_positions(&st, &seq).unwrap();
            prop_assert_eq!(mutated.value(&pos[&target]), Some(&stable.value));
        }
    }
}
