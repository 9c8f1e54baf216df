mod common;

use std::collections::BTreeMap;

use clusterkit::seed::{
    check_similar, connected_component_labels, coproduct, enumerate_cluster_variables, opposite_seed,
    verify_similarity, Similarity,
};
use clusterkit::{Seed, VarId};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn symmetrizes(d: &BTreeMap<VarId, BigInt>, s: &Seed) -> bool {
    let weight = |x: &VarId| d.get(x).cloned().unwrap_or_else(|| BigInt::from(1));
    s.matrix()
        .entries()
        .all(|(x, y, b)| weight(x) * b == -(weight(y) * s.entry(y, x)))
}

fn pick_exchangeable(s: &Seed, i: usize) -> Option<VarId> {
    let ex: Vec<&VarId> = s.exchangeable().iter().collect();
    (!ex.is_empty()).then(|| ex[i % ex.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mutation_is_an_involution(s in arb_seed(5), i in 0usize..8) {
        let Some(x) = pick_exchangeable(&s, i) else { return Ok(()) };
        let (t, fresh) = s.mutate(&x).unwrap();
        let (back, again) = t.mutate(&fresh).unwrap();
        prop_assert_eq!(&back, &s);
        let renamed: BTreeMap<VarId, VarId> = BTreeMap::from([(again, x.clone())]);
        let relabeled = back.renamed(&renamed).unwrap();
        prop_assert_eq!(relabeled.matrix(), s.matrix());
        for l in s.labels() {
            prop_assert_eq!(relabeled.value(l), s.value(l));
        }
    }

    #[test]
    fn symmetrizer_survives_mutation(s in arb_seed(5), picks in proptest::collection::vec(0usize..8, 1..4)) {
        let d = s.symmetrizer();
        prop_assert!(symmetrizes(&d, &s));
        let mut cur = s.clone();
        let mut d_cur = d;
        for i in picks {
            let Some(x) = pick_exchangeable(&cur, i) else { break };
            let (next, fresh) = cur.mutate(&x).unwrap();
            if let Some(w) = d_cur.remove(&x) {
                d_cur.insert(fresh, w);
            }
            prop_assert!(symmetrizes(&d_cur, &next));
            cur = next;
        }
    }

    #[test]
    fn mutation_preserves_components(s in arb_seed(6), i in 0usize..8) {
        let Some(x) = pick_exchangeable(&s, i) else { return Ok(()) };
        let (t, fresh) = s.mutate(&x).unwrap();
        let back = |l: &VarId| if *l == fresh { x.clone() } else { l.clone() };
        let after: Vec<Vec<VarId>> = connected_component_labels(&t)
            .iter()
            .map(|c| { let mut c: Vec<VarId> = c.iter().map(back).collect(); c.sort(); c })
            .collect();
        let mut after = after;
        after.sort();
        let before: Vec<Vec<VarId>> = connected_component_labels(&s).iter().map(|c| c.iter().cloned().collect()).collect();
        prop_assert_eq!(after, before);
    }

    #[test]
    fn coproduct_mutation_is_local(a in arb_spec(4, 2, false), b in arb_spec(4, 2, false), picks in proptest::collection::vec(0usize..8, 1..4)) {
        let (s1, s2) = (a.build("p"), b.build("q"));
        let c = coproduct(&[s1.clone(), s2.clone()]).unwrap();
        let seq = admissible_from_indices(&s1, &picks);
        let (mutated, _) = c.mutate_along(&seq).unwrap();
        for l in s2.labels() {
            prop_assert_eq!(mutated.value(l), s2.value(l));
            for k in s2.labels() {
                prop_assert_eq!(mutated.entry(l, k), s2.entry(l, k));
            }
        }
        for l in mutated.labels().filter(|l| !s2.contains(l)) {
            for k in s2.labels() {
                prop_assert_eq!(mutated.entry(l, k), 0);
            }
        }
    }

    #[test]
    fn similarity_is_symmetric_and_verified(s in arb_seed(5), flip in any::<bool>(), perm in Just(()).prop_perturb(|_, mut rng| rng.next_u64())) {
        let t0 = if flip { opposite_seed(&s) } else { s.clone() };
        // Relabel the candidate with a pseudo-random permutation.
        let labels: Vec<VarId> = t0.labels().cloned().collect();
        let mut order: Vec<usize> = (0..labels.len()).collect();
        let mut state = perm;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let map: BTreeMap<VarId, VarId> = labels.iter().enumerate().map(|(i, l)| (l.clone(), label("z", order[i]))).collect();
        let t = t0.relabeled_initial(&map).unwrap();
        let st = check_similar(&s, &t, 100_000).unwrap();
        let ts = check_similar(&t, &s, 100_000).unwrap();
        prop_assert!(matches!(st, Similarity::Similar(_)));
        prop_assert!(matches!(ts, Similarity::Similar(_)));
        if let Similarity::Similar(phi) = st {
            prop_assert!(verify_similarity(&s, &t, &phi));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn similarity_answers_agree_in_both_directions(a in arb_spec(4, 1, true), b in arb_spec(4, 1, true)) {
        let (s, t) = (a.build("x"), b.build("y"));
        let st = matches!(check_similar(&s, &t, 100_000).unwrap(), Similarity::Similar(_));
        let ts = matches!(check_similar(&t, &s, 100_000).unwrap(), Similarity::Similar(_));
        prop_assert_eq!(st, ts);
    }

    /// Mutated values agree with the numeric exchange recurrence.
    #[test]
    fn mutation_matches_numeric_recurrence(spec in arb_spec(4, 1, false), picks in proptest::collection::vec(0usize..8, 1..5), nums in proptest::collection::vec(0u32..7, 8)) {
        let s = spec.build("x");
        let point = positive_point(&s, &nums);
        let seq = admissible_from_indices(&s, &picks);
        let mut numeric = NumericSeed::new(&s, &point);
        let mut cur = s.clone();
        for x in &seq {
            let k = cur.labels().position(|l| l == x).unwrap();
            let (next, fresh) = cur.mutate(x).unwrap();
            numeric.mutate(k);
            let value = evaluate(next.value(&fresh).unwrap(), &point);
            prop_assert_eq!(&value, &numeric.values[k]);
            numeric.labels[k] = fresh.clone();
            let perm: Vec<usize> = next.labels().map(|l| numeric.labels.iter().position(|m| m == l).unwrap()).collect();
            numeric = NumericSeed {
                labels: perm.iter().map(|&i| numeric.labels[i].clone()).collect(),
                exchangeable: perm.iter().map(|&i| numeric.exchangeable[i]).collect(),
                b: perm.iter().map(|&i| perm.iter().map(|&j| numeric.b[i][j]).collect()).collect(),
                values: perm.iter().map(|&i| numeric.values[i].clone()).collect(),
            };
            for (idx, l) in next.labels().enumerate() {
                for (jdx, m) in next.labels().enumerate() {
                    prop_assert_eq!(next.entry(l, m), numeric.b[idx][jdx]);
                }
            }
            cur = next;
        }
    }

    #[test]
    fn census_never_fails_division(spec in arb_spec(3, 1, false)) {
        let s = spec.build("x");
        let values = enumerate_cluster_variables(&s, 4, 100_000).unwrap();
        for v in values {
            prop_assert!(v.has_nonnegative_coefficients());
        }
    }
}
