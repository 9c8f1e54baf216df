mod common;

use clusterkit::{LaurentPoly, Monomial, VarId};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((-3i64..=3, proptest::collection::vec(-2i64..=2, 3)), 0..5).prop_map(|terms| {
        let vars = ["a", "b", "c"];
        terms.into_iter().fold(LaurentPoly::zero(), |acc, (c, es)| {
            let m = Monomial::from_pairs(vars.iter().zip(es).map(|(v, e)| (VarId::from(*v), e)));
            acc + LaurentPoly::term(m, c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &(-&p), LaurentPoly::zero());
        prop_assert_eq!(&p * &LaurentPoly::one(), p.clone());
    }

    #[test]
    fn exact_division_recovers_factor(p in arb_poly(), q in arb_poly()) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.exact_div(&q).unwrap(), p);
    }

    #[test]
    fn text_round_trip(p in arb_poly()) {
        let text = p.to_string();
        let back: LaurentPoly = text.parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn split_denominator_recombines(p in arb_poly()) {
        let (num, den) = p.split_denominator();
        prop_assert!(num.is_polynomial());
        prop_assert_eq!(num.shift(&den.inverse()), p);
    }
}
