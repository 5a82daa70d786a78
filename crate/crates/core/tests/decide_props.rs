mod common;

use common::arb::{self, AB};
use kahyp::closure::{ClosureConfig, Variant};
use kahyp::decide::{ka_h_equiv, Verdict};
use kahyp::oracle::stabilized_closure;
use kahyp::reduce::reduce_seq;
use proptest::prelude::*;

fn small() -> ClosureConfig {
    ClosureConfig::with_variant(Variant::TH).max_rounds(8).max_states(800)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflexive_when_defined(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let hs = [h];
        let d = ka_h_equiv(&g, &g, &hs, &small()).unwrap();
        if reduce_seq(&g, &hs, &small()).unwrap().is_reduced() {
            prop_assert_eq!(d.verdict, Verdict::Equivalent);
        } else {
            let unknown = matches!(d.verdict, Verdict::Unknown { .. });
            prop_assert!(unknown);
        }
    }

    #[test]
    fn symmetric(g in arb::expr(AB, 8), f in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let hs = [h];
        let there = ka_h_equiv(&g, &f, &hs, &small()).unwrap();
        let back = ka_h_equiv(&f, &g, &hs, &small()).unwrap();
        match (&there.verdict, &back.verdict) {
            (Verdict::Equivalent, Verdict::Equivalent) | (Verdict::Unknown { .. }, Verdict::Unknown { .. }) => {}
            (Verdict::Inequivalent { witness: a, side: s }, Verdict::Inequivalent { witness: b, side: t }) => {
                prop_assert_eq!(a, b);
                prop_assert_eq!(s.flip(), *t);
            }
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn agrees_with_bounded_closures(g in arb::expr(AB, 7), f in arb::expr(AB, 7), h in arb::hypothesis(3, 2)) {
        let hs = [h];
        let d = ka_h_equiv(&g, &f, &hs, &small()).unwrap();
        let (lg, lf) = (stabilized_closure(&g, &hs, 6, 2), stabilized_closure(&f, &hs, 6, 2));
        prop_assume!(lg.stabilized && lf.stabilized);
        match d.verdict {
            Verdict::Equivalent => prop_assert_eq!(lg.fragment, lf.fragment),
            Verdict::Inequivalent { witness, .. } if witness.len() <= 6 => {
                prop_assert!(lg.fragment.contains(&witness) != lf.fragment.contains(&witness));
            }
            _ => {}
        }
    }
}
