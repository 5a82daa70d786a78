mod common;

use common::arb::{self, AB};
use kahyp::automata::{language_equiv, thompson};
use kahyp::oracle::{bounded_closure, enumerate_language, one_step_closure, WordSet};
use kahyp::syntax::{parse_expr, print_expr, reverse_expr, simplify_expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(e in arb::expr(AB, 14)) {
        let printed = print_expr(&e);
        let back = parse_expr(&printed).unwrap();
        prop_assert_eq!(&back, &e.normalize());
        prop_assert_eq!(print_expr(&back), printed);
    }

    #[test]
    fn simplify_preserves_language(e in arb::expr(AB, 14)) {
        let s = simplify_expr(&e);
        prop_assert!(s.size() <= e.size());
        prop_assert!(language_equiv(&thompson(&e), &thompson(&s)).unwrap().is_equal());
    }

    #[test]
    fn reverse_reverses_words(e in arb::expr(AB, 12)) {
        let expected: Vec<_> = enumerate_language(&e, 8).iter().map(|w| w.reversed()).collect();
        let got = enumerate_language(&reverse_expr(&e), 8);
        prop_assert_eq!(got, WordSet::from_words(expected, 8));
    }

    #[test]
    fn reverse_is_an_involution(e in arb::expr(AB, 14)) {
        prop_assert_eq!(reverse_expr(&reverse_expr(&e)), e.normalize());
    }

    #[test]
    fn enumeration_agrees_with_acceptance(e in arb::expr(AB, 12), u in arb::word(AB, 7)) {
        let m = thompson(&e);
        prop_assert_eq!(enumerate_language(&e, 7).contains(&u), m.accepts(&u));
    }

    #[test]
    fn one_step_closure_is_extensive(e in arb::expr(AB, 10), h in arb::hypothesis(4, 2)) {
        let l = enumerate_language(&e, 6);
        prop_assert!(l.is_subset(&one_step_closure(&l, &[h], 6)));
    }

    #[test]
    fn bounded_closure_is_monotone(e in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let hs = [h];
        let small = bounded_closure(&e, &hs, 5, 1);
        let longer = bounded_closure(&e, &hs, 6, 1);
        let slacker = bounded_closure(&e, &hs, 5, 2);
        prop_assert!(small.is_subset(&longer.truncate(5)));
        prop_assert!(small.is_subset(&slacker));
    }

    #[test]
    fn bounded_closure_is_a_fixpoint_at_its_cap(e in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let hs = [h];
        let (n, slack) = (5, 2);
        let at_cap = kahyp::oracle::closure_fixpoint_at(&enumerate_language(&e, n + slack), &hs, n + slack);
        prop_assert_eq!(one_step_closure(&at_cap, &hs, n + slack), at_cap.clone());
        prop_assert_eq!(at_cap.truncate(n), bounded_closure(&e, &hs, n, slack));
    }
}
