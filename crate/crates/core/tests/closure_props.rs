mod common;

use std::collections::BTreeMap;

use common::arb::{self, AB};
use kahyp::automata::{language_equiv, language_inclusion, thompson, Label, Nfa, Origin, StateId};
use kahyp::closure::{closure_fixpoint, patch_automaton, run_round, saturate, ClosureConfig, Variant};
use kahyp::oracle::{bounded_closure, enumerate_language, one_step_closure, stabilized_closure, WordSet};
use kahyp::reduce::reduce_expr;
use kahyp::solutions::least_solution;
use kahyp::syntax::{Expr, Hypothesis};
use proptest::prelude::*;

fn small() -> ClosureConfig {
    ClosureConfig::with_variant(Variant::TH).max_rounds(8).max_states(800)
}

fn closed(g: &Expr, h: &Hypothesis) -> Option<Nfa> {
    let out = closure_fixpoint(&thompson(g), h, &small()).unwrap();
    out.is_closed().then(|| out.automaton().clone())
}

fn fragment(m: &Nfa, x: StateId, n: usize) -> WordSet {
    WordSet::from_words(m.words_up_to(x, n).unwrap(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rounds_only_add(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let m = thompson(&g);
        let (t0, _) = run_round(&m, &h, Variant::T0).unwrap();
        let (th, _) = run_round(&m, &h, Variant::TH).unwrap();
        prop_assert!(m.is_below(&t0));
        prop_assert!(m.is_below(&th));
        // same sites, same copy layout: the saturated copies only add edges
        prop_assert!(t0.is_below(&th));
    }

    #[test]
    fn saturation_is_idempotent(e in arb::expr(AB, 8), w in arb::word(AB, 3)) {
        let z = thompson(&e);
        let once = saturate(&z, &w);
        prop_assert!(z.is_below(&once));
        prop_assert_eq!(saturate(&once, &w), once);
    }

    #[test]
    fn closed_results_contain_the_closure(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        if let Some(m) = closed(&g, &h) {
            for u in bounded_closure(&g, std::slice::from_ref(&h), 6, 2).iter() {
                prop_assert!(m.accepts(u), "{} missing", u);
            }
        }
    }

    #[test]
    fn closed_results_stay_inside_the_closure(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        if let Some(m) = closed(&g, &h) {
            let sample = stabilized_closure(&g, std::slice::from_ref(&h), 6, 2);
            if sample.stabilized {
                prop_assert_eq!(fragment(&m, m.initial(), 6), sample.fragment);
            }
        }
    }

    #[test]
    fn closed_states_are_hypothesis_closed(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        if let Some(m) = closed(&g, &h) {
            let hs = [h.clone()];
            for x in m.states() {
                let l = fragment(&m, x, 6);
                prop_assert_eq!(one_step_closure(&l, &hs, 6), l, "state {}", x);
            }
        }
    }

    /// One plain patching round maps a solution `s` of the input to
    /// `s*(y) = s_Z(y)·r` on the copy grafted at `x`, with `r` the sum of
    /// `s` over the states `x` reaches by `w`. Every rule of `s*` holds as a
    /// language inclusion except the entry edge, which holds up to one
    /// hypothesis step.
    #[test]
    fn extended_solution(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let m = thompson(&g);
        let (m1, log) = run_round(&m, &h, Variant::T0).unwrap();
        let s = least_solution(&m);
        let z = patch_automaton(&h, Variant::T0);
        let sz = least_solution(&z);
        let r: BTreeMap<StateId, Expr> = log
            .iter()
            .map(|p| {
                let sum = p.return_targets.iter().fold(Expr::Zero, |acc, &y| Expr::sum(acc, s[y].clone()));
                (p.site, sum)
            })
            .collect();
        let star = |y: StateId| match m1.origin(y) {
            Origin::Original => s[y].clone(),
            Origin::PatchCopy { site, copy_index, .. } => Expr::seq(sz[StateId(copy_index)].clone(), r[&site].clone()),
        };
        let includes = |lower: &Expr, upper: &Expr| language_inclusion(&thompson(lower), &thompson(upper)).unwrap().holds();

        prop_assert!(includes(&Expr::One, &star(m1.final_state())));
        for t in m1.transitions() {
            let lower = match t.label {
                Label::Eps => star(t.to),
                Label::Sym(a) => Expr::seq(Expr::Atom(a), star(t.to)),
            };
            let entry = matches!(m1.origin(t.from), Origin::Original) && !matches!(m1.origin(t.to), Origin::Original);
            if entry {
                let upper = bounded_closure(&star(t.from), std::slice::from_ref(&h), 6, h.rhs.len());
                prop_assert!(enumerate_language(&lower, 6).is_subset(&upper), "entry edge at {}", t.from);
            } else {
                prop_assert!(includes(&lower, &star(t.from)), "{} -> {}", t.from, t.to);
            }
        }
    }

    #[test]
    fn reduction_is_idempotent(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let r = reduce_expr(&g, &h, &small()).unwrap();
        if let Some(g2) = r.expr() {
            let reclosed = closure_fixpoint(r.automaton(), &h, &small()).unwrap();
            prop_assert!(reclosed.is_closed() && reclosed.patch_log().is_empty());
            // thompson(g2) may still have open states, so only the language is compared
            let again = reduce_expr(g2, &h, &small()).unwrap();
            prop_assert!(again.is_reduced());
            prop_assert!(language_equiv(&thompson(again.expr().unwrap()), &thompson(g2)).unwrap().is_equal());
        }
    }

    #[test]
    fn budgets_do_not_change_results(g in arb::expr(AB, 8), h in arb::hypothesis(3, 2)) {
        let r = reduce_expr(&g, &h, &small()).unwrap();
        if let Some(g2) = r.expr() {
            let big = ClosureConfig::with_variant(Variant::TH).max_rounds(16).max_states(4000);
            let r2 = reduce_expr(&g, &h, &big).unwrap();
            prop_assert_eq!(r2.rounds(), r.rounds());
            prop_assert!(language_equiv(&thompson(r2.expr().unwrap()), &thompson(g2)).unwrap().is_equal());
        }
    }
}
