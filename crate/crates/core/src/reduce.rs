//! Reductions: close the Thompson automaton of an expression under the
//! hypotheses and read an expression back off its initial state.

use crate::automata::{language_equiv_with_budget, thompson, Nfa};
use crate::closure::{
    closure_fixpoint, closure_fixpoint_observed, BudgetReason, ClosureConfig, ClosureOutcome, PatchRecord, RoundReport,
    SiteOrder,
};
use crate::error::{Error, Result};
use crate::solutions::extract_expr;
use crate::syntax::{simplify_expr, Expr, Hypothesis};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ReductionOutcome {
    Reduced {
        expr: Expr,
        automaton: Nfa,
        rounds: u32,
        patch_log: Vec<PatchRecord>,
        /// The printed expression was checked language-equal to the
        /// closed automaton. `false` only if that check ran out of budget.
        certified: bool,
    },
    Undefined {
        reason: BudgetReason,
        partial: Nfa,
        rounds: u32,
        /// Index of the hypothesis whose closure ran out of budget.
        failing_index: Option<usize>,
    },
}

impl ReductionOutcome {
    pub fn is_reduced(&self) -> bool {
        matches!(self, ReductionOutcome::Reduced { .. })
    }

    pub fn expr(&self) -> Option<&Expr> {
        match self {
            ReductionOutcome::Reduced { expr, .. } => Some(expr),
            ReductionOutcome::Undefined { .. } => None,
        }
    }

    /// The closed automaton, or the partial one.
    pub fn automaton(&self) -> &Nfa {
        match self {
            ReductionOutcome::Reduced { automaton, .. } => automaton,
            ReductionOutcome::Undefined { partial, .. } => partial,
        }
    }

    pub fn rounds(&self) -> u32 {
        match self {
            ReductionOutcome::Reduced { rounds, .. } | ReductionOutcome::Undefined { rounds, .. } => *rounds,
        }
    }

    pub fn patch_log(&self) -> &[PatchRecord] {
        match self {
            ReductionOutcome::Reduced { patch_log, .. } => patch_log,
            ReductionOutcome::Undefined { .. } => &[],
        }
    }
}

fn finish(automaton: Nfa, rounds: u32, patch_log: Vec<PatchRecord>, cfg: &ClosureConfig) -> Result<ReductionOutcome> {
    let expr = simplify_expr(&extract_expr(&automaton, automaton.initial())?);
    let certified = match language_equiv_with_budget(&thompson(&expr), &automaton, cfg.subset_budget) {
        Ok(eq) => {
            assert!(
                eq.is_equal(),
                "extracted expression {expr} disagrees with its automaton on {:?}",
                eq.witness()
            );
            true
        }
        Err(Error::StateBudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(ReductionOutcome::Reduced {
        expr,
        automaton,
        rounds,
        patch_log,
        certified,
    })
}

/// Closes `thompson(g)` under `h` and extracts the initial state's
/// expression. Errors only on an invalid configuration.
pub fn reduce_expr(g: &Expr, h: &Hypothesis, cfg: &ClosureConfig) -> Result<ReductionOutcome> {
    match closure_fixpoint(&thompson(g), h, cfg)? {
        ClosureOutcome::Closed {
            result,
            rounds_used,
            patch_log,
            ..
        } => finish(result, rounds_used, patch_log, cfg),
        ClosureOutcome::BudgetExhausted {
            partial,
            rounds_used,
            reason,
            ..
        } => Ok(ReductionOutcome::Undefined {
            reason,
            partial,
            rounds: rounds_used,
            failing_index: Some(0),
        }),
    }
}

/// Closes under each hypothesis in turn, on the automaton left by the
/// previous one, and keeps cycling through the list until every hypothesis
/// has been seen to hold without patching. For independent hypotheses one
/// pass suffices. At most `cfg.max_rounds` passes are made.
pub fn reduce_seq(g: &Expr, hs: &[Hypothesis], cfg: &ClosureConfig) -> Result<ReductionOutcome> {
    reduce_seq_observed(g, hs, cfg, |_, _| {})
}

/// [`reduce_seq`], calling `observe` with the hypothesis index after every
/// round.
pub fn reduce_seq_observed(
    g: &Expr,
    hs: &[Hypothesis],
    cfg: &ClosureConfig,
    mut observe: impl FnMut(usize, &RoundReport<'_>),
) -> Result<ReductionOutcome> {
    let mut current = thompson(g);
    cfg.validate(&current)?;
    let mut rounds = 0;
    let mut patch_log = Vec::new();
    if hs.is_empty() {
        return finish(current, rounds, patch_log, cfg);
    }
    // Consecutive hypotheses known to hold on `current`.
    let mut settled = 0;
    for _pass in 0..cfg.max_rounds {
        for (i, h) in hs.iter().enumerate() {
            match closure_fixpoint_observed(&current, h, cfg, SiteOrder::Ascending, |r| observe(i, r))? {
                ClosureOutcome::Closed {
                    result,
                    rounds_used,
                    patch_log: log,
                    ..
                } => {
                    rounds += rounds_used;
                    settled = if log.is_empty() { settled + 1 } else { 1 };
                    patch_log.extend(log);
                    current = result;
                }
                ClosureOutcome::BudgetExhausted {
                    partial,
                    rounds_used,
                    reason,
                    ..
                } => {
                    return Ok(ReductionOutcome::Undefined {
                        reason,
                        partial,
                        rounds: rounds + rounds_used,
                        failing_index: Some(i),
                    })
                }
            }
            if settled >= hs.len() {
                return finish(current, rounds, patch_log, cfg);
            }
        }
    }
    Ok(ReductionOutcome::Undefined {
        reason: BudgetReason::RoundBudget,
        partial: current,
        rounds,
        failing_index: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::language_equiv;
    use crate::closure::Variant;
    use crate::oracle::{bounded_closure, enumerate_language};
    use crate::syntax::parse_expr;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }
    fn h(s: &str) -> Hypothesis {
        Hypothesis::parse(s).unwrap()
    }
    fn same(a: &Expr, b: &str) -> bool {
        language_equiv(&thompson(a), &thompson(&e(b))).unwrap().is_equal()
    }
    fn th() -> ClosureConfig {
        ClosureConfig::with_variant(Variant::TH)
    }

    #[test]
    fn saturated_reductions() {
        let r = reduce_expr(&e("a"), &h("ba<=a"), &th()).unwrap();
        assert!(same(r.expr().unwrap(), "b*a"));
        assert_eq!(r.rounds(), 2);
        let r = reduce_expr(&e("a"), &h("ab<=a"), &th()).unwrap();
        assert!(same(r.expr().unwrap(), "ab*"));
        assert!(matches!(r, ReductionOutcome::Reduced { certified: true, .. }));
    }

    #[test]
    fn non_regular_closure_is_undefined() {
        let r = reduce_expr(&e("(ab)*"), &h("ab<=ba"), &th().max_rounds(8)).unwrap();
        assert!(!r.is_reduced());
    }

    #[test]
    fn contraction_under_plain_patching() {
        let cfg = ClosureConfig::with_variant(Variant::T0);
        let r = reduce_expr(&e("bba"), &h("a<=ba"), &cfg).unwrap();
        let out = enumerate_language(r.expr().unwrap(), 5);
        assert_eq!(out, bounded_closure(&e("bba"), &[h("a<=ba")], 5, 2));
        assert_eq!(r.rounds(), 3);
    }

    #[test]
    fn sequential_contractions() {
        let hs = [h("a<=aa"), h("b<=bb")];
        let r = reduce_seq(&e("aa+bb"), &hs, &th()).unwrap();
        assert!(same(r.expr().unwrap(), "a+aa+b+bb"));
    }

    #[test]
    fn empty_sequence_round_trips() {
        let g = e("(a+b)*ab");
        let r = reduce_seq(&g, &[], &th()).unwrap();
        assert!(same(r.expr().unwrap(), "(a+b)*ab"));
        assert_eq!(r.rounds(), 0);
    }

    #[test]
    fn repeated_hypothesis_is_idempotent() {
        let once = reduce_expr(&e("a"), &h("ba<=a"), &th()).unwrap();
        let twice = reduce_seq(&e("a"), &[h("ba<=a"), h("ba<=a")], &th()).unwrap();
        assert!(same(twice.expr().unwrap(), &once.expr().unwrap().to_string()));
        assert_eq!(twice.patch_log().len(), once.patch_log().len());
    }

    #[test]
    fn reduced_output_is_closed() {
        let hyp = h("ba<=a");
        let g2 = reduce_expr(&e("a"), &hyp, &th()).unwrap();
        let again = closure_fixpoint(g2.automaton(), &hyp, &th()).unwrap();
        assert!(again.patch_log().is_empty());
        let r = reduce_expr(g2.expr().unwrap(), &hyp, &th()).unwrap();
        assert!(same(r.expr().unwrap(), &g2.expr().unwrap().to_string()));
    }

    #[test]
    fn undefined_reports_failing_hypothesis() {
        let hs = [h("a<=aa"), h("ab<=ba")];
        let r = reduce_seq(&e("(ab)*"), &hs, &th().max_rounds(6)).unwrap();
        match r {
            ReductionOutcome::Undefined { failing_index, .. } => assert_eq!(failing_index, Some(1)),
            other => panic!("expected undefined, got {other:?}"),
        }
    }
}
