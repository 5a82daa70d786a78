//! Equivalence modulo hypotheses: reduce both sides, compare the reduced
//! languages. When a reduction is undefined the answer is `Unknown`.

use std::fmt;

use serde::Serialize;

use crate::automata::{language_inclusion_with_budget, Containment};
use crate::closure::ClosureConfig;
use crate::error::Result;
use crate::reduce::{reduce_seq, ReductionOutcome};
use crate::syntax::{Expr, Hypothesis, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    LeftUndefined,
    RightUndefined,
    BothUndefined,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::LeftUndefined => "left reduction undefined",
            UnknownReason::RightUndefined => "right reduction undefined",
            UnknownReason::BothUndefined => "both reductions undefined",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Equivalent,
    /// `witness` is in the closure of `side` only.
    Inequivalent {
        witness: Word,
        side: Side,
    },
    Unknown {
        reason: UnknownReason,
        details: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Rounds {
    pub left: u32,
    pub right: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub rounds: Rounds,
}

#[derive(Serialize)]
struct DecisionJson<'a> {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    side: Option<Side>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<UnknownReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<&'a str>,
    rounds: Rounds,
}

impl Serialize for Decision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut j = DecisionJson {
            verdict: "",
            witness: None,
            side: None,
            reason: None,
            details: None,
            rounds: self.rounds,
        };
        match &self.verdict {
            Verdict::Equivalent => j.verdict = "equivalent",
            Verdict::Inequivalent { witness, side } => {
                j.verdict = "inequivalent";
                j.witness = Some(witness.to_string());
                j.side = Some(*side);
            }
            Verdict::Unknown { reason, details } => {
                j.verdict = "unknown";
                j.reason = Some(*reason);
                j.details = Some(details);
            }
        }
        j.serialize(s)
    }
}

fn describe(side: Side, r: &ReductionOutcome) -> Option<String> {
    match r {
        ReductionOutcome::Reduced { .. } => None,
        ReductionOutcome::Undefined {
            reason,
            rounds,
            failing_index,
            partial,
        } => {
            let mut s = format!(
                "{side}: {reason} exhausted after {rounds} rounds ({} states)",
                partial.state_count()
            );
            if let Some(i) = failing_index {
                s.push_str(&format!(", hypothesis #{i}"));
            }
            Some(s)
        }
    }
}

/// Decides `⟦g⟧_H = ⟦f⟧_H` when both reductions are defined. The two
/// reductions run in parallel.
pub fn ka_h_equiv(g: &Expr, f: &Expr, hs: &[Hypothesis], cfg: &ClosureConfig) -> Result<Decision> {
    let (left, right) = rayon::join(|| reduce_seq(g, hs, cfg), || reduce_seq(f, hs, cfg));
    let (left, right) = (left?, right?);
    let rounds = Rounds {
        left: left.rounds(),
        right: right.rounds(),
    };
    let (dl, dr) = (describe(Side::Left, &left), describe(Side::Right, &right));
    let unknown = |reason, details: Vec<String>| Decision {
        verdict: Verdict::Unknown {
            reason,
            details: details.join("; "),
        },
        rounds,
    };
    match (dl, dr) {
        (Some(a), Some(b)) => return Ok(unknown(UnknownReason::BothUndefined, vec![a, b])),
        (Some(a), None) => return Ok(unknown(UnknownReason::LeftUndefined, vec![a])),
        (None, Some(b)) => return Ok(unknown(UnknownReason::RightUndefined, vec![b])),
        (None, None) => {}
    }
    // Both directions are searched so that the reported witness is the
    // shortlex-least one overall; swapping the inputs then only flips `side`.
    let (a, b) = (left.automaton(), right.automaton());
    let only_left = language_inclusion_with_budget(a, b, cfg.subset_budget)?;
    let only_right = language_inclusion_with_budget(b, a, cfg.subset_budget)?;
    let verdict = match (only_left, only_right) {
        (Containment::Holds, Containment::Holds) => Verdict::Equivalent,
        (Containment::Counterexample(w), Containment::Holds) => Verdict::Inequivalent {
            witness: w,
            side: Side::Left,
        },
        (Containment::Holds, Containment::Counterexample(w)) => Verdict::Inequivalent {
            witness: w,
            side: Side::Right,
        },
        (Containment::Counterexample(l), Containment::Counterexample(r)) => {
            if l < r {
                Verdict::Inequivalent {
                    witness: l,
                    side: Side::Left,
                }
            } else {
                Verdict::Inequivalent {
                    witness: r,
                    side: Side::Right,
                }
            }
        }
    };
    Ok(Decision { verdict, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }
    fn hs(list: &[&str]) -> Vec<Hypothesis> {
        list.iter().map(|s| Hypothesis::parse(s).unwrap()).collect()
    }
    fn decide(a: &str, b: &str, h: &[&str]) -> Decision {
        ka_h_equiv(&e(a), &e(b), &hs(h), &ClosureConfig::default().max_rounds(8)).unwrap()
    }

    #[test]
    fn contraction_equivalences() {
        assert_eq!(decide("aa", "a+aa", &["a<=aa"]).verdict, Verdict::Equivalent);
        assert_eq!(decide("aaa*", "aa*", &["a<=aa"]).verdict, Verdict::Equivalent);
    }

    #[test]
    fn plain_inequivalence() {
        let d = decide("ab", "ba", &[]);
        assert_eq!(
            d.verdict,
            Verdict::Inequivalent {
                witness: Word::parse("ab").unwrap(),
                side: Side::Left
            }
        );
        let d = decide("ba", "ab", &[]);
        assert_eq!(
            d.verdict,
            Verdict::Inequivalent {
                witness: Word::parse("ab").unwrap(),
                side: Side::Right
            }
        );
    }

    #[test]
    fn non_regular_side_is_unknown() {
        let d = decide("(ab)*", "a*b*", &["ab<=ba"]);
        assert!(matches!(
            d.verdict,
            Verdict::Unknown {
                reason: UnknownReason::LeftUndefined | UnknownReason::BothUndefined,
                ..
            }
        ));
    }

    #[test]
    fn json_fields() {
        let v = serde_json::to_value(decide("ab", "ba", &[])).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"verdict": "inequivalent", "witness": "ab", "side": "left", "rounds": {"left": 0, "right": 0}})
        );
        let v = serde_json::to_value(decide("a", "a", &[])).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"verdict": "equivalent", "rounds": {"left": 0, "right": 0}})
        );
    }
}
