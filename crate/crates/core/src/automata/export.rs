use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Label, Nfa, Origin, StateId, Transition};
use crate::error::Error;
use crate::syntax::Letter;

const PATCH_COLOR: &str = "#d65c5c";

/// Graphviz rendering. Nodes are emitted in id order and edges in
/// (source, label, target) order, so equal automata render identically.
/// States added by patching are filled in a separate color.
pub fn to_dot(m: &Nfa) -> String {
    let mut out = String::from("digraph nfa {\n  rankdir=LR;\n");
    for s in m.states() {
        let mut attrs = vec![format!("label=\"{s}\"")];
        attrs.push(if s == m.final_state() {
            "shape=doublecircle".into()
        } else {
            "shape=circle".into()
        });
        if s == m.initial() {
            attrs.push("penwidth=2".into());
        }
        if let Origin::PatchCopy { round, site, .. } = m.origin(s) {
            attrs.push(format!("style=filled, fillcolor=\"{PATCH_COLOR}\""));
            attrs.push(format!("tooltip=\"round {round}, site {site}\""));
        }
        let _ = writeln!(out, "  {s} [{}];", attrs.join(", "));
    }
    for t in m.transitions() {
        let style = match t.label {
            Label::Eps => ", style=dashed",
            Label::Sym(_) => "",
        };
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"{style}];", t.from, t.to, t.label);
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub id: StateId,
    pub origin: Origin,
}

/// Stable JSON shape of an automaton. Transitions are `[from, label, to]`
/// triples with label `"eps"` for ε.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NfaJson {
    pub states: Vec<StateJson>,
    pub transitions: Vec<(StateId, String, StateId)>,
    pub initial: StateId,
    #[serde(rename = "final")]
    pub final_state: StateId,
}

impl From<&Nfa> for NfaJson {
    fn from(m: &Nfa) -> Self {
        NfaJson {
            states: m
                .states()
                .map(|id| StateJson {
                    id,
                    origin: m.origin(id),
                })
                .collect(),
            transitions: m.transitions().map(|t| (t.from, t.label.to_string(), t.to)).collect(),
            initial: m.initial(),
            final_state: m.final_state(),
        }
    }
}

impl TryFrom<NfaJson> for Nfa {
    type Error = Error;

    fn try_from(j: NfaJson) -> Result<Nfa, Error> {
        for (i, s) in j.states.iter().enumerate() {
            if s.id.index() != i {
                return Err(Error::InvalidAutomaton(format!(
                    "state ids must be dense and ordered; found {} at position {i}",
                    s.id
                )));
            }
        }
        let mut transitions = Vec::with_capacity(j.transitions.len());
        for (from, label, to) in j.transitions {
            let label = match label.as_str() {
                "eps" => Label::Eps,
                s => {
                    let mut chars = s.chars();
                    match (chars.next().and_then(|c| Letter::new(c).ok()), chars.next()) {
                        (Some(l), None) => Label::Sym(l),
                        _ => return Err(Error::InvalidAutomaton(format!("bad transition label {label:?}"))),
                    }
                }
            };
            transitions.push(Transition { from, label, to });
        }
        let origins = j.states.into_iter().map(|s| s.origin).collect();
        Nfa::from_parts(origins, transitions, j.initial, j.final_state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::thompson;
    use crate::syntax::parse_expr;

    fn t(s: &str) -> Nfa {
        thompson(&parse_expr(s).unwrap())
    }

    #[test]
    fn dot_for_single_letter() {
        let dot = to_dot(&t("a"));
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("0 -> 1 [label=\"a\"]"));
        assert!(dot.contains("1 [label=\"1\", shape=doublecircle]"));
    }

    #[test]
    fn dot_renders_eps() {
        let dot = to_dot(&t("a*"));
        assert!(dot.contains("label=\"eps\", style=dashed"));
    }

    #[test]
    fn json_shape() {
        let j = NfaJson::from(&t("a"));
        let v = serde_json::to_value(&j).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "states": [
                    {"id": 0, "origin": {"kind": "original"}},
                    {"id": 1, "origin": {"kind": "original"}}
                ],
                "transitions": [[0, "a", 1]],
                "initial": 0,
                "final": 1
            })
        );
    }

    #[test]
    fn json_round_trip() {
        let m = t("(ab+1)*b");
        let text = serde_json::to_string(&NfaJson::from(&m)).unwrap();
        let back: NfaJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Nfa::try_from(back).unwrap(), m);
    }

    #[test]
    fn json_rejects_bad_label() {
        let mut j = NfaJson::from(&t("a"));
        j.transitions[0].1 = "ab".into();
        assert!(Nfa::try_from(j).is_err());
    }
}
