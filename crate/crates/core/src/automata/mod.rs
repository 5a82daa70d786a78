//! ε-NFAs with exactly one initial and one final state.
//!
//! States are dense indices. Every state carries an [`Origin`] tag so that
//! states added by patching can be traced back to the round and site that
//! created them. Transition lists are kept sorted and duplicate-free, which
//! makes the automaton a set-based value: adding an existing transition is a
//! no-op, and two automata built the same way compare equal.

mod export;
mod subset;
mod thompson;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Letter, Word};

pub use export::{to_dot, NfaJson, StateJson};
pub use subset::{
    determinize, determinize_over, language_equiv, language_equiv_with_budget, language_inclusion,
    language_inclusion_with_budget, Containment, Dfa, Equivalence, DEFAULT_SUBSET_BUDGET,
};
pub(crate) use subset::{inclusion, Prefixed, Rooted};
pub use thompson::thompson;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    Eps,
    Sym(Letter),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Eps => write!(f, "eps"),
            Label::Sym(l) => write!(f, "{l}"),
        }
    }
}

/// Where a state came from.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Original,
    /// State `copy_index` of the automaton grafted at `site` during `round`.
    PatchCopy {
        round: u32,
        site: StateId,
        copy_index: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

#[derive(Clone, Debug)]
pub struct Nfa {
    origins: Vec<Origin>,
    out: Vec<Vec<(Label, StateId)>>,
    initial: StateId,
    final_state: StateId,
    eps_closures: Vec<OnceLock<Box<[StateId]>>>,
}

impl PartialEq for Nfa {
    fn eq(&self, other: &Self) -> bool {
        self.origins == other.origins
            && self.out == other.out
            && self.initial == other.initial
            && self.final_state == other.final_state
    }
}

impl Eq for Nfa {}

impl Nfa {
    /// Builds an automaton from explicit parts, checking that every
    /// referenced state exists.
    pub fn from_parts(
        origins: Vec<Origin>,
        transitions: impl IntoIterator<Item = Transition>,
        initial: StateId,
        final_state: StateId,
    ) -> Result<Nfa> {
        let n = origins.len();
        let check = |s: StateId, what: &str| {
            if s.index() < n {
                Ok(())
            } else {
                Err(Error::InvalidAutomaton(format!(
                    "{what} {s} out of range (automaton has {n} states)"
                )))
            }
        };
        check(initial, "initial state")?;
        check(final_state, "final state")?;
        let mut m = Nfa::with_origins(origins, initial, final_state);
        for t in transitions {
            check(t.from, "transition source")?;
            check(t.to, "transition target")?;
            m.add_transition(t.from, t.label, t.to);
        }
        Ok(m)
    }

    pub(crate) fn with_origins(origins: Vec<Origin>, initial: StateId, final_state: StateId) -> Nfa {
        let n = origins.len();
        Nfa {
            origins,
            out: vec![Vec::new(); n],
            initial,
            final_state,
            eps_closures: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub(crate) fn add_state(&mut self, origin: Origin) -> StateId {
        let id = StateId(self.origins.len() as u32);
        self.origins.push(origin);
        self.out.push(Vec::new());
        self.invalidate();
        id
    }

    /// Adds a transition; returns `false` if it was already present.
    pub(crate) fn add_transition(&mut self, from: StateId, label: Label, to: StateId) -> bool {
        let list = &mut self.out[from.index()];
        match list.binary_search(&(label, to)) {
            Ok(_) => false,
            Err(pos) => {
                list.insert(pos, (label, to));
                self.invalidate();
                true
            }
        }
    }

    fn invalidate(&mut self) {
        if self.eps_closures.iter().any(|c| c.get().is_some()) || self.eps_closures.len() != self.origins.len() {
            self.eps_closures = (0..self.origins.len()).map(|_| OnceLock::new()).collect();
        }
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn state_count(&self) -> usize {
        self.origins.len()
    }

    pub fn transition_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.origins.len() as u32).map(StateId)
    }

    pub fn contains_state(&self, s: StateId) -> bool {
        s.index() < self.origins.len()
    }

    pub fn origin(&self, s: StateId) -> Origin {
        self.origins[s.index()]
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    /// Outgoing transitions of `s`, sorted by label then target.
    pub fn successors(&self, s: StateId) -> &[(Label, StateId)] {
        &self.out[s.index()]
    }

    /// All transitions in (source, label, target) order.
    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.out.iter().enumerate().flat_map(|(i, list)| {
            list.iter().map(move |&(label, to)| Transition {
                from: StateId(i as u32),
                label,
                to,
            })
        })
    }

    pub fn transition_set(&self) -> BTreeSet<Transition> {
        self.transitions().collect()
    }

    pub fn letters(&self) -> Alphabet {
        self.out
            .iter()
            .flatten()
            .filter_map(|(label, _)| match label {
                Label::Sym(l) => Some(*l),
                Label::Eps => None,
            })
            .collect()
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if self.contains_state(s) {
            Ok(())
        } else {
            Err(Error::UnknownState(s))
        }
    }

    /// States reachable from `s` by ε-transitions alone, `s` included; sorted.
    pub fn eps_closure(&self, s: StateId) -> &[StateId] {
        self.eps_closures[s.index()].get_or_init(|| {
            let mut seen = vec![false; self.origins.len()];
            let mut stack = vec![s];
            seen[s.index()] = true;
            let mut out = Vec::new();
            while let Some(x) = stack.pop() {
                out.push(x);
                for &(label, y) in &self.out[x.index()] {
                    if label == Label::Eps && !seen[y.index()] {
                        seen[y.index()] = true;
                        stack.push(y);
                    }
                }
            }
            out.sort_unstable();
            out.into_boxed_slice()
        })
    }

    /// ε-closure of a set of states; sorted and duplicate-free.
    pub fn closure_of(&self, set: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut out: Vec<StateId> = set
            .into_iter()
            .flat_map(|s| self.eps_closure(s).iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// ε-closure of the `a`-successors of an (ε-closed) set.
    pub fn step(&self, set: &[StateId], a: Letter) -> Vec<StateId> {
        let targets = set.iter().flat_map(|&s| {
            self.out[s.index()]
                .iter()
                .filter(move |(label, _)| *label == Label::Sym(a))
                .map(|&(_, t)| t)
        });
        self.closure_of(targets.collect::<Vec<_>>())
    }

    /// `{ x' : x ⇒w x' }`, closing under ε at every step.
    pub fn w_reachable(&self, x: StateId, w: &Word) -> Result<BTreeSet<StateId>> {
        self.check_state(x)?;
        let mut set = self.eps_closure(x).to_vec();
        for &a in w.letters() {
            if set.is_empty() {
                break;
            }
            set = self.step(&set, a);
        }
        Ok(set.into_iter().collect())
    }

    pub fn accepts(&self, u: &Word) -> bool {
        self.accepts_from(self.initial, u)
    }

    pub fn accepts_from(&self, x: StateId, u: &Word) -> bool {
        match self.w_reachable(x, u) {
            Ok(set) => set.contains(&self.final_state),
            Err(_) => false,
        }
    }

    /// The same automaton re-rooted at `x`; its language is `l(x)`.
    pub fn state_language(&self, x: StateId) -> Result<Nfa> {
        self.check_state(x)?;
        let mut m = self.clone();
        m.initial = x;
        Ok(m)
    }

    /// All transitions flipped, initial and final swapped.
    pub fn reverse(&self) -> Nfa {
        let mut m = Nfa::with_origins(self.origins.clone(), self.final_state, self.initial);
        for t in self.transitions() {
            m.add_transition(t.to, t.label, t.from);
        }
        m
    }

    /// The automaton order: states and transitions included, same initial
    /// and final state.
    pub fn is_below(&self, other: &Nfa) -> bool {
        self.initial == other.initial
            && self.final_state == other.final_state
            && self.state_count() <= other.state_count()
            && self
                .transitions()
                .all(|t| other.out[t.from.index()].binary_search(&(t.label, t.to)).is_ok())
    }

    /// States from which the final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.origins.len();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for t in self.transitions() {
            rev[t.to.index()].push(t.from);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.final_state];
        seen[self.final_state.index()] = true;
        while let Some(x) = stack.pop() {
            for &y in &rev[x.index()] {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// States reachable from `from`.
    pub fn reachable_from(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.origins.len()];
        let mut stack = vec![from];
        seen[from.index()] = true;
        while let Some(x) = stack.pop() {
            for &(_, y) in &self.out[x.index()] {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Every word of length at most `max_len` accepted from `x`.
    pub fn words_up_to(&self, x: StateId, max_len: usize) -> Result<BTreeSet<Word>> {
        self.check_state(x)?;
        let letters: Vec<Letter> = self.letters().iter().collect();
        let mut out = BTreeSet::new();
        let mut layer = vec![(Word::empty(), self.eps_closure(x).to_vec())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (w, set) in &layer {
                if set.binary_search(&self.final_state).is_ok() {
                    out.insert(w.clone());
                }
                if len == max_len {
                    continue;
                }
                for &a in &letters {
                    let s = self.step(set, a);
                    if !s.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, s));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }
}
