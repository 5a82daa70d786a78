//! Subset construction, and inclusion/equivalence by a breadth-first search
//! over pairs of subset states. Breadth-first order with letters tried in
//! ascending order makes every counterexample the shortlex-least one.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Nfa, StateId};
use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Letter, Word};

/// Default cap on the number of subset states explored by one query.
pub const DEFAULT_SUBSET_BUDGET: usize = 100_000;

/// A subset-construction view of some automaton: a start set, a step
/// function on ε-closed sets, and an acceptance test.
pub(crate) trait SubsetView {
    fn start(&self) -> Vec<u32>;
    fn step(&self, set: &[u32], a: Letter) -> Vec<u32>;
    fn accepting(&self, set: &[u32]) -> bool;

    /// Removes from `set` states whose language is known to be covered by
    /// `right`, the matching subset of the other side.
    fn discharge(&self, _set: &mut Vec<u32>, _right: &[u32]) {}
}

fn ids(v: Vec<StateId>) -> Vec<u32> {
    v.into_iter().map(|s| s.0).collect()
}

fn states(v: &[u32]) -> impl Iterator<Item = StateId> + '_ {
    v.iter().map(|&s| StateId(s))
}

/// An automaton started from an arbitrary set of states.
pub(crate) struct Rooted<'a> {
    nfa: &'a Nfa,
    start: Vec<u32>,
}

impl<'a> Rooted<'a> {
    pub(crate) fn new(nfa: &'a Nfa, start: impl IntoIterator<Item = StateId>) -> Self {
        Rooted {
            nfa,
            start: ids(nfa.closure_of(start)),
        }
    }

    pub(crate) fn initial(nfa: &'a Nfa) -> Self {
        Rooted::new(nfa, [nfa.initial()])
    }
}

impl SubsetView for Rooted<'_> {
    fn start(&self) -> Vec<u32> {
        self.start.clone()
    }

    fn step(&self, set: &[u32], a: Letter) -> Vec<u32> {
        let set: Vec<StateId> = states(set).collect();
        ids(self.nfa.step(&set, a))
    }

    fn accepting(&self, set: &[u32]) -> bool {
        set.binary_search(&self.nfa.final_state().0).is_ok()
    }
}

/// The concatenation `L(head) · L(tail from tail_entry)`, without building
/// it: head states keep their ids, tail states are shifted by the size of
/// the head.
pub(crate) struct Prefixed<'a> {
    head: &'a Nfa,
    tail: &'a Nfa,
    tail_entry: Vec<StateId>,
    offset: u32,
    /// The other side of the comparison is a [`Rooted`] view of `tail`.
    against_tail: bool,
}

impl<'a> Prefixed<'a> {
    pub(crate) fn new(head: &'a Nfa, tail: &'a Nfa, tail_entry: impl IntoIterator<Item = StateId>) -> Self {
        Prefixed {
            head,
            tail,
            tail_entry: tail.closure_of(tail_entry),
            offset: head.state_count() as u32,
            against_tail: false,
        }
    }

    /// Declares that this view will be compared against a [`Rooted`] view
    /// of its own tail automaton. Tail states present on that side are then
    /// dropped from this side, which keeps the search small.
    pub(crate) fn against_tail(mut self) -> Self {
        self.against_tail = true;
        self
    }

    fn finish(&self, head_part: Vec<StateId>, tail_part: Vec<StateId>) -> Vec<u32> {
        let enters_tail = head_part.binary_search(&self.head.final_state()).is_ok();
        let mut out = ids(head_part);
        let mut tail: Vec<StateId> = tail_part;
        if enters_tail {
            tail.extend(self.tail_entry.iter().copied());
            tail.sort_unstable();
            tail.dedup();
        }
        out.extend(tail.into_iter().map(|s| s.0 + self.offset));
        out
    }
}

impl SubsetView for Prefixed<'_> {
    fn start(&self) -> Vec<u32> {
        self.finish(self.head.closure_of([self.head.initial()]), Vec::new())
    }

    fn step(&self, set: &[u32], a: Letter) -> Vec<u32> {
        let split = set.partition_point(|&s| s < self.offset);
        let head: Vec<StateId> = states(&set[..split]).collect();
        let tail: Vec<StateId> = set[split..].iter().map(|&s| StateId(s - self.offset)).collect();
        let head_next = if head.is_empty() {
            Vec::new()
        } else {
            self.head.step(&head, a)
        };
        let tail_next = if tail.is_empty() {
            Vec::new()
        } else {
            self.tail.step(&tail, a)
        };
        self.finish(head_next, tail_next)
    }

    fn accepting(&self, set: &[u32]) -> bool {
        set.binary_search(&(self.tail.final_state().0 + self.offset)).is_ok()
    }

    fn discharge(&self, set: &mut Vec<u32>, right: &[u32]) {
        if self.against_tail {
            let offset = self.offset;
            set.retain(|&s| s < offset || right.binary_search(&(s - offset)).is_err());
        }
    }
}

/// Left set, right set, parent index, letter read.
type Node = (Vec<u32>, Vec<u32>, usize, Option<Letter>);

/// Searches for the shortlex-least word accepted by `left` but not by
/// `right`. Returns `None` if `L(left) ⊆ L(right)`.
pub(crate) fn inclusion(
    left: &impl SubsetView,
    right: &impl SubsetView,
    letters: &[Letter],
    budget: usize,
) -> Result<Option<Word>> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<(Vec<u32>, Vec<u32>), usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let witness = |nodes: &[Node], mut i: usize| {
        let mut letters = Vec::new();
        while let Some(l) = nodes[i].3 {
            letters.push(l);
            i = nodes[i].2;
        }
        letters.reverse();
        Word::from_letters(letters)
    };

    let (mut l0, r0) = (left.start(), right.start());
    left.discharge(&mut l0, &r0);
    if l0.is_empty() {
        return Ok(None);
    }
    if left.accepting(&l0) && !right.accepting(&r0) {
        return Ok(Some(Word::empty()));
    }
    index.insert((l0.clone(), r0.clone()), 0);
    nodes.push((l0, r0, 0, None));
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        for &a in letters {
            let mut l = left.step(&nodes[i].0, a);
            if l.is_empty() {
                continue;
            }
            let r = right.step(&nodes[i].1, a);
            left.discharge(&mut l, &r);
            if l.is_empty() {
                continue;
            }
            let key = (l, r);
            if index.contains_key(&key) {
                continue;
            }
            if nodes.len() >= budget {
                return Err(Error::StateBudgetExceeded { limit: budget });
            }
            let j = nodes.len();
            let bad = left.accepting(&key.0) && !right.accepting(&key.1);
            index.insert(key.clone(), j);
            nodes.push((key.0, key.1, i, Some(a)));
            if bad {
                return Ok(Some(witness(&nodes, j)));
            }
            queue.push_back(j);
        }
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Containment {
    Holds,
    /// Shortlex-least word in the left language but not the right one.
    Counterexample(Word),
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Holds)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equivalence {
    Equal,
    /// A word accepted only by the left automaton.
    LeftOnly(Word),
    /// A word accepted only by the right automaton.
    RightOnly(Word),
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Equivalence::Equal => None,
            Equivalence::LeftOnly(w) | Equivalence::RightOnly(w) => Some(w),
        }
    }
}

fn letters_of(m: &Nfa) -> Vec<Letter> {
    m.letters().iter().collect()
}

pub fn language_inclusion(m1: &Nfa, m2: &Nfa) -> Result<Containment> {
    language_inclusion_with_budget(m1, m2, DEFAULT_SUBSET_BUDGET)
}

pub fn language_inclusion_with_budget(m1: &Nfa, m2: &Nfa, budget: usize) -> Result<Containment> {
    let found = inclusion(&Rooted::initial(m1), &Rooted::initial(m2), &letters_of(m1), budget)?;
    Ok(match found {
        None => Containment::Holds,
        Some(w) => Containment::Counterexample(w),
    })
}

pub fn language_equiv(m1: &Nfa, m2: &Nfa) -> Result<Equivalence> {
    language_equiv_with_budget(m1, m2, DEFAULT_SUBSET_BUDGET)
}

pub fn language_equiv_with_budget(m1: &Nfa, m2: &Nfa, budget: usize) -> Result<Equivalence> {
    if let Containment::Counterexample(w) = language_inclusion_with_budget(m1, m2, budget)? {
        return Ok(Equivalence::LeftOnly(w));
    }
    if let Containment::Counterexample(w) = language_inclusion_with_budget(m2, m1, budget)? {
        return Ok(Equivalence::RightOnly(w));
    }
    Ok(Equivalence::Equal)
}

/// A complete deterministic automaton over a fixed alphabet. The empty
/// subset, when reachable, is the sink.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dfa {
    alphabet: Vec<Letter>,
    subsets: Vec<Vec<StateId>>,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: BTreeSet<usize>,
}

impl Dfa {
    pub fn state_count(&self) -> usize {
        self.subsets.len()
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// The set of automaton states a DFA state stands for.
    pub fn subset(&self, q: usize) -> &[StateId] {
        &self.subsets[q]
    }

    pub fn next(&self, q: usize, a: Letter) -> Option<usize> {
        let i = self.alphabet.binary_search(&a).ok()?;
        Some(self.delta[q][i])
    }

    /// Words using letters outside the alphabet are rejected.
    pub fn accepts(&self, u: &Word) -> bool {
        let mut q = self.initial;
        for &a in u.letters() {
            match self.next(q, a) {
                Some(p) => q = p,
                None => return false,
            }
        }
        self.accepting.contains(&q)
    }
}

/// Subset construction over the letters that occur in `m`.
pub fn determinize(m: &Nfa, budget: usize) -> Result<Dfa> {
    determinize_over(m, &m.letters(), budget)
}

pub fn determinize_over(m: &Nfa, alphabet: &Alphabet, budget: usize) -> Result<Dfa> {
    let alphabet: Vec<Letter> = alphabet.iter().collect();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
    let mut accepting = BTreeSet::new();

    let start = m.closure_of([m.initial()]);
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut i = 0;
    while i < subsets.len() {
        if subsets[i].binary_search(&m.final_state()).is_ok() {
            accepting.insert(i);
        }
        let mut row = Vec::with_capacity(alphabet.len());
        for &a in &alphabet {
            let next = m.step(&subsets[i], a);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if subsets.len() >= budget {
                        return Err(Error::StateBudgetExceeded { limit: budget });
                    }
                    let j = subsets.len();
                    index.insert(next.clone(), j);
                    subsets.push(next);
                    j
                }
            };
            row.push(j);
        }
        delta.push(row);
        i += 1;
    }
    Ok(Dfa {
        alphabet,
        subsets,
        delta,
        initial: 0,
        accepting,
    })
}
