//! Length-bounded, brute-force language semantics.
//!
//! Everything here works on explicit finite sets of words and never touches
//! an automaton, so it can serve as an independent reference for the
//! automaton constructions. None of it is a decision procedure.

use std::collections::{BTreeSet, HashSet};

use crate::syntax::{Expr, Hypothesis, Word};

/// The words of some language up to length `bound`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WordSet {
    pub words: BTreeSet<Word>,
    pub bound: usize,
}

impl WordSet {
    pub fn new(bound: usize) -> WordSet {
        WordSet {
            words: BTreeSet::new(),
            bound,
        }
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(words: I, bound: usize) -> WordSet {
        WordSet {
            words: words.into_iter().filter(|w| w.len() <= bound).collect(),
            bound,
        }
    }

    /// Convenience for tests: `WordSet::of(&["a", "ba"], 3)`; `"1"` is ε.
    pub fn of(words: &[&str], bound: usize) -> WordSet {
        WordSet::from_words(words.iter().map(|w| Word::parse(w).expect("valid word")), bound)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn truncate(&self, bound: usize) -> WordSet {
        WordSet {
            words: self.words.iter().filter(|w| w.len() <= bound).cloned().collect(),
            bound,
        }
    }

    pub fn is_subset(&self, other: &WordSet) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }
}

/// `{ u ∈ ⟦e⟧ : |u| ≤ max_len }`, computed directly from the semantic clauses.
pub fn enumerate_language(e: &Expr, max_len: usize) -> WordSet {
    WordSet {
        words: enumerate(e, max_len),
        bound: max_len,
    }
}

fn enumerate(e: &Expr, n: usize) -> BTreeSet<Word> {
    match e {
        Expr::Zero => BTreeSet::new(),
        Expr::One => BTreeSet::from([Word::empty()]),
        Expr::Atom(l) => {
            if n >= 1 {
                BTreeSet::from([Word::from_letters(vec![*l])])
            } else {
                BTreeSet::new()
            }
        }
        Expr::Sum(a, b) => {
            let mut out = enumerate(a, n);
            out.extend(enumerate(b, n));
            out
        }
        Expr::Seq(a, b) => {
            let left = enumerate(a, n);
            if left.is_empty() {
                return left;
            }
            let right = enumerate(b, n);
            concat_bounded(&left, &right, n)
        }
        Expr::Star(a) => {
            let body: BTreeSet<Word> = enumerate(a, n).into_iter().filter(|w| !w.is_empty()).collect();
            let mut all = BTreeSet::from([Word::empty()]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let next = concat_bounded(&frontier, &body, n);
                frontier = next.difference(&all).cloned().collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
    }
}

fn concat_bounded(left: &BTreeSet<Word>, right: &BTreeSet<Word>, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for u in left {
        for v in right {
            // `right` is shortlex ordered, so lengths only grow from here.
            if u.len() + v.len() > n {
                break;
            }
            out.insert(u.concat(v));
        }
    }
    out
}

/// One application of the hypothesis closure, restricted to words of length
/// at most `cap`: keeps `L` and adds `u·x·v` for every `u·w·v ∈ L`, every
/// hypothesis `e ≤ w`, and every `x ∈ ⟦e⟧`.
pub fn one_step_closure(l: &WordSet, hs: &[Hypothesis], cap: usize) -> WordSet {
    let subs = substitutions(hs, cap);
    let mut out = l.words.clone();
    for word in &l.words {
        for_each_rewrite(word, &subs, cap, |w| {
            out.insert(w);
        });
    }
    WordSet {
        words: out,
        bound: cap.max(l.bound),
    }
}

struct Substitution {
    pattern: Vec<crate::syntax::Letter>,
    replacements: Vec<Word>,
}

fn substitutions(hs: &[Hypothesis], cap: usize) -> Vec<Substitution> {
    hs.iter()
        .map(|h| Substitution {
            pattern: h.rhs.letters().to_vec(),
            replacements: enumerate(&h.lhs, cap).into_iter().collect(),
        })
        .collect()
}

fn for_each_rewrite(word: &Word, subs: &[Substitution], cap: usize, mut emit: impl FnMut(Word)) {
    let letters = word.letters();
    for sub in subs {
        let k = sub.pattern.len();
        if k > letters.len() {
            continue;
        }
        for start in 0..=letters.len() - k {
            if letters[start..start + k] != sub.pattern[..] {
                continue;
            }
            let kept = letters.len() - k;
            for x in &sub.replacements {
                if kept + x.len() > cap {
                    break;
                }
                let mut out = Vec::with_capacity(kept + x.len());
                out.extend_from_slice(&letters[..start]);
                out.extend_from_slice(x.letters());
                out.extend_from_slice(&letters[start + k..]);
                emit(Word::from_letters(out));
            }
        }
    }
}

/// Least fixpoint of [`one_step_closure`] at `cap`, starting from `L`.
pub fn closure_fixpoint_at(l: &WordSet, hs: &[Hypothesis], cap: usize) -> WordSet {
    let subs = substitutions(hs, cap);
    let mut seen: HashSet<Word> = l.words.iter().filter(|w| w.len() <= cap).cloned().collect();
    let mut work: Vec<Word> = seen.iter().cloned().collect();
    while let Some(word) = work.pop() {
        for_each_rewrite(&word, &subs, cap, |w| {
            if !seen.contains(&w) {
                seen.insert(w.clone());
                work.push(w);
            }
        });
    }
    WordSet {
        words: seen.into_iter().collect(),
        bound: cap,
    }
}

/// Closes the length-`max_len + slack` fragment of `⟦e⟧` under `hs` and
/// truncates to `max_len`. The result is always contained in the true
/// closure fragment; it equals it once the slack is large enough.
pub fn bounded_closure(e: &Expr, hs: &[Hypothesis], max_len: usize, slack: usize) -> WordSet {
    let cap = max_len + slack;
    let base = enumerate_language(e, cap);
    closure_fixpoint_at(&base, hs, cap).truncate(max_len)
}

/// A bounded closure together with the evidence that it has stabilized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureSample {
    pub fragment: WordSet,
    /// Slack at which the reported fragment was computed.
    pub slack: usize,
    /// Two consecutive slack increments left the truncated set unchanged.
    pub stabilized: bool,
}

/// Maximum number of slack increments tried by [`stabilized_closure`].
pub const MAX_EXTRA_SLACK: usize = 6;

/// Runs [`bounded_closure`] at `slack`, `slack + 1`, ... until two
/// consecutive increments produce the same truncated set, giving up after
/// [`MAX_EXTRA_SLACK`] increments.
pub fn stabilized_closure(e: &Expr, hs: &[Hypothesis], max_len: usize, slack: usize) -> ClosureSample {
    let mut current = bounded_closure(e, hs, max_len, slack);
    let mut unchanged = 0;
    let mut s = slack;
    while s < slack + MAX_EXTRA_SLACK {
        s += 1;
        let next = bounded_closure(e, hs, max_len, s);
        if next == current {
            unchanged += 1;
            if unchanged == 2 {
                return ClosureSample {
                    fragment: next,
                    slack: s,
                    stabilized: true,
                };
            }
        } else {
            unchanged = 0;
        }
        current = next;
    }
    ClosureSample {
        fragment: current,
        slack: s,
        stabilized: false,
    }
}

/// `w⁻¹L` on the represented fragment.
pub fn word_derivative(l: &WordSet, w: &Word) -> WordSet {
    WordSet {
        words: l
            .words
            .iter()
            .filter(|u| u.starts_with(w))
            .map(|u| u.suffix(w.len()))
            .collect(),
        bound: l.bound.saturating_sub(w.len()),
    }
}

/// Checks `w⁻¹L ⊆ ⟦e⟧⁻¹L` on the fragment: every `v ∈ w⁻¹L` and every
/// `u ∈ ⟦e⟧` with `|uv| ≤ L.bound` satisfy `uv ∈ L`.
pub fn residual_inclusion_bruteforce(l: &WordSet, w: &Word, e: &Expr) -> bool {
    let tails = word_derivative(l, w);
    let heads = enumerate_language(e, l.bound);
    let ok = tails.iter().all(|v| {
        heads
            .iter()
            .take_while(|u| u.len() + v.len() <= l.bound)
            .all(|u| l.contains(&u.concat(v)))
    });
    ok
}
