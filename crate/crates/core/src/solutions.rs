//! Least solutions of automata, computed by state elimination.
//!
//! A solution assigns an expression `s(x)` to every state such that
//! `1 ≤ s(final)`, `a·s(x') ≤ s(x)` for every `x -a-> x'` and
//! `s(x') ≤ s(x)` for every `x -ε-> x'`. The least one denotes exactly the
//! language accepted from each state.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Index;

use crate::automata::{
    determinize, language_equiv, language_inclusion, thompson, Label, Nfa, Origin, StateId, Transition,
};
use crate::error::{Error, Result};
use crate::syntax::{reverse_expr, simplify_expr, sum_of, Expr, Letter};

/// An expression for every state of one automaton, indexed by state id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution {
    assignment: Vec<Expr>,
}

impl Solution {
    pub fn new(assignment: Vec<Expr>) -> Solution {
        Solution { assignment }
    }

    pub fn get(&self, x: StateId) -> Option<&Expr> {
        self.assignment.get(x.index())
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, &Expr)> {
        self.assignment.iter().enumerate().map(|(i, e)| (StateId(i as u32), e))
    }

    /// Applies `f` to every assigned expression.
    pub fn map(&self, f: impl FnMut(&Expr) -> Expr) -> Solution {
        Solution {
            assignment: self.assignment.iter().map(f).collect(),
        }
    }
}

impl Index<StateId> for Solution {
    type Output = Expr;

    fn index(&self, x: StateId) -> &Expr {
        &self.assignment[x.index()]
    }
}

pub fn least_solution(m: &Nfa) -> Solution {
    Solution {
        assignment: m.states().map(|x| extract(m, x)).collect(),
    }
}

/// The least-solution expression at `x`, i.e. an expression for `l(x)`.
pub fn extract_expr(m: &Nfa, x: StateId) -> Result<Expr> {
    if !m.contains_state(x) {
        return Err(Error::UnknownState(x));
    }
    Ok(extract(m, x))
}

/// Subset budget for the minimal-automaton attempt in [`extract`].
const MINIMIZE_BUDGET: usize = 2_000;

/// Eliminates on `m` itself and on the minimal DFA of `l(x)`, keeping the
/// smaller expression. Ties go to `m`.
fn extract(m: &Nfa, x: StateId) -> Expr {
    let direct = eliminate(m, x);
    match minimal_automaton(m, x) {
        Some(d) => {
            let other = eliminate(&d, d.initial());
            if other.size() < direct.size() {
                other
            } else {
                direct
            }
        }
        None => direct,
    }
}

/// The minimal DFA of `l(x)` (Moore refinement), with an ε-edge from every
/// accepting class to a fresh final state. `None` over budget.
fn minimal_automaton(m: &Nfa, x: StateId) -> Option<Nfa> {
    let d = determinize(&m.state_language(x).ok()?, MINIMIZE_BUDGET).ok()?;
    let n = d.state_count();
    let letters = d.alphabet().to_vec();
    let succ = |q: usize, a: Letter| d.next(q, a).expect("complete dfa");
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.accepting().contains(&q))).collect();
    let mut count = class.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let sig = (class[q], letters.iter().map(|&a| class[succ(q, a)]).collect());
                let fresh = ids.len();
                *ids.entry(sig).or_insert(fresh)
            })
            .collect();
        class = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    let fin = StateId(count as u32);
    let mut ts = BTreeSet::new();
    for q in 0..n {
        let from = StateId(class[q] as u32);
        for &a in &letters {
            ts.insert(Transition {
                from,
                label: Label::Sym(a),
                to: StateId(class[succ(q, a)] as u32),
            });
        }
        if d.accepting().contains(&q) {
            ts.insert(Transition {
                from,
                label: Label::Eps,
                to: fin,
            });
        }
    }
    Nfa::from_parts(
        vec![Origin::Original; count + 1],
        ts,
        StateId(class[d.initial()] as u32),
        fin,
    )
    .ok()
}

/// `simplify_expr` plus the star laws `(1+x)* = x*`, `(x*+y)* = (x+y)*`
/// and `(x*)* = x*`, which keep the coefficients of ε-heavy automata small.
fn tidy(e: Expr) -> Expr {
    match simplify_expr(&e) {
        Expr::Star(inner) => star_of(*inner),
        e => e,
    }
}

fn star_of(e: Expr) -> Expr {
    let mut parts = Vec::new();
    flatten_sum(e, &mut parts);
    let parts: Vec<Expr> = parts
        .into_iter()
        .filter(|p| *p != Expr::One && *p != Expr::Zero)
        .map(|p| match p {
            Expr::Star(inner) => *inner,
            p => p,
        })
        .collect();
    match simplify_expr(&sum_of(parts)) {
        Expr::Zero | Expr::One => Expr::One,
        x => Expr::star(x),
    }
}

fn flatten_sum(e: Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Sum(a, b) => {
            flatten_sum(*a, out);
            flatten_sum(*b, out);
        }
        e => out.push(e),
    }
}

fn add_edge(out: &mut [BTreeMap<usize, Expr>], inn: &mut [BTreeSet<usize>], p: usize, r: usize, e: Expr) {
    let slot = out[p].entry(r).or_insert(Expr::Zero);
    *slot = tidy(Expr::sum(std::mem::replace(slot, Expr::Zero), e));
    inn[r].insert(p);
}

/// State elimination. States not on a path from `x` to the final state are
/// dropped first and a fresh source and sink are attached. The remaining
/// states are removed cheapest first, where the cost of a state is the
/// number of edges its removal creates; ties go to the lower id.
fn eliminate(m: &Nfa, x: StateId) -> Expr {
    let reach = m.reachable_from(x);
    let coreach = m.coreachable();
    if !coreach[x.index()] {
        return Expr::Zero;
    }
    let n = m.state_count();
    let (source, sink) = (n, n + 1);
    let mut out: Vec<BTreeMap<usize, Expr>> = vec![BTreeMap::new(); n + 2];
    let mut inn: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 2];
    let live = |s: StateId| reach[s.index()] && coreach[s.index()];

    for t in m.transitions() {
        if live(t.from) && live(t.to) {
            let e = match t.label {
                Label::Eps => Expr::One,
                Label::Sym(l) => Expr::Atom(l),
            };
            add_edge(&mut out, &mut inn, t.from.index(), t.to.index(), e);
        }
    }
    add_edge(&mut out, &mut inn, source, x.index(), Expr::One);
    add_edge(&mut out, &mut inn, m.final_state().index(), sink, Expr::One);

    let mut remaining: BTreeSet<usize> = m.states().filter(|&s| live(s)).map(StateId::index).collect();
    let cost = |q: usize, out: &[BTreeMap<usize, Expr>], inn: &[BTreeSet<usize>]| {
        let looped = usize::from(out[q].contains_key(&q));
        (inn[q].len() - looped) * (out[q].len() - looped)
    };
    while let Some(q) = remaining.iter().copied().min_by_key(|&q| (cost(q, &out, &inn), q)) {
        remaining.remove(&q);
        let looped = out[q].remove(&q).map(star_of);
        inn[q].remove(&q);
        let succs: Vec<(usize, Expr)> = std::mem::take(&mut out[q]).into_iter().collect();
        let preds: Vec<usize> = std::mem::take(&mut inn[q]).into_iter().collect();
        for &(r, _) in &succs {
            inn[r].remove(&q);
        }
        for &p in &preds {
            let a = out[p].remove(&q).expect("predecessor edge");
            let a = match &looped {
                Some(l) => simplify_expr(&Expr::seq(a, l.clone())),
                None => a,
            };
            for (r, b) in &succs {
                let e = simplify_expr(&Expr::seq(a.clone(), b.clone()));
                add_edge(&mut out, &mut inn, p, *r, e);
            }
        }
    }
    out[source].remove(&sink).unwrap_or(Expr::Zero)
}

/// Checks the three solution rules as language inclusions.
pub fn verify_solution(m: &Nfa, s: &Solution) -> Result<bool> {
    if s.len() != m.state_count() {
        return Err(Error::InvalidAutomaton(format!(
            "solution has {} entries for an automaton with {} states",
            s.len(),
            m.state_count()
        )));
    }
    let autos: Vec<Nfa> = s.assignment.iter().map(thompson).collect();
    let one = thompson(&Expr::One);
    if !language_inclusion(&one, &autos[m.final_state().index()])?.holds() {
        return Ok(false);
    }
    for t in m.transitions() {
        let lower = match t.label {
            Label::Eps => autos[t.to.index()].clone(),
            Label::Sym(l) => thompson(&Expr::seq(Expr::Atom(l), s[t.to].clone())),
        };
        if !language_inclusion(&lower, &autos[t.from.index()])?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares the least solution at the initial state with the reversed least
/// solution of the reversed automaton at its initial state (the original
/// final state). The two must denote mutually reversed languages.
pub fn reverse_solution_check(m: &Nfa) -> Result<bool> {
    let forward = extract(m, m.initial());
    let r = m.reverse();
    let backward = extract(&r, r.initial());
    Ok(language_equiv(&thompson(&backward), &thompson(&reverse_expr(&forward)))?.is_equal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::language_equiv;
    use crate::oracle::enumerate_language;
    use crate::syntax::parse_expr;

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn same_language(a: &Expr, b: &Expr) -> bool {
        language_equiv(&thompson(a), &thompson(b)).unwrap().is_equal()
    }

    #[test]
    fn single_letter() {
        let m = thompson(&e("a"));
        let s = least_solution(&m);
        assert!(same_language(&s[m.initial()], &e("a")));
        assert!(same_language(&s[m.final_state()], &e("1")));
    }

    #[test]
    fn star_then_letter() {
        let m = thompson(&e("b*a"));
        let x = extract_expr(&m, m.initial()).unwrap();
        assert_eq!(enumerate_language(&x, 5), enumerate_language(&e("b*a"), 5));
    }

    #[test]
    fn every_state_gets_its_language() {
        let m = thompson(&e("(ab+b)*a+ba*"));
        let s = least_solution(&m);
        for x in m.states() {
            let expected = m.state_language(x).unwrap();
            assert!(
                language_equiv(&thompson(&s[x]), &expected).unwrap().is_equal(),
                "state {x}"
            );
        }
    }

    #[test]
    fn dead_states_get_zero() {
        let m = thompson(&e("a0+b"));
        let s = least_solution(&m);
        assert!(s.iter().any(|(_, x)| *x == Expr::Zero));
        assert_eq!(extract_expr(&thompson(&e("0")), StateId(0)).unwrap(), Expr::Zero);
    }

    #[test]
    fn extraction_is_deterministic() {
        let m = thompson(&e("(a+b)*abb"));
        assert_eq!(least_solution(&m), least_solution(&m));
    }

    #[test]
    fn unknown_state() {
        assert_eq!(
            extract_expr(&thompson(&e("a")), StateId(5)),
            Err(Error::UnknownState(StateId(5)))
        );
    }

    #[test]
    fn least_solution_verifies() {
        for s in ["a", "a*b", "(ab+ba)*", "0", "1+a(b+1)"] {
            let m = thompson(&e(s));
            assert!(verify_solution(&m, &least_solution(&m)).unwrap(), "{s}");
        }
    }

    #[test]
    fn zero_everywhere_is_not_a_solution() {
        let m = thompson(&e("a"));
        let zero = Solution::new(vec![Expr::Zero; m.state_count()]);
        assert!(!verify_solution(&m, &zero).unwrap());
    }

    #[test]
    fn adding_a_left_closed_term_keeps_a_solution() {
        let m = thompson(&e("a(b+a)*"));
        let bigger = least_solution(&m).map(|x| Expr::sum(x.clone(), e("(a+b)*bb")));
        assert!(verify_solution(&m, &bigger).unwrap());
        let m = thompson(&e("a"));
        let not_closed = least_solution(&m).map(|x| Expr::sum(x.clone(), e("b")));
        assert!(!verify_solution(&m, &not_closed).unwrap());
    }

    #[test]
    fn reverse_duality() {
        for s in ["ab", "ab+ba", "(ab*)*c", "0", "1"] {
            assert!(reverse_solution_check(&thompson(&e(s))).unwrap(), "{s}");
        }
    }
}
