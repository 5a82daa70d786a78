use super::{Label, Nfa, Origin, StateId};
use crate::syntax::Expr;

/// Thompson-style construction in its compact form: every sub-automaton is
/// built between a given entry and exit state, concatenation shares the
/// middle state and choice shares both endpoints. Only `*` introduces
/// ε-transitions (plus the one for `1`).
///
/// Entry states never receive transitions and exit states never emit them,
/// which is what makes the sharing sound. The result has one initial and
/// one final state and at most `2·|e| + 2` states; `ab+ba` yields the
/// familiar four-state diamond.
pub fn thompson(e: &Expr) -> Nfa {
    let mut m = Nfa::with_origins(vec![Origin::Original; 2], StateId(0), StateId(1));
    build(&mut m, e, StateId(0), StateId(1));
    m
}

fn build(m: &mut Nfa, e: &Expr, entry: StateId, exit: StateId) {
    match e {
        Expr::Zero => {}
        Expr::One => {
            m.add_transition(entry, Label::Eps, exit);
        }
        Expr::Atom(l) => {
            m.add_transition(entry, Label::Sym(*l), exit);
        }
        Expr::Sum(a, b) => {
            build(m, a, entry, exit);
            build(m, b, entry, exit);
        }
        Expr::Seq(a, b) => {
            let mid = m.add_state(Origin::Original);
            build(m, a, entry, mid);
            build(m, b, mid, exit);
        }
        Expr::Star(a) => {
            let inner_entry = m.add_state(Origin::Original);
            let inner_exit = m.add_state(Origin::Original);
            m.add_transition(entry, Label::Eps, inner_entry);
            build(m, a, inner_entry, inner_exit);
            m.add_transition(inner_exit, Label::Eps, inner_entry);
            m.add_transition(inner_exit, Label::Eps, exit);
            m.add_transition(entry, Label::Eps, exit);
        }
    }
}
