#![allow(dead_code)]

use kahyp::syntax::{parse_expr, Expr, Hypothesis, Letter, Word};
use rand::RngExt;

pub fn e(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

pub fn h(s: &str) -> Hypothesis {
    Hypothesis::parse(s).unwrap()
}

pub fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

/// A random expression over `letters` with exactly `size` nodes.
pub fn random_expr<R: RngExt>(rng: &mut R, letters: &[char], size: usize) -> Expr {
    match size {
        0 | 1 => match rng.random_range(0..10) {
            0 => Expr::Zero,
            1 => Expr::One,
            _ => Expr::atom(letters[rng.random_range(0..letters.len())]),
        },
        2 => Expr::star(random_expr(rng, letters, 1)),
        n => match rng.random_range(0..5) {
            0 => Expr::star(random_expr(rng, letters, n - 1)),
            k => {
                let left = rng.random_range(1..n - 1);
                let (a, b) = (random_expr(rng, letters, left), random_expr(rng, letters, n - 1 - left));
                if k <= 2 {
                    Expr::seq(a, b)
                } else {
                    Expr::sum(a, b)
                }
            }
        },
    }
}

/// A random expression with between 1 and `max_size` nodes.
pub fn random_expr_upto<R: RngExt>(rng: &mut R, letters: &[char], max_size: usize) -> Expr {
    let n = rng.random_range(1..=max_size);
    random_expr(rng, letters, n)
}

pub fn random_word<R: RngExt>(rng: &mut R, letters: &[char], min_len: usize, max_len: usize) -> Word {
    let n = rng.random_range(min_len..=max_len);
    Word::from_letters(
        (0..n)
            .map(|_| Letter::new(letters[rng.random_range(0..letters.len())]).unwrap())
            .collect(),
    )
}

pub mod arb {
    use kahyp::syntax::{Expr, Hypothesis, Letter, Word};
    use proptest::prelude::*;
    use proptest::sample::select;

    pub const AB: &[char] = &['a', 'b'];

    /// Expressions over `letters` with at most `max_size` nodes.
    pub fn expr(letters: &'static [char], max_size: usize) -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            1 => Just(Expr::Zero),
            1 => Just(Expr::One),
            6 => select(letters).prop_map(Expr::atom),
        ];
        leaf.prop_recursive(5, max_size as u32, 2, |inner| {
            prop_oneof![
                2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::seq(a, b)),
                2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
                1 => inner.prop_map(Expr::star),
            ]
        })
        .prop_filter("size", move |e| e.size() <= max_size)
    }

    pub fn word(letters: &'static [char], max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(select(letters), 0..=max_len)
            .prop_map(|cs| Word::from_letters(cs.into_iter().map(|c| Letter::new(c).unwrap()).collect()))
    }

    pub fn hypothesis(lhs_size: usize, max_w: usize) -> impl Strategy<Value = Hypothesis> {
        (expr(AB, lhs_size), word(AB, max_w)).prop_map(|(e, w)| Hypothesis::new(e, w))
    }
}
