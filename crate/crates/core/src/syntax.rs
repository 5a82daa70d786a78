//! Regular expressions and linear hypotheses over a finite alphabet of
//! lowercase letters.
//!
//! Expressions are kept right-associated: the [`Expr::seq`] and [`Expr::sum`]
//! constructors re-associate their arguments, and the parser only builds
//! through them. Printing uses minimal parenthesization, so
//! `parse_expr(&print_expr(e))` is structurally equal to `e` for every
//! normalized `e`.
//!
//! Grammar:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor+              (juxtaposition is sequencing)
//! factor := base '*'*
//! base   := '0' | '1' | letter | '(' expr ')'
//! ```
//!
//! Hypotheses are written `<expr> <= <word>`, where the word is a (possibly
//! empty) juxtaposition of letters and `1` stands for the empty word. An
//! equation `<word> == <word>` expands to the two inequalities.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(char);

impl Letter {
    pub fn new(c: char) -> Result<Letter> {
        if c.is_ascii_lowercase() {
            Ok(Letter(c))
        } else {
            Err(Error::syntax(0, format!("'{c}' is not a letter (expected a-z)")))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word. Words are ordered length-first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Parses a word: letters, optionally separated by whitespace. `1` and
    /// the empty string both denote the empty word.
    pub fn parse(text: &str) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for (pos, c) in text.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            if !c.is_ascii_lowercase() {
                return Err(Error::syntax(pos, format!("unexpected '{c}' in word")));
            }
            letters.push(Letter(c));
        }
        Ok(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn suffix(&self, from: usize) -> Word {
        Word(self.0[from..].to_vec())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Alphabet(BTreeSet<Letter>);

impl Alphabet {
    pub fn new() -> Alphabet {
        Alphabet::default()
    }

    /// Builds an alphabet from a string of letters, e.g. `"abt"`.
    pub fn parse(text: &str) -> Result<Alphabet> {
        let mut set = BTreeSet::new();
        for (pos, c) in text.char_indices() {
            if c.is_whitespace() || c == ',' {
                continue;
            }
            if !c.is_ascii_lowercase() {
                return Err(Error::syntax(pos, format!("'{c}' is not a letter")));
            }
            set.insert(Letter(c));
        }
        Ok(Alphabet(set))
    }

    pub fn insert(&mut self, l: Letter) {
        self.0.insert(l);
    }

    pub fn extend(&mut self, other: &Alphabet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.0.contains(&l)
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Alphabet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Alphabet(iter.into_iter().collect())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    Zero,
    One,
    Atom(Letter),
    Seq(Box<Expr>, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
}

impl Expr {
    pub fn atom(c: char) -> Expr {
        Expr::Atom(Letter::new(c).expect("atom must be a lowercase letter"))
    }

    /// Sequential composition, re-associated to the right.
    pub fn seq(a: Expr, b: Expr) -> Expr {
        match a {
            Expr::Seq(x, y) => Expr::Seq(x, Box::new(Expr::seq(*y, b))),
            a => Expr::Seq(Box::new(a), Box::new(b)),
        }
    }

    /// Choice, re-associated to the right.
    pub fn sum(a: Expr, b: Expr) -> Expr {
        match a {
            Expr::Sum(x, y) => Expr::Sum(x, Box::new(Expr::sum(*y, b))),
            a => Expr::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn star(a: Expr) -> Expr {
        Expr::Star(Box::new(a))
    }

    /// The expression denoting exactly `{w}`.
    pub fn word(w: &Word) -> Expr {
        let mut it = w.letters().iter().rev();
        match it.next() {
            None => Expr::One,
            Some(&last) => it.fold(Expr::Atom(last), |acc, &l| {
                Expr::Seq(Box::new(Expr::Atom(l)), Box::new(acc))
            }),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Zero | Expr::One | Expr::Atom(_) => 1,
            Expr::Seq(a, b) | Expr::Sum(a, b) => 1 + a.size() + b.size(),
            Expr::Star(a) => 1 + a.size(),
        }
    }

    pub fn letters(&self) -> Alphabet {
        let mut out = Alphabet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Alphabet) {
        match self {
            Expr::Zero | Expr::One => {}
            Expr::Atom(l) => out.insert(*l),
            Expr::Seq(a, b) | Expr::Sum(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            Expr::Star(a) => a.collect_letters(out),
        }
    }

    /// Rebuilds the tree through the associating constructors.
    pub fn normalize(&self) -> Expr {
        match self {
            Expr::Zero | Expr::One | Expr::Atom(_) => self.clone(),
            Expr::Seq(a, b) => Expr::seq(a.normalize(), b.normalize()),
            Expr::Sum(a, b) => Expr::sum(a.normalize(), b.normalize()),
            Expr::Star(a) => Expr::star(a.normalize()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, Prec::Sum)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse_expr(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Seq,
    Star,
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: Prec) -> fmt::Result {
    match e {
        Expr::Zero => write!(f, "0"),
        Expr::One => write!(f, "1"),
        Expr::Atom(l) => write!(f, "{l}"),
        Expr::Sum(a, b) => {
            let wrap = ctx > Prec::Sum;
            if wrap {
                write!(f, "(")?;
            }
            write_expr(f, a, Prec::Sum)?;
            write!(f, "+")?;
            write_expr(f, b, Prec::Sum)?;
            if wrap {
                write!(f, ")")?;
            }
            Ok(())
        }
        Expr::Seq(a, b) => {
            let wrap = ctx > Prec::Seq;
            if wrap {
                write!(f, "(")?;
            }
            write_expr(f, a, Prec::Seq)?;
            write_expr(f, b, Prec::Seq)?;
            if wrap {
                write!(f, ")")?;
            }
            Ok(())
        }
        Expr::Star(a) => {
            write_expr(f, a, Prec::Star)?;
            write!(f, "*")
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    e.to_string()
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    Parser::new(text, None).parse_all()
}

/// Parses and rejects any letter outside `alphabet`.
pub fn parse_expr_in(text: &str, alphabet: &Alphabet) -> Result<Expr> {
    Parser::new(text, Some(alphabet)).parse_all()
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alphabet: Option<&'a Alphabet>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: Option<&'a Alphabet>) -> Self {
        Parser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            end: text.len(),
            alphabet,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn parse_all(mut self) -> Result<Expr> {
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => Err(Error::syntax(self.offset(), format!("unexpected '{c}'"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(fold_right(terms, Expr::sum))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if c == '+' || c == ')' {
                break;
            }
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            let found = match self.peek() {
                Some(c) => format!("'{c}'"),
                None => "end of input".to_string(),
            };
            return Err(Error::syntax(
                self.offset(),
                format!("expected an expression, found {found}"),
            ));
        }
        Ok(fold_right(factors, Expr::seq))
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut e = self.base()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            e = Expr::star(e);
        }
        Ok(e)
    }

    fn base(&mut self) -> Result<Expr> {
        let offset = self.offset();
        let c = self
            .peek()
            .ok_or_else(|| Error::syntax(offset, "unexpected end of input"))?;
        self.pos += 1;
        match c {
            '0' => Ok(Expr::Zero),
            '1' => Ok(Expr::One),
            '(' => {
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::syntax(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            c if c.is_ascii_lowercase() => {
                let l = Letter(c);
                if let Some(alphabet) = self.alphabet {
                    if !alphabet.contains(l) {
                        return Err(Error::LetterOutsideAlphabet {
                            letter: c,
                            pos: offset,
                            alphabet: alphabet.to_string(),
                        });
                    }
                }
                Ok(Expr::Atom(l))
            }
            c => Err(Error::syntax(offset, format!("unexpected '{c}'"))),
        }
    }
}

fn fold_right(mut items: Vec<Expr>, join: fn(Expr, Expr) -> Expr) -> Expr {
    let mut acc = items.pop().expect("at least one item");
    while let Some(e) = items.pop() {
        acc = join(e, acc);
    }
    acc
}

/// Reverses an expression: `(fg)ʳ = gʳfʳ`, homomorphic on `+` and `*`.
pub fn reverse_expr(e: &Expr) -> Expr {
    match e {
        Expr::Zero | Expr::One | Expr::Atom(_) => e.clone(),
        Expr::Seq(a, b) => Expr::seq(reverse_expr(b), reverse_expr(a)),
        Expr::Sum(a, b) => Expr::sum(reverse_expr(a), reverse_expr(b)),
        Expr::Star(a) => Expr::star(reverse_expr(a)),
    }
}

/// Applies the unit and annihilator laws for `0` and `1`, collapses
/// structurally equal summands, and rewrites `0*` and `1*` to `1`.
pub fn simplify_expr(e: &Expr) -> Expr {
    match e {
        Expr::Zero | Expr::One | Expr::Atom(_) => e.clone(),
        Expr::Seq(a, b) => match (simplify_expr(a), simplify_expr(b)) {
            (Expr::Zero, _) | (_, Expr::Zero) => Expr::Zero,
            (Expr::One, x) | (x, Expr::One) => x,
            (x, y) => Expr::seq(x, y),
        },
        Expr::Sum(a, b) => {
            let mut summands = Vec::new();
            push_summands(simplify_expr(a), &mut summands);
            push_summands(simplify_expr(b), &mut summands);
            sum_of(summands)
        }
        Expr::Star(a) => match simplify_expr(a) {
            Expr::Zero | Expr::One => Expr::One,
            x => Expr::star(x),
        },
    }
}

fn push_summands(e: Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Zero => {}
        Expr::Sum(a, b) => {
            push_summands(*a, out);
            push_summands(*b, out);
        }
        e => {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
}

/// Right-associated sum of already-simplified summands; empty sum is `0`.
pub(crate) fn sum_of(summands: Vec<Expr>) -> Expr {
    if summands.is_empty() {
        Expr::Zero
    } else {
        fold_right(summands, Expr::sum)
    }
}

/// A linear hypothesis `lhs <= rhs`, where `rhs` is a word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hypothesis {
    pub lhs: Expr,
    pub rhs: Word,
}

impl Hypothesis {
    pub fn new(lhs: Expr, rhs: Word) -> Hypothesis {
        Hypothesis { lhs, rhs }
    }

    pub fn letters(&self) -> Alphabet {
        let mut a = self.lhs.letters();
        for &l in self.rhs.letters() {
            a.insert(l);
        }
        a
    }

    /// Parses a single `<expr> <= <word>`.
    pub fn parse(text: &str) -> Result<Hypothesis> {
        let mut hs = parse_hypotheses(text)?;
        match hs.len() {
            1 => Ok(hs.remove(0)),
            _ => Err(Error::syntax(0, "expected a single '<=' hypothesis")),
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

pub fn reverse_hypothesis(h: &Hypothesis) -> Hypothesis {
    Hypothesis {
        lhs: reverse_expr(&h.lhs),
        rhs: h.rhs.reversed(),
    }
}

/// Parses one hypothesis line. `e <= w` yields one hypothesis, `u == w`
/// (both sides words) yields `u <= w` followed by `w <= u`.
pub fn parse_hypotheses(text: &str) -> Result<Vec<Hypothesis>> {
    parse_hypothesis_line(text, None)
}

pub fn parse_hypotheses_in(text: &str, alphabet: &Alphabet) -> Result<Vec<Hypothesis>> {
    parse_hypothesis_line(text, Some(alphabet))
}

fn parse_hypothesis_line(text: &str, alphabet: Option<&Alphabet>) -> Result<Vec<Hypothesis>> {
    let shift = |e: Error, by: usize| match e {
        Error::Syntax { pos, message } => Error::Syntax { pos: pos + by, message },
        Error::LetterOutsideAlphabet { letter, pos, alphabet } => Error::LetterOutsideAlphabet {
            letter,
            pos: pos + by,
            alphabet,
        },
        e => e,
    };
    let check_word = |w: &Word, at: usize| -> Result<()> {
        if let Some(alphabet) = alphabet {
            if let Some(l) = w.letters().iter().find(|l| !alphabet.contains(**l)) {
                return Err(Error::LetterOutsideAlphabet {
                    letter: l.as_char(),
                    pos: at,
                    alphabet: alphabet.to_string(),
                });
            }
        }
        Ok(())
    };

    if let Some(i) = text.find("<=") {
        let (lhs_text, rhs_text) = (&text[..i], &text[i + 2..]);
        let lhs = Parser::new(lhs_text, alphabet).parse_all()?;
        let rhs = Word::parse(rhs_text).map_err(|e| shift(e, i + 2))?;
        check_word(&rhs, i + 2)?;
        return Ok(vec![Hypothesis { lhs, rhs }]);
    }
    if let Some(i) = text.find("==") {
        let (lhs_text, rhs_text) = (&text[..i], &text[i + 2..]);
        let u = Word::parse(lhs_text).map_err(|e| shift(e, 0)).map_err(|e| match e {
            Error::Syntax { pos, .. } => Error::syntax(pos, "both sides of '==' must be words"),
            e => e,
        })?;
        let w = Word::parse(rhs_text).map_err(|e| shift(e, i + 2))?;
        check_word(&u, 0)?;
        check_word(&w, i + 2)?;
        return Ok(vec![
            Hypothesis {
                lhs: Expr::word(&u),
                rhs: w.clone(),
            },
            Hypothesis {
                lhs: Expr::word(&w),
                rhs: u,
            },
        ]);
    }
    Err(Error::syntax(text.len(), "expected '<=' or '=='"))
}

/// Parses a hypothesis file: one hypothesis per line, `#` starts a comment,
/// blank lines are skipped.
pub fn parse_hypothesis_file(text: &str) -> Result<Vec<Hypothesis>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        out.extend(parse_hypotheses(line)?);
    }
    Ok(out)
}
