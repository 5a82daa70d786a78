//! Regular-expression equivalence under linear hypotheses `e ≤ w`.
//!
//! An expression is turned into an automaton, the automaton is closed under
//! the hypotheses by patching in copies of the `e`-automaton, and an
//! expression is read back off the result. Closing may not terminate, so
//! every construction runs under round and state budgets and reports
//! exhaustion as a value.
//!
//! ```
//! use kahyp::{reduce_expr, ClosureConfig, Hypothesis};
//!
//! let g = "a".parse().unwrap();
//! let h = Hypothesis::parse("ba <= a").unwrap();
//! let out = reduce_expr(&g, &h, &ClosureConfig::default()).unwrap();
//! println!("{}", out.expr().unwrap()); // a language-equal form of b*a
//! ```

pub mod automata;
pub mod closure;
pub mod decide;
pub mod error;
pub mod oracle;
pub mod reduce;
pub mod solutions;
pub mod syntax;

pub use automata::{language_equiv, language_inclusion, thompson, Nfa, StateId};
pub use closure::{closure_fixpoint, BudgetReason, ClosureConfig, ClosureOutcome, Variant};
pub use decide::{ka_h_equiv, Decision, Side, UnknownReason, Verdict};
pub use error::{Error, Result};
pub use reduce::{reduce_expr, reduce_seq, reduce_seq_observed, ReductionOutcome};
pub use solutions::{extract_expr, least_solution, Solution};
pub use syntax::{parse_expr, print_expr, Alphabet, Expr, Hypothesis, Letter, Word};
