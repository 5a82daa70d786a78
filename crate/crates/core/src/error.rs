use thiserror::Error;

use crate::automata::StateId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("letter '{letter}' at position {pos} is outside the alphabet {{{alphabet}}}")]
    LetterOutsideAlphabet { letter: char, pos: usize, alphabet: String },

    #[error("unknown state {0}")]
    UnknownState(StateId),

    /// A subset construction visited more states than its budget allows.
    #[error("subset construction exceeded the budget of {limit} states")]
    StateBudgetExceeded { limit: usize },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }
}
