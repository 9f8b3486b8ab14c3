use thiserror::Error;

/// Errors raised by the synthesis core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unknown event {0}")]
    UnknownEvent(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("state-pair universe does not match the automata: {0}")]
    UniverseMismatch(String),
    #[error("state {0} is not reachable from the initial state")]
    Unreachable(String),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("enumeration guard exceeded: |Q|*|X| = {0} > {1}")]
    GuardExceeded(usize, usize),
    #[error("{message} (line {line})")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
