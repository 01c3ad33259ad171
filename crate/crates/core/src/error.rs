use thiserror::Error;

use crate::foundation::{Event, Grade, Word};

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid grade {0}")]
    InvalidGrade(String),
    #[error("invalid event name {0:?}")]
    InvalidEvent(String),
    #[error("event {0:?} declared twice")]
    DuplicateEvent(String),
    #[error("unknown event {0:?}")]
    UnknownEvent(String),
    #[error("no proper prefix: the word is empty")]
    NoProperPrefix,
    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("P1 violated: {0}")]
    MissingEpsilon(String),
    #[error("P2 violated at ({prefix},{word}): {word_grade} > {prefix_grade}")]
    NotPrefixMonotone { prefix: Word, word: Word, prefix_grade: Grade, word_grade: Grade },
    #[error("word {0} listed twice")]
    DuplicateWord(Word),
    #[error("word {0} listed with grade 0")]
    ZeroGradeEntry(Word),
    #[error("threshold must be positive")]
    ZeroThreshold,

    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("state {0:?} declared twice")]
    DuplicateState(String),
    #[error("transition {from} -{event}-> {to} has grade 0")]
    ZeroGradeArc { from: String, event: Event, to: String },
    #[error("transition {from} -{event}-> {to} listed twice")]
    DuplicateArc { from: String, event: Event, to: String },
    #[error("automaton is not deterministic at state {state:?} on event {event}")]
    Nondeterministic { state: String, event: Event },
    #[error("automaton has no states")]
    EmptyAutomaton,

    #[error("not contained: grade {left} > {right} at word {word}")]
    NotContained { word: Word, left: Grade, right: Grade },
    #[error("language is empty")]
    EmptyLanguage,
    #[error("language is not controllable: witness ({word}, {event})")]
    Uncontrollable { word: Word, event: Event },
    #[error("event {0} is uncontrollable: its supervisor grade is always 1")]
    UncontrollableEvent(Event),
    #[error("event {0} is controllable")]
    ControllableEvent(Event),
    #[error("word {0} is outside the plant's support")]
    OutsideSupport(Word),
    #[error("horizon exhausted: supervisor has no entry for {0}")]
    HorizonExhausted(Word),
    #[error("supervisor horizon {supervisor} is below the requested {requested}")]
    HorizonTooShort { supervisor: usize, requested: usize },

    #[error("SCP precondition violated: {0}")]
    ScpPrecondition(String),
    #[error("SCP is not solvable (first violating word {0:?})")]
    ScpUnsolvable(Option<Word>),
    #[error("supremal and infimal criteria disagree")]
    EngineDisagreement,

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("malformed input: {0}")]
    Format(String),
}
