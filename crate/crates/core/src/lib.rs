//! Supervisory control of fuzzy discrete-event systems.
//!
//! Plants are max-min fuzzy automata whose behaviour is a fuzzy language: a
//! map from event strings to membership grades in `[0, 1]`. A fuzzy
//! supervisor may disable controllable events to any degree. This crate
//! provides
//!
//! * exact grades and fuzzy languages ([`foundation`], [`language`]),
//! * fuzzy automata with product and parallel composition ([`automaton`]),
//! * controllability checking and supervisor synthesis ([`control`]),
//! * the supremal controllable sublanguage, both from languages and from
//!   deterministic automata ([`supremal`]),
//! * the infimal controllable superlanguage ([`infimal`]),
//! * the supervisory control problem between a minimal acceptable and a
//!   maximal legal language ([`scp`]),
//! * brute-force reference implementations and random instances for
//!   cross-checking ([`oracle`]),
//! * the JSON interchange formats ([`io`]).

pub mod automaton;
pub mod control;
pub mod error;
pub mod fixtures;
pub mod foundation;
pub mod infimal;
pub mod io;
pub mod language;
pub mod oracle;
pub mod scp;
pub mod supremal;

pub use automaton::{FuzzyAutomaton, StateId, Transition};
pub use error::Error;
pub use foundation::{Alphabet, Event, FuzzyEventSet, Grade, Word};
pub use language::{CrispLanguage, FuzzyLanguage, FuzzySubset};
