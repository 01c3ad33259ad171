//! Value layer: exact grades, events, control-partitioned alphabets, words
//! and fuzzy event sets.

mod alphabet;
mod grade;

pub use alphabet::{is_prefix, max_proper_prefix, Alphabet, Event, FuzzyEventSet, Word};
pub use grade::{join_all, meet_all, Grade, MAX_DECIMAL_DIGITS};
