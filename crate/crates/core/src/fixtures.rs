//! Small named instances used throughout the tests, benches and CLI docs.
//!
//! Words are written as strings of one-character event names, with `"ε"`
//! (or `""`) for the empty word.

use crate::foundation::{Alphabet, Grade, Word};
use crate::language::FuzzyLanguage;

/// Parses a word over one-character event names.
pub fn word(alphabet: &Alphabet, text: &str) -> Word {
    if text == "ε" {
        return Word::epsilon();
    }
    let names: Vec<String> = text.chars().map(String::from).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    alphabet.word(&refs).expect("word over fixture alphabet")
}

/// Builds a validated language from `(word, grade)` text pairs.
pub fn lang(alphabet: &Alphabet, entries: &[(&str, &str)]) -> FuzzyLanguage {
    FuzzyLanguage::validate(
        alphabet.clone(),
        entries.iter().map(|(w, g)| (word(alphabet, w), g.parse::<Grade>().expect("grade"))),
    )
    .expect("fixture language is valid")
}

/// E = {a, b}, E_c = {a}, E_uc = {b}.
pub fn alphabet() -> Alphabet {
    Alphabet::from_names(&["a", "b"], &["b"]).expect("alphabet")
}

pub fn l1() -> FuzzyLanguage {
    lang(&alphabet(), &[("ε", "1"), ("a", "0.9"), ("aa", "0.7"), ("ab", "0.7"), ("aba", "0.5")])
}

/// Controllable with respect to [`l1`].
pub fn k1() -> FuzzyLanguage {
    lang(&alphabet(), &[("ε", "1"), ("a", "0.8"), ("aa", "0.7"), ("ab", "0.7")])
}

/// Not controllable with respect to [`l1`]: `K(a) ∧ L(ab) = 0.7 ≠ 0.6`.
pub fn k2() -> FuzzyLanguage {
    lang(&alphabet(), &[("ε", "1"), ("a", "0.8"), ("aa", "0.7"), ("ab", "0.6")])
}

pub fn k3() -> FuzzyLanguage {
    lang(&alphabet(), &[("ε", "1"), ("a", "0.8"), ("ab", "0.6")])
}

/// E = E_uc = {a, b}; returns `(L, K1, K2)`.
pub fn strict_union() -> (FuzzyLanguage, FuzzyLanguage, FuzzyLanguage) {
    let e = Alphabet::from_names(&["a", "b"], &["a", "b"]).expect("alphabet");
    (
        lang(&e, &[("ε", "1"), ("a", "0.8"), ("b", "0.5")]),
        lang(&e, &[("ε", "1"), ("a", "0.7"), ("b", "0.5")]),
        lang(&e, &[("ε", "1"), ("a", "0.8"), ("b", "0.4")]),
    )
}

/// E = {a, b, c}, E_uc = {b}; `L(ab^n) = 1/n` and `K(ab^n) = 1/(n+1)` for
/// `1 ≤ n ≤ horizon`. Returns `(L, K)`.
pub fn harmonic(horizon: usize) -> (FuzzyLanguage, FuzzyLanguage) {
    let e = Alphabet::from_names(&["a", "b", "c"], &["b"]).expect("alphabet");
    let mut l = vec![(Word::epsilon(), Grade::ONE), (word(&e, "a"), Grade::ONE), (word(&e, "c"), Grade::ratio(1, 2))];
    let mut k = vec![(Word::epsilon(), Grade::ONE), (word(&e, "a"), Grade::ONE)];
    for n in 1..=horizon {
        let w = word(&e, &format!("a{}", "b".repeat(n)));
        l.push((w.clone(), Grade::ratio(1, n as u64)));
        k.push((w, Grade::ratio(1, n as u64 + 1)));
    }
    (FuzzyLanguage::validate(e.clone(), l).expect("L"), FuzzyLanguage::validate(e, k).expect("K"))
}
