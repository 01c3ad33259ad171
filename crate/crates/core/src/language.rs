//! Finite-support fuzzy languages and the crisp sets derived from them.
//!
//! A [`FuzzyLanguage`] is either the empty language 𝒪 or a map from words
//! to grades with grade 1 on ε and grades that never increase along a
//! word's prefixes. Only positive grades are stored; every other word has
//! grade 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::foundation::{join_all, Alphabet, Event, Grade, Word};

#[derive(Clone, PartialEq, Eq)]
pub struct FuzzyLanguage {
    alphabet: Alphabet,
    entries: BTreeMap<Word, Grade>,
}

impl FuzzyLanguage {
    /// The empty fuzzy language 𝒪.
    pub fn empty(alphabet: Alphabet) -> Self {
        FuzzyLanguage { alphabet, entries: BTreeMap::new() }
    }

    /// The language `{ε:1}`.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Word::epsilon(), Grade::ONE);
        FuzzyLanguage { alphabet, entries }
    }

    /// Checks raw entries against P1 and P2.
    ///
    /// Zero-grade entries are dropped. An empty entry set yields 𝒪.
    pub fn validate<I>(alphabet: Alphabet, raw: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Word, Grade)>,
    {
        let mut entries = BTreeMap::new();
        for (word, grade) in raw {
            alphabet.check_word(word.events())?;
            if entries.contains_key(&word) {
                return Err(Error::DuplicateWord(word));
            }
            if grade.is_positive() {
                entries.insert(word, grade);
            }
        }
        if entries.is_empty() {
            return Ok(FuzzyLanguage::empty(alphabet));
        }
        match entries.get(&Word::epsilon()) {
            Some(g) if g.is_one() => {}
            Some(g) => return Err(Error::MissingEpsilon(format!("grade of ε is {g}, expected 1"))),
            None => return Err(Error::MissingEpsilon("ε is missing".to_string())),
        }
        for (word, grade) in entries.iter().skip(1) {
            let prefix = word.max_proper_prefix()?;
            let prefix_grade = entries.get(&prefix).copied().unwrap_or(Grade::ZERO);
            if prefix_grade < *grade {
                return Err(Error::NotPrefixMonotone { prefix, word: word.clone(), prefix_grade, word_grade: *grade });
            }
        }
        Ok(FuzzyLanguage { alphabet, entries })
    }

    /// Builds from entries already known to satisfy P1/P2 and to carry
    /// only positive grades.
    pub(crate) fn from_trusted(alphabet: Alphabet, entries: BTreeMap<Word, Grade>) -> Self {
        debug_assert!(FuzzyLanguage::validate(alphabet.clone(), entries.clone()).is_ok());
        FuzzyLanguage { alphabet, entries }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of words with positive grade.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Stored entries in shortlex order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, Grade)> + '_ {
        self.entries.iter().map(|(w, g)| (w, *g))
    }

    /// Length of the longest word in the support, `None` for 𝒪.
    pub fn max_len(&self) -> Option<usize> {
        self.entries.keys().next_back().map(Word::len)
    }

    /// Grade of `word`, rejecting events outside the alphabet.
    pub fn membership(&self, word: &Word) -> Result<Grade, Error> {
        self.alphabet.check_word(word.events())?;
        Ok(self.grade(word))
    }

    /// Grade of `word`; 0 for anything not stored.
    pub fn grade(&self, word: &Word) -> Grade {
        self.entries.get(word).copied().unwrap_or(Grade::ZERO)
    }

    pub fn support(&self) -> CrispLanguage {
        CrispLanguage::from_iter(self.entries.keys().cloned())
    }

    pub fn union(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut entries = self.entries.clone();
        for (w, g) in &other.entries {
            entries.entry(w.clone()).and_modify(|mine| *mine = mine.join(*g)).or_insert(*g);
        }
        Ok(FuzzyLanguage::from_trusted(self.alphabet.clone(), entries))
    }

    pub fn intersection(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let entries =
            self.entries.iter().filter_map(|(w, g)| other.entries.get(w).map(|g2| (w.clone(), g.meet(*g2)))).collect();
        Ok(FuzzyLanguage::from_trusted(self.alphabet.clone(), entries))
    }

    /// `(L1 L2)(w) = ∨ { L1(u) ∧ L2(v) : uv = w }`.
    pub fn concatenation(&self, other: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
        let product = self.as_subset().concatenate(&other.as_subset())?;
        Ok(FuzzyLanguage::from_trusted(self.alphabet.clone(), product.entries))
    }

    /// Pointwise containment `self ⊆ other`.
    pub fn contains(&self, other: &FuzzyLanguage) -> Result<bool, Error> {
        Ok(self.first_excess_over(other)?.is_none())
    }

    /// First word (shortlex) where `self` exceeds `other`.
    pub fn first_excess_over(&self, other: &FuzzyLanguage) -> Result<Option<Word>, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        Ok(self.entries.iter().find(|(w, g)| **g > other.grade(w)).map(|(w, _)| w.clone()))
    }

    pub(crate) fn ensure_contained_in(&self, other: &FuzzyLanguage) -> Result<(), Error> {
        match self.first_excess_over(other)? {
            None => Ok(()),
            Some(word) => Err(Error::NotContained { left: self.grade(&word), right: other.grade(&word), word }),
        }
    }

    /// Crisp threshold language `{w : L(w) ≥ θ}` for `θ > 0`.
    pub fn threshold(&self, theta: Grade) -> Result<CrispLanguage, Error> {
        if theta.is_zero() {
            return Err(Error::ZeroThreshold);
        }
        Ok(self.entries.iter().filter(|(_, g)| **g >= theta).map(|(w, _)| w.clone()).collect())
    }

    /// Restriction to words of length at most `horizon`.
    pub fn truncate(&self, horizon: usize) -> FuzzyLanguage {
        let entries = self.entries.iter().filter(|(w, _)| w.len() <= horizon).map(|(w, g)| (w.clone(), *g)).collect();
        FuzzyLanguage { alphabet: self.alphabet.clone(), entries }
    }

    /// The same grades viewed as an unconstrained fuzzy subset of E*.
    pub fn as_subset(&self) -> FuzzySubset {
        FuzzySubset { alphabet: self.alphabet.clone(), entries: self.entries.clone() }
    }

    /// `(K 𝓔*_uc)(w)`: the largest grade of a prefix of `w` whose remaining
    /// suffix consists of uncontrollable events only.
    pub fn euc_star_concat_at(&self, word: &Word) -> Grade {
        concat_membership(|u| self.grade_of(u), |v| euc_star_membership(&self.alphabet, v), word.events())
    }

    pub(crate) fn grade_of(&self, events: &[Event]) -> Grade {
        // Vec<Event> -> Word clone is cheap (Arc names)
        self.entries.get(&Word::from(events.to_vec())).copied().unwrap_or(Grade::ZERO)
    }

    /// Zadeh notation, e.g. `1/ε + 0.8/a + 0.7/aa`; `𝒪` for the empty language.
    pub fn to_zadeh(&self) -> String {
        if self.entries.is_empty() {
            return "𝒪".to_string();
        }
        self.entries.iter().map(|(w, g)| format!("{g}/{w}")).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Debug for FuzzyLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_zadeh())
    }
}

/// A finite-support fuzzy subset of E* with no P1/P2 constraint, used for
/// raw weightings such as 𝓔_uc and for intermediate concatenation results.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuzzySubset {
    alphabet: Alphabet,
    entries: BTreeMap<Word, Grade>,
}

impl FuzzySubset {
    pub fn new<I>(alphabet: Alphabet, raw: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Word, Grade)>,
    {
        let mut entries = BTreeMap::new();
        for (w, g) in raw {
            alphabet.check_word(w.events())?;
            if g.is_positive() && entries.insert(w.clone(), g).is_some() {
                return Err(Error::DuplicateWord(w));
            }
        }
        Ok(FuzzySubset { alphabet, entries })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn grade(&self, word: &Word) -> Grade {
        self.entries.get(word).copied().unwrap_or(Grade::ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, Grade)> + '_ {
        self.entries.iter().map(|(w, g)| (w, *g))
    }

    pub fn concatenate(&self, other: &FuzzySubset) -> Result<FuzzySubset, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut entries: BTreeMap<Word, Grade> = BTreeMap::new();
        for (u, gu) in &self.entries {
            for (v, gv) in &other.entries {
                let g = gu.meet(*gv);
                entries.entry(u.concat(v)).and_modify(|cur| *cur = cur.join(g)).or_insert(g);
            }
        }
        Ok(FuzzySubset { alphabet: self.alphabet.clone(), entries })
    }

    pub fn intersection(&self, other: &FuzzySubset) -> Result<FuzzySubset, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let entries = self
            .entries
            .iter()
            .filter_map(|(w, g)| other.entries.get(w).map(|g2| (w.clone(), g.meet(*g2))))
            .filter(|(_, g)| g.is_positive())
            .collect();
        Ok(FuzzySubset { alphabet: self.alphabet.clone(), entries })
    }

    /// Pointwise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &FuzzySubset) -> Result<bool, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        Ok(self.entries.iter().all(|(w, g)| *g <= other.grade(w)))
    }
}

/// The fuzzy subset 𝓔_uc: grade 1 on each single uncontrollable event,
/// 0 everywhere else (including ε).
pub fn euc_language(alphabet: &Alphabet) -> FuzzySubset {
    let entries = alphabet.uncontrollable().map(|e| (Word::from(vec![e.clone()]), Grade::ONE)).collect();
    FuzzySubset { alphabet: alphabet.clone(), entries }
}

/// Membership in 𝓔*_uc: 1 iff every event of `word` is uncontrollable.
pub fn euc_star_membership(alphabet: &Alphabet, word: &[Event]) -> Grade {
    if alphabet.all_uncontrollable(word) {
        Grade::ONE
    } else {
        Grade::ZERO
    }
}

/// Evaluates a concatenation at one word by enumerating all `|w|+1` splits.
pub fn concat_membership<L, R>(left: L, right: R, word: &[Event]) -> Grade
where
    L: Fn(&[Event]) -> Grade,
    R: Fn(&[Event]) -> Grade,
{
    join_all((0..=word.len()).map(|k| left(&word[..k]).meet(right(&word[k..]))))
}

/// A finite crisp language.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CrispLanguage {
    words: BTreeSet<Word>,
}

impl CrispLanguage {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    pub fn insert(&mut self, word: Word) -> bool {
        self.words.insert(word)
    }

    /// Words in shortlex order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter()
    }

    pub fn union(&self, other: &CrispLanguage) -> CrispLanguage {
        self.words.union(&other.words).cloned().collect()
    }

    pub fn intersection(&self, other: &CrispLanguage) -> CrispLanguage {
        self.words.intersection(&other.words).cloned().collect()
    }

    pub fn difference(&self, other: &CrispLanguage) -> CrispLanguage {
        self.words.difference(&other.words).cloned().collect()
    }

    pub fn is_subset(&self, other: &CrispLanguage) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn concat(&self, other: &CrispLanguage) -> CrispLanguage {
        self.words.iter().flat_map(|u| other.words.iter().map(move |v| u.concat(v))).collect()
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.words.iter().all(|w| w.is_empty() || self.words.contains(&w.prefix(w.len() - 1)))
    }

    /// Prefix closure `{u : u ≤ w for some w}`.
    pub fn prefix_closure(&self) -> CrispLanguage {
        self.words.iter().flat_map(|w| w.prefixes().collect::<Vec<_>>()).collect()
    }

    /// `self \ (B · E*)`: drops every word that has a prefix in `bases`.
    pub fn without_extensions_of(&self, bases: &CrispLanguage) -> CrispLanguage {
        self.words.iter().filter(|w| !w.prefixes().any(|p| bases.contains(&p))).cloned().collect()
    }

    /// `self ∩ (B · E*_uc)`: keeps words that extend a member of `bases`
    /// by uncontrollable events only.
    pub fn within_uncontrollable_extensions_of(&self, bases: &CrispLanguage, alphabet: &Alphabet) -> CrispLanguage {
        self.words
            .iter()
            .filter(|w| {
                (0..=w.len()).any(|k| alphabet.all_uncontrollable(&w.events()[k..]) && bases.contains(&w.prefix(k)))
            })
            .cloned()
            .collect()
    }

    /// Quotient `self / divisor = {s : st ∈ self for some t ∈ divisor}`.
    pub fn quotient(&self, divisor: &Divisor) -> CrispLanguage {
        let mut out = CrispLanguage::new();
        for w in &self.words {
            match divisor {
                Divisor::Set(set) => {
                    for t in &set.words {
                        if t.len() <= w.len() && w.events()[w.len() - t.len()..] == *t.events() {
                            out.insert(w.prefix(w.len() - t.len()));
                        }
                    }
                }
                Divisor::UncontrollableStar(alphabet) => {
                    for k in (0..=w.len()).rev() {
                        if !alphabet.all_uncontrollable(&w.events()[k..]) {
                            break;
                        }
                        out.insert(w.prefix(k));
                    }
                }
            }
        }
        out
    }
}

impl FromIterator<Word> for CrispLanguage {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        CrispLanguage { words: iter.into_iter().collect() }
    }
}

impl fmt::Debug for CrispLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter()).finish()
    }
}

/// Right operand of [`CrispLanguage::quotient`].
#[derive(Clone, Debug)]
pub enum Divisor {
    Set(CrispLanguage),
    /// All strings of uncontrollable events (including ε).
    UncontrollableStar(Alphabet),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, lang, word};

    #[test]
    fn membership_examples() {
        let l1 = fixtures::l1();
        let e = l1.alphabet().clone();
        assert_eq!(l1.membership(&word(&e, "ab")).unwrap(), "0.7".parse().unwrap());
        assert_eq!(l1.membership(&word(&e, "b")).unwrap(), Grade::ZERO);
        assert_eq!(FuzzyLanguage::empty(e.clone()).membership(&Word::epsilon()).unwrap(), Grade::ZERO);
        let foreign = Word::from(vec![Event::new("z").unwrap()]);
        assert!(matches!(l1.membership(&foreign), Err(Error::UnknownEvent(_))));
    }

    #[test]
    fn validate_examples() {
        let e = fixtures::alphabet();
        assert!(lang(&e, &[("ε", "1"), ("a", "0.8")]).len() == 2);
        let no_eps = FuzzyLanguage::validate(e.clone(), vec![(word(&e, "a"), "0.8".parse().unwrap())]);
        assert!(matches!(no_eps, Err(Error::MissingEpsilon(_))));
        let bad = FuzzyLanguage::validate(
            e.clone(),
            vec![
                (word(&e, "ε"), Grade::ONE),
                (word(&e, "a"), "0.5".parse().unwrap()),
                (word(&e, "aa"), "0.6".parse().unwrap()),
            ],
        );
        match bad {
            Err(Error::NotPrefixMonotone { prefix, word: w, .. }) => {
                assert_eq!(prefix, word(&e, "a"));
                assert_eq!(w, word(&e, "aa"));
            }
            other => panic!("expected P2 violation, got {other:?}"),
        }
        assert!(FuzzyLanguage::validate(e.clone(), Vec::new()).unwrap().is_empty());
        let eps_low = FuzzyLanguage::validate(e.clone(), vec![(Word::epsilon(), "0.5".parse().unwrap())]);
        assert!(matches!(eps_low, Err(Error::MissingEpsilon(_))));
        // a gap in the support is a P2 violation too
        let gap = FuzzyLanguage::validate(
            e.clone(),
            vec![(Word::epsilon(), Grade::ONE), (word(&e, "ab"), "0.5".parse().unwrap())],
        );
        assert!(matches!(gap, Err(Error::NotPrefixMonotone { .. })));
    }

    #[test]
    fn support_examples() {
        let k1 = fixtures::k1();
        let e = k1.alphabet().clone();
        let expected: CrispLanguage = ["ε", "a", "aa", "ab"].iter().map(|w| word(&e, w)).collect();
        assert_eq!(k1.support(), expected);
        assert!(FuzzyLanguage::empty(e.clone()).support().is_empty());
        assert_eq!(FuzzyLanguage::epsilon(e.clone()).support().len(), 1);
    }

    #[test]
    fn union_and_intersection_examples() {
        let (lr, kr1, kr2) = fixtures::strict_union();
        assert_eq!(kr1.union(&kr2).unwrap(), lr);
        let e = lr.alphabet().clone();
        assert_eq!(kr1.intersection(&kr2).unwrap(), lang(&e, &[("ε", "1"), ("a", "0.7"), ("b", "0.4")]));
        assert!(lr.intersection(&FuzzyLanguage::empty(e.clone())).unwrap().is_empty());
        let other = fixtures::l1();
        assert!(matches!(lr.union(&other), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn concatenation_examples() {
        let l1 = fixtures::l1();
        let e = l1.alphabet().clone();
        assert_eq!(l1.concatenation(&FuzzyLanguage::epsilon(e.clone())).unwrap(), l1);
        assert!(FuzzyLanguage::empty(e.clone()).concatenation(&l1).unwrap().is_empty());
        // K1 · 𝓔_uc at ab: splits (ε,ab), (a,b), (ab,ε) give 0, 0.8, 0
        let k1 = fixtures::k1();
        let kec = k1.as_subset().concatenate(&euc_language(&e)).unwrap();
        assert_eq!(kec.grade(&word(&e, "ab")), "0.8".parse().unwrap());
    }

    #[test]
    fn contains_examples() {
        let (k1, l1) = (fixtures::k1(), fixtures::l1());
        assert!(k1.contains(&l1).unwrap());
        assert!(!l1.contains(&k1).unwrap());
        assert!(FuzzyLanguage::empty(l1.alphabet().clone()).contains(&l1).unwrap());
    }

    #[test]
    fn euc_weightings() {
        let e = fixtures::alphabet();
        let euc = euc_language(&e);
        assert_eq!(euc.grade(&word(&e, "b")), Grade::ONE);
        assert_eq!(euc.grade(&word(&e, "a")), Grade::ZERO);
        assert_eq!(euc.grade(&Word::epsilon()), Grade::ZERO);
        assert_eq!(euc_star_membership(&e, word(&e, "bb").events()), Grade::ONE);
        assert_eq!(euc_star_membership(&e, &[]), Grade::ONE);
        assert_eq!(euc_star_membership(&e, word(&e, "ab").events()), Grade::ZERO);
    }

    #[test]
    fn threshold_examples() {
        let l1 = fixtures::l1();
        let e = l1.alphabet().clone();
        let t = l1.threshold("0.7".parse().unwrap()).unwrap();
        let expected: CrispLanguage = ["ε", "a", "aa", "ab"].iter().map(|w| word(&e, w)).collect();
        assert_eq!(t, expected);
        let top = l1.threshold(Grade::ONE).unwrap();
        assert_eq!(top, [Word::epsilon()].into_iter().collect());
        assert!(FuzzyLanguage::empty(e).threshold("0.5".parse().unwrap()).unwrap().is_empty());
        assert!(matches!(l1.threshold(Grade::ZERO), Err(Error::ZeroThreshold)));
    }

    #[test]
    fn quotient_examples() {
        let e = Alphabet::from_names(&["a", "b", "c"], &["b"]).unwrap();
        let a: CrispLanguage = ["ab", "c"].iter().map(|w| word(&e, w)).collect();
        let q = a.quotient(&Divisor::UncontrollableStar(e.clone()));
        let expected: CrispLanguage = ["a", "ab", "c"].iter().map(|w| word(&e, w)).collect();
        assert_eq!(q, expected);
        let eps: CrispLanguage = [Word::epsilon()].into_iter().collect();
        assert_eq!(a.quotient(&Divisor::Set(eps)), a);
        assert!(CrispLanguage::new().quotient(&Divisor::UncontrollableStar(e)).is_empty());
    }

    #[test]
    fn zadeh_rendering() {
        assert_eq!(fixtures::k1().to_zadeh(), "1/ε + 0.8/a + 0.7/aa + 0.7/ab");
        assert_eq!(FuzzyLanguage::empty(fixtures::alphabet()).to_zadeh(), "𝒪");
    }
}
