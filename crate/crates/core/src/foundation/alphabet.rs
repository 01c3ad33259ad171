use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::grade::Grade;
use crate::error::Error;

/// An event label. Compared and ordered by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(Arc<str>);

impl Event {
    /// Names must be non-empty and free of whitespace and `|`.
    pub fn new(name: &str) -> Result<Self, Error> {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '|') {
            return Err(Error::InvalidEvent(name.to_string()));
        }
        Ok(Event(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

// Ord/Eq/Hash are derived from the name, so borrowing as `str` is consistent.
impl std::borrow::Borrow<str> for Event {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Event::new(&name).map_err(serde::de::Error::custom)
    }
}

/// A finite event set partitioned into controllable and uncontrollable events.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    // event -> controllable?
    events: BTreeMap<Event, bool>,
}

impl Alphabet {
    pub fn new<I>(events: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Event, bool)>,
    {
        let mut map = BTreeMap::new();
        for (event, controllable) in events {
            if map.insert(event.clone(), controllable).is_some() {
                return Err(Error::DuplicateEvent(event.name().to_string()));
            }
        }
        Ok(Alphabet { events: map })
    }

    /// Builds an alphabet from event names; `uncontrollable` lists the
    /// names that cannot be disabled.
    pub fn from_names(names: &[&str], uncontrollable: &[&str]) -> Result<Self, Error> {
        for u in uncontrollable {
            if !names.contains(u) {
                return Err(Error::UnknownEvent(u.to_string()));
            }
        }
        Alphabet::new(
            names
                .iter()
                .map(|n| Event::new(n).map(|e| (e, !uncontrollable.contains(n))))
                .collect::<Result<Vec<_>, _>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Events in name order.
    pub fn events(&self) -> impl Iterator<Item = &Event> + '_ {
        self.events.keys()
    }

    pub fn controllable(&self) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter().filter(|(_, c)| **c).map(|(e, _)| e)
    }

    pub fn uncontrollable(&self) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter().filter(|(_, c)| !**c).map(|(e, _)| e)
    }

    pub fn contains(&self, event: &Event) -> bool {
        self.events.contains_key(event)
    }

    /// `None` for a foreign event.
    pub fn is_controllable(&self, event: &Event) -> Option<bool> {
        self.events.get(event).copied()
    }

    pub fn is_uncontrollable(&self, event: &Event) -> bool {
        self.events.get(event) == Some(&false)
    }

    pub fn lookup(&self, name: &str) -> Result<Event, Error> {
        self.events.get_key_value(name).map(|(e, _)| e.clone()).ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    /// Parses a word given as event names.
    pub fn word(&self, names: &[&str]) -> Result<Word, Error> {
        names.iter().map(|n| self.lookup(n)).collect::<Result<Vec<_>, _>>().map(Word::from)
    }

    pub fn check_word(&self, word: &[Event]) -> Result<(), Error> {
        match word.iter().find(|e| !self.contains(e)) {
            Some(e) => Err(Error::UnknownEvent(e.name().to_string())),
            None => Ok(()),
        }
    }

    /// `true` iff every event of `word` is uncontrollable (so also for ε).
    pub fn all_uncontrollable(&self, word: &[Event]) -> bool {
        word.iter().all(|e| self.is_uncontrollable(e))
    }

    /// Shared events; an event stays controllable only if both sides agree.
    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        let events =
            self.events.iter().filter_map(|(e, c)| other.events.get(e).map(|c2| (e.clone(), *c && *c2))).collect();
        Alphabet { events }
    }

    /// All events of either side; an event shared by both is controllable
    /// only if both sides mark it controllable.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut events = self.events.clone();
        for (e, c) in &other.events {
            events.entry(e.clone()).and_modify(|mine| *mine = *mine && *c).or_insert(*c);
        }
        Alphabet { events }
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<_> = self.controllable().map(Event::name).collect();
        let u: Vec<_> = self.uncontrollable().map(Event::name).collect();
        write!(f, "Alphabet {{ controllable: {c:?}, uncontrollable: {u:?} }}")
    }
}

/// A finite event string. `Word::epsilon()` is the empty string.
///
/// Words are ordered shortlex: by length first, then lexicographically by
/// event name, so ordered maps keyed by words list every prefix before its
/// extensions.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Event>);

impl Word {
    pub fn epsilon() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn last(&self) -> Option<&Event> {
        self.0.last()
    }

    /// `self · event`
    pub fn extend(&self, event: &Event) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(event.clone());
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The maximal proper prefix `w̃`, i.e. `w` without its last event.
    pub fn max_proper_prefix(&self) -> Result<Word, Error> {
        match self.0.split_last() {
            Some((_, init)) => Ok(Word(init.to_vec())),
            None => Err(Error::NoProperPrefix),
        }
    }

    /// `true` iff `self · v = other` for some `v`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// All prefixes, shortest (ε) first, including the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |n| self.prefix(n))
    }

    /// Renders the word: ε when empty, plain concatenation when all event
    /// names are one character long, dot-separated names otherwise.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.0.iter().all(|e| e.name().chars().count() == 1) { "" } else { "." };
        self.0.iter().map(Event::name).collect::<Vec<_>>().join(sep)
    }
}

impl From<Vec<Event>> for Word {
    fn from(v: Vec<Event>) -> Self {
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<Event>::deserialize(deserializer).map(Word)
    }
}

/// Free-function form of [`Word::max_proper_prefix`].
pub fn max_proper_prefix(w: &Word) -> Result<Word, Error> {
    w.max_proper_prefix()
}

/// Free-function form of [`Word::is_prefix_of`].
pub fn is_prefix(u: &Word, w: &Word) -> bool {
    u.is_prefix_of(w)
}

/// A fuzzy subset of the event set: a total map from events to grades.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuzzyEventSet {
    grades: BTreeMap<Event, Grade>,
}

impl FuzzyEventSet {
    /// Every event of `alphabet` at `grade`.
    pub fn constant(alphabet: &Alphabet, grade: Grade) -> Self {
        FuzzyEventSet { grades: alphabet.events().map(|e| (e.clone(), grade)).collect() }
    }

    /// Builds a set over `alphabet`; events not listed in `grades` get 0.
    pub fn new<I>(alphabet: &Alphabet, grades: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Event, Grade)>,
    {
        let mut set = Self::constant(alphabet, Grade::ZERO);
        for (e, g) in grades {
            match set.grades.get_mut(&e) {
                Some(slot) => *slot = g,
                None => return Err(Error::UnknownEvent(e.name().to_string())),
            }
        }
        Ok(set)
    }

    pub fn grade(&self, event: &Event) -> Grade {
        self.grades.get(event).copied().unwrap_or(Grade::ZERO)
    }

    pub fn set(&mut self, event: &Event, grade: Grade) {
        if let Some(slot) = self.grades.get_mut(event) {
            *slot = grade;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Event, Grade)> + '_ {
        self.grades.iter().map(|(e, g)| (e, *g))
    }
}
