//! Finite max-min fuzzy automata.
//!
//! Arcs carry grades in `(0, 1]`. The extended transition grade along a
//! word is the join over all paths of the meet of the arc grades on the
//! path; it is evaluated level by level on grade vectors indexed by state,
//! so cyclic and nondeterministic automata need no path enumeration.

mod compose;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::foundation::{join_all, Alphabet, Event, Grade, Word};
use crate::language::FuzzyLanguage;

/// A state label, unique within its automaton.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(String);

impl StateId {
    pub fn new(label: impl Into<String>) -> Self {
        StateId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Label of a product state, `p|q`. Components that already contain `|`
    /// are parenthesized so nested products stay unambiguous.
    pub fn pair(p: &StateId, q: &StateId) -> StateId {
        fn part(s: &StateId) -> String {
            if s.0.contains('|') {
                format!("({})", s.0)
            } else {
                s.0.clone()
            }
        }
        StateId(format!("{}|{}", part(p), part(q)))
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId(s.to_string())
    }
}

/// One graded arc `from -event|grade-> to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub event: Event,
    pub to: StateId,
    pub grade: Grade,
}

impl Transition {
    pub fn new(from: impl Into<String>, event: &Event, to: impl Into<String>, grade: Grade) -> Self {
        Transition { from: StateId::new(from), event: event.clone(), to: StateId::new(to), grade }
    }
}

pub(crate) type ArcTable = Vec<BTreeMap<Event, Vec<(usize, Grade)>>>;

#[derive(Clone)]
pub struct FuzzyAutomaton {
    alphabet: Alphabet,
    states: Vec<StateId>,
    index: HashMap<StateId, usize>,
    // meaningless when `states` is empty
    initial: usize,
    arcs: ArcTable,
}

impl FuzzyAutomaton {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<StateId>,
        initial: StateId,
        transitions: Vec<Transition>,
    ) -> Result<Self, Error> {
        let mut index = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateState(s.0.clone()));
            }
        }
        let initial = *index.get(&initial).ok_or_else(|| Error::UnknownState(initial.0.clone()))?;
        let mut arcs: ArcTable = vec![BTreeMap::new(); states.len()];
        for t in transitions {
            if !alphabet.contains(&t.event) {
                return Err(Error::UnknownEvent(t.event.name().to_string()));
            }
            let from = *index.get(&t.from).ok_or_else(|| Error::UnknownState(t.from.0.clone()))?;
            let to = *index.get(&t.to).ok_or_else(|| Error::UnknownState(t.to.0.clone()))?;
            if t.grade.is_zero() {
                return Err(Error::ZeroGradeArc { from: t.from.0, event: t.event, to: t.to.0 });
            }
            let slot = arcs[from].entry(t.event.clone()).or_default();
            if slot.iter().any(|(q, _)| *q == to) {
                return Err(Error::DuplicateArc { from: t.from.0, event: t.event, to: t.to.0 });
            }
            slot.push((to, t.grade));
        }
        for row in &mut arcs {
            for succ in row.values_mut() {
                succ.sort_by_key(|(q, _)| *q);
            }
        }
        Ok(FuzzyAutomaton { alphabet, states, index, initial, arcs })
    }

    /// The automaton with no states; it generates 𝒪.
    pub fn empty(alphabet: Alphabet) -> Self {
        FuzzyAutomaton { alphabet, states: Vec::new(), index: HashMap::new(), initial: 0, arcs: Vec::new() }
    }

    /// Assembles an automaton from index-based parts produced internally.
    pub(crate) fn from_parts(alphabet: Alphabet, states: Vec<StateId>, initial: usize, arcs: ArcTable) -> Self {
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        FuzzyAutomaton { alphabet, states, index, initial, arcs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn initial(&self) -> Option<&StateId> {
        self.states.get(self.initial)
    }

    pub(crate) fn initial_index(&self) -> Option<usize> {
        (!self.states.is_empty()).then_some(self.initial)
    }

    pub fn state_index(&self, state: &StateId) -> Result<usize, Error> {
        self.index.get(state).copied().ok_or_else(|| Error::UnknownState(state.0.clone()))
    }

    pub(crate) fn successors(&self, state: usize, event: &Event) -> &[(usize, Grade)] {
        self.arcs[state].get(event).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn arcs_from(&self, state: usize) -> impl Iterator<Item = (&Event, usize, Grade)> + '_ {
        self.arcs[state].iter().flat_map(|(e, succ)| succ.iter().map(move |(q, g)| (e, *q, *g)))
    }

    /// Arc grade `δ(p, a, q)`, 0 when absent.
    pub fn arc_grade(&self, from: &StateId, event: &Event, to: &StateId) -> Result<Grade, Error> {
        let (p, q) = (self.state_index(from)?, self.state_index(to)?);
        Ok(self.successors(p, event).iter().find(|(r, _)| *r == q).map(|(_, g)| *g).unwrap_or(Grade::ZERO))
    }

    /// All arcs, grouped by source state in declaration order.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut out = Vec::new();
        for (p, row) in self.arcs.iter().enumerate() {
            for (event, succ) in row {
                for (q, g) in succ {
                    out.push(Transition {
                        from: self.states[p].clone(),
                        event: event.clone(),
                        to: self.states[*q].clone(),
                        grade: *g,
                    });
                }
            }
        }
        out
    }

    /// Grade vector of ε from the initial state.
    pub(crate) fn initial_vector(&self) -> Vec<Grade> {
        let mut v = vec![Grade::ZERO; self.states.len()];
        if let Some(slot) = v.get_mut(self.initial) {
            *slot = Grade::ONE;
        }
        v
    }

    /// One max-min step: `v'(q) = ∨_r v(r) ∧ δ(r, a, q)`.
    pub(crate) fn step(&self, vector: &[Grade], event: &Event) -> Vec<Grade> {
        let mut next = vec![Grade::ZERO; self.states.len()];
        for (r, g) in vector.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for (q, arc) in self.successors(r, event) {
                next[*q] = next[*q].join(g.meet(*arc));
            }
        }
        next
    }

    pub(crate) fn run(&self, events: &[Event]) -> Vec<Grade> {
        events.iter().fold(self.initial_vector(), |v, e| self.step(&v, e))
    }

    /// Extended transition grade `δ(p, w, q)`.
    pub fn delta_ext(&self, from: &StateId, word: &Word, to: &StateId) -> Result<Grade, Error> {
        let (p, q) = (self.state_index(from)?, self.state_index(to)?);
        self.alphabet.check_word(word.events())?;
        let mut v = vec![Grade::ZERO; self.states.len()];
        v[p] = Grade::ONE;
        for e in word.events() {
            v = self.step(&v, e);
        }
        Ok(v[q])
    }

    /// `𝓛(G)(w) = ∨_q δ(q0, w, q)`.
    pub fn language_membership(&self, word: &Word) -> Result<Grade, Error> {
        self.alphabet.check_word(word.events())?;
        Ok(self.grade(word.events()))
    }

    /// Membership without the alphabet check; foreign events give 0.
    pub fn grade(&self, events: &[Event]) -> Grade {
        join_all(self.run(events))
    }

    /// Materializes `𝓛(G)` restricted to words of length at most `horizon`.
    pub fn enumerate_language(&self, horizon: usize) -> FuzzyLanguage {
        self.enumerate_restricted(horizon, |_| true)
    }

    /// Like [`enumerate_language`](Self::enumerate_language), but only
    /// explores words accepted by `keep`. `keep` must be prefix-closed
    /// (rejecting a word must also reject all its extensions) for the
    /// result to be a fuzzy language.
    pub fn enumerate_restricted<F>(&self, horizon: usize, keep: F) -> FuzzyLanguage
    where
        F: Fn(&[Event]) -> bool,
    {
        let mut entries = BTreeMap::new();
        if self.is_empty() {
            return FuzzyLanguage::from_trusted(self.alphabet.clone(), entries);
        }
        let mut queue = VecDeque::new();
        queue.push_back((Word::epsilon(), self.initial_vector()));
        while let Some((w, v)) = queue.pop_front() {
            let g = join_all(v.iter().copied());
            entries.insert(w.clone(), g);
            if w.len() == horizon {
                continue;
            }
            for e in self.alphabet.events() {
                let next = self.step(&v, e);
                if next.iter().all(Grade::is_zero) {
                    continue;
                }
                let nw = w.extend(e);
                if keep(nw.events()) {
                    queue.push_back((nw, next));
                }
            }
        }
        FuzzyLanguage::from_trusted(self.alphabet.clone(), entries)
    }

    /// At most one successor per (state, event).
    pub fn is_deterministic(&self) -> bool {
        self.nondeterminism().is_none()
    }

    pub(crate) fn ensure_deterministic(&self) -> Result<(), Error> {
        match self.nondeterminism() {
            None => Ok(()),
            Some((p, event)) => Err(Error::Nondeterministic { state: self.states[p].0.clone(), event }),
        }
    }

    fn nondeterminism(&self) -> Option<(usize, Event)> {
        self.arcs
            .iter()
            .enumerate()
            .find_map(|(p, row)| row.iter().find(|(_, succ)| succ.len() > 1).map(|(e, _)| (p, e.clone())))
    }

    /// The unique successor of a deterministic automaton.
    pub(crate) fn successor(&self, state: usize, event: &Event) -> Option<(usize, Grade)> {
        self.successors(state, event).first().copied()
    }

    /// States reachable from the initial state via positive arcs.
    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        if self.is_empty() {
            return seen;
        }
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(p) = stack.pop() {
            for (_, q, _) in self.arcs_from(p) {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// First word (shortlex) where `𝓛(self)` exceeds `𝓛(other)`, found by
    /// exploring the joint grade-vector configurations, or `None` when
    /// `𝓛(self) ⊆ 𝓛(other)` on all of E*.
    pub fn first_excess_over(&self, other: &FuzzyAutomaton) -> Result<Option<Word>, Error> {
        self.alphabet.ensure_same(&other.alphabet)?;
        if self.is_empty() {
            return Ok(None);
        }
        let start = (self.initial_vector(), other.initial_vector());
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([(Word::epsilon(), start)]);
        while let Some((w, (vs, vo))) = queue.pop_front() {
            if join_all(vs.iter().copied()) > join_all(vo.iter().copied()) {
                return Ok(Some(w));
            }
            for e in self.alphabet.events() {
                let ns = self.step(&vs, e);
                if ns.iter().all(Grade::is_zero) {
                    continue;
                }
                let config = (ns, other.step(&vo, e));
                if seen.insert(config.clone()) {
                    queue.push_back((w.extend(e), config));
                }
            }
        }
        Ok(None)
    }

    pub(crate) fn ensure_contained_in(&self, other: &FuzzyAutomaton) -> Result<(), Error> {
        match self.first_excess_over(other)? {
            None => Ok(()),
            Some(word) => {
                Err(Error::NotContained { left: self.grade(word.events()), right: other.grade(word.events()), word })
            }
        }
    }
}

impl fmt::Debug for FuzzyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzyAutomaton")
            .field("alphabet", &self.alphabet)
            .field("states", &self.states)
            .field("initial", &self.initial())
            .field("transitions", &self.transitions())
            .finish()
    }
}

pub use compose::{accessible, from_language, parallel, product};
