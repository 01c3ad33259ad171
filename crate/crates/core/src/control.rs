//! Controllability, closed-loop behaviour and supervisor synthesis.
//!
//! A fuzzy language `K ⊆ 𝓛` is controllable when `K(s) ∧ 𝓛(sa) = K(sa)`
//! for every word `s` and uncontrollable event `a`. A fuzzy supervisor maps
//! each observed word to a fuzzy event set that is 1 on every uncontrollable
//! event; the closed loop is `𝓛^S(sa) = 𝓛(sa) ∧ S(s)(a) ∧ 𝓛^S(s)`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::automaton::{FuzzyAutomaton, StateId};
use crate::error::Error;
use crate::foundation::{join_all, Alphabet, Event, FuzzyEventSet, Grade, Word};
use crate::language::FuzzyLanguage;

/// Outcome of a controllability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControllabilityVerdict {
    pub controllable: bool,
    /// First `(s, a)` in shortlex order with `K(s) ∧ 𝓛(sa) ≠ K(sa)`.
    pub witness: Option<(Word, Event)>,
}

impl ControllabilityVerdict {
    fn from_witness(witness: Option<(Word, Event)>) -> Self {
        ControllabilityVerdict { controllable: witness.is_none(), witness }
    }

    pub(crate) fn into_result(self) -> Result<(), Error> {
        match self.witness {
            None => Ok(()),
            Some((word, event)) => Err(Error::Uncontrollable { word, event }),
        }
    }
}

/// Checks `K(s) ∧ L(sa) = K(sa)` for all `s` and uncontrollable `a`.
///
/// Only `s ∈ supp(K)` with `sa ∈ supp(L)` can fail: otherwise both sides
/// are 0 because `K ⊆ L`.
pub fn is_controllable(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<ControllabilityVerdict, Error> {
    k.ensure_contained_in(l)?;
    let alphabet = k.alphabet();
    let uncontrollable: Vec<&Event> = alphabet.uncontrollable().collect();
    for (s, ks) in k.entries() {
        for a in &uncontrollable {
            let sa = s.extend(a);
            let lsa = l.grade(&sa);
            if lsa.is_positive() && ks.meet(lsa) != k.grade(&sa) {
                return Ok(ControllabilityVerdict::from_witness(Some((s.clone(), (*a).clone()))));
            }
        }
    }
    Ok(ControllabilityVerdict::from_witness(None))
}

/// Controllability of `𝓛(h)` with respect to `𝓛(g)` over all of E*.
///
/// Explores the finitely many joint grade-vector configurations reachable
/// in breadth-first, event-ordered fashion, so the witness is the shortlex
/// least failing pair. Fails if `𝓛(h) ⊄ 𝓛(g)`.
pub fn is_controllable_automata(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> Result<ControllabilityVerdict, Error> {
    h.ensure_contained_in(g)?;
    if h.is_empty() {
        return Ok(ControllabilityVerdict::from_witness(None));
    }
    let alphabet = h.alphabet().clone();
    let start = (h.initial_vector(), g.initial_vector());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(Word::epsilon(), start)]);
    while let Some((s, (vh, vg))) = queue.pop_front() {
        let ks = join_all(vh.iter().copied());
        for a in alphabet.events() {
            let nh = h.step(&vh, a);
            let ng = g.step(&vg, a);
            if alphabet.is_uncontrollable(a) {
                let lsa = join_all(ng.iter().copied());
                if ks.meet(lsa) != join_all(nh.iter().copied()) {
                    return Ok(ControllabilityVerdict::from_witness(Some((s, a.clone()))));
                }
            }
            if nh.iter().all(Grade::is_zero) {
                continue;
            }
            let config = (nh, ng);
            if seen.insert(config.clone()) {
                queue.push_back((s.extend(a), config));
            }
        }
    }
    Ok(ControllabilityVerdict::from_witness(None))
}

/// A supervisor tabled over the plant's support up to a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzySupervisor {
    alphabet: Alphabet,
    horizon: usize,
    table: BTreeMap<Word, FuzzyEventSet>,
}

impl FuzzySupervisor {
    /// Rejects tables that do not enable every uncontrollable event fully.
    pub fn new(alphabet: Alphabet, horizon: usize, table: BTreeMap<Word, FuzzyEventSet>) -> Result<Self, Error> {
        for (w, set) in &table {
            alphabet.check_word(w.events())?;
            if let Some(a) = alphabet.uncontrollable().find(|a| !set.grade(a).is_one()) {
                return Err(Error::UncontrollableEvent(a.clone()));
            }
        }
        Ok(FuzzySupervisor { alphabet, horizon, table })
    }

    /// The supervisor that disables nothing.
    pub fn permissive(plant: &FuzzyAutomaton, horizon: usize) -> Self {
        let alphabet = plant.alphabet().clone();
        let table = plant
            .enumerate_language(horizon)
            .entries()
            .map(|(w, _)| (w.clone(), FuzzyEventSet::constant(&alphabet, Grade::ONE)))
            .collect();
        FuzzySupervisor { alphabet, horizon, table }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `S(s)`, if `s` is tabled.
    pub fn control(&self, word: &Word) -> Option<&FuzzyEventSet> {
        self.table.get(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &FuzzyEventSet)> + '_ {
        self.table.iter()
    }

    /// Replaces `S(s)(a)` for a controllable `a`.
    pub fn set_control(&mut self, word: &Word, event: &Event, grade: Grade) -> Result<(), Error> {
        if self.alphabet.is_uncontrollable(event) {
            return Err(Error::UncontrollableEvent(event.clone()));
        }
        match self.table.get_mut(word) {
            Some(set) => {
                set.set(event, grade);
                Ok(())
            }
            None => Err(Error::HorizonExhausted(word.clone())),
        }
    }
}

/// Closed-loop language `𝓛^S` up to `horizon`.
pub fn closed_loop(
    supervisor: &FuzzySupervisor,
    plant: &FuzzyAutomaton,
    horizon: usize,
) -> Result<FuzzyLanguage, Error> {
    supervisor.alphabet.ensure_same(plant.alphabet())?;
    if supervisor.horizon < horizon {
        return Err(Error::HorizonTooShort { supervisor: supervisor.horizon, requested: horizon });
    }
    unroll(
        plant,
        horizon,
        (),
        |s, _| supervisor.control(s).ok_or_else(|| Error::HorizonExhausted(s.clone())),
        |_, _| Some(()),
    )
}

/// Runs `𝓛^S(sa) = 𝓛(sa) ∧ S(s)(a) ∧ 𝓛^S(s)` breadth-first. Supervisor
/// memory of type `M` is threaded along each word by `advance`; a word
/// whose memory cannot advance is not extended.
fn unroll<'s, M, P, A>(
    plant: &FuzzyAutomaton,
    horizon: usize,
    start: M,
    pattern: P,
    advance: A,
) -> Result<FuzzyLanguage, Error>
where
    M: Clone,
    P: Fn(&Word, &M) -> Result<&'s FuzzyEventSet, Error>,
    A: Fn(&M, &Event) -> Option<M>,
{
    let alphabet = plant.alphabet().clone();
    let mut entries = BTreeMap::new();
    if plant.is_empty() {
        return Ok(FuzzyLanguage::from_trusted(alphabet, entries));
    }
    let mut queue = VecDeque::from([(Word::epsilon(), Grade::ONE, plant.initial_vector(), start)]);
    while let Some((s, grade, vector, memory)) = queue.pop_front() {
        entries.insert(s.clone(), grade);
        if s.len() == horizon {
            continue;
        }
        let mut control = None;
        for a in alphabet.events() {
            let next = plant.step(&vector, a);
            let plant_grade = join_all(next.iter().copied());
            if plant_grade.is_zero() {
                continue;
            }
            let set = match control {
                Some(set) => set,
                None => *control.insert(pattern(&s, &memory)?),
            };
            let g = plant_grade.meet(set.grade(a)).meet(grade);
            if g.is_positive() {
                if let Some(next_memory) = advance(&memory, a) {
                    queue.push_back((s.extend(a), g, next, next_memory));
                }
            }
        }
    }
    Ok(FuzzyLanguage::from_trusted(alphabet, entries))
}

/// Constructs the supervisor `S(s)(a) = K(sa)` for controllable `a`
/// (1 for uncontrollable `a`) over `supp(𝓛(G))` up to `horizon`.
///
/// Requires `K` nonempty, contained in `𝓛(G)` and controllable; the
/// closed loop then equals `K` truncated to `horizon`.
pub fn synthesize(k: &FuzzyLanguage, plant: &FuzzyAutomaton, horizon: usize) -> Result<FuzzySupervisor, Error> {
    k.alphabet().ensure_same(plant.alphabet())?;
    if k.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let depth = k.max_len().unwrap_or(0) + 1;
    let plant_language = plant.enumerate_language(depth);
    ensure_within_plant(k, plant)?;
    is_controllable(k, &plant_language)?.into_result()?;
    Ok(spec_table(plant, horizon, |w| k.grade(w)))
}

/// `S(s)(a) = spec(sa)` for controllable `a` and 1 otherwise, for every
/// `s ∈ supp(𝓛(G))` up to `horizon`.
fn spec_table<F: Fn(&Word) -> Grade>(plant: &FuzzyAutomaton, horizon: usize, spec: F) -> FuzzySupervisor {
    let alphabet = plant.alphabet().clone();
    let table = plant
        .enumerate_language(horizon)
        .entries()
        .map(|(s, _)| {
            let set = alphabet
                .events()
                .map(|a| {
                    let g = if alphabet.is_uncontrollable(a) { Grade::ONE } else { spec(&s.extend(a)) };
                    (a.clone(), g)
                })
                .collect::<Vec<_>>();
            (s.clone(), FuzzyEventSet::new(&alphabet, set).expect("events of the alphabet"))
        })
        .collect();
    FuzzySupervisor { alphabet, horizon, table }
}

/// [`synthesize`] for a specification given as an automaton `H`, possibly
/// nondeterministic. Controllability is checked over all of E*, so the
/// result does not depend on where `𝓛(H)` would have been truncated.
pub fn synthesize_automata(
    h: &FuzzyAutomaton,
    plant: &FuzzyAutomaton,
    horizon: usize,
) -> Result<FuzzySupervisor, Error> {
    h.alphabet().ensure_same(plant.alphabet())?;
    if h.is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    is_controllable_automata(h, plant)?.into_result()?;
    Ok(spec_table(plant, horizon, |w| h.grade(w.events())))
}

/// `K(w) ≤ 𝓛(G)(w)` for every supported word of `K`.
pub(crate) fn ensure_within_plant(k: &FuzzyLanguage, plant: &FuzzyAutomaton) -> Result<(), Error> {
    for (w, g) in k.entries() {
        let lg = plant.grade(w.events());
        if g > lg {
            return Err(Error::NotContained { word: w.clone(), left: g, right: lg });
        }
    }
    Ok(())
}

/// Range of admissible values for `S(s)(a)` that still yield `𝓛^S = K`.
///
/// Returns `(K(sa), K(sa))` when `𝓛(sa) ∧ K(s) > K(sa)` and `(K(sa), 1)`
/// when the two agree.
pub fn supervisor_slack(
    k: &FuzzyLanguage,
    plant: &FuzzyAutomaton,
    s: &Word,
    a: &Event,
) -> Result<(Grade, Grade), Error> {
    match plant.alphabet().is_controllable(a) {
        None => return Err(Error::UnknownEvent(a.name().to_string())),
        Some(false) => return Err(Error::UncontrollableEvent(a.clone())),
        Some(true) => {}
    }
    if plant.language_membership(s)?.is_zero() {
        return Err(Error::OutsideSupport(s.clone()));
    }
    let sa = s.extend(a);
    let ksa = k.grade(&sa);
    let reachable = plant.grade(sa.events()).meet(k.grade(s));
    if reachable > ksa {
        Ok((ksa, ksa))
    } else {
        Ok((ksa, Grade::ONE))
    }
}

/// A finite-memory supervisor: the control pattern depends only on the
/// state reached in a deterministic specification automaton.
#[derive(Clone, Debug)]
pub struct StateFeedbackSupervisor {
    spec: FuzzyAutomaton,
    patterns: BTreeMap<StateId, FuzzyEventSet>,
    /// Pattern used once a word has left the specification.
    closed: FuzzyEventSet,
}

/// Builds the state-feedback supervisor of a deterministic `H` with
/// `𝓛(H)` controllable with respect to `𝓛(G)`: at state `p` a controllable
/// `a` is enabled to the grade of `H`'s `a`-arc out of `p`.
pub fn realize_state_feedback(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> Result<StateFeedbackSupervisor, Error> {
    h.alphabet().ensure_same(g.alphabet())?;
    h.ensure_deterministic()?;
    if h.is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    is_controllable_automata(h, g)?.into_result()?;
    let alphabet = h.alphabet();
    let patterns = (0..h.state_count())
        .map(|p| {
            let grades = alphabet.events().map(|a| {
                let g = if alphabet.is_uncontrollable(a) {
                    Grade::ONE
                } else {
                    h.successor(p, a).map_or(Grade::ZERO, |(_, g)| g)
                };
                (a.clone(), g)
            });
            (h.states()[p].clone(), FuzzyEventSet::new(alphabet, grades).expect("events of the alphabet"))
        })
        .collect();
    Ok(StateFeedbackSupervisor { spec: h.clone(), patterns, closed: closed_pattern(alphabet) })
}

fn closed_pattern(alphabet: &Alphabet) -> FuzzyEventSet {
    FuzzyEventSet::new(alphabet, alphabet.uncontrollable().map(|a| (a.clone(), Grade::ONE)))
        .expect("events of the alphabet")
}

impl StateFeedbackSupervisor {
    pub fn spec(&self) -> &FuzzyAutomaton {
        &self.spec
    }

    pub fn patterns(&self) -> impl Iterator<Item = (&StateId, &FuzzyEventSet)> + '_ {
        self.patterns.iter()
    }

    pub fn pattern(&self, state: &StateId) -> Option<&FuzzyEventSet> {
        self.patterns.get(state)
    }

    fn pattern_at(&self, memory: Option<usize>) -> &FuzzyEventSet {
        match memory {
            Some(p) => &self.patterns[&self.spec.states()[p]],
            None => &self.closed,
        }
    }

    fn advance(&self, memory: Option<usize>, a: &Event) -> Option<usize> {
        memory.and_then(|p| self.spec.successor(p, a).map(|(q, _)| q))
    }

    /// Closed loop obtained by tracking the specification state along each word.
    pub fn closed_loop(&self, plant: &FuzzyAutomaton, horizon: usize) -> Result<FuzzyLanguage, Error> {
        self.spec.alphabet().ensure_same(plant.alphabet())?;
        unroll(
            plant,
            horizon,
            self.spec.initial_index(),
            |_, p| Ok(self.pattern_at(*p)),
            |p, a| Some(self.advance(*p, a)),
        )
    }

    /// Unrolls the patterns into a tabled supervisor over `supp(𝓛(G))`.
    /// Words that leave the specification get controllable grade 0.
    pub fn to_table(&self, plant: &FuzzyAutomaton, horizon: usize) -> FuzzySupervisor {
        let alphabet = plant.alphabet().clone();
        let table = plant
            .enumerate_language(horizon)
            .entries()
            .map(|(s, _)| {
                let memory = s.events().iter().fold(self.spec.initial_index(), |p, a| self.advance(p, a));
                (s.clone(), self.pattern_at(memory).clone())
            })
            .collect();
        FuzzySupervisor { alphabet, horizon, table }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{from_language, Transition};
    use crate::fixtures::{self, lang, word};

    fn g(text: &str) -> Grade {
        text.parse().unwrap()
    }

    #[test]
    fn controllability_examples() {
        let l1 = fixtures::l1();
        assert!(is_controllable(&fixtures::k1(), &l1).unwrap().controllable);
        let v = is_controllable(&fixtures::k2(), &l1).unwrap();
        let e = fixtures::alphabet();
        assert_eq!(v.witness, Some((word(&e, "a"), e.lookup("b").unwrap())));
        assert!(!is_controllable(&fixtures::k3(), &l1).unwrap().controllable);
        assert!(is_controllable(&FuzzyLanguage::empty(e.clone()), &l1).unwrap().controllable);
        assert!(is_controllable(&l1, &l1).unwrap().controllable);
        let too_big = lang(&e, &[("ε", "1"), ("a", "1")]);
        assert!(matches!(is_controllable(&too_big, &l1), Err(Error::NotContained { .. })));
    }

    #[test]
    fn automaton_check_matches_language_check() {
        let gl = from_language(&fixtures::l1());
        for k in [fixtures::k1(), fixtures::k2(), fixtures::k3()] {
            let by_auto = is_controllable_automata(&from_language(&k), &gl).unwrap();
            assert_eq!(by_auto, is_controllable(&k, &fixtures::l1()).unwrap());
        }
    }

    #[test]
    fn synthesize_example() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let b = e.lookup("b").unwrap();
        let plant = from_language(&fixtures::l1());
        let sup = synthesize(&fixtures::k1(), &plant, 6).unwrap();
        assert_eq!(sup.control(&Word::epsilon()).unwrap().grade(&a), g("0.8"));
        assert_eq!(sup.control(&word(&e, "a")).unwrap().grade(&a), g("0.7"));
        assert_eq!(sup.control(&word(&e, "ab")).unwrap().grade(&a), Grade::ZERO);
        assert!(sup.entries().all(|(_, set)| set.grade(&b).is_one()));
        assert_eq!(closed_loop(&sup, &plant, 6).unwrap(), fixtures::k1());
        let err = synthesize(&fixtures::k2(), &plant, 6).unwrap_err();
        assert_eq!(err, Error::Uncontrollable { word: word(&e, "a"), event: b });
        assert_eq!(synthesize(&FuzzyLanguage::empty(e), &plant, 6).unwrap_err(), Error::EmptyLanguage);
    }

    #[test]
    fn slack_example() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let plant = from_language(&fixtures::l1());
        let k1 = fixtures::k1();
        assert_eq!(supervisor_slack(&k1, &plant, &word(&e, "a"), &a).unwrap(), (g("0.7"), Grade::ONE));
        assert_eq!(supervisor_slack(&k1, &plant, &Word::epsilon(), &a).unwrap(), (g("0.8"), g("0.8")));
        assert_eq!(supervisor_slack(&k1, &plant, &word(&e, "ab"), &a).unwrap(), (Grade::ZERO, Grade::ZERO));
        let b = e.lookup("b").unwrap();
        assert!(matches!(supervisor_slack(&k1, &plant, &Word::epsilon(), &b), Err(Error::UncontrollableEvent(_))));
        assert!(matches!(supervisor_slack(&k1, &plant, &word(&e, "bb"), &a), Err(Error::OutsideSupport(_))));
        // sampled values inside the slack keep the closed loop at K
        for value in ["0.7", "0.75", "0.9", "1"] {
            let mut sup = synthesize(&k1, &plant, 6).unwrap();
            sup.set_control(&word(&e, "a"), &a, g(value)).unwrap();
            assert_eq!(closed_loop(&sup, &plant, 6).unwrap(), k1);
        }
        let mut sup = synthesize(&k1, &plant, 6).unwrap();
        sup.set_control(&word(&e, "a"), &a, g("0.6")).unwrap();
        assert_ne!(closed_loop(&sup, &plant, 6).unwrap(), k1);
    }

    #[test]
    fn closed_loop_extremes() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let plant = from_language(&fixtures::l1());
        let open = FuzzySupervisor::permissive(&plant, 6);
        assert_eq!(closed_loop(&open, &plant, 6).unwrap(), fixtures::l1());
        let mut shut = FuzzySupervisor::permissive(&plant, 6);
        shut.set_control(&Word::epsilon(), &a, Grade::ZERO).unwrap();
        assert_eq!(closed_loop(&shut, &plant, 6).unwrap(), FuzzyLanguage::epsilon(e.clone()));
        assert_eq!(closed_loop(&open, &plant, 7).unwrap_err(), Error::HorizonTooShort { supervisor: 6, requested: 7 });
        let bad = BTreeMap::from([(Word::epsilon(), FuzzyEventSet::constant(&e, g("0.5")))]);
        assert!(matches!(FuzzySupervisor::new(e, 1, bad), Err(Error::UncontrollableEvent(_))));
    }

    #[test]
    fn state_feedback_example() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let b = e.lookup("b").unwrap();
        let plant = from_language(&fixtures::l1());
        let h = from_language(&fixtures::k1());
        let sf = realize_state_feedback(&h, &plant).unwrap();
        let at_a = sf.pattern(&"a".into()).unwrap();
        assert_eq!((at_a.grade(&a), at_a.grade(&b)), (g("0.7"), Grade::ONE));
        let at_ab = sf.pattern(&"ab".into()).unwrap();
        assert_eq!((at_ab.grade(&a), at_ab.grade(&b)), (Grade::ZERO, Grade::ONE));
        assert_eq!(sf.closed_loop(&plant, 6).unwrap(), fixtures::k1());
        assert_eq!(closed_loop(&sf.to_table(&plant, 6), &plant, 6).unwrap(), fixtures::k1());
        let err = realize_state_feedback(&from_language(&fixtures::k2()), &plant).unwrap_err();
        assert!(matches!(err, Error::Uncontrollable { .. }));
    }

    #[test]
    fn state_feedback_on_a_cycle() {
        // plant loops on a (controllable) and b (uncontrollable); spec caps a at 0.5
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let b = e.lookup("b").unwrap();
        let plant = FuzzyAutomaton::new(
            e.clone(),
            vec!["p".into()],
            "p".into(),
            vec![Transition::new("p", &a, "p", g("0.9")), Transition::new("p", &b, "p", g("0.8"))],
        )
        .unwrap();
        let h = FuzzyAutomaton::new(
            e.clone(),
            vec!["x".into(), "y".into()],
            "x".into(),
            vec![
                Transition::new("x", &b, "x", g("0.8")),
                Transition::new("x", &a, "y", g("0.5")),
                Transition::new("y", &b, "y", g("0.5")),
            ],
        )
        .unwrap();
        let sf = realize_state_feedback(&h, &plant).unwrap();
        assert_eq!(sf.closed_loop(&plant, 5).unwrap(), h.enumerate_language(5));
        let table = synthesize_automata(&h, &plant, 5).unwrap();
        assert_eq!(table, sf.to_table(&plant, 5));
        assert_eq!(closed_loop(&table, &plant, 5).unwrap(), h.enumerate_language(5));
    }

    #[test]
    fn synthesize_automata_matches_language_form() {
        let plant = from_language(&fixtures::l1());
        let sup = synthesize_automata(&from_language(&fixtures::k1()), &plant, 6).unwrap();
        assert_eq!(sup, synthesize(&fixtures::k1(), &plant, 6).unwrap());
        let err = synthesize_automata(&from_language(&fixtures::k2()), &plant, 6).unwrap_err();
        assert!(matches!(err, Error::Uncontrollable { .. }));
        let empty = FuzzyAutomaton::empty(plant.alphabet().clone());
        assert_eq!(synthesize_automata(&empty, &plant, 6).unwrap_err(), Error::EmptyAutomaton);
    }
}
