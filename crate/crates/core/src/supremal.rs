//! The supremal controllable fuzzy sublanguage `K↑`.
//!
//! Two engines compute it: [`khat`] evaluates the inductive construction on
//! finite-support languages, and [`supremal_auto`] works on deterministic
//! automata by pruning a product with the plant and then lowering the
//! grades of controllable arcs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::automaton::{ArcTable, FuzzyAutomaton, StateId};
use crate::error::Error;
use crate::foundation::{Event, Grade, Word};
use crate::language::{CrispLanguage, Divisor, FuzzyLanguage};

/// `λ(sa)`: the least `K(t)` over `t ∈ sa·E*_uc` with `K(t) < 𝓛(t) ∧ K(t̃)`,
/// where `t̃` is the longest proper prefix of `t`; 1 if there is none.
pub fn lambda_value(k: &FuzzyLanguage, l: &FuzzyLanguage, sa: &Word) -> Result<Grade, Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    k.alphabet().check_word(sa.events())?;
    let a = sa.last().ok_or(Error::NoProperPrefix)?;
    if k.alphabet().is_uncontrollable(a) {
        return Err(Error::UncontrollableEvent(a.clone()));
    }
    Ok(lambda(k, l, sa))
}

// Qualifying t need 𝓛(t) > 0, so the walk stays inside supp(L).
fn lambda(k: &FuzzyLanguage, l: &FuzzyLanguage, sa: &Word) -> Grade {
    let uncontrollable: Vec<&Event> = k.alphabet().uncontrollable().collect();
    let mut value = Grade::ONE;
    let mut queue = VecDeque::new();
    if l.grade(sa).is_positive() {
        queue.push_back(sa.clone());
    }
    while let Some(t) = queue.pop_front() {
        let kt = k.grade(&t);
        let parent = k.grade(&t.prefix(t.len() - 1));
        if kt < l.grade(&t).meet(parent) {
            value = value.meet(kt);
        }
        for b in &uncontrollable {
            let tb = t.extend(b);
            if l.grade(&tb).is_positive() {
                queue.push_back(tb);
            }
        }
    }
    value
}

/// `K̂`, which equals `K↑`, over the words of `supp(K)` of length at most
/// `horizon`.
pub fn khat(k: &FuzzyLanguage, l: &FuzzyLanguage, horizon: usize) -> Result<FuzzyLanguage, Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    k.ensure_contained_in(l)?;
    let alphabet = k.alphabet().clone();
    let deficient_root = l.entries().any(|(w, lw)| alphabet.all_uncontrollable(w.events()) && k.grade(w) < lw);
    if k.is_empty() || deficient_root {
        return Ok(FuzzyLanguage::empty(alphabet));
    }
    let mut entries = BTreeMap::from([(Word::epsilon(), Grade::ONE)]);
    // shortlex order visits every prefix before its extensions
    for (w, kw) in k.entries().skip(1) {
        if w.len() > horizon {
            break;
        }
        let Some(parent) = entries.get(&w.prefix(w.len() - 1)).copied() else {
            continue;
        };
        let mut g = parent.meet(kw);
        let last = w.last().expect("non-empty word");
        if !alphabet.is_uncontrollable(last) {
            g = g.meet(lambda(k, l, w));
        }
        if g.is_positive() {
            entries.insert(w.clone(), g);
        }
    }
    Ok(FuzzyLanguage::from_trusted(alphabet, entries))
}

/// `supp(K) \ [(supp(L) \ supp(K)) / E*_uc]·E*`, a superset of `supp(K↑)`.
pub fn supp_upper_bound(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<CrispLanguage, Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    k.ensure_contained_in(l)?;
    let (sk, sl) = (k.support(), l.support());
    let escapes = sl.difference(&sk).quotient(&Divisor::UncontrollableStar(k.alphabet().clone()));
    Ok(sk.without_extensions_of(&escapes))
}

/// States removed in one pass of the pruning loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub removed_states: Vec<StateId>,
    /// `(state, event)`: the plant can take the uncontrollable `event` at
    /// `state` but the specification cannot follow.
    pub reasons: Vec<(StateId, Event)>,
}

/// The grade cap applied to one controllable arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaValue {
    pub state: StateId,
    pub event: Event,
    pub theta: Grade,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Emptied {
    /// The specification automaton has no states.
    EmptySpec,
    /// Pruning removed the initial state.
    Pruned,
    /// Some uncontrollable word from the initial state has a lower grade in
    /// the specification than in the plant.
    InitialPathDeficiency { word: Word },
}

/// What [`supremal_auto`] did, for inspection and debugging.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AlgorithmTrace {
    pub iterations: Vec<Removal>,
    pub theta_values: Vec<ThetaValue>,
    pub emptied: Option<Emptied>,
}

/// Accessible product of two deterministic automata that keeps the two
/// component grades of every arc apart.
struct PairGraph {
    pairs: Vec<(usize, usize)>,
    arcs: Vec<BTreeMap<Event, (usize, Grade, Grade)>>,
}

impl PairGraph {
    fn build(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> Self {
        let start = (h.initial_index().expect("nonempty"), g.initial_index().expect("nonempty"));
        let mut index = HashMap::from([(start, 0)]);
        let mut graph = PairGraph { pairs: vec![start], arcs: vec![BTreeMap::new()] };
        let mut next = 0;
        while next < graph.pairs.len() {
            let (p, q) = graph.pairs[next];
            for a in h.alphabet().events() {
                let (Some((p2, x)), Some((q2, y))) = (h.successor(p, a), g.successor(q, a)) else {
                    continue;
                };
                let to = *index.entry((p2, q2)).or_insert_with(|| {
                    graph.pairs.push((p2, q2));
                    graph.arcs.push(BTreeMap::new());
                    graph.pairs.len() - 1
                });
                graph.arcs[next].insert(a.clone(), (to, x, y));
            }
            next += 1;
        }
        graph
    }

    fn label(&self, h: &FuzzyAutomaton, g: &FuzzyAutomaton, x: usize) -> StateId {
        let (p, q) = self.pairs[x];
        StateId::pair(&h.states()[p], &g.states()[q])
    }

    fn reachable(&self, alive: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.pairs.len()];
        if !alive[0] {
            return seen;
        }
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for (to, _, _) in self.arcs[x].values() {
                if alive[*to] && !seen[*to] {
                    seen[*to] = true;
                    stack.push(*to);
                }
            }
        }
        seen
    }

    /// Least specification grade `h` over uncontrollable words from `x`
    /// whose specification grade is below their plant grade, with the
    /// shortlex least word attaining it. Explores `(state, h, g)` triples.
    fn deficiency(&self, x: usize, alive: &[bool], uncontrollable: &[&Event]) -> Option<(Grade, Word)> {
        let start = (x, Grade::ONE, Grade::ONE);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([(start, Word::epsilon())]);
        let mut best: Option<(Grade, Word)> = None;
        while let Some(((y, hmin, gmin), word)) = queue.pop_front() {
            if hmin < gmin && best.as_ref().is_none_or(|(b, _)| hmin < *b) {
                best = Some((hmin, word.clone()));
            }
            for a in uncontrollable {
                let Some((to, hx, gx)) = self.arcs[y].get(*a) else {
                    continue;
                };
                if !alive[*to] {
                    continue;
                }
                let config = (*to, hmin.meet(*hx), gmin.meet(*gx));
                if seen.insert(config) {
                    queue.push_back((config, word.extend(a)));
                }
            }
        }
        best
    }
}

/// Computes an automaton generating `K↑ = 𝓛(h)↑` with respect to `𝓛(g)`.
///
/// Both automata must be deterministic and `𝓛(h) ⊆ 𝓛(g)`. The pair
/// states of `h × g` that cannot follow an uncontrollable plant move are
/// pruned to a fixpoint; each controllable arc into a pair state is then
/// capped by `θ`, the least specification grade among the uncontrollable
/// continuations from that state that fall short of the plant.
pub fn supremal_auto(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> Result<(FuzzyAutomaton, AlgorithmTrace), Error> {
    h.alphabet().ensure_same(g.alphabet())?;
    h.ensure_deterministic()?;
    g.ensure_deterministic()?;
    h.ensure_contained_in(g)?;
    let alphabet = h.alphabet().clone();
    let mut trace = AlgorithmTrace::default();
    if h.is_empty() {
        trace.emptied = Some(Emptied::EmptySpec);
        return Ok((FuzzyAutomaton::empty(alphabet), trace));
    }
    let graph = PairGraph::build(h, g);
    let n = graph.pairs.len();
    let uncontrollable: Vec<&Event> = alphabet.uncontrollable().collect();
    let mut alive = vec![true; n];
    loop {
        let mut removed = Vec::new();
        let mut reasons = Vec::new();
        for x in (0..n).filter(|x| alive[*x]) {
            let q = graph.pairs[x].1;
            let blocked = uncontrollable
                .iter()
                .find(|a| g.successor(q, a).is_some() && graph.arcs[x].get(**a).is_none_or(|(to, _, _)| !alive[*to]));
            if let Some(a) = blocked {
                removed.push(x);
                reasons.push((graph.label(h, g, x), (*a).clone()));
            }
        }
        if removed.is_empty() {
            break;
        }
        for x in &removed {
            alive[*x] = false;
        }
        let reach = graph.reachable(&alive);
        for x in 0..n {
            if alive[x] && !reach[x] {
                alive[x] = false;
                removed.push(x);
            }
        }
        removed.sort_unstable();
        trace
            .iterations
            .push(Removal { removed_states: removed.iter().map(|x| graph.label(h, g, *x)).collect(), reasons });
    }
    if !alive[0] {
        trace.emptied = Some(Emptied::Pruned);
        return Ok((FuzzyAutomaton::empty(alphabet), trace));
    }
    if let Some((_, word)) = graph.deficiency(0, &alive, &uncontrollable) {
        trace.emptied = Some(Emptied::InitialPathDeficiency { word });
        return Ok((FuzzyAutomaton::empty(alphabet), trace));
    }

    let mut renumber = vec![usize::MAX; n];
    let mut states = Vec::new();
    for x in (0..n).filter(|x| alive[*x]) {
        renumber[x] = states.len();
        states.push(graph.label(h, g, x));
    }
    let mut theta: HashMap<usize, Grade> = HashMap::new();
    let mut arcs: ArcTable = vec![BTreeMap::new(); states.len()];
    for x in (0..n).filter(|x| alive[*x]) {
        for (a, (to, hx, gx)) in &graph.arcs[x] {
            if !alive[*to] {
                continue;
            }
            let mut grade = hx.meet(*gx);
            if !alphabet.is_uncontrollable(a) {
                let cap = *theta
                    .entry(*to)
                    .or_insert_with(|| graph.deficiency(*to, &alive, &uncontrollable).map_or(Grade::ONE, |(v, _)| v));
                trace.theta_values.push(ThetaValue {
                    state: states[renumber[x]].clone(),
                    event: a.clone(),
                    theta: cap,
                });
                grade = grade.meet(cap);
            }
            arcs[renumber[x]].insert(a.clone(), vec![(renumber[*to], grade)]);
        }
    }
    Ok((FuzzyAutomaton::from_parts(alphabet, states, 0, arcs), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{from_language, Transition};
    use crate::control::is_controllable;
    use crate::fixtures::{self, lang, word};
    use crate::foundation::Alphabet;

    fn g(text: &str) -> Grade {
        text.parse().unwrap()
    }

    #[test]
    fn lambda_examples() {
        let e = fixtures::alphabet();
        let (k2, l1) = (fixtures::k2(), fixtures::l1());
        assert_eq!(lambda_value(&k2, &l1, &word(&e, "a")).unwrap(), g("0.6"));
        assert_eq!(lambda_value(&k2, &l1, &word(&e, "aa")).unwrap(), Grade::ONE);
        for (w, _) in l1.entries().skip(1) {
            if !e.is_uncontrollable(w.last().unwrap()) {
                assert_eq!(lambda_value(&l1, &l1, w).unwrap(), Grade::ONE);
            }
        }
        assert!(matches!(lambda_value(&k2, &l1, &word(&e, "ab")), Err(Error::UncontrollableEvent(_))));
        assert_eq!(lambda_value(&k2, &l1, &Word::epsilon()), Err(Error::NoProperPrefix));
    }

    #[test]
    fn khat_examples() {
        let e = fixtures::alphabet();
        let expected = lang(&e, &[("ε", "1"), ("a", "0.6"), ("aa", "0.6"), ("ab", "0.6")]);
        assert_eq!(khat(&fixtures::k2(), &fixtures::l1(), 6).unwrap(), expected);
        assert_eq!(khat(&fixtures::k1(), &fixtures::l1(), 6).unwrap(), fixtures::k1());
        let (lr, kr1, kr2) = fixtures::strict_union();
        assert!(khat(&kr1, &lr, 6).unwrap().is_empty());
        assert!(khat(&kr2, &lr, 6).unwrap().is_empty());
        assert_eq!(khat(&kr1.union(&kr2).unwrap(), &lr, 6).unwrap(), lr);
        let too_big = lang(&e, &[("ε", "1"), ("b", "1")]);
        assert!(matches!(khat(&too_big, &fixtures::l1(), 6), Err(Error::NotContained { .. })));
    }

    #[test]
    fn khat_harmonic() {
        for n in [5u64, 10, 20] {
            let (l, k) = fixtures::harmonic(n as usize);
            let e = l.alphabet().clone();
            let up = khat(&k, &l, n as usize + 1).unwrap();
            assert_eq!(up.grade(&Word::epsilon()), Grade::ONE);
            assert_eq!(up.grade(&word(&e, "a")), Grade::ratio(1, n + 1));
            assert_eq!(up.grade(&word(&e, "c")), Grade::ZERO);
            assert_eq!(up.grade(&word(&e, &format!("a{}", "b".repeat(n as usize)))), Grade::ratio(1, n + 1));
            assert_eq!(supp_upper_bound(&k, &l).unwrap(), k.support());
            assert!(is_controllable(&up, &l).unwrap().controllable);
        }
    }

    #[test]
    fn upper_bound_examples() {
        let (lr, kr1, _) = fixtures::strict_union();
        assert_eq!(supp_upper_bound(&kr1, &lr).unwrap(), kr1.support());
        let e = fixtures::alphabet();
        // ab is in supp(L) but not supp(K): a, and everything after it, goes
        let k = lang(&e, &[("ε", "1"), ("a", "0.8"), ("aa", "0.7")]);
        let bound = supp_upper_bound(&k, &fixtures::l1()).unwrap();
        assert_eq!(bound, CrispLanguage::from_iter([Word::epsilon()]));
        assert!(khat(&k, &fixtures::l1(), 6).unwrap().support().is_subset(&bound));
    }

    #[test]
    fn supremal_auto_examples() {
        let gl = from_language(&fixtures::l1());
        let h1 = from_language(&fixtures::k1());
        let (out, trace) = supremal_auto(&h1, &gl).unwrap();
        assert_eq!(out.enumerate_language(6), fixtures::k1());
        assert!(trace.iterations.is_empty());
        assert!(trace.theta_values.iter().all(|t| t.theta.is_one()));
        assert_eq!(out.state_count(), h1.state_count());

        let (out, _) = supremal_auto(&from_language(&fixtures::k2()), &gl).unwrap();
        assert_eq!(out.enumerate_language(6), khat(&fixtures::k2(), &fixtures::l1(), 6).unwrap());

        let (lr, kr1, _) = fixtures::strict_union();
        let (out, trace) = supremal_auto(&from_language(&kr1), &from_language(&lr)).unwrap();
        assert!(out.is_empty());
        assert!(matches!(trace.emptied, Some(Emptied::InitialPathDeficiency { .. })));
    }

    #[test]
    fn supremal_auto_prunes() {
        // K drops the uncontrollable ab that L allows, so a must go
        let e = fixtures::alphabet();
        let k = lang(&e, &[("ε", "1"), ("a", "0.8"), ("aa", "0.7")]);
        let (out, trace) = supremal_auto(&from_language(&k), &from_language(&fixtures::l1())).unwrap();
        assert_eq!(out.enumerate_language(6), FuzzyLanguage::epsilon(e.clone()));
        assert_eq!(trace.iterations.len(), 1);
        assert_eq!(trace.iterations[0].reasons, vec![(StateId::new("a|a"), e.lookup("b").unwrap())]);
        assert_eq!(trace.iterations[0].removed_states.len(), 2);
        assert_eq!(khat(&k, &fixtures::l1(), 6).unwrap(), FuzzyLanguage::epsilon(e.clone()));

        let kb = lang(&e, &[("ε", "1"), ("a", "0.9")]);
        let lb = lang(&e, &[("ε", "1"), ("a", "0.9"), ("b", "0.5")]);
        let (out, trace) = supremal_auto(&from_language(&kb), &from_language(&lb)).unwrap();
        assert!(out.is_empty());
        assert_eq!(trace.emptied, Some(Emptied::Pruned));
    }

    #[test]
    fn supremal_auto_on_a_cycle() {
        // plant: a (controllable) then b (uncontrollable) loops; spec weakens b
        let e = Alphabet::from_names(&["a", "b"], &["b"]).unwrap();
        let (a, b) = (e.lookup("a").unwrap(), e.lookup("b").unwrap());
        let plant = FuzzyAutomaton::new(
            e.clone(),
            vec!["0".into(), "1".into()],
            "0".into(),
            vec![Transition::new("0", &a, "1", g("0.9")), Transition::new("1", &b, "0", g("0.8"))],
        )
        .unwrap();
        let spec = FuzzyAutomaton::new(
            e.clone(),
            vec!["x".into(), "y".into()],
            "x".into(),
            vec![Transition::new("x", &a, "y", g("0.9")), Transition::new("y", &b, "x", g("0.4"))],
        )
        .unwrap();
        let (out, trace) = supremal_auto(&spec, &plant).unwrap();
        let n = 9;
        let expected = khat(&spec.enumerate_language(n + 1), &plant.enumerate_language(n + 1), n).unwrap();
        assert_eq!(out.enumerate_language(n), expected);
        assert_eq!(expected.grade(&word(&e, "a")), g("0.4"));
        assert!(trace.theta_values.iter().all(|t| t.theta == g("0.4")));
    }

    #[test]
    fn supremal_auto_rejects_bad_input() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let nd = FuzzyAutomaton::new(
            e.clone(),
            vec!["0".into(), "1".into()],
            "0".into(),
            vec![Transition::new("0", &a, "0", g("0.5")), Transition::new("0", &a, "1", g("0.5"))],
        )
        .unwrap();
        let gl = from_language(&fixtures::l1());
        assert!(matches!(supremal_auto(&nd, &gl), Err(Error::Nondeterministic { .. })));
        let big = from_language(&lang(&e, &[("ε", "1"), ("b", "1")]));
        assert!(matches!(supremal_auto(&big, &gl), Err(Error::NotContained { .. })));
    }
}
