use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{ArcTable, FuzzyAutomaton, StateId};
use crate::foundation::{Alphabet, Event, Grade, Word};
use crate::language::FuzzyLanguage;

/// Restriction to the states reachable from the initial state.
pub fn accessible(g: &FuzzyAutomaton) -> FuzzyAutomaton {
    let keep = g.reachable();
    restrict(g, &keep)
}

/// Keeps the states flagged in `keep` (renumbered in order) and the arcs
/// between them. Drops everything if the initial state is not kept.
pub(crate) fn restrict(g: &FuzzyAutomaton, keep: &[bool]) -> FuzzyAutomaton {
    if g.is_empty() || !keep[g.initial] {
        return FuzzyAutomaton::empty(g.alphabet.clone());
    }
    let mut renumber = vec![usize::MAX; g.states.len()];
    let mut states = Vec::new();
    for (i, s) in g.states.iter().enumerate() {
        if keep[i] {
            renumber[i] = states.len();
            states.push(s.clone());
        }
    }
    let mut arcs: ArcTable = vec![BTreeMap::new(); states.len()];
    for (p, row) in g.arcs.iter().enumerate() {
        if !keep[p] {
            continue;
        }
        for (e, succ) in row {
            let kept: Vec<_> = succ.iter().filter(|(q, _)| keep[*q]).map(|(q, gr)| (renumber[*q], *gr)).collect();
            if !kept.is_empty() {
                arcs[renumber[p]].insert(e.clone(), kept);
            }
        }
    }
    FuzzyAutomaton::from_parts(g.alphabet.clone(), states, renumber[g.initial], arcs)
}

/// Explores pair states from the initial pair; `moves` lists the graded
/// successor pairs of a pair on one event.
fn explore_pairs<F>(g1: &FuzzyAutomaton, g2: &FuzzyAutomaton, alphabet: Alphabet, moves: F) -> FuzzyAutomaton
where
    F: Fn(usize, usize, &Event) -> Vec<((usize, usize), Grade)>,
{
    if g1.is_empty() || g2.is_empty() {
        return FuzzyAutomaton::empty(alphabet);
    }
    let start = (g1.initial, g2.initial);
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut arcs: ArcTable = vec![BTreeMap::new()];
    let mut queue = VecDeque::from([start]);
    let events: Vec<Event> = alphabet.events().cloned().collect();
    while let Some((p, q)) = queue.pop_front() {
        let from = index[&(p, q)];
        for e in &events {
            let mut succ = Vec::new();
            for (pair, grade) in moves(p, q, e) {
                let to = *index.entry(pair).or_insert_with(|| {
                    order.push(pair);
                    arcs.push(BTreeMap::new());
                    queue.push_back(pair);
                    order.len() - 1
                });
                succ.push((to, grade));
            }
            if !succ.is_empty() {
                succ.sort_by_key(|(q, _)| *q);
                arcs[from].insert(e.clone(), succ);
            }
        }
    }
    let states = order.iter().map(|(p, q)| StateId::pair(&g1.states[*p], &g2.states[*q])).collect();
    FuzzyAutomaton::from_parts(alphabet, states, 0, arcs)
}

fn synchronized(
    g1: &FuzzyAutomaton,
    g2: &FuzzyAutomaton,
    p: usize,
    q: usize,
    e: &Event,
) -> Vec<((usize, usize), Grade)> {
    let mut out = Vec::new();
    for (p2, x) in g1.successors(p, e) {
        for (q2, y) in g2.successors(q, e) {
            out.push(((*p2, *q2), x.meet(*y)));
        }
    }
    out
}

/// Product `G1 × G2` over the shared events, accessible part only.
///
/// `𝓛(G1 × G2) = 𝓛(G1) ∩ 𝓛(G2)`.
pub fn product(g1: &FuzzyAutomaton, g2: &FuzzyAutomaton) -> FuzzyAutomaton {
    let alphabet = g1.alphabet.intersection(&g2.alphabet);
    explore_pairs(g1, g2, alphabet, |p, q, e| synchronized(g1, g2, p, q, e))
}

/// Parallel composition `G1 ∥ G2`: shared events synchronize, private
/// events interleave with their own grade. Accessible part only.
pub fn parallel(g1: &FuzzyAutomaton, g2: &FuzzyAutomaton) -> FuzzyAutomaton {
    let alphabet = g1.alphabet.union(&g2.alphabet);
    explore_pairs(g1, g2, alphabet, |p, q, e| match (g1.alphabet.contains(e), g2.alphabet.contains(e)) {
        (true, true) => synchronized(g1, g2, p, q, e),
        (true, false) => g1.successors(p, e).iter().map(|(p2, x)| ((*p2, q), *x)).collect(),
        (false, true) => g2.successors(q, e).iter().map(|(q2, y)| ((p, *q2), *y)).collect(),
        (false, false) => Vec::new(),
    })
}

/// The canonical automaton of a finite-support language: one state per
/// supported word, initial state ε, and an arc `μ -a-> μa` graded `L(μa)`.
pub fn from_language(language: &FuzzyLanguage) -> FuzzyAutomaton {
    let alphabet = language.alphabet().clone();
    if language.is_empty() {
        return FuzzyAutomaton::empty(alphabet);
    }
    let words: Vec<&Word> = language.entries().map(|(w, _)| w).collect();
    let position: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut labels: Vec<StateId> = words.iter().map(|w| StateId::new(w.render())).collect();
    let unique: std::collections::HashSet<_> = labels.iter().collect();
    if unique.len() != labels.len() {
        // dotted rendering collided (event names containing '.'); fall back to indices
        labels = (0..words.len()).map(|i| StateId::new(format!("w{i}"))).collect();
    }
    let mut arcs: ArcTable = vec![BTreeMap::new(); words.len()];
    // shortlex order puts ε first, so index 0 is the initial state
    for (i, (w, g)) in language.entries().enumerate().skip(1) {
        let parent = position[&w.max_proper_prefix().expect("non-empty word")];
        let last = w.last().expect("non-empty word").clone();
        arcs[parent].insert(last, vec![(i, g)]);
    }
    FuzzyAutomaton::from_parts(alphabet, labels, 0, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Transition;
    use crate::fixtures::{self, lang, word};

    #[test]
    fn accessible_examples() {
        let g = from_language(&fixtures::l1());
        let acc = accessible(&g);
        assert_eq!(acc.states(), g.states());
        let e = g.alphabet().clone();
        let a = e.lookup("a").unwrap();
        let mut states: Vec<StateId> = g.states().to_vec();
        states.push("x".into());
        let mut ts = g.transitions();
        ts.push(Transition::new("x", &a, "x", Grade::ONE));
        let with_isolated = FuzzyAutomaton::new(e.clone(), states, "ε".into(), ts).unwrap();
        let pruned = accessible(&with_isolated);
        assert_eq!(pruned.states(), g.states());
        assert_eq!(pruned.transitions(), g.transitions());
        assert!(accessible(&FuzzyAutomaton::empty(e)).is_empty());
    }

    #[test]
    fn product_examples() {
        let g = from_language(&fixtures::l1());
        let eps = from_language(&FuzzyLanguage::epsilon(g.alphabet().clone()));
        assert_eq!(product(&g, &eps).enumerate_language(6), FuzzyLanguage::epsilon(g.alphabet().clone()));
        let k1 = fixtures::k1();
        let p = product(&from_language(&k1), &g);
        assert_eq!(p.enumerate_language(6), k1);
        assert!(p.is_deterministic());
        assert!(product(&g, &FuzzyAutomaton::empty(g.alphabet().clone())).is_empty());
        assert_eq!(p.initial().unwrap().as_str(), "ε|ε");
    }

    #[test]
    fn nested_pair_labels_are_unambiguous() {
        let a = StateId::pair(&"x|y".into(), &"z".into());
        let b = StateId::pair(&"x".into(), &"y|z".into());
        assert_ne!(a, b);
        assert_eq!(a.as_str(), "(x|y)|z");
    }

    #[test]
    fn parallel_interleaves_private_events() {
        let ea = Alphabet::from_names(&["a"], &[]).unwrap();
        let eb = Alphabet::from_names(&["b"], &["b"]).unwrap();
        let g1 = from_language(&lang(&ea, &[("ε", "1"), ("a", "0.6")]));
        let g2 = from_language(&lang(&eb, &[("ε", "1"), ("b", "0.8")]));
        let par = parallel(&g1, &g2);
        let e = par.alphabet().clone();
        assert_eq!(e.len(), 2);
        assert!(e.is_uncontrollable(&e.lookup("b").unwrap()));
        assert_eq!(par.grade(word(&e, "ab").events()), "0.6".parse().unwrap());
        assert_eq!(par.grade(word(&e, "ba").events()), "0.6".parse().unwrap());
        assert_eq!(par.grade(word(&e, "b").events()), "0.8".parse().unwrap());
        assert_eq!(par.grade(word(&e, "aa").events()), Grade::ZERO);
        assert!(parallel(&g1, &FuzzyAutomaton::empty(eb)).is_empty());
    }

    #[test]
    fn parallel_equals_product_on_shared_alphabet() {
        let g1 = from_language(&fixtures::l1());
        let g2 = from_language(&fixtures::k2());
        assert_eq!(parallel(&g1, &g2).enumerate_language(6), product(&g1, &g2).enumerate_language(6));
    }

    #[test]
    fn from_language_examples() {
        let l1 = fixtures::l1();
        let g = from_language(&l1);
        assert_eq!(g.state_count(), 5);
        assert_eq!(g.enumerate_language(6), l1);
        let eps = from_language(&FuzzyLanguage::epsilon(l1.alphabet().clone()));
        assert_eq!(eps.state_count(), 1);
        assert!(eps.transitions().is_empty());
        assert!(from_language(&FuzzyLanguage::empty(l1.alphabet().clone())).is_empty());
    }
}
