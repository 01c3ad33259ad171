//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{accessible, product, FuzzyAutomaton, StateId, Transition};
use crate::foundation::{Alphabet, Grade, Word};
use crate::language::FuzzyLanguage;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 3] = ["a", "b", "c"];

/// `1` plus up to `size - 1` other grades, drawn from tenths, thirds and
/// quarters.
pub fn grade_pool(rng: &mut InstanceRng, size: usize) -> Vec<Grade> {
    let mut base: Vec<Grade> = (1..10).map(|n| Grade::ratio(n, 10)).collect();
    base.extend([Grade::ratio(1, 3), Grade::ratio(2, 3), Grade::ratio(1, 4), Grade::ratio(3, 4)]);
    base.shuffle(rng);
    let mut pool: Vec<Grade> = base.into_iter().take(size.saturating_sub(1)).collect();
    pool.push(Grade::ONE);
    pool.sort();
    pool
}

/// Between 1 and `max_events` events named a, b, c, each uncontrollable
/// with probability 1/2.
pub fn alphabet(rng: &mut InstanceRng, max_events: usize) -> Alphabet {
    let n = rng.gen_range(1..=max_events.min(NAMES.len()));
    let names = &NAMES[..n];
    let uc: Vec<&str> = names.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    Alphabet::from_names(names, &uc).expect("fixed names")
}

fn pick_below(rng: &mut InstanceRng, pool: &[Grade], cap: Grade) -> Option<Grade> {
    let allowed: Vec<Grade> = pool.iter().copied().filter(|g| *g <= cap).collect();
    allowed.choose(rng).copied()
}

/// A random fuzzy language with at most `max_words` supported words, all
/// graded from `pool`, growing a prefix tree from ε.
pub fn language(rng: &mut InstanceRng, alphabet: &Alphabet, max_words: usize, pool: &[Grade]) -> FuzzyLanguage {
    let events: Vec<_> = alphabet.events().cloned().collect();
    let mut entries = vec![(Word::epsilon(), Grade::ONE)];
    let target = rng.gen_range(1..=max_words.max(1));
    for _ in 0..target * 8 {
        if entries.len() >= target {
            break;
        }
        let (parent, cap) = entries.choose(rng).cloned().expect("ε present");
        let w = parent.extend(events.choose(rng).expect("nonempty alphabet"));
        if entries.iter().any(|(u, _)| *u == w) {
            continue;
        }
        if let Some(g) = pick_below(rng, pool, cap) {
            entries.push((w, g));
        }
    }
    FuzzyLanguage::validate(alphabet.clone(), entries).expect("tree construction keeps P1 and P2")
}

/// A random nonempty `K ⊆ l`. Each word is dropped with probability
/// `drop`, copied at its cap with probability 0.4, and otherwise lowered
/// to a pool grade.
pub fn sublanguage(rng: &mut InstanceRng, l: &FuzzyLanguage, pool: &[Grade], drop: f64) -> FuzzyLanguage {
    let mut kept: Vec<(Word, Grade)> = Vec::new();
    for (w, lw) in l.entries() {
        if w.is_empty() {
            kept.push((w.clone(), Grade::ONE));
            continue;
        }
        let parent = w.prefix(w.len() - 1);
        let Some(pk) = kept.iter().find(|(u, _)| *u == parent).map(|(_, g)| *g) else {
            continue;
        };
        if rng.gen_bool(drop) {
            continue;
        }
        let cap = lw.meet(pk);
        let g = if rng.gen_bool(0.4) { Some(cap) } else { pick_below(rng, pool, cap) };
        if let Some(g) = g {
            kept.push((w.clone(), g));
        }
    }
    FuzzyLanguage::validate(l.alphabet().clone(), kept).expect("sublanguage keeps P1 and P2")
}

/// A random automaton over `alphabet` with up to `max_states` states; each
/// `(state, event)` gets an arc with probability `density`. With
/// `deterministic` unset, further targets are added with the same
/// probability halved. With `acyclic_uc` set, uncontrollable arcs only go
/// to higher-numbered states. Accessible part only.
pub fn automaton(
    rng: &mut InstanceRng,
    alphabet: &Alphabet,
    max_states: usize,
    pool: &[Grade],
    density: f64,
    deterministic: bool,
    acyclic_uc: bool,
) -> FuzzyAutomaton {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<StateId> = (0..n).map(|i| StateId::new(format!("s{i}"))).collect();
    let mut transitions = Vec::new();
    for p in 0..n {
        for a in alphabet.events() {
            let lo = if acyclic_uc && alphabet.is_uncontrollable(a) { p + 1 } else { 0 };
            if lo >= n || !rng.gen_bool(density) {
                continue;
            }
            let mut targets = vec![rng.gen_range(lo..n)];
            if !deterministic {
                for q in lo..n {
                    if q != targets[0] && rng.gen_bool(density / 2.0) {
                        targets.push(q);
                    }
                }
            }
            for q in targets {
                let g = *pool.choose(rng).expect("nonempty pool");
                transitions.push(Transition::new(states[p].as_str(), a, states[q].as_str(), g));
            }
        }
    }
    let g = FuzzyAutomaton::new(alphabet.clone(), states.clone(), states[0].clone(), transitions)
        .expect("generated automaton is well formed");
    accessible(&g)
}

/// A deterministic automaton whose language is contained in `𝓛(g)`:
/// either `g` with arcs lowered or removed, or the product of `g` with
/// another random automaton. When lowering, arcs on the uncontrollable
/// paths from the initial state are left alone half of the time, since
/// changing them usually empties `K↑` outright.
pub fn spec_within(rng: &mut InstanceRng, g: &FuzzyAutomaton, pool: &[Grade]) -> FuzzyAutomaton {
    if rng.gen_bool(0.5) {
        let protected = if rng.gen_bool(0.5) { uncontrollable_closure(g) } else { Vec::new() };
        let mut transitions = Vec::new();
        for mut t in g.transitions() {
            let fixed = g.alphabet().is_uncontrollable(&t.event) && protected.contains(&t.from);
            if !fixed && rng.gen_bool(0.1) {
                continue;
            }
            let lower = if g.alphabet().is_uncontrollable(&t.event) { 0.6 } else { 0.25 };
            if !fixed && rng.gen_bool(lower) {
                t.grade = pick_below(rng, pool, t.grade).unwrap_or(t.grade);
            }
            transitions.push(t);
        }
        let lowered = FuzzyAutomaton::new(
            g.alphabet().clone(),
            g.states().to_vec(),
            g.initial().expect("nonempty").clone(),
            transitions,
        )
        .expect("same states as g");
        accessible(&lowered)
    } else {
        let other = automaton(rng, g.alphabet(), 3, pool, 0.8, true, false);
        product(&other, g)
    }
}

/// States reachable from the initial state by uncontrollable arcs alone.
fn uncontrollable_closure(g: &FuzzyAutomaton) -> Vec<StateId> {
    let mut seen: Vec<StateId> = g.initial().into_iter().cloned().collect();
    let mut i = 0;
    while i < seen.len() {
        let p = seen[i].clone();
        for t in g.transitions() {
            if t.from == p && g.alphabet().is_uncontrollable(&t.event) && !seen.contains(&t.to) {
                seen.push(t.to);
            }
        }
        i += 1;
    }
    seen
}

/// Two or three events with at least one of each kind.
pub fn mixed_alphabet(rng: &mut InstanceRng) -> Alphabet {
    let n = rng.gen_range(2..=NAMES.len());
    let names = &NAMES[..n];
    let mut uc = vec![NAMES[1]];
    if n == 3 && rng.gen_bool(0.5) {
        uc.push(NAMES[2]);
    }
    Alphabet::from_names(names, &uc).expect("fixed names")
}

/// Deterministic `(H, G)` for the engine agreement checks: at most three
/// events, six states and four grades. Uncontrollable arcs of `G` are kept
/// acyclic when there are two or more uncontrollable events, so the
/// uncontrollable tails that must be materialized stay small.
pub fn agreement_instance(rng: &mut InstanceRng) -> (FuzzyAutomaton, FuzzyAutomaton) {
    let e = if rng.gen_bool(0.8) { mixed_alphabet(rng) } else { alphabet(rng, 3) };
    let size = rng.gen_range(2..=4);
    let pool = grade_pool(rng, size);
    let acyclic = e.uncontrollable().count() > 1;
    let g = automaton(rng, &e, 6, &pool, 0.7, true, acyclic);
    let h = spec_within(rng, &g, &pool);
    (h, g)
}

/// `(K, L)` with `K ⊆ L`, at most `max_words` words and `grades` grades.
pub fn language_pair(rng: &mut InstanceRng, max_words: usize, grades: usize) -> (FuzzyLanguage, FuzzyLanguage) {
    let e = alphabet(rng, 3);
    let size = rng.gen_range(1..=grades);
    let pool = grade_pool(rng, size);
    let l = language(rng, &e, max_words, &pool);
    let k = sublanguage(rng, &l, &pool, 0.3);
    (k, l)
}

/// `(L_a, L_l, L)` with `L_a ⊆ L_l ⊆ L`.
pub fn scp_instance(
    rng: &mut InstanceRng,
    max_words: usize,
    grades: usize,
) -> (FuzzyLanguage, FuzzyLanguage, FuzzyLanguage) {
    let e = alphabet(rng, 3);
    let size = rng.gen_range(1..=grades);
    let pool = grade_pool(rng, size);
    let l = language(rng, &e, max_words, &pool);
    let ll = sublanguage(rng, &l, &pool, 0.2);
    let la = sublanguage(rng, &ll, &pool, 0.5);
    (la, ll, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_respect_their_bounds() {
        let mut r = rng(7);
        for _ in 0..50 {
            let (k, l) = language_pair(&mut r, 5, 4);
            assert!(l.len() <= 5);
            assert!(k.contains(&l).unwrap());
            assert!(!k.is_empty());
            let (h, g) = agreement_instance(&mut r);
            assert!(h.is_deterministic() && g.is_deterministic());
            assert!(g.state_count() <= 6);
            assert!(h.first_excess_over(&g).unwrap().is_none());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = language_pair(&mut rng(3), 5, 4);
        let b = language_pair(&mut rng(3), 5, 4);
        assert_eq!(a, b);
    }
}
