//! Engine cross-checks aimed at the cases random sampling hits least often,
//! and invariants of the ↑ and ↓ operators on random language pairs.

use fdes_core::control::is_controllable;
use fdes_core::infimal::kdown;
use fdes_core::oracle::random;
use fdes_core::oracle::verify::check_engine_agreement;
use fdes_core::supremal::{khat, supremal_auto, AlgorithmTrace};
use fdes_core::{FuzzyAutomaton, FuzzyLanguage};
use proptest::prelude::*;

const HORIZON: usize = 8;

/// Scans seeds until `wanted` instances satisfy `keep`, then checks engine
/// agreement on each.
fn agreement_on(wanted: usize, keep: impl Fn(&AlgorithmTrace) -> bool) {
    let mut found: Vec<(u64, FuzzyAutomaton, FuzzyAutomaton)> = Vec::new();
    for seed in 0..20_000u64 {
        if found.len() == wanted {
            break;
        }
        let (h, g) = random::agreement_instance(&mut random::rng(seed));
        let (_, trace) = supremal_auto(&h, &g).unwrap();
        if keep(&trace) {
            found.push((seed, h, g));
        }
    }
    assert_eq!(found.len(), wanted, "not enough instances");
    for (seed, h, g) in &found {
        if let Err(msg) = check_engine_agreement(h, g, HORIZON) {
            panic!("seed {seed}: {msg}");
        }
    }
}

#[test]
fn agreement_when_theta_lowers_an_arc() {
    agreement_on(50, |t| t.emptied.is_none() && t.theta_values.iter().any(|v| !v.theta.is_one()));
}

#[test]
fn agreement_when_pruning_removes_states() {
    agreement_on(30, |t| t.emptied.is_none() && !t.iterations.is_empty());
}

#[test]
fn agreement_when_the_result_is_empty() {
    agreement_on(30, |t| t.emptied.is_some());
}

fn pair(seed: u64) -> (FuzzyLanguage, FuzzyLanguage) {
    random::language_pair(&mut random::rng(seed), 8, 4)
}

fn within(a: &FuzzyLanguage, b: &FuzzyLanguage) -> bool {
    a.first_excess_over(b).unwrap().is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn supremal_is_a_controllable_sublanguage(seed in any::<u64>()) {
        let (k, l) = pair(seed);
        let h = l.max_len().unwrap_or(0);
        let up = khat(&k, &l, h).unwrap();
        prop_assert!(within(&up, &k));
        prop_assert!(is_controllable(&up, &l).unwrap().controllable);
        prop_assert_eq!(khat(&up, &l, h).unwrap(), up);
    }

    #[test]
    fn infimal_is_a_controllable_superlanguage(seed in any::<u64>()) {
        let (k, l) = pair(seed);
        let h = l.max_len().unwrap_or(0);
        let down = kdown(&k, &l, h).unwrap();
        prop_assert!(within(&k, &down) && within(&down, &l));
        prop_assert!(is_controllable(&down, &l).unwrap().controllable);
        prop_assert_eq!(kdown(&down, &l, h).unwrap(), down);
    }

    #[test]
    fn operators_are_monotone(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (k, l) = random::language_pair(&mut rng, 8, 4);
        let pool = random::grade_pool(&mut rng, 4);
        let smaller = random::sublanguage(&mut rng, &k, &pool, 0.3);
        let h = l.max_len().unwrap_or(0);
        prop_assert!(within(&khat(&smaller, &l, h).unwrap(), &khat(&k, &l, h).unwrap()));
        prop_assert!(within(&kdown(&smaller, &l, h).unwrap(), &kdown(&k, &l, h).unwrap()));
    }

    #[test]
    fn controllable_languages_are_fixed_points(seed in any::<u64>()) {
        let (k, l) = pair(seed);
        let h = l.max_len().unwrap_or(0);
        if is_controllable(&k, &l).unwrap().controllable {
            prop_assert_eq!(khat(&k, &l, h).unwrap(), k.clone());
            prop_assert_eq!(kdown(&k, &l, h).unwrap(), k);
        }
    }
}
