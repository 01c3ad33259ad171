//! Criterion benchmarks for the fuzzy supervisory-control engines; see
//! `benches/`. This library only builds the benchmark inputs.

use fdes_core::oracle::random;
use fdes_core::{FuzzyAutomaton, FuzzyLanguage};

pub const SEED: u64 = 1;

/// `count` deterministic `(H, G)` pairs of the acceptance-suite size.
pub fn automaton_pairs(count: usize) -> Vec<(FuzzyAutomaton, FuzzyAutomaton)> {
    let mut rng = random::rng(SEED);
    (0..count).map(|_| random::agreement_instance(&mut rng)).collect()
}

/// A deterministic `(H, G)` where `G` has exactly `states` accessible
/// states and `H` keeps at least half of them.
pub fn large_pair(states: usize) -> (FuzzyAutomaton, FuzzyAutomaton) {
    for seed in SEED.. {
        let mut rng = random::rng(seed);
        let e = random::mixed_alphabet(&mut rng);
        let pool = random::grade_pool(&mut rng, 6);
        let g = random::automaton(&mut rng, &e, states, &pool, 0.8, true, false);
        if g.state_count() != states {
            continue;
        }
        let h = random::spec_within(&mut rng, &g, &pool);
        if 2 * h.state_count() >= states {
            return (h, g);
        }
    }
    unreachable!("seed space exhausted")
}

/// `(K, L)` with `L = 𝓛(G)` and `K = 𝓛(H)` enumerated to `horizon`.
pub fn language_pair(states: usize, horizon: usize) -> (FuzzyLanguage, FuzzyLanguage) {
    let (h, g) = large_pair(states);
    (h.enumerate_language(horizon), g.enumerate_language(horizon))
}
