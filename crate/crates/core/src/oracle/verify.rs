//! Cross-checks between the engines, the oracles and the worked examples.
//!
//! Each check returns `Err` with a description of the first mismatch. The
//! suites bundle checks over fixed fixtures or seeded random instances.

use std::collections::{HashSet, VecDeque};

use super::random::{self, InstanceRng};
use super::{
    brute_controllable, brute_infimal, brute_scp_solvable, brute_supremal, crisp_controllable, crisp_rw_supremal,
};
use crate::automaton::{from_language, parallel, product, FuzzyAutomaton};
use crate::control::{closed_loop, is_controllable, supervisor_slack, synthesize};
use crate::error::Error;
use crate::fixtures;
use crate::foundation::{Event, Grade, Word};
use crate::infimal::{kdown, kdown_formula, supp_down};
use crate::language::FuzzyLanguage;
use crate::scp::{scp_solvable, scp_supervisor};
use crate::supremal::{khat, supp_upper_bound, supremal_auto};

pub type Check = Result<(), String>;

/// Result of one suite.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    fn new(name: &'static str) -> Self {
        Outcome { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, check: Check) {
        self.cases += 1;
        if let Err(msg) = check {
            self.failures.push(msg);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One line: `PASS name (n cases)` or `FAIL name: first failure`.
    pub fn line(&self) -> String {
        match self.failures.first() {
            None => format!("PASS {} ({} case{})", self.name, self.cases, if self.cases == 1 { "" } else { "s" }),
            Some(first) => format!("FAIL {} ({}/{} cases failed): {first}", self.name, self.failures.len(), self.cases),
        }
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, left: T, right: T) -> Check {
    if left == right {
        Ok(())
    } else {
        Err(format!("{what}: {left:?} != {right:?}"))
    }
}

/// Language equality, reporting the first word where the grades differ.
fn same(what: &str, left: &FuzzyLanguage, right: &FuzzyLanguage) -> Check {
    let words: std::collections::BTreeSet<&Word> = left.entries().chain(right.entries()).map(|(w, _)| w).collect();
    match words.into_iter().find(|w| left.grade(w) != right.grade(w)) {
        None => Ok(()),
        Some(w) => Err(format!("{what}: at {w}, {} != {}", left.grade(w), right.grade(w))),
    }
}

fn expect(what: &str, cond: bool) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn subset(what: &str, a: &FuzzyLanguage, b: &FuzzyLanguage) -> Check {
    match a.first_excess_over(b).map_err(err)? {
        None => Ok(()),
        Some(w) => Err(format!("{what}: at {w}, {} > {}", a.grade(&w), b.grade(&w))),
    }
}

/// Longest uncontrollable continuation needed to see every
/// `(spec state, plant state, spec grade, plant grade)` combination reachable
/// from any pair state of `h × g`. Both automata must be deterministic.
pub fn uncontrollable_depth(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> usize {
    if h.is_empty() || g.is_empty() {
        return 0;
    }
    let alphabet = h.alphabet();
    let uc: Vec<&Event> = alphabet.uncontrollable().collect();
    let start = (h.initial_index().expect("nonempty"), g.initial_index().expect("nonempty"));
    let mut pairs = vec![start];
    let mut seen_pairs = HashSet::from([start]);
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for a in alphabet.events() {
            if let (Some((p2, _)), Some((q2, _))) = (h.successor(p, a), g.successor(q, a)) {
                if seen_pairs.insert((p2, q2)) {
                    pairs.push((p2, q2));
                }
            }
        }
        i += 1;
    }
    let mut depth = 0;
    for (p, q) in pairs {
        let start = (Some(p), q, Grade::ONE, Grade::ONE);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([(start, 0)]);
        while let Some(((p, q, hm, gm), d)) = queue.pop_front() {
            depth = depth.max(d);
            let Some(p) = p else { continue };
            for a in &uc {
                let Some((q2, gx)) = g.successor(q, a) else { continue };
                let next = match h.successor(p, a) {
                    Some((p2, hx)) => (Some(p2), q2, hm.meet(hx), gm.meet(gx)),
                    None => (None, q2, Grade::ZERO, gm.meet(gx)),
                };
                if seen.insert(next) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    depth
}

/// `supremal_auto` against `khat` and `infimal_auto` against `kdown` and
/// `kdown_formula`, all at `horizon`. The languages handed to `khat` carry
/// uncontrollable tails long enough for its `λ` to be exact.
pub fn check_engine_agreement(h: &FuzzyAutomaton, g: &FuzzyAutomaton, horizon: usize) -> Check {
    let alphabet = g.alphabet().clone();
    let extra = uncontrollable_depth(h, g);
    let keep = |w: &[Event]| w.len() <= horizon || alphabet.all_uncontrollable(&w[horizon..]);
    let k = h.enumerate_restricted(horizon + extra, keep);
    let l = g.enumerate_restricted(horizon + extra, keep);
    let (sup, _) = supremal_auto(h, g).map_err(err)?;
    let by_auto = sup.enumerate_language(horizon);
    let by_lang = khat(&k, &l, horizon).map_err(err)?;
    same("supremal_auto vs khat", &by_auto, &by_lang)?;

    let (k, l) = (k.truncate(horizon), l.truncate(horizon));
    let inf = crate::infimal::infimal_auto(h, g).map_err(err)?.enumerate_language(horizon);
    let down = kdown(&k, &l, horizon).map_err(err)?;
    let formula = kdown_formula(&k, &l).map_err(err)?;
    same("infimal_auto vs kdown", &inf, &down)?;
    same("kdown_formula vs kdown", &formula, &down)
}

/// The engines against the brute-force oracles on one in-budget instance.
pub fn check_oracles(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Check {
    let horizon = l.max_len().unwrap_or(0);
    same("khat vs brute_supremal", &khat(k, l, horizon).map_err(err)?, &brute_supremal(k, l).map_err(err)?)?;
    if !k.is_empty() {
        same("kdown vs brute_infimal", &kdown(k, l, horizon).map_err(err)?, &brute_infimal(k, l).map_err(err)?)?;
    }
    expect_eq(
        "is_controllable vs brute_controllable",
        is_controllable(k, l).map_err(err)?.controllable,
        brute_controllable(k, l).map_err(err)?,
    )
}

/// On a {0,1}-graded instance, the fuzzy notions against the classical ones.
pub fn check_crisp(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Check {
    let horizon = l.max_len().unwrap_or(0);
    let (sk, sl) = (k.support(), l.support());
    expect_eq(
        "supp(khat) vs crisp supremal",
        khat(k, l, horizon).map_err(err)?.support(),
        crisp_rw_supremal(&sk, &sl, k.alphabet()),
    )?;
    expect_eq(
        "fuzzy vs crisp controllability",
        is_controllable(k, l).map_err(err)?.controllable,
        crisp_controllable(&sk, &sl, k.alphabet()),
    )
}

/// Solvability three ways, and the emitted supervisor when solvable.
pub fn check_scp(la: &FuzzyLanguage, ll: &FuzzyLanguage, l: &FuzzyLanguage) -> Check {
    let horizon = l.max_len().unwrap_or(0);
    let plant = from_language(l);
    let verdict = scp_solvable(la, ll, &plant, horizon).map_err(err)?;
    let brute = brute_scp_solvable(la, ll, l).map_err(err)?;
    expect_eq("scp solvable vs brute", verdict.solvable, brute)?;
    expect("scp criteria agree", verdict.via_supremal == verdict.solvable && verdict.via_infimal == verdict.solvable)?;
    if verdict.solvable {
        let (sup, _) = scp_supervisor(la, ll, &plant, horizon).map_err(err)?;
        let cl = closed_loop(&sup, &plant, horizon).map_err(err)?;
        subset("L_a within closed loop", la, &cl)?;
        subset("closed loop within L_l", &cl, ll)?;
    }
    Ok(())
}

/// Controllable languages are closed under union and intersection, agree
/// with the plant on uncontrollable strings, and `K↑`/`K↓` obey their laws.
pub fn check_laws(k1: &FuzzyLanguage, k2: &FuzzyLanguage, l: &FuzzyLanguage) -> Check {
    let n = l.max_len().unwrap_or(0);
    let up = |k: &FuzzyLanguage| khat(k, l, n).map_err(err);
    let down = |k: &FuzzyLanguage| kdown(k, l, n).map_err(err);
    let ctrl = |k: &FuzzyLanguage| is_controllable(k, l).map(|v| v.controllable).map_err(err);
    let (u1, u2) = (up(k1)?, up(k2)?);
    let (d1, d2) = (down(k1)?, down(k2)?);
    for c in [&u1, &u2, &d1, &d2] {
        expect("K↑ and K↓ are controllable", ctrl(c)?)?;
    }
    for (x, y) in [(&u1, &u2), (&d1, &d2)] {
        expect("union of controllable is controllable", ctrl(&x.union(y).map_err(err)?)?)?;
        expect("intersection of controllable is controllable", ctrl(&x.intersection(y).map_err(err)?)?)?;
    }
    // M(μ) = 𝓛(μ) on uncontrollable strings for controllable nonempty M
    for m in [&u1, &d1] {
        if m.is_empty() {
            continue;
        }
        for (w, lw) in l.entries() {
            if l.alphabet().all_uncontrollable(w.events()) {
                expect_eq("controllable M agrees with L on E*_uc", m.grade(w), lw)?;
            }
        }
    }
    // (K𝓔*_uc)(sa) = (K𝓔*_uc)(s) for uncontrollable a
    for (s, _) in l.entries() {
        for a in l.alphabet().uncontrollable() {
            expect_eq(
                "K·E*_uc constant along uncontrollable events",
                k1.euc_star_concat_at(&s.extend(a)),
                k1.euc_star_concat_at(s),
            )?;
        }
    }
    let meet = k1.intersection(k2).map_err(err)?;
    let join = k1.union(k2).map_err(err)?;
    same("(K1∩K2)↑ = K1↑∩K2↑", &up(&meet)?, &u1.intersection(&u2).map_err(err)?)?;
    subset("K1↑∪K2↑ ⊆ (K1∪K2)↑", &u1.union(&u2).map_err(err)?, &up(&join)?)?;
    subset("K1∩K2 ⊆ K1 ⇒ ↑ monotone", &up(&meet)?, &u1)?;
    subset("K1 ⊆ K1∪K2 ⇒ ↑ monotone", &u1, &up(&join)?)?;
    same("(K1∩K2)↓ = K1↓∩K2↓", &down(&meet)?, &d1.intersection(&d2).map_err(err)?)?;
    same("(K1∪K2)↓ = K1↓∪K2↓", &down(&join)?, &d1.union(&d2).map_err(err)?)?;
    subset("↓ monotone", &down(&meet)?, &d1)?;
    same("K↓ idempotent", &down(&d1)?, &d1)?;
    same("K↓ is a fixpoint of ↑", &up(&d1)?, &d1)?;
    same("controllable K is its own K↑", &up(&u1)?, &u1)?;
    expect_eq("supp(K↓) identity", supp_down(k1, l).map_err(err)?, d1.support())?;
    expect("supp(K↑) within the upper bound", u1.support().is_subset(&supp_upper_bound(k1, l).map_err(err)?))
}

/// Product and parallel composition against language intersection.
pub fn check_composition(g1: &FuzzyAutomaton, g2: &FuzzyAutomaton, horizon: usize) -> Check {
    let prod = product(g1, g2).enumerate_language(horizon);
    let meet = g1.enumerate_language(horizon).intersection(&g2.enumerate_language(horizon)).map_err(err)?;
    same("L(G1×G2) = L(G1)∩L(G2)", &prod, &meet)?;
    same("G1∥G2 = G1×G2 on a shared alphabet", &parallel(g1, g2).enumerate_language(horizon), &prod)
}

fn g(text: &str) -> Grade {
    text.parse().expect("literal grade")
}

/// Synthesis, closed loop and supervisor slack on `K1 ⊆ L1`.
pub fn worked_supervisor() -> Outcome {
    let mut out = Outcome::new("worked supervisor");
    let e = fixtures::alphabet();
    let a = e.lookup("a").expect("a");
    let plant = from_language(&fixtures::l1());
    let k1 = fixtures::k1();
    out.record((|| {
        let sup = synthesize(&k1, &plant, 6).map_err(err)?;
        let at = |w: &str| sup.control(&fixtures::word(&e, w)).map(|s| s.grade(&a));
        expect_eq("S(ε)(a)", at("ε"), Some(g("0.8")))?;
        expect_eq("S(a)(a)", at("a"), Some(g("0.7")))?;
        expect_eq("S(ab)(a)", at("ab"), Some(Grade::ZERO))?;
        expect_eq("S(aa)(a)", at("aa"), Some(Grade::ZERO))?;
        same("closed loop", &closed_loop(&sup, &plant, 6).map_err(err)?, &k1)
    })());
    out.record((|| {
        let s = fixtures::word(&e, "a");
        let (lo, hi) = supervisor_slack(&k1, &plant, &s, &a).map_err(err)?;
        expect_eq("slack at (a, a)", (lo, hi), (g("0.7"), Grade::ONE))?;
        for x in [lo, g("0.8"), g("0.9"), hi] {
            let mut sup = synthesize(&k1, &plant, 6).map_err(err)?;
            sup.set_control(&s, &a, x).map_err(err)?;
            same("closed loop with sampled slack", &closed_loop(&sup, &plant, 6).map_err(err)?, &k1)?;
        }
        Ok(())
    })());
    out
}

/// `KR1↑ = KR2↑ = 𝒪` while `(KR1 ∪ KR2)↑ = LR`.
pub fn strict_union() -> Outcome {
    let mut out = Outcome::new("strict union counterexample");
    let (lr, kr1, kr2) = fixtures::strict_union();
    out.record((|| {
        let empty = FuzzyLanguage::empty(lr.alphabet().clone());
        same("KR1↑", &khat(&kr1, &lr, 6).map_err(err)?, &empty)?;
        same("KR2↑", &khat(&kr2, &lr, 6).map_err(err)?, &empty)?;
        same("(KR1∪KR2)↑", &khat(&kr1.union(&kr2).map_err(err)?, &lr, 6).map_err(err)?, &lr)
    })());
    out
}

/// The truncated harmonic family: `K̂(a) = 1/(N+1)` and the support bound
/// stays at `supp(K)`.
pub fn harmonic() -> Outcome {
    let mut out = Outcome::new("harmonic truncation");
    for n in [5usize, 10, 20] {
        out.record((|| {
            let (l, k) = fixtures::harmonic(n);
            let e = l.alphabet().clone();
            let up = khat(&k, &l, n + 1).map_err(err)?;
            expect_eq("K̂(ε)", up.grade(&Word::epsilon()), Grade::ONE)?;
            expect_eq("K̂(a)", up.grade(&fixtures::word(&e, "a")), Grade::ratio(1, n as u64 + 1))?;
            expect_eq("K̂(c)", up.grade(&fixtures::word(&e, "c")), Grade::ZERO)?;
            let bound = supp_upper_bound(&k, &l).map_err(err)?;
            expect_eq("upper bound", bound.clone(), k.support())?;
            let limit = crate::language::CrispLanguage::from_iter([Word::epsilon()]);
            expect("bound strictly contains the limit support", limit.is_subset(&bound) && bound.len() > limit.len())
        })());
    }
    out
}

pub fn engine_agreement(rng: &mut InstanceRng, count: usize) -> Outcome {
    let mut out = Outcome::new("engine agreement at horizon 8");
    for _ in 0..count {
        let (h, g) = random::agreement_instance(rng);
        out.record(check_engine_agreement(&h, &g, 8));
    }
    out
}

pub fn oracle_equivalence(rng: &mut InstanceRng, count: usize) -> Outcome {
    let mut out = Outcome::new("oracle equivalence");
    for _ in 0..count {
        let (k, l) = random::language_pair(rng, 5, 4);
        out.record(check_oracles(&k, &l));
        let empty = FuzzyLanguage::empty(l.alphabet().clone());
        out.record(check_oracles(&empty, &l));
    }
    out
}

/// Closure, lemma and composition properties on random instances, plus the hand-built
/// unsolvable control problem.
pub fn properties(rng: &mut InstanceRng, count: usize, scp_count: usize) -> Outcome {
    let mut out = Outcome::new("controllability properties");
    for _ in 0..count {
        let e = random::alphabet(rng, 3);
        let size = rand::Rng::gen_range(rng, 1..=4);
        let pool = random::grade_pool(rng, size);
        let l = random::language(rng, &e, 10, &pool);
        let k1 = random::sublanguage(rng, &l, &pool, 0.3);
        let k2 = random::sublanguage(rng, &l, &pool, 0.3);
        out.record(check_laws(&k1, &k2, &l));
        let g1 = random::automaton(rng, &e, 4, &pool, 0.6, false, false);
        let g2 = random::automaton(rng, &e, 4, &pool, 0.6, false, false);
        out.record(check_composition(&g1, &g2, 6));
    }
    let e = fixtures::alphabet();
    let la = fixtures::lang(&e, &[("ε", "1"), ("a", "0.7")]);
    out.record((|| {
        let v = scp_solvable(&la, &fixtures::k2(), &from_language(&fixtures::l1()), 6).map_err(err)?;
        expect("hand-built instance is unsolvable", !v.solvable)?;
        check_scp(&la, &fixtures::k2(), &fixtures::l1())
    })());
    for _ in 0..scp_count {
        let (la, ll, l) = random::scp_instance(rng, 6, 4);
        out.record(check_scp(&la, &ll, &l));
    }
    out
}

pub fn crisp(rng: &mut InstanceRng, count: usize) -> Outcome {
    let mut out = Outcome::new("crisp degeneration");
    for _ in 0..count {
        let e = random::alphabet(rng, 3);
        let l = random::language(rng, &e, 8, &[Grade::ONE]);
        let k = random::sublanguage(rng, &l, &[Grade::ONE], 0.3);
        out.record(check_crisp(&k, &l));
    }
    out
}

/// Every suite, with random instances drawn from `seed`.
/// Seed used by the acceptance tests and by `fdes verify` by default.
pub const DEFAULT_SEED: u64 = 20_241_015;

/// Every suite, with the random ones seeded from `seed`, `seed + 1`, ...
pub fn run_all(seed: u64) -> Vec<Outcome> {
    vec![
        worked_supervisor(),
        strict_union(),
        harmonic(),
        engine_agreement(&mut random::rng(seed), 200),
        oracle_equivalence(&mut random::rng(seed.wrapping_add(1)), 300),
        properties(&mut random::rng(seed.wrapping_add(2)), 200, 100),
        crisp(&mut random::rng(seed.wrapping_add(3)), 100),
    ]
}
