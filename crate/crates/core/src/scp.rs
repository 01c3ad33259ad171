//! The supervisory control problem: given a minimal acceptable language
//! `𝓛_a` and a maximal legal language `𝓛_l`, find a supervisor with
//! `𝓛_a ⊆ 𝓛^S ⊆ 𝓛_l`.
//!
//! The plant behaviour is materialized up to the horizon, and both
//! solvability criteria (`𝓛_a ⊆ 𝓛_l↑` and `𝓛_a↓ ⊆ 𝓛_l`) are evaluated
//! against that truncated language.

use serde::Serialize;

use crate::automaton::{from_language, FuzzyAutomaton};
use crate::control::{synthesize, FuzzySupervisor};
use crate::error::Error;
use crate::foundation::Word;
use crate::infimal::kdown;
use crate::language::FuzzyLanguage;
use crate::supremal::khat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScpVerdict {
    pub solvable: bool,
    /// `𝓛_a ⊆ 𝓛_l↑`.
    pub via_supremal: bool,
    /// `𝓛_a↓ ⊆ 𝓛_l`.
    pub via_infimal: bool,
    /// First word with `𝓛_a(w) > 𝓛_l↑(w)`.
    pub witness_word: Option<Word>,
    /// First word with `𝓛_a↓(w) > 𝓛_l(w)`.
    pub infimal_witness: Option<Word>,
}

struct Evaluated {
    verdict: ScpVerdict,
    plant: FuzzyLanguage,
    legal_up: FuzzyLanguage,
}

fn evaluate(la: &FuzzyLanguage, ll: &FuzzyLanguage, g: &FuzzyAutomaton, horizon: usize) -> Result<Evaluated, Error> {
    la.alphabet().ensure_same(ll.alphabet())?;
    la.alphabet().ensure_same(g.alphabet())?;
    if la.is_empty() {
        return Err(Error::ScpPrecondition("the minimal acceptable language is empty".into()));
    }
    if let Some(w) = la.first_excess_over(ll)? {
        return Err(Error::ScpPrecondition(format!("L_a is not contained in L_l at {w}")));
    }
    let plant = g.enumerate_language(horizon);
    if let Some(w) = ll.first_excess_over(&plant)? {
        return Err(Error::ScpPrecondition(format!("L_l is not contained in the plant language at {w}")));
    }
    let legal_up = khat(ll, &plant, horizon)?;
    let witness_word = la.first_excess_over(&legal_up)?;
    let acceptable_down = kdown(la, &plant, horizon)?;
    let infimal_witness = acceptable_down.first_excess_over(ll)?;
    let via_supremal = witness_word.is_none();
    let via_infimal = infimal_witness.is_none();
    if via_supremal != via_infimal {
        return Err(Error::EngineDisagreement);
    }
    let verdict = ScpVerdict { solvable: via_supremal, via_supremal, via_infimal, witness_word, infimal_witness };
    Ok(Evaluated { verdict, plant, legal_up })
}

/// Decides solvability with both criteria; their disagreement is reported
/// as [`Error::EngineDisagreement`].
pub fn scp_solvable(
    la: &FuzzyLanguage,
    ll: &FuzzyLanguage,
    g: &FuzzyAutomaton,
    horizon: usize,
) -> Result<ScpVerdict, Error> {
    evaluate(la, ll, g, horizon).map(|e| e.verdict)
}

/// A supervisor whose closed loop is `𝓛_l↑` up to `horizon`.
pub fn scp_supervisor(
    la: &FuzzyLanguage,
    ll: &FuzzyLanguage,
    g: &FuzzyAutomaton,
    horizon: usize,
) -> Result<(FuzzySupervisor, ScpVerdict), Error> {
    let e = evaluate(la, ll, g, horizon)?;
    if !e.verdict.solvable {
        return Err(Error::ScpUnsolvable(e.verdict.witness_word));
    }
    // synthesize against the truncated plant, on which 𝓛_l↑ is controllable
    let supervisor = synthesize(&e.legal_up, &from_language(&e.plant), horizon)?;
    Ok((supervisor, e.verdict))
}
