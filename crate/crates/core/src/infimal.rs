//! The infimal controllable fuzzy superlanguage `K↓ = K𝓔*_uc ∩ 𝓛`.

use std::collections::BTreeMap;

use crate::automaton::{product, FuzzyAutomaton, StateId, Transition};
use crate::error::Error;
use crate::foundation::{Grade, Word};
use crate::language::{concat_membership, euc_star_membership, CrispLanguage, FuzzyLanguage};

fn check_inputs(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<(), Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    k.ensure_contained_in(l)?;
    if k.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    Ok(())
}

/// `K↓` by recursion over `supp(𝓛)` up to `horizon`: `K↓(ε) = 1`,
/// `K↓(sa) = K(sa)` for controllable `a` and `K↓(s) ∧ 𝓛(sa)` otherwise.
pub fn kdown(k: &FuzzyLanguage, l: &FuzzyLanguage, horizon: usize) -> Result<FuzzyLanguage, Error> {
    check_inputs(k, l)?;
    let alphabet = k.alphabet();
    let mut entries = BTreeMap::from([(Word::epsilon(), Grade::ONE)]);
    for (w, lw) in l.entries().skip(1) {
        if w.len() > horizon {
            break;
        }
        let last = w.last().expect("non-empty word");
        let g = if alphabet.is_uncontrollable(last) {
            entries.get(&w.prefix(w.len() - 1)).copied().unwrap_or(Grade::ZERO).meet(lw)
        } else {
            k.grade(w)
        };
        if g.is_positive() {
            entries.insert(w.clone(), g);
        }
    }
    Ok(FuzzyLanguage::from_trusted(alphabet.clone(), entries))
}

/// `(K𝓔*_uc ∩ 𝓛)(w)` for every `w ∈ supp(𝓛)`, by enumerating the splits
/// `w = w1·w2` with `w2` uncontrollable.
pub fn kdown_formula(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
    check_inputs(k, l)?;
    let alphabet = k.alphabet();
    let entries = l
        .entries()
        .map(|(w, lw)| {
            let kc = concat_membership(|u| k.grade_of(u), |v| euc_star_membership(alphabet, v), w.events());
            (w.clone(), kc.meet(lw))
        })
        .filter(|(_, g)| g.is_positive())
        .collect();
    Ok(FuzzyLanguage::from_trusted(alphabet.clone(), entries))
}

/// An automaton for `K↓`: `h` gains a fresh state reached with grade 1 on
/// every uncontrollable event from every state (itself included), and the
/// result is the product of that automaton with `g`.
pub fn infimal_auto(h: &FuzzyAutomaton, g: &FuzzyAutomaton) -> Result<FuzzyAutomaton, Error> {
    h.alphabet().ensure_same(g.alphabet())?;
    if h.is_empty() {
        return Err(Error::EmptyAutomaton);
    }
    h.ensure_contained_in(g)?;
    let mut sink = String::from("q_a");
    while h.state_index(&StateId::new(sink.as_str())).is_ok() {
        sink.push('\'');
    }
    let mut states = h.states().to_vec();
    states.push(StateId::new(sink.as_str()));
    let mut transitions = h.transitions();
    for q in &states {
        for a in h.alphabet().uncontrollable() {
            transitions.push(Transition::new(q.as_str(), a, sink.as_str(), Grade::ONE));
        }
    }
    let initial = h.initial().expect("nonempty").clone();
    let h1 = FuzzyAutomaton::new(h.alphabet().clone(), states, initial, transitions)?;
    Ok(product(&h1, g))
}

/// `supp(K)·E*_uc ∩ supp(𝓛)`, which equals `supp(K↓)`.
pub fn supp_down(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<CrispLanguage, Error> {
    check_inputs(k, l)?;
    Ok(l.support().within_uncontrollable_extensions_of(&k.support(), k.alphabet()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::from_language;
    use crate::control::is_controllable;
    use crate::fixtures::{self, lang, word};

    #[test]
    fn kdown_examples() {
        let e = fixtures::alphabet();
        let l1 = fixtures::l1();
        let expected = lang(&e, &[("ε", "1"), ("a", "0.8"), ("ab", "0.7")]);
        assert_eq!(kdown(&fixtures::k3(), &l1, 6).unwrap(), expected);
        assert_eq!(kdown(&fixtures::k1(), &l1, 6).unwrap(), fixtures::k1());
        let (lr, _, _) = fixtures::strict_union();
        let eps = FuzzyLanguage::epsilon(lr.alphabet().clone());
        assert_eq!(kdown(&eps, &lr, 6).unwrap(), lr);
        assert_eq!(kdown(&FuzzyLanguage::empty(e), &l1, 6), Err(Error::EmptyLanguage));
        assert!(is_controllable(&expected, &l1).unwrap().controllable);
    }

    #[test]
    fn formula_examples() {
        let e = fixtures::alphabet();
        let (k3, l1) = (fixtures::k3(), fixtures::l1());
        let f = kdown_formula(&k3, &l1).unwrap();
        assert_eq!(f.grade(&word(&e, "ab")), "0.7".parse().unwrap());
        assert_eq!(f.grade(&word(&e, "aba")), Grade::ZERO);
        assert_eq!(f, kdown(&k3, &l1, 6).unwrap());
        assert_eq!(kdown_formula(&fixtures::k1(), &l1).unwrap(), fixtures::k1());
    }

    #[test]
    fn concatenation_is_constant_along_uncontrollable_events() {
        let e = fixtures::alphabet();
        let k3 = fixtures::k3();
        let b = e.lookup("b").unwrap();
        for s in ["ε", "a", "aa", "ab", "abb", "aab"] {
            let s = word(&e, s);
            assert_eq!(k3.euc_star_concat_at(&s.extend(&b)), k3.euc_star_concat_at(&s));
        }
    }

    #[test]
    fn automaton_examples() {
        let gl = from_language(&fixtures::l1());
        let out = infimal_auto(&from_language(&fixtures::k3()), &gl).unwrap();
        assert_eq!(out.enumerate_language(6), kdown(&fixtures::k3(), &fixtures::l1(), 6).unwrap());
        let out = infimal_auto(&from_language(&fixtures::k1()), &gl).unwrap();
        assert_eq!(out.enumerate_language(6), fixtures::k1());
        let (lr, _, _) = fixtures::strict_union();
        let eps = from_language(&FuzzyLanguage::epsilon(lr.alphabet().clone()));
        assert_eq!(infimal_auto(&eps, &from_language(&lr)).unwrap().enumerate_language(6), lr);
        let empty = FuzzyAutomaton::empty(gl.alphabet().clone());
        assert_eq!(infimal_auto(&empty, &gl).unwrap_err(), Error::EmptyAutomaton);
    }

    #[test]
    fn sink_label_is_fresh() {
        let e = fixtures::alphabet();
        let a = e.lookup("a").unwrap();
        let h = FuzzyAutomaton::new(
            e.clone(),
            vec!["q_a".into()],
            "q_a".into(),
            vec![Transition::new("q_a", &a, "q_a", "0.5".parse().unwrap())],
        )
        .unwrap();
        let g = FuzzyAutomaton::new(
            e.clone(),
            vec!["p".into()],
            "p".into(),
            vec![
                Transition::new("p", &a, "p", Grade::ONE),
                Transition::new("p", &e.lookup("b").unwrap(), "p", "0.7".parse().unwrap()),
            ],
        )
        .unwrap();
        let out = infimal_auto(&h, &g).unwrap();
        assert!(out.states().iter().any(|s| s.as_str() == "q_a'|p"));
        let k = h.enumerate_language(5);
        let l = g.enumerate_language(5);
        assert_eq!(out.enumerate_language(5), kdown(&k, &l, 5).unwrap());
    }

    #[test]
    fn support_identity() {
        let e = fixtures::alphabet();
        let (k3, l1) = (fixtures::k3(), fixtures::l1());
        let expected: CrispLanguage = ["ε", "a", "ab"].iter().map(|w| word(&e, w)).collect();
        assert_eq!(supp_down(&k3, &l1).unwrap(), expected);
        assert_eq!(supp_down(&fixtures::k1(), &l1).unwrap(), fixtures::k1().support());
        let (lr, _, _) = fixtures::strict_union();
        let eps = FuzzyLanguage::epsilon(lr.alphabet().clone());
        assert_eq!(supp_down(&eps, &lr).unwrap(), lr.support());
    }
}
