//! Brute-force reference implementations, kept on separate code paths from
//! the engines they check, plus random instance generators and the checks
//! shared by the acceptance tests and `fdes verify`.
//!
//! Grades are only ever combined with min and max, so every optimum is
//! attained on the grades that already occur in the inputs (plus 0). The
//! enumerations below are therefore exact, within their budgets.

pub mod random;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::foundation::{Alphabet, Grade, Word};
use crate::language::{euc_language, CrispLanguage, FuzzyLanguage};

/// Largest support an enumeration oracle accepts.
pub const MAX_SUPPORT: usize = 6;
/// Largest number of distinct positive grades an enumeration oracle accepts.
pub const MAX_GRADES: usize = 6;

/// Controllability as `K𝓔_uc ∩ 𝓛 ⊆ K`, evaluated with the generic
/// fuzzy-subset concatenation and intersection.
pub fn brute_controllable(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<bool, Error> {
    let lhs = k.as_subset().concatenate(&euc_language(k.alphabet()))?.intersection(&l.as_subset())?;
    lhs.is_subset_of(&k.as_subset())
}

fn grade_set(languages: &[&FuzzyLanguage]) -> Result<Vec<Grade>, Error> {
    let positive: BTreeSet<Grade> = languages.iter().flat_map(|l| l.entries().map(|(_, g)| g)).collect();
    if positive.len() > MAX_GRADES {
        return Err(Error::BudgetExceeded(format!("{} distinct grades (limit {MAX_GRADES})", positive.len())));
    }
    Ok(std::iter::once(Grade::ZERO).chain(positive).collect())
}

fn check_support(l: &FuzzyLanguage) -> Result<(), Error> {
    if l.len() > MAX_SUPPORT {
        return Err(Error::BudgetExceeded(format!("support of {} words (limit {MAX_SUPPORT})", l.len())));
    }
    Ok(())
}

/// Every fuzzy language `M` on `words` (given in shortlex order, prefix
/// closed) with `lo(w) ≤ M(w) ≤ hi(w)` and grades from `grades`. Words set
/// to 0 stay out of the map.
fn candidates<Lo, Hi>(words: &[Word], grades: &[Grade], lo: Lo, hi: Hi) -> Vec<BTreeMap<Word, Grade>>
where
    Lo: Fn(&Word) -> Grade,
    Hi: Fn(&Word) -> Grade,
{
    fn go<Lo: Fn(&Word) -> Grade, Hi: Fn(&Word) -> Grade>(
        i: usize,
        words: &[Word],
        grades: &[Grade],
        lo: &Lo,
        hi: &Hi,
        current: &mut BTreeMap<Word, Grade>,
        out: &mut Vec<BTreeMap<Word, Grade>>,
    ) {
        let Some(w) = words.get(i) else {
            out.push(current.clone());
            return;
        };
        let cap =
            if w.is_empty() { Grade::ONE } else { current.get(&w.prefix(w.len() - 1)).copied().unwrap_or(Grade::ZERO) };
        for g in grades {
            let ok = *g <= cap && lo(w) <= *g && *g <= hi(w) && (!w.is_empty() || g.is_zero() || g.is_one());
            if !ok {
                continue;
            }
            if g.is_positive() {
                current.insert(w.clone(), *g);
            }
            go(i + 1, words, grades, lo, hi, current, out);
            current.remove(w);
        }
    }
    let mut out = Vec::new();
    go(0, words, grades, &lo, &hi, &mut BTreeMap::new(), &mut out);
    out
}

fn language(alphabet: &Alphabet, entries: BTreeMap<Word, Grade>) -> FuzzyLanguage {
    FuzzyLanguage::validate(alphabet.clone(), entries).expect("candidates satisfy P1 and P2")
}

/// `K↑` as the pointwise join of every controllable `M ⊆ K`.
pub fn brute_supremal(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    check_support(k)?;
    let grades = grade_set(&[k, l])?;
    let words: Vec<Word> = k.entries().map(|(w, _)| w.clone()).collect();
    let mut best: BTreeMap<Word, Grade> = BTreeMap::new();
    for m in candidates(&words, &grades, |_| Grade::ZERO, |w| k.grade(w)) {
        let m = language(k.alphabet(), m);
        if brute_controllable(&m, l)? {
            for (w, g) in m.entries() {
                let slot = best.entry(w.clone()).or_insert(Grade::ZERO);
                *slot = slot.join(g);
            }
        }
    }
    Ok(language(k.alphabet(), best))
}

/// `K↓` as the pointwise meet of every controllable `M` with `K ⊆ M ⊆ 𝓛`.
pub fn brute_infimal(k: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<FuzzyLanguage, Error> {
    k.alphabet().ensure_same(l.alphabet())?;
    if k.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    check_support(l)?;
    let grades = grade_set(&[k, l])?;
    let words: Vec<Word> = l.entries().map(|(w, _)| w.clone()).collect();
    let mut best: BTreeMap<Word, Grade> = l.entries().map(|(w, g)| (w.clone(), g)).collect();
    for m in candidates(&words, &grades, |w| k.grade(w), |w| l.grade(w)) {
        let m = language(k.alphabet(), m);
        if brute_controllable(&m, l)? {
            for (w, slot) in best.iter_mut() {
                *slot = slot.meet(m.grade(w));
            }
        }
    }
    best.retain(|_, g| g.is_positive());
    Ok(language(k.alphabet(), best))
}

/// Whether some controllable `M` satisfies `𝓛_a ⊆ M ⊆ 𝓛_l`, which is
/// exactly when a supervisor with that closed loop exists.
pub fn brute_scp_solvable(la: &FuzzyLanguage, ll: &FuzzyLanguage, l: &FuzzyLanguage) -> Result<bool, Error> {
    la.alphabet().ensure_same(ll.alphabet())?;
    check_support(ll)?;
    let grades = grade_set(&[la, ll, l])?;
    let words: Vec<Word> = ll.entries().map(|(w, _)| w.clone()).collect();
    for m in candidates(&words, &grades, |w| la.grade(w), |w| ll.grade(w)) {
        let m = language(la.alphabet(), m);
        if !m.is_empty() && brute_controllable(&m, l)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Classical controllability: `K̄E_uc ∩ L ⊆ K̄`.
pub fn crisp_controllable(k: &CrispLanguage, l: &CrispLanguage, alphabet: &Alphabet) -> bool {
    let closure = k.prefix_closure();
    let singles: CrispLanguage = alphabet.uncontrollable().map(|a| Word::from(vec![a.clone()])).collect();
    closure.concat(&singles).intersection(l).is_subset(&closure)
}

/// The classical supremal controllable sublanguage of a prefix-closed
/// `k ⊆ l`: repeatedly drop words with an uncontrollable continuation in
/// `l` that leaves the current set, together with their extensions.
pub fn crisp_rw_supremal(k: &CrispLanguage, l: &CrispLanguage, alphabet: &Alphabet) -> CrispLanguage {
    let mut current = k.clone();
    loop {
        let bad: CrispLanguage = current
            .iter()
            .filter(|s| {
                alphabet.uncontrollable().any(|a| {
                    let sa = s.extend(a);
                    l.contains(&sa) && !current.contains(&sa)
                })
            })
            .cloned()
            .collect();
        if bad.is_empty() {
            return current;
        }
        current = current.without_extensions_of(&bad);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, lang};

    #[test]
    fn brute_controllable_examples() {
        let l1 = fixtures::l1();
        assert!(brute_controllable(&fixtures::k1(), &l1).unwrap());
        assert!(!brute_controllable(&fixtures::k2(), &l1).unwrap());
        assert!(brute_controllable(&FuzzyLanguage::empty(l1.alphabet().clone()), &l1).unwrap());
    }

    #[test]
    fn brute_supremal_examples() {
        let e = fixtures::alphabet();
        let expected = lang(&e, &[("ε", "1"), ("a", "0.6"), ("aa", "0.6"), ("ab", "0.6")]);
        assert_eq!(brute_supremal(&fixtures::k2(), &fixtures::l1()).unwrap(), expected);
        assert_eq!(brute_supremal(&fixtures::k1(), &fixtures::l1()).unwrap(), fixtures::k1());
        let (lr, kr1, _) = fixtures::strict_union();
        assert!(brute_supremal(&kr1, &lr).unwrap().is_empty());
    }

    #[test]
    fn brute_infimal_examples() {
        let e = fixtures::alphabet();
        let expected = lang(&e, &[("ε", "1"), ("a", "0.8"), ("ab", "0.7")]);
        assert_eq!(brute_infimal(&fixtures::k3(), &fixtures::l1()).unwrap(), expected);
        assert_eq!(brute_infimal(&fixtures::k1(), &fixtures::l1()).unwrap(), fixtures::k1());
        let (lr, _, _) = fixtures::strict_union();
        assert_eq!(brute_infimal(&FuzzyLanguage::epsilon(lr.alphabet().clone()), &lr).unwrap(), lr);
    }

    #[test]
    fn budget_is_enforced() {
        let e = fixtures::alphabet();
        let l = lang(
            &e,
            &[
                ("ε", "1"),
                ("a", "0.9"),
                ("aa", "0.8"),
                ("aaa", "0.7"),
                ("aaaa", "0.6"),
                ("aaaaa", "0.5"),
                ("aaaaaa", "0.4"),
            ],
        );
        assert!(matches!(brute_supremal(&l, &l), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn crisp_examples() {
        let e = fixtures::alphabet();
        let l = fixtures::l1().support();
        assert_eq!(crisp_rw_supremal(&l, &l, &e), l);
        let k: CrispLanguage = fixtures::k3().support().iter().filter(|w| w.len() < 2).cloned().collect();
        // a has the uncontrollable continuation ab outside k
        assert_eq!(crisp_rw_supremal(&k, &l, &e), CrispLanguage::from_iter([Word::epsilon()]));
        assert!(!crisp_controllable(&k, &l, &e));
        let all_c = Alphabet::from_names(&["a", "b"], &[]).unwrap();
        assert_eq!(crisp_rw_supremal(&k, &l, &all_c), k);
    }
}
