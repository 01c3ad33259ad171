//! JSON interchange formats.
//!
//! Grades are strings in their canonical text form and words are arrays of
//! event names, ε being `[]`. Readers reject unknown fields. Writers emit
//! sorted keys, two-space indentation and a trailing newline, so equal
//! values always serialize to equal bytes.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automaton::{FuzzyAutomaton, StateId, Transition};
use crate::control::{FuzzySupervisor, StateFeedbackSupervisor};
use crate::error::Error;
use crate::foundation::{Alphabet, Event, FuzzyEventSet, Grade, Word};
use crate::language::{CrispLanguage, FuzzyLanguage};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventDoc {
    name: Event,
    controllable: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    word: Word,
    grade: Grade,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LanguageDoc {
    events: Vec<EventDoc>,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    event: Event,
    to: String,
    grade: Grade,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    events: Vec<EventDoc>,
    states: Vec<String>,
    // absent only for the automaton without states
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<String>,
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlDoc {
    word: Word,
    controls: BTreeMap<Event, Grade>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SupervisorDoc {
    horizon: usize,
    entries: Vec<ControlDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    state: String,
    controls: BTreeMap<Event, Grade>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternsDoc {
    patterns: Vec<PatternDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct ThetaDoc {
    state: String,
    event: Event,
    theta: Grade,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct TraceDoc {
    iterations: Vec<Value>,
    theta_values: Vec<ThetaDoc>,
    emptied: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct ReportDoc {
    command: Vec<String>,
    exit_code: u8,
    inputs: Vec<Value>,
    outputs: Vec<String>,
    verdict: Value,
    #[serde(default)]
    elapsed_ms: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrispDoc {
    words: Vec<Word>,
}

/// Canonical JSON text of any serializable value.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    let value = serde_json::to_value(value).expect("serializable");
    let mut out = serde_json::to_string_pretty(&value).expect("valid JSON value");
    out.push('\n');
    out
}

fn read<T: DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn alphabet_of(events: Vec<EventDoc>) -> Result<Alphabet, Error> {
    Alphabet::new(events.into_iter().map(|e| (e.name, e.controllable)))
}

fn events_of(alphabet: &Alphabet) -> Vec<EventDoc> {
    alphabet.events().map(|e| EventDoc { name: e.clone(), controllable: !alphabet.is_uncontrollable(e) }).collect()
}

fn event_set(alphabet: &Alphabet, controls: BTreeMap<Event, Grade>) -> Result<FuzzyEventSet, Error> {
    FuzzyEventSet::new(alphabet, controls)
}

fn controls_of(set: &FuzzyEventSet) -> BTreeMap<Event, Grade> {
    set.iter().map(|(e, g)| (e.clone(), g)).collect()
}

pub fn parse_language(text: &str) -> Result<FuzzyLanguage, Error> {
    let doc: LanguageDoc = read(text)?;
    let alphabet = alphabet_of(doc.events)?;
    for e in &doc.entries {
        if e.grade.is_zero() {
            return Err(Error::ZeroGradeEntry(e.word.clone()));
        }
    }
    FuzzyLanguage::validate(alphabet, doc.entries.into_iter().map(|e| (e.word, e.grade)))
}

pub fn language_to_json(language: &FuzzyLanguage) -> String {
    to_canonical(&LanguageDoc {
        events: events_of(language.alphabet()),
        entries: language.entries().map(|(w, g)| EntryDoc { word: w.clone(), grade: g }).collect(),
    })
}

pub fn parse_automaton(text: &str) -> Result<FuzzyAutomaton, Error> {
    let doc: AutomatonDoc = read(text)?;
    let alphabet = alphabet_of(doc.events)?;
    let initial = match (doc.initial, doc.states.is_empty()) {
        (None, true) if doc.transitions.is_empty() => return Ok(FuzzyAutomaton::empty(alphabet)),
        (None, _) => return Err(Error::Format("missing field `initial`".into())),
        (Some(s), _) => StateId::new(s),
    };
    let states = doc.states.into_iter().map(StateId::new).collect();
    let transitions = doc.transitions.into_iter().map(|t| Transition::new(t.from, &t.event, t.to, t.grade)).collect();
    FuzzyAutomaton::new(alphabet, states, initial, transitions)
}

pub fn automaton_to_json(automaton: &FuzzyAutomaton) -> String {
    to_canonical(&AutomatonDoc {
        events: events_of(automaton.alphabet()),
        states: automaton.states().iter().map(|s| s.as_str().to_string()).collect(),
        initial: automaton.initial().map(|s| s.as_str().to_string()),
        transitions: automaton
            .transitions()
            .into_iter()
            .map(|t| TransitionDoc {
                from: t.from.as_str().to_string(),
                event: t.event,
                to: t.to.as_str().to_string(),
                grade: t.grade,
            })
            .collect(),
    })
}

/// Reads a tabled supervisor. The format does not carry the event
/// partition, so it is taken from `alphabet` (normally the plant's).
/// Events missing from an entry's controls get grade 0.
pub fn parse_supervisor(text: &str, alphabet: &Alphabet) -> Result<FuzzySupervisor, Error> {
    let doc: SupervisorDoc = read(text)?;
    let mut table = BTreeMap::new();
    for entry in doc.entries {
        let set = event_set(alphabet, entry.controls)?;
        if table.insert(entry.word.clone(), set).is_some() {
            return Err(Error::DuplicateWord(entry.word));
        }
    }
    FuzzySupervisor::new(alphabet.clone(), doc.horizon, table)
}

pub fn supervisor_to_json(supervisor: &FuzzySupervisor) -> String {
    to_canonical(&SupervisorDoc {
        horizon: supervisor.horizon(),
        entries: supervisor
            .entries()
            .map(|(w, set)| ControlDoc { word: w.clone(), controls: controls_of(set) })
            .collect(),
    })
}

pub fn state_feedback_to_json(supervisor: &StateFeedbackSupervisor) -> String {
    to_canonical(&PatternsDoc {
        patterns: supervisor
            .patterns()
            .map(|(s, set)| PatternDoc { state: s.as_str().to_string(), controls: controls_of(set) })
            .collect(),
    })
}

pub fn parse_crisp(text: &str) -> Result<CrispLanguage, Error> {
    let doc: CrispDoc = read(text)?;
    let mut out = CrispLanguage::new();
    for w in doc.words {
        if !out.insert(w.clone()) {
            return Err(Error::DuplicateWord(w));
        }
    }
    Ok(out)
}

pub fn crisp_to_json(words: &CrispLanguage) -> String {
    to_canonical(&CrispDoc { words: words.iter().cloned().collect() })
}

/// A parsed file of any of the formats above.
#[derive(Clone, Debug)]
pub enum Document {
    Language(FuzzyLanguage),
    Automaton(FuzzyAutomaton),
    /// Horizon and entry count; the event partition is not known here.
    Supervisor {
        horizon: usize,
        entries: usize,
    },
    /// Number of state patterns.
    StateFeedback(usize),
    Crisp(CrispLanguage),
    /// Automaton-mode supremal trace.
    Trace,
    /// CLI run report.
    Report,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Language(_) => "language",
            Document::Automaton(_) => "automaton",
            Document::Supervisor { .. } => "supervisor",
            Document::StateFeedback(_) => "state-feedback supervisor",
            Document::Crisp(_) => "crisp language",
            Document::Trace => "supremal trace",
            Document::Report => "run report",
        }
    }
}

fn check_controls(controls: &BTreeMap<Event, Grade>, first: &mut Option<Vec<Event>>) -> Result<(), Error> {
    let events: Vec<Event> = controls.keys().cloned().collect();
    match first {
        None => *first = Some(events),
        Some(expected) if *expected != events => {
            return Err(Error::Format("control patterns list different events".into()));
        }
        Some(_) => {}
    }
    Ok(())
}

/// Parses `text`, telling the format apart by its top-level keys.
pub fn parse_document(text: &str) -> Result<Document, Error> {
    let value: Value = read(text)?;
    let Some(object) = value.as_object() else {
        return Err(Error::Format("expected a JSON object".into()));
    };
    let has = |k: &str| object.contains_key(k);
    if has("states") {
        parse_automaton(text).map(Document::Automaton)
    } else if has("horizon") {
        let doc: SupervisorDoc = read(text)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut events = None;
        for e in &doc.entries {
            if !seen.insert(&e.word) {
                return Err(Error::DuplicateWord(e.word.clone()));
            }
            check_controls(&e.controls, &mut events)?;
        }
        Ok(Document::Supervisor { horizon: doc.horizon, entries: doc.entries.len() })
    } else if has("patterns") {
        let doc: PatternsDoc = read(text)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut events = None;
        for p in &doc.patterns {
            if !seen.insert(&p.state) {
                return Err(Error::DuplicateState(p.state.clone()));
            }
            check_controls(&p.controls, &mut events)?;
        }
        Ok(Document::StateFeedback(doc.patterns.len()))
    } else if has("theta_values") {
        read::<TraceDoc>(text).map(|_| Document::Trace)
    } else if has("command") {
        read::<ReportDoc>(text).map(|_| Document::Report)
    } else if has("words") {
        parse_crisp(text).map(Document::Crisp)
    } else if has("entries") || has("events") {
        parse_language(text).map(Document::Language)
    } else {
        Err(Error::Format("unrecognized document".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{realize_state_feedback, synthesize};
    use crate::fixtures;
    use crate::supremal::supremal_auto;

    #[test]
    fn language_round_trip() {
        let l1 = fixtures::l1();
        let text = language_to_json(&l1);
        assert!(text.ends_with("}\n"));
        assert_eq!(parse_language(&text).unwrap(), l1);
        assert_eq!(language_to_json(&parse_language(&text).unwrap()), text);
        let empty = FuzzyLanguage::empty(l1.alphabet().clone());
        assert_eq!(parse_language(&language_to_json(&empty)).unwrap(), empty);
    }

    #[test]
    fn language_format() {
        let text = r#"{"events":[{"name":"a","controllable":true},{"name":"b","controllable":false}],
            "entries":[{"word":[],"grade":"1"},{"word":["a"],"grade":"0.8"},{"word":["a","b"],"grade":"2/3"}]}"#;
        let l = parse_language(text).unwrap();
        assert_eq!(l.grade(&l.alphabet().word(&["a", "b"]).unwrap()), Grade::ratio(2, 3));
        let out = language_to_json(&l);
        assert!(out.contains(r#""grade": "2/3""#));
        let keys = ["\"entries\"", "\"events\""];
        assert!(out.find(keys[0]).unwrap() < out.find(keys[1]).unwrap());
    }

    #[test]
    fn language_rejections() {
        let events = r#""events":[{"name":"a","controllable":true}]"#;
        let cases = [
            (format!(r#"{{{events},"entries":[{{"word":[],"grade":"1"}},{{"word":["a"],"grade":"1.2"}}]}}"#), "1.2"),
            (format!(r#"{{{events},"entries":[{{"word":[],"grade":"1"}}],"extra":0}}"#), "extra"),
            (format!(r#"{{{events},"entries":[{{"word":[],"grade":"1"}},{{"word":["z"],"grade":"0.5"}}]}}"#), "z"),
            (format!(r#"{{{events},"entries":[{{"word":[],"grade":"1"}},{{"word":["a"],"grade":"0"}}]}}"#), "grade 0"),
            (
                format!(
                    r#"{{{events},"entries":[{{"word":[],"grade":"1"}},{{"word":["a"],"grade":"0.2"}},{{"word":["a","a"],"grade":"0.3"}}]}}"#
                ),
                "(a,aa)",
            ),
        ];
        for (text, needle) in cases {
            let e = parse_language(&text).unwrap_err().to_string();
            assert!(e.contains(needle), "{e}");
        }
    }

    #[test]
    fn automaton_round_trip() {
        let g = crate::automaton::from_language(&fixtures::l1());
        let text = automaton_to_json(&g);
        let back = parse_automaton(&text).unwrap();
        assert_eq!(back.enumerate_language(5), g.enumerate_language(5));
        assert_eq!(automaton_to_json(&back), text);
        let empty = FuzzyAutomaton::empty(g.alphabet().clone());
        assert!(parse_automaton(&automaton_to_json(&empty)).unwrap().is_empty());
    }

    #[test]
    fn automaton_rejections() {
        let head = r#""events":[{"name":"a","controllable":true}],"states":["q0","q1"],"initial":"q0""#;
        let zero = format!(r#"{{{head},"transitions":[{{"from":"q0","event":"a","to":"q1","grade":"0"}}]}}"#);
        assert!(matches!(parse_automaton(&zero), Err(Error::ZeroGradeArc { .. })));
        let unknown = format!(r#"{{{head},"transitions":[{{"from":"q0","event":"a","to":"q9","grade":"1"}}]}}"#);
        assert!(matches!(parse_automaton(&unknown), Err(Error::UnknownState(_))));
        let no_initial = r#"{"events":[],"states":["q0"],"transitions":[]}"#;
        assert!(matches!(parse_automaton(no_initial), Err(Error::Format(_))));
    }

    #[test]
    fn supervisor_round_trip() {
        let plant = crate::automaton::from_language(&fixtures::l1());
        let sup = synthesize(&fixtures::k1(), &plant, 4).unwrap();
        let text = supervisor_to_json(&sup);
        let back = parse_supervisor(&text, plant.alphabet()).unwrap();
        assert_eq!(back, sup);
        assert!(matches!(parse_document(&text).unwrap(), Document::Supervisor { horizon: 4, .. }));
    }

    #[test]
    fn other_documents() {
        let h = crate::automaton::from_language(&fixtures::k1());
        let g = crate::automaton::from_language(&fixtures::l1());
        let sf = realize_state_feedback(&h, &g).unwrap();
        let text = state_feedback_to_json(&sf);
        assert!(matches!(parse_document(&text).unwrap(), Document::StateFeedback(n) if n == h.state_count()));

        let crisp = fixtures::l1().threshold("0.7".parse().unwrap()).unwrap();
        let text = crisp_to_json(&crisp);
        assert_eq!(parse_crisp(&text).unwrap(), crisp);
        assert_eq!(parse_document(&text).unwrap().kind(), "crisp language");

        let (_, trace) = supremal_auto(&h, &g).unwrap();
        let text = to_canonical(&trace);
        assert!(text.contains("\"iterations\""));
        assert_eq!(parse_document(&text).unwrap().kind(), "supremal trace");

        assert!(matches!(parse_document("[1]"), Err(Error::Format(_))));
        assert!(matches!(parse_document("{\"x\":1}"), Err(Error::Format(_))));
    }
}
