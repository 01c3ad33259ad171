use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use serde_json::{json, Value};

use fdes_core::automaton::{from_language, parallel, product};
use fdes_core::control::{
    is_controllable, is_controllable_automata, realize_state_feedback, synthesize, synthesize_automata,
};
use fdes_core::infimal::{infimal_auto, kdown};
use fdes_core::io::{self, Document};
use fdes_core::oracle::verify;
use fdes_core::scp::{scp_solvable, scp_supervisor};
use fdes_core::supremal::{khat, supremal_auto};
use fdes_core::{Alphabet, Error, Event, FuzzyAutomaton, FuzzyLanguage, Grade, Word};

use crate::report::Context;
use crate::{Command, ComposeOp, LangOp, PairArgs};

/// Runs one subcommand. `Ok(true)` and `Ok(false)` are the affirmative and
/// negative verdicts; `Err` is invalid input or I/O.
pub fn run(command: &Command, ctx: &mut Context) -> Result<bool> {
    match command {
        Command::Validate { paths } => validate(ctx, paths),
        Command::Lang { op, left, right, output } => lang(ctx, *op, left, right.as_deref(), output.as_ref()),
        Command::Compose { op, left, right, output } => compose(ctx, *op, left, right, output.as_ref()),
        Command::Check(pair) => check(ctx, pair),
        Command::Synthesize { pair, table, output } => synthesize_cmd(ctx, pair, *table, output.as_ref()),
        Command::Supremal { pair, trace, output } => supremal(ctx, pair, trace.as_ref(), output.as_ref()),
        Command::Infimal { pair, output } => infimal(ctx, pair, output.as_ref()),
        Command::Scp { plant, min, max, horizon, output } => scp(ctx, plant, min, max, *horizon, output.as_ref()),
        Command::Threshold { lang, theta, output } => threshold(ctx, lang, theta, output.as_ref()),
        Command::Verify { seed } => verify_cmd(ctx, *seed),
    }
}

/// A behaviour given either as a language or as an automaton.
enum Input {
    Lang(FuzzyLanguage),
    Auto(FuzzyAutomaton),
}

impl Input {
    fn alphabet(&self) -> &Alphabet {
        match self {
            Input::Lang(l) => l.alphabet(),
            Input::Auto(g) => g.alphabet(),
        }
    }

    fn language(&self, horizon: usize) -> FuzzyLanguage {
        match self {
            Input::Lang(l) => l.truncate(horizon),
            Input::Auto(g) => g.enumerate_language(horizon),
        }
    }

    fn automaton(&self) -> FuzzyAutomaton {
        match self {
            Input::Lang(l) => from_language(l),
            Input::Auto(g) => g.clone(),
        }
    }

    /// Longest supported word of a language; for an automaton, whose
    /// support may be infinite, its number of states.
    fn length_hint(&self) -> usize {
        match self {
            Input::Lang(l) => l.max_len().unwrap_or(0),
            Input::Auto(g) => g.state_count(),
        }
    }
}

fn parse(ctx: &mut Context, path: &Path) -> Result<Document> {
    let text = ctx.read(path)?;
    io::parse_document(&text).with_context(|| format!("{}", path.display()))
}

fn load(ctx: &mut Context, path: &Path) -> Result<Input> {
    match parse(ctx, path)? {
        Document::Language(l) => Ok(Input::Lang(l)),
        Document::Automaton(g) => Ok(Input::Auto(g)),
        other => bail!("{}: expected a language or an automaton, found a {}", path.display(), other.kind()),
    }
}

fn load_language(ctx: &mut Context, path: &Path) -> Result<FuzzyLanguage> {
    match parse(ctx, path)? {
        Document::Language(l) => Ok(l),
        other => bail!("{}: expected a language, found a {}", path.display(), other.kind()),
    }
}

/// Longest input word (or automaton size) plus the number of
/// uncontrollable events.
fn default_horizon(inputs: &[&Input]) -> usize {
    let longest = inputs.iter().map(|i| i.length_hint()).max().unwrap_or(0);
    longest + inputs.first().map_or(0, |i| i.alphabet().uncontrollable().count())
}

struct Pair {
    plant: Input,
    spec: Input,
    horizon: usize,
    automata: bool,
}

fn load_pair(ctx: &mut Context, args: &PairArgs) -> Result<Pair> {
    let plant = load(ctx, &args.plant)?;
    let spec = load(ctx, &args.spec)?;
    let horizon = args.horizon.unwrap_or_else(|| default_horizon(&[&plant, &spec]));
    let both_automata = matches!((&plant, &spec), (Input::Auto(_), Input::Auto(_)));
    let automata = args.auto || (!args.lang && both_automata);
    Ok(Pair { plant, spec, horizon, automata })
}

fn witness_json(witness: &Option<(Word, Event)>) -> Value {
    match witness {
        Some((word, event)) => json!({ "word": word, "event": event }),
        None => Value::Null,
    }
}

fn print_json(value: &Value) {
    print!("{}", io::to_canonical(value));
}

fn validate(ctx: &mut Context, paths: &[PathBuf]) -> Result<bool> {
    let mut invalid = Vec::new();
    let mut results = Vec::new();
    for path in paths {
        let outcome = ctx.read(path).and_then(|text| Ok(io::parse_document(&text)?));
        match outcome {
            Ok(doc) => {
                println!("{}: valid {}", path.display(), doc.kind());
                results.push(json!({ "path": path.display().to_string(), "valid": true }));
            }
            Err(e) => {
                println!("{}: invalid: {e:#}", path.display());
                results.push(json!({ "path": path.display().to_string(), "valid": false, "error": format!("{e:#}") }));
                invalid.push(path.display().to_string());
            }
        }
    }
    ctx.set_verdict(json!({ "files": results }));
    if invalid.is_empty() {
        Ok(true)
    } else {
        Err(anyhow!("{} of {} files invalid", invalid.len(), paths.len()))
    }
}

fn lang(ctx: &mut Context, op: LangOp, left: &Path, right: Option<&Path>, output: Option<&PathBuf>) -> Result<bool> {
    let a = load_language(ctx, left)?;
    let second = |ctx: &mut Context| -> Result<FuzzyLanguage> {
        let path = right.ok_or_else(|| anyhow!("this operation takes two languages"))?;
        load_language(ctx, path)
    };
    let text = match op {
        LangOp::Union => io::language_to_json(&a.union(&second(ctx)?)?),
        LangOp::Intersection => io::language_to_json(&a.intersection(&second(ctx)?)?),
        LangOp::Concat => io::language_to_json(&a.concatenation(&second(ctx)?)?),
        LangOp::Support => io::crisp_to_json(&a.support()),
        LangOp::Show => format!("{}\n", a.to_zadeh()),
        LangOp::Contains => {
            let b = second(ctx)?;
            let witness = a.first_excess_over(&b)?;
            let verdict = json!({ "contained": witness.is_none(), "witness": witness });
            print_json(&verdict);
            ctx.set_verdict(verdict);
            return Ok(witness.is_none());
        }
    };
    ctx.emit(&text, output)?;
    Ok(true)
}

fn compose(ctx: &mut Context, op: ComposeOp, left: &Path, right: &Path, output: Option<&PathBuf>) -> Result<bool> {
    let g1 = load(ctx, left)?.automaton();
    let g2 = load(ctx, right)?.automaton();
    let result = match op {
        ComposeOp::Product => product(&g1, &g2),
        ComposeOp::Parallel => parallel(&g1, &g2),
    };
    ctx.set_verdict(json!({ "states": result.state_count() }));
    ctx.emit(&io::automaton_to_json(&result), output)?;
    Ok(true)
}

fn check(ctx: &mut Context, args: &PairArgs) -> Result<bool> {
    let pair = load_pair(ctx, args)?;
    let verdict = if pair.automata {
        is_controllable_automata(&pair.spec.automaton(), &pair.plant.automaton())?
    } else {
        is_controllable(&pair.spec.language(pair.horizon), &pair.plant.language(pair.horizon))?
    };
    let out = json!({ "controllable": verdict.controllable, "witness": witness_json(&verdict.witness) });
    print_json(&out);
    ctx.set_verdict(out);
    Ok(verdict.controllable)
}

/// Reports an uncontrollable specification as a negative verdict.
fn negative_on_uncontrollable(ctx: &mut Context, result: Result<String, Error>) -> Result<Option<String>> {
    match result {
        Ok(text) => Ok(Some(text)),
        Err(Error::Uncontrollable { word, event }) => {
            let out = json!({ "controllable": false, "witness": witness_json(&Some((word, event))) });
            print_json(&out);
            ctx.set_verdict(out);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn synthesize_cmd(ctx: &mut Context, args: &PairArgs, table: bool, output: Option<&PathBuf>) -> Result<bool> {
    let pair = load_pair(ctx, args)?;
    let state_feedback = match &pair.spec {
        Input::Auto(h) => !table && h.is_deterministic(),
        Input::Lang(_) => false,
    };
    let g = pair.plant.automaton();
    let result = match &pair.spec {
        Input::Auto(h) if state_feedback => realize_state_feedback(h, &g).map(|s| io::state_feedback_to_json(&s)),
        Input::Auto(h) => synthesize_automata(h, &g, pair.horizon).map(|s| io::supervisor_to_json(&s)),
        Input::Lang(k) => synthesize(k, &g, pair.horizon).map(|s| io::supervisor_to_json(&s)),
    };
    let Some(text) = negative_on_uncontrollable(ctx, result)? else {
        return Ok(false);
    };
    let form = if state_feedback { "state-feedback" } else { "table" };
    ctx.set_verdict(
        json!({ "controllable": true, "supervisor": form, "horizon": (!state_feedback).then_some(pair.horizon) }),
    );
    ctx.emit(&text, output)?;
    Ok(true)
}

fn supremal(ctx: &mut Context, args: &PairArgs, trace: Option<&PathBuf>, output: Option<&PathBuf>) -> Result<bool> {
    let pair = load_pair(ctx, args)?;
    if pair.automata {
        let (sup, algorithm_trace) = supremal_auto(&pair.spec.automaton(), &pair.plant.automaton())?;
        if let Some(path) = trace {
            ctx.emit(&io::to_canonical(&algorithm_trace), Some(path))?;
        }
        ctx.set_verdict(json!({ "mode": "automaton", "empty": sup.is_empty(), "states": sup.state_count() }));
        ctx.emit(&io::automaton_to_json(&sup), output)?;
    } else {
        if trace.is_some() {
            bail!("--trace is only available in automaton mode");
        }
        let up = khat(&pair.spec.language(pair.horizon), &pair.plant.language(pair.horizon), pair.horizon)?;
        ctx.set_verdict(
            json!({ "mode": "language", "empty": up.is_empty(), "horizon": pair.horizon, "words": up.len() }),
        );
        ctx.emit(&io::language_to_json(&up), output)?;
    }
    Ok(true)
}

fn infimal(ctx: &mut Context, args: &PairArgs, output: Option<&PathBuf>) -> Result<bool> {
    let pair = load_pair(ctx, args)?;
    if pair.automata {
        let inf = infimal_auto(&pair.spec.automaton(), &pair.plant.automaton())?;
        ctx.set_verdict(json!({ "mode": "automaton", "states": inf.state_count() }));
        ctx.emit(&io::automaton_to_json(&inf), output)?;
    } else {
        let down = kdown(&pair.spec.language(pair.horizon), &pair.plant.language(pair.horizon), pair.horizon)?;
        ctx.set_verdict(json!({ "mode": "language", "horizon": pair.horizon, "words": down.len() }));
        ctx.emit(&io::language_to_json(&down), output)?;
    }
    Ok(true)
}

fn scp(
    ctx: &mut Context,
    plant: &Path,
    min: &Path,
    max: &Path,
    horizon: Option<usize>,
    output: Option<&PathBuf>,
) -> Result<bool> {
    let plant = load(ctx, plant)?;
    let la = load(ctx, min)?;
    let ll = load(ctx, max)?;
    let horizon = horizon.unwrap_or_else(|| default_horizon(&[&plant, &la, &ll]));
    let g = plant.automaton();
    let (la, ll) = (la.language(horizon), ll.language(horizon));
    let verdict = scp_solvable(&la, &ll, &g, horizon)?;
    let summary = serde_json::to_value(&verdict)?;
    ctx.set_verdict(summary.clone());
    if !verdict.solvable {
        print_json(&summary);
        return Ok(false);
    }
    let (supervisor, _) = scp_supervisor(&la, &ll, &g, horizon)?;
    ctx.emit(&io::supervisor_to_json(&supervisor), output)?;
    Ok(true)
}

fn threshold(ctx: &mut Context, path: &Path, theta: &str, output: Option<&PathBuf>) -> Result<bool> {
    let l = load_language(ctx, path)?;
    let theta: Grade = theta.parse().context("--theta")?;
    let words = l.threshold(theta)?;
    ctx.set_verdict(json!({ "theta": theta, "words": words.len() }));
    ctx.emit(&io::crisp_to_json(&words), output)?;
    Ok(true)
}

fn verify_cmd(ctx: &mut Context, seed: Option<u64>) -> Result<bool> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("FDES_SEED") {
            Ok(text) => {
                text.trim().parse().with_context(|| format!("FDES_SEED={text:?} is not an unsigned integer"))?
            }
            Err(_) => verify::DEFAULT_SEED,
        },
    };
    println!("seed {seed}");
    let outcomes = verify::run_all(seed);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let results: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "name": o.name, "cases": o.cases, "passed": o.passed(), "failures": o.failures.len() }))
        .collect();
    ctx.set_verdict(json!({ "seed": seed, "suites": results }));
    Ok(outcomes.iter().all(|o| o.passed()))
}
