use crate::args::*;
use crate::report::{Report, Status};
use rayon::prelude::*;
use relalg::checkers::{check, table1_matrix, Bounds, Property};
use relalg::constructions::{build_cm, build_cm_vee, build_counterexample, build_fig2, remove_b0, replay_fig2, sink_extension, verify_claim2, Claim2Options};
use relalg::games::{check_fv_disjoint_union, ef_equiv, min_distinguishing_rank};
use relalg::logic::{define_relation, parse_formula, term_to_fo3};
use relalg::oracle::Oracle;
use relalg::structures::{Structure, StructureClass};
use relalg::synth::{estimate_radius, synthesize, validate_synthesis, Mode, ValidationBounds};
use relalg::terms::{eval, parse_term_file, Basis, Op, Term};
use relalg::translate::{compile_posex, verify_compilation, VerifyOptions};
use relalg::Error;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

/// Failures that end the process with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Outcome = Result<Report, CliError>;

pub const PRESETS: [&str; 5] = ["paper:table1", "paper:separation", "paper:fig2", "paper:synthesis", "paper:fv-lemma"];

const FORWARD_CATALOG: [&str; 10] = [
    "dom(f)",
    "~g ; f",
    "f ; g",
    "f |> g",
    "f & g",
    "f <+ g",
    "(f <+ g) <+ (f ; g)",
    "f \\ g",
    "dom(f) ; g",
    "~(f ; g)",
];

const INJECTIVE_CATALOG: [&str; 8] = ["f^", "ran(f)", "dom(f) ; g^", "f ; g", "f^ ; g", "f <# g", "~f ; g^", "f & g"];

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_terms(path: &Path) -> Result<Vec<Term>, CliError> {
    let terms = parse_term_file(&read(path)?)?;
    if terms.is_empty() {
        return Err(CliError::Usage(format!("{} contains no terms", path.display())));
    }
    Ok(terms)
}

fn read_structure(path: &Path) -> Result<Structure, CliError> {
    Ok(Structure::from_json(&read(path)?)?)
}

fn pairs_json(pairs: &[(String, String)]) -> Value {
    json!(pairs.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn pairs_text(pairs: &[(String, String)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn run(cmd: &Command, common: &Common) -> Outcome {
    match cmd {
        Command::Eval(a) => eval_cmd(a),
        Command::Translate(t) => translate(t, common),
        Command::Check(a) => check_cmd(a, common),
        Command::Table1(a) => table1(a.max_size, common.seed),
        Command::Construct(c) => construct(c),
        Command::Verify(v) => verify(v),
        Command::Synth(s) => synth(s, common),
        Command::Ef(e) => ef(e, common),
        Command::Run(r) => preset(&r.preset, common),
    }
}

fn eval_cmd(a: &EvalArgs) -> Outcome {
    let s = read_structure(&a.structure)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    if let Some(path) = &a.term {
        for t in read_terms(path)? {
            let pairs = s.pairs_named(&eval(&t, &s)?);
            writeln!(text, "{t} = {}", pairs_text(&pairs)).unwrap();
            rows.push(json!({"term": t.to_string(), "pairs": pairs_json(&pairs)}));
        }
    } else if let Some(path) = &a.formula {
        let f = parse_formula(&read(path)?)?;
        let pairs = s.pairs_named(&define_relation(&f, "x", "y", &s, true)?);
        writeln!(text, "{f} = {}", pairs_text(&pairs)).unwrap();
        rows.push(json!({"formula": f.to_string(), "pairs": pairs_json(&pairs)}));
    }
    Ok(Report::new(Status::Ok, json!({"values": rows}), text))
}

fn translate(cmd: &TranslateCmd, common: &Common) -> Outcome {
    match cmd {
        TranslateCmd::PosexToTerm { formula, verify_size, samples } => {
            let f = parse_formula(&read(formula)?)?;
            let t = compile_posex(&f)?;
            let mut text = format!("formula: {f}\nterm: {t}\nterm size: {}\n", t.size());
            let mut result = json!({
                "formula": f.to_string(),
                "term": t.to_string(),
                "term_size": t.size(),
                "homsafe_basis": t.is_over(Basis::homsafe()),
            });
            let mut status = Status::Ok;
            if let Some(n) = verify_size {
                let opts = VerifyOptions {
                    max_size: *n,
                    samples: *samples,
                    seed: common.seed,
                    ..VerifyOptions::default()
                };
                let report = verify_compilation(&f, &t, &opts)?;
                status = Status::of(report.passed());
                writeln!(
                    text,
                    "verification: {} ({} exhaustive structures, {} random samples)",
                    if report.passed() { "agrees" } else { "COUNTEREXAMPLE" },
                    report.exhaustive_structures,
                    report.random_samples
                )
                .unwrap();
                result["verification"] = serde_json::to_value(&report).expect("report serializes");
            }
            Ok(Report::new(status, result, text))
        }
        TranslateCmd::TermToFo3 { term } => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for t in read_terms(term)? {
                let f = term_to_fo3(&t);
                writeln!(text, "{t}  =>  {f}").unwrap();
                rows.push(json!({"term": t.to_string(), "formula": f.to_string()}));
            }
            Ok(Report::new(Status::Ok, json!({"translations": rows}), text))
        }
    }
}

fn property(p: PropertyArg) -> Property {
    match p {
        PropertyArg::Fp => Property::Fp,
        PropertyArg::Tfp => Property::Tfp,
        PropertyArg::Ifp => Property::Ifp,
        PropertyArg::Homsafe => Property::Homsafe,
        PropertyArg::Subsafe => Property::Subsafe,
        PropertyArg::Forward => Property::Forward,
        PropertyArg::Local => Property::Local,
    }
}

fn check_cmd(a: &CheckArgs, common: &Common) -> Outcome {
    let oracles: Vec<Oracle> = match (&a.term, &a.formula) {
        (Some(p), _) => read_terms(p)?.into_iter().map(Oracle::Term).collect(),
        (None, Some(p)) => vec![Oracle::formula(parse_formula(&read(p)?)?)],
        (None, None) => unreachable!("clap requires one input"),
    };
    let prop = property(a.property);
    let mut verdicts = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for op in &oracles {
        let mut bounds = Bounds::for_oracle(op);
        if let Some(n) = a.max_size {
            bounds = bounds.with_max_size(n);
        }
        if let Some(k) = a.samples {
            bounds.samples = k;
        }
        if a.all_structures {
            bounds.class = Some(StructureClass::All);
        }
        let v = check(op, prop, &bounds, common.seed)?;
        all &= v.passed();
        writeln!(
            text,
            "{prop} {op}: {} (class {}, {} exhaustive, {} random)",
            if v.passed() { "pass (bounded)" } else { "FAIL" },
            v.class,
            v.exhaustive_checked,
            v.random_checked
        )
        .unwrap();
        if let Some(c) = &v.counterexample {
            writeln!(text, "  {}", c.explanation).unwrap();
            for s in &c.structures {
                writeln!(text, "  {s}").unwrap();
            }
        }
        verdicts.push(v.to_json());
    }
    Ok(Report::new(Status::of(all), json!({"verdicts": verdicts}), text))
}

fn table1(max_size: Option<usize>, seed: u64) -> Outcome {
    let report = table1_matrix(max_size, seed)?;
    let ok = report.matches() && report.witnesses_within(4);
    Ok(Report::new(Status::of(ok), report.to_json(), report.render()))
}

fn structure_report(s: &Structure, extra: Value, label: &str) -> Report {
    let mut result = json!({"structure": s.to_json_value()});
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Report::new(Status::Ok, result, format!("{label}: {} elements\n{s}\n", s.size()))
}

fn construct(cmd: &ConstructCmd) -> Outcome {
    Ok(match cmd {
        ConstructCmd::Cm { m } => structure_report(&build_cm(*m)?, json!({}), &format!("C_{m}")),
        ConstructCmd::Cmvee { m } => structure_report(&build_cm_vee(*m)?, json!({}), &format!("gadget for m = {m}")),
        ConstructCmd::Counterexample { m, mprime } => {
            let b = build_counterexample(*m, *mprime)?;
            let mut text = format!("counterexample ({m}, {mprime}): {} elements\n{}\n", b.c.size(), b.c);
            writeln!(text, "separating term: {}", b.separating).unwrap();
            Report::new(Status::Ok, b.to_json(), text)
        }
        ConstructCmd::Sink { m, mprime } => {
            let ext = sink_extension(&build_counterexample(*m, *mprime)?)?;
            let mut text = format!("sink {}: {} elements\n{}\n", ext.sink, ext.structure.size(), ext.structure);
            for (k, t) in &ext.recovery {
                writeln!(text, "{k} = {t}").unwrap();
            }
            writeln!(text, "total separating term: {}", ext.total_separating).unwrap();
            Report::new(Status::Ok, ext.to_json(), text)
        }
        ConstructCmd::Fig2 { n, k, without_b0 } => {
            let (mut s, anchor) = build_fig2(*n, *k)?;
            if *without_b0 {
                s = remove_b0(&s)?;
            }
            structure_report(&s, json!({"anchor": anchor}), &format!("fig2 n = {n}, k = {k}, anchor {anchor}"))
        }
    })
}

fn verify(cmd: &VerifyCmd) -> Outcome {
    match cmd {
        VerifyCmd::Claim2 { m, mprime, basis, budget } => {
            let basis = parse_basis(basis)?;
            let bundle = build_counterexample(*m, *mprime)?;
            let r = verify_claim2(&bundle, basis, &Claim2Options { budget: *budget })?;
            let mut text = format!("basis {}: closure of {{f, g}} has {} members\n", r.basis, r.members.len());
            for (t, x) in &r.members {
                writeln!(text, "  {t}  = {}", x.unwrap_or("(outside X)")).unwrap();
            }
            if let Some(e) = &r.escapee {
                writeln!(text, "escapes X via {e}").unwrap();
            }
            if let Some(w) = &r.separating_witness {
                writeln!(text, "separating relation reached by {w}").unwrap();
            }
            if !r.complete {
                writeln!(text, "budget exhausted before the fixpoint").unwrap();
            }
            Ok(Report::new(Status::of(r.passed()), r.to_json(), text))
        }
        VerifyCmd::Fig2 { m } => {
            let r = replay_fig2(*m)?;
            let text = format!(
                "m = {}: psi holds in A: {}, in B: {}; radius-m balls isomorphic: {} ({} elements)\n",
                r.m, r.psi_in_a, r.psi_in_b, r.balls_isomorphic, r.ball_size
            );
            Ok(Report::new(Status::of(r.confirmed()), r.to_json(), text))
        }
    }
}

/// `fa`, `^,;,dom`, or a preset extended with tokens as in `fa+^`.
fn parse_basis(text: &str) -> Result<Basis, CliError> {
    Ok(match text.split_once('+') {
        Some((preset, extra)) if Basis::preset(preset.trim()).is_some() => {
            Basis::preset(preset.trim()).unwrap().union(Basis::parse(extra)?)
        }
        _ => Basis::parse(text)?,
    })
}

/// A count keeps the oracle's own symbols and pads with fresh single letters; anything else is
/// read as a comma-separated list of names.
fn synthesis_symbols(spec: &str, oracle: &Oracle) -> Result<Vec<String>, CliError> {
    let own: Vec<String> = oracle.symbols().into_iter().collect();
    let Ok(n) = spec.trim().parse::<usize>() else {
        let list: Vec<String> = spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        if list.is_empty() {
            return Err(CliError::Usage("--symbols needs a count or a list of names".into()));
        }
        return Ok(list);
    };
    if own.len() > n {
        return Err(CliError::Usage(format!("the oracle uses {} symbols ({}) but --symbols is {n}", own.len(), own.join(","))));
    }
    let mut out = own;
    let pool = ["f", "g", "h", "k", "p", "q", "r", "s"].iter().map(|s| s.to_string());
    let fresh: Vec<String> = pool.chain((0..).map(|i| format!("r{i}"))).filter(|s| !out.contains(s)).take(n - out.len()).collect();
    out.extend(fresh);
    out.sort();
    Ok(out)
}

fn synth(cmd: &SynthCmd, common: &Common) -> Outcome {
    let (a, mode) = match cmd {
        SynthCmd::Forward(a) => (a, Mode::Forward),
        SynthCmd::LocalInjective(a) => (a, Mode::LocalInjective),
    };
    let oracle = Oracle::parse(&read(&a.oracle_term)?)?;
    let symbols = synthesis_symbols(&a.symbols, &oracle)?;
    let mut bounds = ValidationBounds::new(mode.class());
    bounds.samples = a.samples;
    if let Some(n) = a.validate_size {
        bounds.max_size = n;
    }
    let not_local = |e: &Error| matches!(e, Error::NotBounded(_) | Error::NotFunctionPreserving(_));

    if let Some(max) = a.auto_radius {
        let est = estimate_radius(&oracle, &symbols, mode, max, &bounds, common.seed)?;
        let mut text = String::new();
        for at in &est.attempts {
            writeln!(text, "radius {}: {}", at.radius, at.failure.as_deref().unwrap_or("validated")).unwrap();
        }
        let mut result = json!({"oracle": oracle.to_string(), "estimate": est.to_json()});
        if let Some(res) = &est.result {
            writeln!(text, "term: {}", res.term).unwrap();
            result["synthesis"] = res.to_json();
        }
        return Ok(Report::new(Status::of(est.radius.is_some()), result, text));
    }

    let res = match synthesize(&oracle, &symbols, a.radius, mode) {
        Ok(r) => r,
        Err(e) if not_local(&e) => {
            let text = format!("{} synthesis of {oracle} at radius {}: {e}\n", mode.name(), a.radius);
            let result = json!({"oracle": oracle.to_string(), "mode": mode.name(), "radius": a.radius, "error": e.to_string()});
            return Ok(Report::new(Status::Fail, result, text));
        }
        Err(e) => return Err(e.into()),
    };
    let mut text = format!(
        "{} synthesis of {oracle} at radius {} over {}\n{} types, {} positive, {} emissions\nterm: {}\n",
        mode.name(),
        res.radius,
        symbols.join(","),
        res.types_considered,
        res.positive_types,
        res.emissions.len(),
        res.term
    );
    let mut result = json!({"oracle": oracle.to_string(), "synthesis": res.to_json()});
    let mut status = Status::Ok;
    if a.validate_size.is_some() {
        let v = validate_synthesis(&oracle, &res.term, &symbols, &bounds, common.seed)?;
        status = Status::of(v.passed);
        match &v.counterexample {
            None => writeln!(text, "validated on {} exhaustive and {} random structures", v.exhaustive_checked, v.random_checked).unwrap(),
            Some((s, (x, y), o, t)) => writeln!(text, "validation counterexample at ({x},{y}): oracle {o}, term {t}\n  {s}").unwrap(),
        }
        result["validation"] = v.to_json();
    }
    Ok(Report::new(status, result, text))
}

fn ef(e: &EfArgs, common: &Common) -> Outcome {
    match &e.command {
        Some(EfCmd::MinRank { left, right, max_rank }) => {
            let (a, b) = (read_structure(left)?, read_structure(right)?);
            let r = min_distinguishing_rank(&a, &b, *max_rank)?;
            let text = match r {
                Some(r) => format!("Spoiler wins from rank {r}\n"),
                None => format!("Duplicator wins every game up to rank {max_rank}\n"),
            };
            Ok(Report::new(Status::Ok, json!({"max_rank": max_rank, "min_rank": r}), text))
        }
        Some(EfCmd::FvCheck { rank, samples, max_size }) => {
            let r = check_fv_disjoint_union(*rank, *samples, *max_size, common.seed)?;
            let text = format!(
                "rank {rank}: {} quadruples checked ({} nontrivial), {} skipped, {} violations\n",
                r.checked,
                r.nontrivial,
                r.skipped,
                r.violations.len()
            );
            Ok(Report::new(Status::of(r.passed()), r.to_json(), text))
        }
        None => {
            let (Some(left), Some(right)) = (&e.left, &e.right) else {
                return Err(CliError::Usage("ef needs --left and --right (or a subcommand)".into()));
            };
            let (a, b) = (read_structure(left)?, read_structure(right)?);
            let wins = ef_equiv(&a, &[], &b, &[], e.rank)?;
            let text = format!("rank {}: {} wins\n", e.rank, if wins { "Duplicator" } else { "Spoiler" });
            Ok(Report::new(Status::Ok, json!({"rank": e.rank, "duplicator_wins": wins}), text))
        }
    }
}

fn synthesis_catalog(catalog: &[&str], mode: Mode, seed: u64) -> Result<(bool, Vec<Value>, String), CliError> {
    let symbols: Vec<String> = vec!["f".into(), "g".into()];
    let bounds = ValidationBounds::new(mode.class());
    let runs: Vec<Result<_, Error>> = catalog
        .par_iter()
        .enumerate()
        .map(|(k, text)| estimate_radius(&Oracle::parse(text)?, &symbols, mode, 2, &bounds, seed + k as u64))
        .collect();
    let mut ok = true;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (src, est) in catalog.iter().zip(runs) {
        let est = est?;
        let good = est.result.as_ref().is_some_and(|r| r.term.is_over(mode.basis()));
        ok &= good;
        match &est.result {
            Some(r) => writeln!(text, "  {src} @ radius {}: {}", r.radius, r.term).unwrap(),
            None => writeln!(text, "  {src}: no radius up to 2 validates").unwrap(),
        }
        rows.push(json!({
            "oracle": src,
            "radius": est.radius,
            "term": est.result.as_ref().map(|r| r.term.to_string()),
            "estimate": est.to_json(),
        }));
    }
    Ok((ok, rows, text))
}

fn preset(name: &str, common: &Common) -> Outcome {
    match name {
        "paper:table1" => table1(Some(3), common.seed),
        "paper:separation" => {
            let bundle = build_counterexample(2, 3)?;
            let fa = verify_claim2(&bundle, Basis::fa(), &Claim2Options::default())?;
            let conv = verify_claim2(&bundle, Basis::fa().with(Op::Converse), &Claim2Options::default())?;
            let ok = fa.passed() && !conv.passed();
            let text = format!(
                "basis {}: closure has {} members, all in X: {}\nbasis {}: escapes via {}\n",
                fa.basis,
                fa.members.len(),
                fa.passed(),
                conv.basis,
                conv.escapee.as_ref().map(Term::to_string).unwrap_or_else(|| "nothing".into())
            );
            Ok(Report::new(Status::of(ok), json!({"fa": fa.to_json(), "fa_with_converse": conv.to_json()}), text))
        }
        "paper:fig2" => {
            let replays = (1..=3).map(replay_fig2).collect::<Result<Vec<_>, _>>()?;
            let ok = replays.iter().all(|r| r.confirmed());
            let mut text = String::new();
            for r in &replays {
                writeln!(text, "m = {}: psi(A) {}, psi(B) {}, balls isomorphic {}", r.m, r.psi_in_a, r.psi_in_b, r.balls_isomorphic).unwrap();
            }
            Ok(Report::new(Status::of(ok), json!(replays.iter().map(|r| r.to_json()).collect::<Vec<_>>()), text))
        }
        "paper:synthesis" => {
            let (fok, fwd, ftext) = synthesis_catalog(&FORWARD_CATALOG, Mode::Forward, common.seed)?;
            let (iok, inj, itext) = synthesis_catalog(&INJECTIVE_CATALOG, Mode::LocalInjective, common.seed)?;
            let text = format!("forward:\n{ftext}local injective:\n{itext}");
            Ok(Report::new(Status::of(fok && iok), json!({"forward": fwd, "local_injective": inj}), text))
        }
        "paper:fv-lemma" => {
            let r = check_fv_disjoint_union(2, 100, 4, common.seed)?;
            let text = format!("{} checked, {} skipped, {} violations\n", r.checked, r.skipped, r.violations.len());
            Ok(Report::new(Status::of(r.passed()), r.to_json(), text))
        }
        other => Err(CliError::Usage(format!("unknown preset {other:?}; expected one of {}", PRESETS.join(", ")))),
    }
}
