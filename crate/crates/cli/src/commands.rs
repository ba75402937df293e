//! One function per verb. Each returns both renderings of its result and
//! whether every check passed.

use std::fmt::Write;
use std::path::Path;

use pfdual::algebra::{self, FinAlgebra, Representable};
use pfdual::axioms::AxiomReport;
use pfdual::duality::{self, DualityError};
use pfdual::dualize;
use pfdual::sections;
use pfdual::topcat::{self, MultiFunctor, TopCategory};
use pfdual::transducer::{self, Dfa, Transducer, TransducerError};
use pfdual::{Report, Verdict};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dot;
use crate::formats::{to_json, AlgebraFile, CategoryFile, DfaFile, Kind, LoadError, TransducerFile, Workspace};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub passed: bool,
    /// Graphviz rendering, for verbs that produce a graph.
    pub dot: Option<String>,
}

impl Output {
    fn new(text: String, json: Value, passed: bool) -> Output {
        Output {
            text,
            json,
            passed,
            dot: None,
        }
    }
}

fn precondition(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(format!("{}: {e}", path.display()))
}

fn verdict_json(v: &Verdict) -> Value {
    json!({"holds": v.holds, "witness": v.witness})
}

fn report_json(r: &Report) -> Value {
    Value::Array(
        r.checks
            .iter()
            .map(|(name, v)| json!({"check": name, "holds": v.holds, "witness": v.witness}))
            .collect(),
    )
}

const VARS: [&str; 3] = ["a", "b", "c"];

fn axiom_output(report: &AxiomReport, name: &dyn Fn(usize) -> String, count: usize) -> Output {
    let mut text = String::new();
    let mut rows = Vec::new();
    for v in &report.verdicts {
        let witness: Option<Vec<(String, String)>> = v.witness.as_ref().map(|w| {
            w.iter()
                .enumerate()
                .map(|(i, &e)| (VARS[i].to_string(), name(e)))
                .collect()
        });
        match &witness {
            None => writeln!(text, "{}: pass", v.axiom).unwrap(),
            Some(w) => {
                let at: Vec<String> = w.iter().map(|(x, e)| format!("{x}={e}")).collect();
                writeln!(text, "{}: FAIL at {}", v.axiom, at.join(", ")).unwrap()
            }
        }
        let witness_json = witness.map(|w| Value::Object(w.into_iter().map(|(x, e)| (x, Value::from(e))).collect()));
        rows.push(json!({
            "axiom": v.axiom.number(),
            "statement": v.axiom.statement(),
            "holds": v.holds(),
            "witness": witness_json,
        }));
    }
    let all = report.all_pass();
    writeln!(
        text,
        "{} of 10 hold over {count} elements",
        report.verdicts.iter().filter(|v| v.holds()).count()
    )
    .unwrap();
    Output::new(text, json!({"elements": count, "axioms": rows, "all_pass": all}), all)
}

pub fn check_axioms(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let alg = ws.algebra(path)?;
    let report = alg.check_axioms();
    Ok(axiom_output(&report, &|i| alg.name(i).to_string(), alg.len()))
}

fn category_text(c: &TopCategory) -> String {
    let mut text = String::new();
    writeln!(text, "objects: {}", c.object_names().join(", ")).unwrap();
    writeln!(text, "arrows:").unwrap();
    for f in 0..c.num_arrows() {
        let tag = if c.is_identity(f) { " (identity)" } else { "" };
        writeln!(
            text,
            "  {}: {} -> {}{tag}",
            c.arrow_name(f),
            c.object_name(c.src(f)),
            c.object_name(c.tgt(f))
        )
        .unwrap();
    }
    writeln!(text, "composition:").unwrap();
    for (f, g) in c.composable_pairs() {
        if let Some(h) = c.comp(f, g) {
            writeln!(text, "  {}·{} = {}", c.arrow_name(f), c.arrow_name(g), c.arrow_name(h)).unwrap();
        }
    }
    text
}

pub fn dualize(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let alg = ws.algebra(path)?;
    let d = dualize::pf_object(&alg).map_err(|e| precondition(path, e))?;
    let c = &d.category;
    let file = CategoryFile::from_category(c);
    let mut out = Output::new(category_text(c), serde_json::to_value(&file).expect("plain data"), true);
    out.dot = Some(dot::category("pf", c));
    Ok(out)
}

pub fn sections(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let c = ws.category(path)?;
    let sec = sections::seccl_object(&c).map_err(|e| precondition(path, e))?;
    let mut text = String::new();
    for s in &sec.sections {
        let choices: Vec<String> = (0..c.num_objects())
            .filter_map(|x| {
                s.choice(x)
                    .map(|f| format!("{} ↦ {}", c.object_name(x), c.arrow_name(f)))
            })
            .collect();
        writeln!(
            text,
            "{}: {}",
            s.label(&c),
            if choices.is_empty() {
                "nowhere defined".into()
            } else {
                choices.join(", ")
            }
        )
        .unwrap();
    }
    writeln!(text, "{} sections", sec.sections.len()).unwrap();
    let file = AlgebraFile::from_algebra(&sec.algebra);
    Ok(Output::new(
        text,
        serde_json::to_value(&file).expect("plain data"),
        true,
    ))
}

fn duality_failure(path: &Path, e: DualityError, what: &str) -> Result<Output, CliError> {
    match e {
        DualityError::NotIsomorphism(msg) => Ok(Output::new(
            format!("{what}: not an isomorphism ({msg})\n"),
            json!({what: {"isomorphism": false, "reason": msg}}),
            false,
        )),
        other => Err(precondition(path, other)),
    }
}

pub fn bidual(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    match ws.kind(path)? {
        Kind::Algebra | Kind::Concrete => {
            let alg = ws.algebra(path)?;
            let t = match duality::theta(&alg) {
                Ok(t) => t,
                Err(e) => return duality_failure(path, e, "theta"),
            };
            let n = t.sections.sections.len();
            let map: serde_json::Map<String, Value> = alg
                .elements()
                .map(|a| {
                    (
                        alg.name(a).to_string(),
                        Value::from(t.sections.algebra.name(t.apply(a))),
                    )
                })
                .collect();
            Ok(Output::new(
                format!("theta: isomorphism ({} ↔ {n})\n", alg.len()),
                json!({"theta": {"isomorphism": true, "elements": alg.len(), "sections": n, "map": map}}),
                true,
            ))
        }
        Kind::Category => {
            let c = ws.category(path)?;
            let p = match duality::phi(&c) {
                Ok(p) => p,
                Err(e) => return duality_failure(path, e, "phi"),
            };
            let objects: serde_json::Map<String, Value> = (0..c.num_objects())
                .map(|x| {
                    (
                        c.object_name(x).to_string(),
                        Value::from(p.dual.category.object_name(p.iso.objects[x])),
                    )
                })
                .collect();
            let arrows: serde_json::Map<String, Value> = (0..c.num_arrows())
                .map(|f| {
                    (
                        c.arrow_name(f).to_string(),
                        Value::from(p.dual.category.arrow_name(p.iso.arrows[f])),
                    )
                })
                .collect();
            Ok(Output::new(
                format!(
                    "phi: isomorphism ({} objects, {} arrows)\n",
                    c.num_objects(),
                    c.num_arrows()
                ),
                json!({"phi": {"isomorphism": true, "objects": objects, "arrows": arrows}}),
                true,
            ))
        }
        other => Err(precondition(
            path,
            format!("bidual needs an algebra or category file, found {other:?}"),
        )),
    }
}

fn functor_report(f: &MultiFunctor) -> (Report, bool) {
    let mut r = topcat::check_multifunctor(f);
    r.extend(topcat::continuity_report(f));
    let stars = topcat::star_checks(f);
    r.extend(stars.report());
    let passed = r
        .checks
        .iter()
        .filter(|(n, _)| n != "pseudo star surjective")
        .all(|(_, v)| v.holds);
    (r, passed)
}

fn filter_names(alg: &FinAlgebra, s: &pfdual::Subset) -> String {
    let names: Vec<&str> = s.iter().map(|i| alg.name(i)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn hom_check(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let h = ws.hom(path)?;
    for (alg, which) in [(&h.source, "source"), (&h.target, "target")] {
        Representable::new(alg.clone()).map_err(|e| precondition(path, format!("{which}: {e}")))?;
    }
    let valid = algebra::check_homomorphism(&h);
    let joins = algebra::preserves_joins(&h);
    let lp = algebra::check_locally_proper(&h).map_err(|e| precondition(path, e))?;
    let lp_witness = lp.witness.as_ref().map(|s| filter_names(&h.target, s));
    let mut text = String::new();
    writeln!(text, "homomorphism: {valid}").unwrap();
    writeln!(text, "preserves joins: {joins}").unwrap();
    match &lp_witness {
        None => writeln!(text, "locally proper: yes").unwrap(),
        Some(w) => writeln!(text, "locally proper: no, preimage of {w} is not prime").unwrap(),
    }
    let mut json = json!({
        "homomorphism": verdict_json(&valid),
        "preserves_joins": verdict_json(&joins),
        "locally_proper": {"holds": lp.holds, "witness": lp_witness},
    });
    let mut passed = valid.holds && joins.holds;
    if valid.holds {
        let f = dualize::pf_morphism(&h).map_err(|e| precondition(path, e))?;
        let (report, ok) = functor_report(&f);
        let plain = topcat::is_plain_functor(&f);
        writeln!(text, "dual multivalued functor:").unwrap();
        for line in report.to_string().lines() {
            writeln!(text, "  {line}").unwrap();
        }
        writeln!(text, "  plain functor: {}", if plain { "yes" } else { "no" }).unwrap();
        json["dual"] = json!({"checks": report_json(&report), "plain_functor": plain});
        passed &= ok;
    }
    Ok(Output::new(text, json, passed))
}

pub fn functor_check(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let f = ws.functor(path)?;
    let (report, passed) = functor_report(&f);
    let plain = topcat::is_plain_functor(&f);
    let mut text = report.to_string();
    writeln!(text, "plain functor: {}", if plain { "yes" } else { "no" }).unwrap();
    Ok(Output::new(
        text,
        json!({"checks": report_json(&report), "plain_functor": plain}),
        passed,
    ))
}

pub fn naturality(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    let (what, v) = match ws.kind(path)? {
        Kind::Hom => {
            let h = ws.hom(path)?;
            if !algebra::check_homomorphism(&h).holds {
                return Err(precondition(path, "map is not a homomorphism"));
            }
            (
                "theta",
                duality::check_naturality_theta(&h).map_err(|e| precondition(path, e))?,
            )
        }
        Kind::Functor => {
            let f = ws.functor(path)?;
            (
                "phi",
                duality::check_naturality_phi(&f).map_err(|e| precondition(path, e))?,
            )
        }
        other => {
            return Err(precondition(
                path,
                format!("naturality needs a hom or functor file, found {other:?}"),
            ))
        }
    };
    Ok(Output::new(
        format!("{what} naturality: {v}\n"),
        json!({"square": what, "commutes": v.holds, "witness": v.witness}),
        v.holds,
    ))
}

fn tx_error(e: TransducerError) -> CliError {
    CliError::Precondition(e.to_string())
}

fn transducer_text(t: &Transducer) -> String {
    let mut text = String::new();
    let states = t.states();
    writeln!(text, "states: {} (initial {})", states.join(", "), states[t.initial()]).unwrap();
    for tr in t.transitions() {
        let out = if tr.output.is_empty() { "ε" } else { &tr.output };
        writeln!(text, "  {} -{}/{out}-> {}", states[tr.from], tr.input, states[tr.to]).unwrap();
    }
    for (q, name) in states.iter().enumerate() {
        if let Some(w) = t.final_output(q) {
            writeln!(text, "  final {name} / {w:?}").unwrap();
        }
    }
    text
}

fn transducer_output(name: &str, t: &Transducer) -> Output {
    let mut out = Output::new(
        transducer_text(t),
        serde_json::to_value(TransducerFile::from_transducer(t)).expect("plain data"),
        true,
    );
    out.dot = Some(dot::transducer(name, t));
    out
}

fn dfa_output(name: &str, d: &Dfa) -> Output {
    let mut text = String::new();
    writeln!(text, "{} states, initial {}", d.num_states(), d.initial()).unwrap();
    for q in 0..d.num_states() {
        let moves: Vec<String> = d
            .alphabet()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c}->{}", d.next(q, i)))
            .collect();
        let acc = if d.is_accepting(q) { " accepting" } else { "" };
        writeln!(text, "  {q}{acc}: {}", moves.join(" ")).unwrap();
    }
    let mut out = Output::new(
        text,
        serde_json::to_value(DfaFile::from_dfa(d)).expect("plain data"),
        true,
    );
    out.dot = Some(dot::dfa(name, d));
    out
}

pub fn transducer_eval(ws: &mut Workspace, path: &Path, word: &str) -> Result<Output, CliError> {
    let t = ws.transducer(path)?;
    match t.eval(word) {
        Ok(v) => Ok(Output::new(
            format!("{}\n", v.as_deref().unwrap_or("undefined")),
            json!({"input": word, "output": v}),
            true,
        )),
        Err(e @ TransducerError::NotFunctional { .. }) => Ok(Output::new(
            format!("{e}\n"),
            json!({"input": word, "error": e.to_string()}),
            false,
        )),
        Err(e) => Err(tx_error(e)),
    }
}

pub fn transducer_compose(ws: &mut Workspace, first: &Path, second: &Path) -> Result<Output, CliError> {
    let (a, b) = (ws.transducer(first)?, ws.transducer(second)?);
    Ok(transducer_output(
        "compose",
        &transducer::compose(&a, &b).map_err(tx_error)?,
    ))
}

pub fn transducer_pref(ws: &mut Workspace, first: &Path, second: &Path) -> Result<Output, CliError> {
    let (a, b) = (ws.transducer(first)?, ws.transducer(second)?);
    Ok(transducer_output(
        "pref",
        &transducer::pref_union(&a, &b).map_err(tx_error)?,
    ))
}

pub fn transducer_dom(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    Ok(dfa_output("dom", &transducer::domain_dfa(&ws.transducer(path)?)))
}

pub fn transducer_range(ws: &mut Workspace, path: &Path) -> Result<Output, CliError> {
    Ok(dfa_output("range", &transducer::range_dfa(&ws.transducer(path)?)))
}

/// Bounded axiom check; witnesses are named by file stem.
pub fn transducer_axioms(ws: &mut Workspace, paths: &[&Path], max_len: usize) -> Result<Output, CliError> {
    let ts = paths.iter().map(|p| ws.transducer(p)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
        })
        .collect();
    let report = transducer::axioms_bounded(&ts, max_len).map_err(tx_error)?;
    let mut out = axiom_output(&report, &|i| names[i].clone(), ts.len());
    // bounded comparison can break the quasiequations spuriously, so only
    // the equations decide the outcome
    out.passed = report.equations_pass();
    out.json["max_len"] = json!(max_len);
    out.json["equations_pass"] = json!(out.passed);
    Ok(out)
}

/// Render for printing.
pub fn render(out: &Output, json: bool) -> String {
    if json {
        to_json(&out.json)
    } else {
        out.text.clone()
    }
}
