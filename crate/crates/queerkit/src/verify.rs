//! Corpus verification: every identity is checked by normal-form engines and by the
//! tensor representations, and the results are collected into a report.

use crate::classical::{classical_rules, schur_normal_form};
use crate::expr::{parse_element, ParseError};
use crate::freealg::{Element, Gen, RewriteSystem};
use crate::quantum::{l_normal_form, lusztig_rules, quantum_schur_normal_form};
use crate::tensor_rep::{ClassicalRep, QuantumRep};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    L,
    X,
    Classical,
    Schur,
    Rep,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::L => "L",
            Engine::X => "X",
            Engine::Classical => "classical",
            Engine::Schur => "schur",
            Engine::Rep => "rep",
        }
    }

    pub fn from_name(s: &str) -> Option<Engine> {
        Some(match s {
            "L" => Engine::L,
            "X" => Engine::X,
            "classical" => Engine::Classical,
            "schur" => Engine::Schur,
            "rep" => Engine::Rep,
            _ => return None,
        })
    }

    fn is_normal_form(self) -> bool {
        self != Engine::Rep
    }
}

/// A claimed equality lhs = rhs at one instantiation.
#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub label: String,
    pub lhs: Element,
    pub rhs: Element,
    pub ranges: BTreeMap<String, i64>,
    pub engines: Vec<Engine>,
}

impl Identity {
    pub fn n(&self) -> u8 {
        self.ranges.get("n").copied().unwrap_or(1) as u8
    }

    pub fn difference(&self) -> Element {
        &self.lhs - &self.rhs
    }

    pub fn ranges_string(&self) -> String {
        self.ranges.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "label": self.label,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "ranges": self.ranges,
            "engines": self.engines.iter().map(|e| e.name()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Identity, CorpusIoError> {
        let s = |k: &str| v.get(k).and_then(Value::as_str).ok_or_else(|| CorpusIoError::Field(k.to_string()));
        let ranges = match v.get("ranges") {
            Some(Value::Object(m)) => m
                .iter()
                .map(|(k, x)| x.as_i64().map(|x| (k.clone(), x)).ok_or_else(|| CorpusIoError::Field(format!("ranges.{k}"))))
                .collect::<Result<_, _>>()?,
            None => BTreeMap::new(),
            _ => return Err(CorpusIoError::Field("ranges".into())),
        };
        let engines = match v.get("engines") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|e| e.as_str().and_then(Engine::from_name).ok_or_else(|| CorpusIoError::Field("engines".into())))
                .collect::<Result<_, _>>()?,
            _ => vec![Engine::L, Engine::X],
        };
        Ok(Identity {
            id: s("id")?.to_string(),
            label: v.get("label").and_then(Value::as_str).unwrap_or("").to_string(),
            lhs: parse_element(s("lhs")?)?,
            rhs: parse_element(s("rhs")?)?,
            ranges,
            engines,
        })
    }
}

#[derive(Debug, Error)]
pub enum CorpusIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json on line {0}: {1}")]
    Json(usize, serde_json::Error),
    #[error("missing or malformed field {0}")]
    Field(String),
    #[error("expression: {0}")]
    Parse(#[from] ParseError),
}

pub fn write_jsonl<W: Write>(ids: &[Identity], mut w: W) -> std::io::Result<()> {
    for x in ids {
        writeln!(w, "{}", x.to_json())?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<Identity>, CorpusIoError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line).map_err(|e| CorpusIoError::Json(n + 1, e))?;
        out.push(Identity::from_json(&v)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    /// The nonzero normal form (or a description of the nonzero operator).
    Fail(String),
    Error(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    RepresentationConsistent,
    Failed,
    EngineDisagreement,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::RepresentationConsistent => "representation-consistent",
            Status::Failed => "FAILED",
            Status::EngineDisagreement => "ENGINE-DISAGREEMENT",
            Status::Error => "ERROR",
        }
    }

    pub fn is_pass(self) -> bool {
        matches!(self, Status::Verified | Status::RepresentationConsistent)
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub identity: Identity,
    pub outcomes: Vec<(Engine, Outcome)>,
    pub status: Status,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn failures(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| !e.status.is_pass()).collect()
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures().is_empty() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "id": e.identity.id,
                        "ranges": e.identity.ranges,
                        "status": e.status.label(),
                        "engines": e.outcomes.iter().map(|(g, o)| {
                            let (res, detail) = match o {
                                Outcome::Pass => ("pass", String::new()),
                                Outcome::Fail(s) => ("fail", s.clone()),
                                Outcome::Error(s) => ("error", s.clone()),
                            };
                            json!({"engine": g.name(), "result": res, "detail": detail})
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{:<28} {:<40} {}", e.status.label(), e.identity.id, e.identity.ranges_string())?;
            if !e.status.is_pass() {
                writeln!(f, "    lhs: {}", e.identity.lhs)?;
                writeln!(f, "    rhs: {}", e.identity.rhs)?;
                for (g, o) in &e.outcomes {
                    match o {
                        Outcome::Pass => writeln!(f, "    {}: pass", g.name())?,
                        Outcome::Fail(s) => writeln!(f, "    {}: nonzero {}", g.name(), s)?,
                        Outcome::Error(s) => writeln!(f, "    {}: error {}", g.name(), s)?,
                    }
                }
            }
        }
        writeln!(
            f,
            "total {}  verified {}  representation-consistent {}  failed {}",
            self.entries.len(),
            self.count(Status::Verified),
            self.count(Status::RepresentationConsistent),
            self.failures().len()
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Keep only identities whose id starts with this prefix.
    pub only: Option<String>,
    /// Tensor ranks used by the representation engine (quotient identities use their own r).
    pub rep_ranks: Vec<u32>,
    /// Largest n checked by the representation engine.
    pub rep_max_n: u8,
    /// Restrict to these engines when set.
    pub engines: Option<Vec<Engine>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { only: None, rep_ranks: vec![1, 2], rep_max_n: 3, engines: None }
    }
}

// ---------------------------------------------------------------------------
// engine caches

fn cached<K: std::hash::Hash + Eq + Copy, V>(cell: &'static OnceLock<Mutex<HashMap<K, Arc<V>>>>, k: K, make: impl FnOnce() -> V) -> Arc<V> {
    let m = cell.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = m.lock().unwrap().get(&k) {
        return v.clone();
    }
    let v = Arc::new(make());
    m.lock().unwrap().entry(k).or_insert(v).clone()
}

fn x_system(n: u8) -> Arc<RewriteSystem> {
    static C: OnceLock<Mutex<HashMap<u8, Arc<RewriteSystem>>>> = OnceLock::new();
    cached(&C, n, || lusztig_rules(n))
}

fn classical_system(n: u8) -> Arc<RewriteSystem> {
    static C: OnceLock<Mutex<HashMap<u8, Arc<RewriteSystem>>>> = OnceLock::new();
    cached(&C, n, || classical_rules(n))
}

fn quantum_rep(n: u8, r: u32) -> Arc<QuantumRep> {
    static C: OnceLock<Mutex<HashMap<(u8, u32), Arc<QuantumRep>>>> = OnceLock::new();
    cached(&C, (n, r), || QuantumRep::new(n as usize, r as usize))
}

fn classical_rep(n: u8, r: u32) -> Arc<ClassicalRep> {
    static C: OnceLock<Mutex<HashMap<(u8, u32), Arc<ClassicalRep>>>> = OnceLock::new();
    cached(&C, (n, r), || ClassicalRep::new(n as usize, r as usize))
}

/// True when the element uses letters of the quantum alphabets.
pub fn is_quantum(x: &Element) -> bool {
    x.terms().any(|(w, _)| {
        w.iter().any(|g| {
            matches!(
                g,
                Gen::L { .. } | Gen::K { .. } | Gen::KBar(_) | Gen::QX { .. } | Gen::QXBar { .. } | Gen::KBracket { .. } | Gen::QIdem(_)
            )
        })
    })
}

fn nf_outcome(r: Result<Element, impl fmt::Display>) -> Outcome {
    match r {
        Ok(e) if e.is_zero() => Outcome::Pass,
        Ok(e) => Outcome::Fail(e.to_string()),
        Err(e) => Outcome::Error(e.to_string()),
    }
}

fn run_engine(id: &Identity, g: Engine, opts: &RunOptions) -> Option<Outcome> {
    let n = id.n();
    let d = id.difference();
    let quantum = is_quantum(&id.lhs) || is_quantum(&id.rhs);
    Some(match g {
        Engine::L => nf_outcome(l_normal_form(n, &d)),
        Engine::X => nf_outcome(x_system(n).normal_form(&d)),
        Engine::Classical => nf_outcome(classical_system(n).normal_form(&d)),
        Engine::Schur => {
            let r = *id.ranges.get("r")? as u32;
            if quantum {
                nf_outcome(quantum_schur_normal_form(n, r, &d))
            } else {
                nf_outcome(schur_normal_form(n, r, &d))
            }
        }
        Engine::Rep => {
            let ranks: Vec<u32> = match id.ranges.get("r") {
                Some(&r) => vec![r as u32],
                None if n <= opts.rep_max_n => opts.rep_ranks.clone(),
                None => return None,
            };
            let mut bad = Vec::new();
            for r in ranks {
                let op = if quantum { quantum_rep(n, r).act(&d) } else { classical_rep(n, r).act(&d) };
                match op {
                    Ok(o) if o.is_zero() => {}
                    Ok(_) => bad.push(format!("nonzero operator at r={r}")),
                    Err(e) => return Some(Outcome::Error(format!("r={r}: {e}"))),
                }
            }
            if bad.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(bad.join("; "))
            }
        }
    })
}

/// Checks one identity with all of its engines.
pub fn check_identity(id: &Identity, opts: &RunOptions) -> Entry {
    let outcomes: Vec<(Engine, Outcome)> = id
        .engines
        .iter()
        .filter(|g| opts.engines.as_ref().map_or(true, |s| s.contains(g)))
        .filter_map(|&g| run_engine(id, g, opts).map(|o| (g, o)))
        .collect();
    let any = |p: &dyn Fn(&(Engine, Outcome)) -> bool| outcomes.iter().any(p);
    let status = if any(&|(_, o)| matches!(o, Outcome::Error(_))) || outcomes.is_empty() {
        Status::Error
    } else if !any(&|(_, o)| matches!(o, Outcome::Fail(_))) {
        if any(&|(g, _)| g.is_normal_form()) {
            Status::Verified
        } else {
            Status::RepresentationConsistent
        }
    } else if any(&|(_, o)| *o == Outcome::Pass) {
        Status::EngineDisagreement
    } else {
        Status::Failed
    };
    Entry { identity: id.clone(), outcomes, status }
}

/// Verifies the corpus in parallel; entries keep the corpus order.
pub fn run_corpus(corpus: &[Identity], opts: &RunOptions) -> Report {
    let selected: Vec<&Identity> = corpus.iter().filter(|x| opts.only.as_ref().map_or(true, |p| x.id.starts_with(p.as_str()))).collect();
    let entries = selected.par_iter().map(|x| check_identity(x, opts)).collect();
    Report { entries }
}

/// Map from label to the transcribed ids covering it (Ω images excluded).
pub fn coverage_report(corpus: &[Identity]) -> BTreeMap<String, BTreeSet<String>> {
    let mut m: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for x in corpus {
        if x.id.ends_with("/omega") {
            continue;
        }
        m.entry(x.label.clone()).or_default().insert(x.id.clone());
    }
    m
}

/// In-scope labels without any corpus id.
pub fn uncovered_labels(corpus: &[Identity], labels: &[&str]) -> Vec<String> {
    let cov = coverage_report(corpus);
    labels.iter().filter(|l| cov.get(**l).map_or(true, |s| s.is_empty())).map(|l| l.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{commutation_corpus, CorpusConfig};

    fn ident(id: &str, lhs: &str, rhs: &str, n: i64, engines: Vec<Engine>) -> Identity {
        let mut ranges = BTreeMap::new();
        ranges.insert("n".into(), n);
        Identity { id: id.into(), label: "t".into(), lhs: parse_element(lhs).unwrap(), rhs: parse_element(rhs).unwrap(), ranges, engines }
    }

    #[test]
    fn empty_corpus() {
        let r = run_corpus(&[], &RunOptions::default());
        assert!(r.entries.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn statuses() {
        let opts = RunOptions::default();
        let good = ident("a", "e1*f1", "f1*e1 + h1 - h2", 2, vec![Engine::Classical, Engine::Rep]);
        assert_eq!(check_identity(&good, &opts).status, Status::Verified);
        let repo = ident("b", "e1*f1", "f1*e1 + h1 - h2", 2, vec![Engine::Rep]);
        assert_eq!(check_identity(&repo, &opts).status, Status::RepresentationConsistent);
        let bad = ident("c", "e1*f1", "f1*e1", 2, vec![Engine::Classical, Engine::Rep]);
        let e = check_identity(&bad, &opts);
        assert_eq!(e.status, Status::Failed);
        assert!(matches!(&e.outcomes[0].1, Outcome::Fail(s) if s == "h1 - h2"));
    }

    #[test]
    fn jsonl_round_trip() {
        let cfg = CorpusConfig { max_n: 2, max_exp: 1, schur_grid: vec![] };
        let c = commutation_corpus(&cfg);
        let mut buf = Vec::new();
        write_jsonl(&c, &mut buf).unwrap();
        let back = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back.len(), c.len());
        for (a, b) in c.iter().zip(&back) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.lhs, b.lhs);
            assert_eq!(a.rhs, b.rhs);
            assert_eq!(a.ranges, b.ranges);
            assert_eq!(a.engines, b.engines);
        }
    }

    #[test]
    fn spec_examples() {
        let cfg = CorpusConfig { max_n: 2, max_exp: 2, schur_grid: vec![] };
        let c = commutation_corpus(&cfg);
        let opts = RunOptions { only: Some("odd-square".into()), ..Default::default() };
        let r = run_corpus(&c, &opts);
        assert!(!r.entries.is_empty());
        assert_eq!(r.exit_code(), 0, "{r}");
        let opts = RunOptions { only: Some("QQ4/EbarFbar".into()), ..Default::default() };
        let r = run_corpus(&c, &opts);
        assert!(!r.entries.is_empty());
        assert_eq!(r.exit_code(), 0, "{r}");
    }

    #[test]
    fn default_corpus_has_no_failures() {
        let corpus = commutation_corpus(&CorpusConfig::default());
        let report = run_corpus(&corpus, &RunOptions::default());
        let bad: Vec<String> = report.failures().iter().map(|e| format!("{} {}", e.identity.id, e.identity.ranges_string())).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert_eq!(report.count(Status::EngineDisagreement), 0);
        assert_eq!(report.exit_code(), 0);
        for e in &report.entries {
            if e.outcomes.len() >= 2 {
                assert!(e.outcomes.iter().all(|(_, o)| *o == Outcome::Pass), "{}", e.identity.id);
            }
        }
    }

    #[test]
    fn coverage() {
        let corpus = commutation_corpus(&CorpusConfig { max_n: 4, max_exp: 1, ..CorpusConfig::default() });
        let cov = coverage_report(&corpus);
        assert_eq!(cov["Lemma q-ppee"].len(), 8);
        assert!(cov["Prop div-root"].len() >= 5);
        assert!(!cov.contains_key("Lemma nonexistent"));
        assert_eq!(uncovered_labels(&corpus, &["Lemma nonexistent"]), vec!["Lemma nonexistent".to_string()]);
        assert!(uncovered_labels(&corpus, crate::corpus::IN_SCOPE_LABELS).is_empty());
    }

    #[test]
    fn only_filter() {
        let corpus = commutation_corpus(&CorpusConfig { max_n: 3, max_exp: 2, ..CorpusConfig::default() });
        let opts = RunOptions { only: Some("q-ppoo".into()), ..RunOptions::default() };
        let report = run_corpus(&corpus, &opts);
        assert!(!report.entries.is_empty());
        assert!(report.entries.iter().all(|e| e.identity.id.starts_with("q-ppoo")));
        assert_eq!(report.exit_code(), 0);
    }
}
