use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use queerkit::classical::{classical_rules, dim_schur, dim_schur_zero, schur_basis, schur_normal_form};
use queerkit::corpus::{commutation_corpus, CorpusConfig, IN_SCOPE_LABELS};
use queerkit::expr::parse_element;
use queerkit::freealg::{Element, Gen};
use queerkit::quantum::{l_normal_form, quantum_schur_basis, quantum_schur_normal_form, x_normal_form};
use queerkit::scalar::Scalar;
use queerkit::tensor_rep::{
    hecke_clifford_generators, hecke_clifford_letter, sergeev_generators, sergeev_letter, supercommutant_dim, ClassicalRep, QuantumRep,
    SparseOperator, TensorSpace,
};
use queerkit::verify::{coverage_report, is_quantum, run_corpus, uncovered_labels, Engine, RunOptions};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NfEngine {
    #[value(name = "L")]
    L,
    #[value(name = "X")]
    X,
    #[value(name = "classical")]
    Classical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "queerkit", version, about = "Normal forms, Schur superalgebras and tensor representations for q(n)")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for randomized subcommand options.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Normal form of an element given inline, as JSON, or on stdin.
    Nf {
        expr: Option<String>,
        #[arg(long, value_enum)]
        engine: Option<NfEngine>,
        /// Rank; inferred from the element when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
        n: Option<u8>,
        /// Reduce in the Schur quotient of degree r.
        #[arg(long)]
        r: Option<u32>,
    },
    /// List the basis elements of the Schur superalgebra.
    Basis {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
        n: u8,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        quantum: bool,
    },
    /// Dimensions of Q(n,r) and of its zero part.
    Dim {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
        n: u8,
        #[arg(long)]
        r: u32,
    },
    /// Matrix of a generator on the tensor space.
    Rep {
        #[arg(long = "gen")]
        generator: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
        n: u8,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q0: Option<String>,
    },
    /// Dimension of the supercommutant of the Sergeev or Hecke-Clifford action.
    Commutant {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..))]
        n: u8,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        quantum: bool,
        #[arg(long)]
        q0: Option<String>,
    },
    /// Verify the commutation corpus.
    Corpus {
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..))]
        max_n: u8,
        #[arg(long, default_value_t = 3)]
        max_exp: u32,
        /// Comma-separated engine names (L, X, classical, schur, rep).
        #[arg(long)]
        engines: Option<String>,
        /// Check a random subset of this size, drawn with --seed.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Report corpus coverage of the in-scope labels.
    Covercheck,
}

fn parse_q0(s: &str) -> Result<BigRational, CliError> {
    let q: BigRational = s.parse().map_err(|_| CliError::Usage(format!("--q0 expects a rational, got {s:?}")))?;
    if q == BigRational::from_integer(0.into()) {
        return Err(CliError::Usage("--q0 must be nonzero".into()));
    }
    Ok(q)
}

fn read_element(expr: Option<String>) -> Result<Element, CliError> {
    let text = match expr {
        Some(s) if s != "-" => s,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(compute)?;
            s
        }
    };
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| CliError::Usage(format!("bad JSON: {e}")))?;
        Element::from_json(&v).map_err(|e| CliError::Usage(e.to_string()))
    } else {
        parse_element(t).map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn gen_rank(g: &Gen) -> u8 {
    match g {
        Gen::HBinom { i, .. } | Gen::HBar(i) | Gen::K { i, .. } | Gen::KBar(i) | Gen::KBracket { i, .. } => *i,
        Gen::X { i, j, .. } | Gen::XBar { i, j } | Gen::QX { i, j, .. } | Gen::QXBar { i, j } => (*i).max(*j),
        Gen::L { i, j } => i.unsigned_abs().max(j.unsigned_abs()),
        Gen::Idem(l) | Gen::QIdem(l) => l.len() as u8,
        Gen::Slot { g, .. } => gen_rank(g),
        Gen::SwapS(_) | Gen::Cliff(_) | Gen::HeckeT(_) => 0,
    }
}

fn element_rank(x: &Element) -> u8 {
    x.terms().flat_map(|(w, _)| w.iter().map(gen_rank)).max().unwrap_or(1).max(1)
}

fn emit(format: Format, table: String, value: Value) {
    match format {
        Format::Table => println!("{table}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn nf(format: Format, expr: Option<String>, engine: Option<NfEngine>, n: Option<u8>, r: Option<u32>) -> Result<(), CliError> {
    let x = read_element(expr)?;
    let n = n.unwrap_or_else(|| element_rank(&x));
    let quantum = is_quantum(&x);
    let engine = engine.unwrap_or(if quantum { NfEngine::L } else { NfEngine::Classical });
    let y = match (engine, r) {
        (NfEngine::Classical, _) if quantum => return Err(CliError::Usage("the classical engine needs a classical element".into())),
        (NfEngine::L | NfEngine::X, _) if !quantum && !x.terms().all(|(w, _)| w.is_empty()) => {
            return Err(CliError::Usage("the L and X engines need a quantum element".into()))
        }
        (NfEngine::Classical, Some(r)) => schur_normal_form(n, r, &x),
        (NfEngine::Classical, None) => classical_rules(n).normal_form(&x),
        (_, Some(r)) => quantum_schur_normal_form(n, r, &x),
        (NfEngine::L, None) => l_normal_form(n, &x),
        (NfEngine::X, None) => x_normal_form(n, &x),
    }
    .map_err(compute)?;
    emit(format, y.to_string(), y.to_json());
    Ok(())
}

fn basis(format: Format, n: u8, r: u32, quantum: bool) -> Result<(), CliError> {
    let b = if quantum { quantum_schur_basis(n as usize, r) } else { schur_basis(n as usize, r) };
    let rows: Vec<String> =
        b.iter().map(|e| format!("A0={:?} A1={:?} lambda={:?}  {}", e.a.a0, e.a.a1, e.lambda, e.element)).collect();
    let values: Vec<Value> = b
        .iter()
        .map(|e| {
            let mut v = serde_json::to_value(e).expect("serializable");
            v["element"] = Value::String(e.element.to_string());
            v
        })
        .collect();
    emit(format, rows.join("\n"), Value::Array(values));
    Ok(())
}

fn dim(format: Format, n: u8, r: u32) -> Result<(), CliError> {
    let (d, d0) = (dim_schur(n as u32, r), dim_schur_zero(n as u32, r));
    emit(
        format,
        format!("dim Q({n},{r}) = {d}; dim Q0({n},{r}) = {d0}"),
        json!({"n": n, "r": r, "dim": d.to_string(), "dim_zero": d0.to_string()}),
    );
    Ok(())
}

fn to_scalar_op(op: SparseOperator<BigRational>) -> SparseOperator<Scalar> {
    let mut out = SparseOperator::zero(op.dim, op.parity.unwrap_or(0));
    out.parity = op.parity;
    for (i, j, v) in op.entries() {
        out.set(i, j, Scalar::from_rational(v));
    }
    out
}

fn rep(format: Format, generator: &str, n: u8, r: u32, q0: Option<String>) -> Result<(), CliError> {
    let x = parse_element(generator).map_err(|e| CliError::Usage(e.to_string()))?;
    let g = match x.terms().next() {
        Some((w, c)) if x.len() == 1 && w.len() == 1 && c.is_one() => w[0].clone(),
        _ => return Err(CliError::Usage(format!("{generator:?} is not a single generator"))),
    };
    let (nn, rr) = (n as usize, r as usize);
    let op = match &g {
        Gen::SwapS(_) => sergeev_letter(&g, nn, rr),
        Gen::Cliff(_) if q0.is_none() => sergeev_letter(&g, nn, rr),
        Gen::Cliff(_) | Gen::HeckeT(_) => hecke_clifford_letter(&g, nn, rr),
        _ if is_quantum(&x) => QuantumRep::new(nn, rr).letter(&g),
        _ => ClassicalRep::new(nn, rr).letter(&g),
    }
    .map_err(compute)?;
    let op = match q0 {
        Some(s) => to_scalar_op(op.specialize(&parse_q0(&s)?).map_err(compute)?),
        None => op,
    };
    let mut lines = vec![format!("{g} on V^(x{r}), n = {n}: dim {}, parity {:?}, {} nonzero entries", op.dim, op.parity, op.nnz())];
    lines.extend(op.entries().map(|(i, j, v)| format!("{i} {j} {v}")));
    emit(format, lines.join("\n"), op.to_json());
    Ok(())
}

fn commutant(format: Format, n: u8, r: u32, quantum: bool, q0: Option<String>) -> Result<(), CliError> {
    let (nn, rr) = (n as usize, r as usize);
    let space = TensorSpace::new(nn, rr);
    let gens = if quantum { hecke_clifford_generators(nn, rr) } else { sergeev_generators(nn, rr) };
    let d = match q0 {
        Some(s) => {
            let q = parse_q0(&s)?;
            let sp: Vec<_> = gens.iter().map(|g| g.specialize(&q)).collect::<Result<_, _>>().map_err(compute)?;
            supercommutant_dim(&space, &sp)
        }
        None => supercommutant_dim(&space, &gens),
    };
    let algebra = if quantum { "Hecke-Clifford" } else { "Sergeev" };
    emit(format, format!("supercommutant of the {algebra} action on V^(x{r}), n = {n}: {d}"), json!({"n": n, "r": r, "quantum": quantum, "dim": d}));
    Ok(())
}

fn corpus(
    format: Format,
    seed: u64,
    only: Option<String>,
    max_n: u8,
    max_exp: u32,
    engines: Option<String>,
    sample: Option<usize>,
) -> Result<i32, CliError> {
    let engines = match engines {
        Some(s) => Some(
            s.split(',')
                .map(|e| Engine::from_name(e.trim()).ok_or_else(|| CliError::Usage(format!("unknown engine {e:?}"))))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let mut ids = commutation_corpus(&CorpusConfig { max_n, max_exp, ..CorpusConfig::default() });
    if let Some(k) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picks: Vec<usize> = (0..ids.len()).collect();
        picks.shuffle(&mut rng);
        picks.truncate(k);
        picks.sort_unstable();
        ids = picks.into_iter().map(|i| ids[i].clone()).collect();
    }
    let report = run_corpus(&ids, &RunOptions { only, engines, ..RunOptions::default() });
    emit(format, report.to_string(), report.to_json());
    Ok(report.exit_code())
}

fn covercheck(format: Format) -> Result<i32, CliError> {
    let ids = commutation_corpus(&CorpusConfig::default());
    let cov = coverage_report(&ids);
    let missing = uncovered_labels(&ids, IN_SCOPE_LABELS);
    let mut lines: Vec<String> = cov.iter().map(|(l, s)| format!("{l}: {} ids", s.len())).collect();
    lines.extend(missing.iter().map(|l| format!("{l}: MISSING")));
    let value = json!({
        "coverage": cov.iter().map(|(l, s)| (l.clone(), json!(s))).collect::<serde_json::Map<_, _>>(),
        "missing": missing,
    });
    emit(format, lines.join("\n"), value);
    Ok(if missing.is_empty() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let f = cli.format;
    match cli.cmd {
        Cmd::Nf { expr, engine, n, r } => nf(f, expr, engine, n, r).map(|_| 0),
        Cmd::Basis { n, r, quantum } => basis(f, n, r, quantum).map(|_| 0),
        Cmd::Dim { n, r } => dim(f, n, r).map(|_| 0),
        Cmd::Rep { generator, n, r, q0 } => rep(f, &generator, n, r, q0).map(|_| 0),
        Cmd::Commutant { n, r, quantum, q0 } => commutant(f, n, r, quantum, q0).map(|_| 0),
        Cmd::Corpus { only, max_n, max_exp, engines, sample } => corpus(f, cli.seed, only, max_n, max_exp, engines, sample),
        Cmd::Covercheck => covercheck(f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("queerkit: {e}");
            ExitCode::from(e.code())
        }
    }
}
