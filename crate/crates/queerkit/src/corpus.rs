//! The identity corpus: commutation formulas transcribed as (lhs, rhs) templates
//! over index and exponent variables, instantiated for every admissible pattern.

use crate::expr::{parse_template, ParseError};
use crate::freealg::Element;
use crate::quantum::{dj_relations, omega};
use crate::scalar::{qfactorial, Scalar};
use crate::verify::{Engine, Identity};
use std::collections::BTreeMap;

/// Instantiation bounds.
#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub max_n: u8,
    pub max_exp: u32,
    /// (n, r) pairs for quotient identities.
    pub schur_grid: Vec<(u8, u32)>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { max_n: 4, max_exp: 3, schur_grid: vec![(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] }
    }
}

/// Variable bindings of one instantiation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Binds {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub l: i64,
    pub a: i64,
    pub m: i64,
    pub s: i64,
}

impl Binds {
    fn get(&self, v: char) -> i64 {
        match v {
            'i' => self.i,
            'j' => self.j,
            'k' => self.k,
            'l' => self.l,
            'a' => self.a,
            'm' => self.m,
            's' => self.s,
            _ => panic!("unknown variable {v}"),
        }
    }

    fn set(&mut self, v: char, x: i64) {
        match v {
            'i' => self.i = x,
            'j' => self.j = x,
            'k' => self.k = x,
            'l' => self.l = x,
            'a' => self.a = x,
            'm' => self.m = x,
            's' => self.s = x,
            _ => panic!("unknown variable {v}"),
        }
    }

    fn parse(&self, t: &str) -> Result<Element, ParseError> {
        parse_template(t, &[("i", self.i), ("j", self.j), ("k", self.k), ("l", self.l), ("a", self.a), ("m", self.m), ("s", self.s)])
    }
}

/// Evaluates "i<k=j<l or i=k,j<l" style conditions; an empty string is true.
pub fn condition_holds(cond: &str, b: &Binds) -> bool {
    if cond.trim().is_empty() {
        return true;
    }
    cond.split(" or ").any(|alt| alt.split(',').all(|chain| chain_holds(chain.trim(), b)))
}

fn chain_holds(chain: &str, b: &Binds) -> bool {
    let c: Vec<char> = chain.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut prev = b.get(c[0]);
    pos += 1;
    while pos < c.len() {
        let op: String = if pos + 1 < c.len() && c[pos + 1] == '=' {
            pos += 2;
            c[pos - 2..pos].iter().collect()
        } else {
            pos += 1;
            c[pos - 1].to_string()
        };
        let next = b.get(c[pos]);
        pos += 1;
        let ok = match op.as_str() {
            "<" => prev < next,
            "<=" => prev <= next,
            ">" => prev > next,
            ">=" => prev >= next,
            "=" => prev == next,
            "!=" => prev != next,
            _ => panic!("bad operator {op}"),
        };
        if !ok {
            return false;
        }
        prev = next;
    }
    true
}

type Build = Box<dyn Fn(&Binds) -> Result<(Element, Element), ParseError> + Send + Sync>;

enum Cond {
    Chain(&'static str),
    Pred(fn(&Binds) -> bool),
}

struct Case {
    name: String,
    cond: Cond,
    build: Build,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Quantum,
    Classical,
}

struct Family {
    id: &'static str,
    label: &'static str,
    vars: &'static str,
    base: &'static str,
    /// exponent variables: "", "m" or "ms"
    exps: &'static str,
    kind: Kind,
    omega: bool,
    cases: Vec<Case>,
}

fn tpl(lhs: &'static str, rhs: &'static str) -> Build {
    Box::new(move |b| Ok((b.parse(lhs)?, b.parse(rhs)?)))
}

fn dyn_tpl(f: impl Fn(&Binds) -> (String, String) + Send + Sync + 'static) -> Build {
    Box::new(move |b| {
        let (l, r) = f(b);
        Ok((b.parse(&l)?, b.parse(&r)?))
    })
}

fn table(rows: &[(&'static str, &'static str, &'static str)], lhs: &'static str) -> Vec<Case> {
    rows.iter()
        .enumerate()
        .map(|(n, (name, cond, rhs))| Case {
            name: if name.is_empty() { format!("case{}", n + 1) } else { name.to_string() },
            cond: Cond::Chain(cond),
            build: tpl(lhs, rhs),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// string helpers for the divided-power formulas

const QQ: &str = "(q-q^-1)";

fn qx(i: i64, j: i64, m: i64) -> String {
    match m {
        m if m < 0 => "0".into(),
        0 => "1".into(),
        _ => format!("Xd({i},{j};{m})"),
    }
}

fn cx(i: i64, j: i64, m: i64) -> String {
    match m {
        m if m < 0 => "0".into(),
        0 => "1".into(),
        _ => format!("xd({i},{j};{m})"),
    }
}

fn qp(e: i64) -> String {
    format!("q^{e}")
}

fn fact(t: i64) -> String {
    format!("({})", qfactorial(t as u32))
}

fn kpow(i: i64, e: i64) -> String {
    if e == 0 {
        "1".into()
    } else {
        format!("K{i}^{e}")
    }
}

/// [K_i K_j^{-1}; c / t] as a product of quotients.
fn bracket_ij(i: i64, j: i64, c: i64, t: i64) -> String {
    let mut f = vec!["1".to_string()];
    for s in 1..=t {
        f.push(format!("(K{i}*K{j}^-1*q^{} - K{i}^-1*K{j}*q^{})/(q^{s}-q^-{s})", c - s + 1, -c + s - 1));
    }
    f.join("*")
}

/// binom(h_i − h_j + c, t) as a falling factorial over t!.
fn hbinom_diff(i: i64, j: i64, c: i64, t: i64) -> String {
    let mut f = vec!["1".to_string()];
    for u in 0..t {
        f.push(format!("(h{i}-h{j}{})", offset(c - u)));
    }
    let tf: i64 = (1..=t).product();
    format!("{}/{tf}", f.join("*"))
}

fn offset(c: i64) -> String {
    if c < 0 {
        format!("-{}", -c)
    } else {
        format!("+{c}")
    }
}

fn sum(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.into_iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" + ")
}

fn tmin(b: &Binds) -> i64 {
    b.m.min(b.s)
}

// ---------------------------------------------------------------------------
// quantum commutation lemmas

fn six_families() -> Vec<Family> {
    let mut v = Vec::new();
    let q = Kind::Quantum;
    v.push(Family {
        id: "q-ppee",
        label: "Lemma q-ppee",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("", "i<j<k<l or i<k<l<j", "X({k},{l})*X({i},{j})"),
                ("", "i<k<j=l or i=k<j<l", "q^-1*X({k},{l})*X({i},{j})"),
                ("", "i<k=j<l", "q*X({k},{l})*X({i},{j}) + X({i},{l})"),
                ("", "i<k<j<l", "X({k},{l})*X({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})"),
            ],
            "X({i},{j})*X({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-ppee-extra",
        label: "Lemma q-ppee",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("", "k<l<i<j or k<i<j<l", "X({k},{l})*X({i},{j})"),
                ("", "k<i<l=j or k=i<l<j", "q*X({k},{l})*X({i},{j})"),
                ("", "k<i=l<j", "q^-1*X({k},{l})*X({i},{j}) - q^-1*X({k},{j})"),
                ("", "k<i<l<j", "X({k},{l})*X({i},{j}) + (q-q^-1)*X({k},{j})*X({i},{l})"),
            ],
            "X({i},{j})*X({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-pnee",
        label: "Lemma q-pnee",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("", "i=l,j=k", "X({k},{l})*X({i},{j}) + (K{i}*K{j}^-1 - K{i}^-1*K{j})/(q-q^-1)"),
                ("", "i<j<=l<k or i<l<k<j", "X({k},{l})*X({i},{j})"),
                ("", "i=l<j<k", "X({k},{l})*X({i},{j}) - K{l}^-1*K{j}*X({k},{j})"),
                ("", "i<l<j=k", "X({k},{l})*X({i},{j}) + K{l}^-1*K{j}*X({i},{l})"),
                ("", "i<l<j<k", "X({k},{l})*X({i},{j}) + (q-q^-1)*K{l}^-1*K{j}*X({k},{j})*X({i},{l})"),
            ],
            "X({i},{j})*X({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-pnee-omega",
        label: "Lemma q-pnee",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "",
        kind: q,
        omega: false,
        cases: table(
            &[
                ("", "l<k<=i<j or l<i<j<k", "X({k},{l})*X({i},{j})"),
                ("", "l=i<k<j", "X({k},{l})*X({i},{j}) - X({k},{j})*K{i}*K{k}^-1"),
                ("", "l<i<k=j", "X({k},{l})*X({i},{j}) + X({i},{l})*K{i}*K{k}^-1"),
                ("", "l<i<k<j", "X({k},{l})*X({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})*K{i}*K{k}^-1"),
            ],
            "X({i},{j})*X({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-ppeo",
        label: "Lemma q-ppeo",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("part1", "i=k,j=l or i<j<k<l or k<l<i<j or k<i<j<l", "Xb({k},{l})*X({i},{j})"),
                ("case1", "i<k<l<j", "Xb({k},{l})*X({i},{j}) + (q-q^-1)*(Xb({k},{j})*X({i},{l}) - X({k},{j})*Xb({i},{l}))"),
                ("case2", "i=k<j<l", "q^-1*Xb({k},{l})*X({i},{j})"),
                ("case3", "i<k=j<l", "q*Xb({k},{l})*X({i},{j}) + Xb({i},{l})"),
                ("case4", "i<k<j=l", "q*Xb({k},{l})*X({i},{j}) - (q-q^-1)*X({k},{j})*Xb({i},{l})"),
                ("case5", "i<k<j<l", "Xb({k},{l})*X({i},{j}) - (q-q^-1)*X({k},{j})*Xb({i},{l})"),
                ("case6", "k=i<l<j", "q^-1*Xb({k},{l})*X({i},{j}) + q^-1*(q-q^-1)*Xb({k},{j})*X({i},{l})"),
                ("case7", "k<i=l<j", "q^-1*Xb({k},{l})*X({i},{j}) - q^-1*Xb({k},{j})"),
                ("case8", "k<i<l=j", "q*Xb({k},{l})*X({i},{j})"),
                ("case9", "k<i<l<j", "Xb({k},{l})*X({i},{j}) + (q-q^-1)*Xb({k},{j})*X({i},{l})"),
            ],
            "X({i},{j})*Xb({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-pneo",
        label: "Lemma q-pneo",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("part1", "i<j<=l<k or l<k<=i<j or l<i<j<k", "Xb({k},{l})*X({i},{j})"),
                ("case1", "i=l,j=k", "Xb({k},{l})*X({i},{j}) - (Kb{j}*K{i}^-1 - K{j}^-1*Kb{i})"),
                (
                    "case2",
                    "i<l<k<j",
                    "Xb({k},{l})*X({i},{j}) + q*(q-q^-1)*K{l}^-1*K{k}^-1*(Xb({k},{j})*X({i},{l}) - X({k},{j})*Xb({i},{l}))",
                ),
                ("case3", "i=l<j<k", "Xb({k},{l})*X({i},{j}) - K{i}^-1*K{j}*Xb({k},{j})"),
                (
                    "case4",
                    "i<l<j=k",
                    "Xb({k},{l})*X({i},{j}) + (q-q^-1)*K{l}^-1*Kb{j}*X({i},{l}) + K{l}^-1*K{j}^-1*Xb({i},{l})",
                ),
                ("case5", "i<l<j<k", "Xb({k},{l})*X({i},{j}) + (q-q^-1)*K{l}^-1*K{j}*Xb({k},{j})*X({i},{l})"),
                (
                    "case6",
                    "l=i<k<j",
                    "Xb({k},{l})*X({i},{j}) - Xb({k},{j})*K{i}^-1*K{k}^-1 - (q-q^-1)*X({k},{j})*Kb{i}*K{k}^-1",
                ),
                ("case7", "l<i<k=j", "Xb({k},{l})*X({i},{j}) + Xb({i},{l})*K{i}*K{k}^-1"),
                ("case8", "l<i<k<j", "Xb({k},{l})*X({i},{j}) - (q-q^-1)*K{i}*K{k}^-1*X({k},{j})*Xb({i},{l})"),
            ],
            "X({i},{j})*Xb({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-ppoo",
        label: "Lemma q-ppoo",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("", "i=k,j=l", "-(q-q^-1)/(q+q^-1)*X({i},{j})^2"),
                ("", "i<j<k<l", "-Xb({k},{l})*Xb({i},{j})"),
                ("", "i<k<l<j", "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*(Xb({k},{j})*Xb({i},{l}) + X({k},{j})*X({i},{l}))"),
                ("", "i=k<j<l", "-q*Xb({k},{l})*Xb({i},{j}) - q*(q-q^-1)*X({k},{j})*X({i},{l})"),
                ("", "i<k=j<l", "-q*Xb({k},{l})*Xb({i},{j}) + X({i},{l})"),
                ("", "i<k<j=l", "-q*Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})"),
                ("", "i<k<j<l", "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})"),
            ],
            "Xb({i},{j})*Xb({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-ppoo-extra",
        label: "Lemma q-ppoo",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                ("", "k<l<i<j", "-Xb({k},{l})*Xb({i},{j})"),
                ("", "k<i<j<l", "-Xb({k},{l})*Xb({i},{j}) + (q-q^-1)*(Xb({k},{j})*Xb({i},{l}) - X({k},{j})*X({i},{l}))"),
                ("", "k=i<l<j", "-q^-1*Xb({k},{l})*Xb({i},{j}) - q^-1*(q-q^-1)*X({k},{j})*X({i},{l})"),
                ("", "k<i=l<j", "-q^-1*Xb({k},{l})*Xb({i},{j}) + q^-1*X({k},{j})"),
                ("", "k<i<l=j", "-q^-1*Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})"),
                ("", "k<i<l<j", "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*X({k},{j})*X({i},{l})"),
            ],
            "Xb({i},{j})*Xb({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-pnoo",
        label: "Lemma q-pnoo",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "",
        kind: q,
        omega: true,
        cases: table(
            &[
                (
                    "part1",
                    "i=l,j=k",
                    "-Xb({k},{l})*Xb({i},{j}) + (K{i}*K{j} - K{i}^-1*K{j}^-1)/(q-q^-1) + (q-q^-1)*Kb{i}*Kb{j}",
                ),
                ("case1", "i<j<=l<k", "-Xb({k},{l})*Xb({i},{j})"),
                (
                    "case2",
                    "i<l<k<j",
                    "-Xb({k},{l})*Xb({i},{j}) - q*(q-q^-1)*K{l}^-1*K{k}^-1*(Xb({k},{j})*Xb({i},{l}) + X({k},{j})*X({i},{l}))",
                ),
                (
                    "case3",
                    "i=l<j<k",
                    "-Xb({k},{l})*Xb({i},{j}) + q^-1*X({k},{j})*K{i}*K{j} - q^-1*(q-q^-1)*Xb({k},{j})*Kb{i}*K{j}",
                ),
                (
                    "case4",
                    "i<l<j=k",
                    "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*K{l}^-1*Kb{j}*Xb({i},{l}) + K{l}^-1*K{j}^-1*X({i},{l})",
                ),
                ("case5", "i<l<j<k", "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*K{l}^-1*K{j}*Xb({k},{j})*Xb({i},{l})"),
            ],
            "Xb({i},{j})*Xb({k},{l})",
        ),
    });
    v.push(Family {
        id: "q-pnoo-omega",
        label: "Lemma q-pnoo",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "",
        kind: q,
        omega: false,
        cases: table(
            &[
                ("", "l<k<=i<j", "-Xb({k},{l})*Xb({i},{j})"),
                (
                    "",
                    "l<i<j<k",
                    "-Xb({k},{l})*Xb({i},{j}) + q^-1*(q-q^-1)*(X({k},{j})*X({i},{l}) - Xb({k},{j})*Xb({i},{l}))*K{i}*K{j}",
                ),
                (
                    "",
                    "l=i<k<j",
                    "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*Xb({k},{j})*Kb{i}*K{k}^-1 + X({k},{j})*K{i}^-1*K{k}^-1",
                ),
                (
                    "",
                    "l<i<k=j",
                    "-Xb({k},{l})*Xb({i},{j}) + q^-1*K{i}*K{j}*X({i},{l}) - q^-1*(q-q^-1)*K{i}*Kb{j}*Xb({i},{l})",
                ),
                ("", "l<i<k<j", "-Xb({k},{l})*Xb({i},{j}) - (q-q^-1)*Xb({k},{j})*Xb({i},{l})*K{i}*K{k}^-1"),
            ],
            "Xb({i},{j})*Xb({k},{l})",
        ),
    });
    let mut xk = table(
        &[
            ("even1", "a<i or j<a", "Kb{a}*X({i},{j})"),
            ("even2", "a=i", "q^-1*Kb{i}*X({i},{j}) - q^-1*Xb({i},{j})*K{i}^-1"),
            ("even3", "a=j", "q*Kb{j}*X({i},{j}) + q*Xb({i},{j})*K{j}^-1"),
            ("even4", "i<a<j", "Kb{a}*X({i},{j}) + q*(q-q^-1)*(Xb({a},{j})*X({i},{a}) - X({a},{j})*Xb({i},{a}))*K{a}^-1"),
        ],
        "X({i},{j})*Kb{a}",
    );
    xk.extend(table(
        &[
            ("odd1", "a<i or j<a", "-Kb{a}*Xb({i},{j})"),
            ("odd2", "a=i", "-q^-1*Kb{i}*Xb({i},{j}) + q^-1*X({i},{j})*K{i}^-1"),
            ("odd3", "a=j", "-q*Kb{j}*Xb({i},{j}) + q*X({i},{j})*K{j}^-1"),
            ("odd4", "i<a<j", "-Kb{a}*Xb({i},{j}) - q*(q-q^-1)*(Xb({a},{j})*Xb({i},{a}) + X({a},{j})*X({i},{a}))*K{a}^-1"),
        ],
        "Xb({i},{j})*Kb{a}",
    ));
    v.push(Family { id: "q-XKbar", label: "Lemma q-XKbar", vars: "ija", base: "i<j", exps: "", kind: q, omega: true, cases: xk });
    v
}

// ---------------------------------------------------------------------------
// divided-power propositions

fn case(name: &str, cond: &'static str, build: Build) -> Case {
    Case { name: name.to_string(), cond: Cond::Chain(cond), build }
}

fn div_families() -> Vec<Family> {
    let q = Kind::Quantum;
    let mut v = Vec::new();

    let lhs_ee = |b: &Binds| format!("{}*{}", qx(b.i, b.j, b.m), qx(b.k, b.l, b.s));
    let swap_ee = |b: &Binds| format!("{}*{}", qx(b.k, b.l, b.s), qx(b.i, b.j, b.m));
    v.push(Family {
        id: "q-div-ppee",
        label: "Prop q-div-ppee",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "ms",
        kind: q,
        omega: true,
        cases: vec![
            case("part1", "i<j<k<l or i<k<l<j", dyn_tpl(move |b| (lhs_ee(b), swap_ee(b)))),
            case("part2", "i<k<j=l or i=k<j<l", dyn_tpl(move |b| (lhs_ee(b), format!("{}*{}", qp(-b.m * b.s), swap_ee(b))))),
            case(
                "part3",
                "i<k=j<l",
                dyn_tpl(move |b| {
                    let mut t = vec![format!("{}*{}", qp(b.m * b.s), swap_ee(b))];
                    for u in 1..=tmin(b) {
                        t.push(format!(
                            "{}*{}*{}*{}",
                            qp((b.m - u) * (b.s - u)),
                            qx(b.k, b.l, b.s - u),
                            qx(b.i, b.l, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
            case(
                "part4",
                "i<k<j<l",
                dyn_tpl(move |b| {
                    let mut t = vec![swap_ee(b)];
                    for u in 1..=tmin(b) {
                        let sign = if u % 2 == 1 { "-" } else { "" };
                        t.push(format!(
                            "{sign}{}*{QQ}^{u}*{}*{}*{}*{}*{}",
                            fact(u),
                            qp(-(b.m + b.s) * u + u * (3 * u + 1) / 2),
                            qx(b.k, b.l, b.s - u),
                            qx(b.k, b.j, u),
                            qx(b.i, b.l, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
        ],
    });

    v.push(Family {
        id: "q-div-pnee",
        label: "Prop q-div-pnee",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "ms",
        kind: q,
        omega: true,
        cases: vec![
            case(
                "part1",
                "i=l,j=k",
                dyn_tpl(move |b| {
                    let mut t = vec![swap_ee(b)];
                    for u in 1..=tmin(b) {
                        t.push(format!(
                            "{}*{}*{}",
                            qx(b.k, b.l, b.s - u),
                            bracket_ij(b.i, b.j, 2 * u - b.m - b.s, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
            case("part2", "i<j<=l<k or i<l<k<j", dyn_tpl(move |b| (lhs_ee(b), swap_ee(b)))),
            case(
                "part3",
                "i=l<j<k",
                dyn_tpl(move |b| {
                    let mut t = vec![swap_ee(b)];
                    for u in 1..=tmin(b) {
                        let sign = if u % 2 == 1 { "-" } else { "" };
                        t.push(format!(
                            "{sign}{}*{}*{}*{}*{}*{}",
                            qp((b.m + b.s - u - 1) * u),
                            qx(b.k, b.l, b.s - u),
                            kpow(b.i, -u),
                            kpow(b.j, u),
                            qx(b.k, b.j, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
            case(
                "part4",
                "i<l<j=k",
                dyn_tpl(move |b| {
                    let mut t = vec![swap_ee(b)];
                    for u in 1..=tmin(b) {
                        t.push(format!(
                            "{}*{}*{}*{}*{}*{}",
                            qp((b.m + b.s - 2 * u) * u),
                            qx(b.k, b.l, b.s - u),
                            kpow(b.l, -u),
                            kpow(b.j, u),
                            qx(b.i, b.l, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
            case(
                "part5",
                "i<l<j<k",
                dyn_tpl(move |b| {
                    let mut t = vec![swap_ee(b)];
                    for u in 1..=tmin(b) {
                        t.push(format!(
                            "{}*{QQ}^{u}*{}*{}*{}*{}*{}*{}*{}",
                            qp((b.m + b.s) * u - u * (3 * u + 1) / 2),
                            fact(u),
                            qx(b.k, b.l, b.s - u),
                            kpow(b.l, -u),
                            kpow(b.j, u),
                            qx(b.k, b.j, u),
                            qx(b.i, b.l, u),
                            qx(b.i, b.j, b.m - u)
                        ));
                    }
                    (lhs_ee(b), sum(t))
                }),
            ),
        ],
    });

    let lhs_eo = |b: &Binds| format!("{}*Xb({},{})", qx(b.i, b.j, b.m), b.k, b.l);
    let swap_eo = |b: &Binds| format!("Xb({},{})*{}", b.k, b.l, qx(b.i, b.j, b.m));
    // each row: (name, condition, coefficient of the swapped term, tail builder)
    type Tail = fn(&Binds) -> Vec<String>;
    fn eo_case(name: &str, cond: &'static str, lead: fn(i64) -> i64, tail: Tail) -> Case {
        let lhs_eo = |b: &Binds| format!("{}*Xb({},{})", qx(b.i, b.j, b.m), b.k, b.l);
        let swap_eo = |b: &Binds| format!("Xb({},{})*{}", b.k, b.l, qx(b.i, b.j, b.m));
        case(
            name,
            cond,
            dyn_tpl(move |b| {
                let mut t = vec![format!("{}*{}", qp(lead(b.m)), swap_eo(b))];
                t.extend(tail(b));
                (lhs_eo(b), sum(t))
            }),
        )
    }
    let _ = (lhs_eo, swap_eo);
    v.push(Family {
        id: "q-div-ppeo",
        label: "Prop q-div-ppeo",
        vars: "ijkl",
        base: "i<j,k<l",
        exps: "m",
        kind: q,
        omega: true,
        cases: vec![
            eo_case("part1", "i=k,j=l or i<j<k<l or k<l<i<j or k<i<j<l", |_| 0, |_| vec![]),
            eo_case("part2", "i<k<l<j", |_| 0, |b| {
                vec![
                    format!("{}*{QQ}*Xb({},{})*X({},{})*{}", qp(b.m - 1), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("-{}*{QQ}*X({},{})*Xb({},{})*{}", qp(-b.m + 1), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("-q^-1*{QQ}^2*X({},{})*Xb({},{})*X({},{})*{}", b.k, b.j, b.i, b.j, b.i, b.l, qx(b.i, b.j, b.m - 2)),
                ]
            }),
            eo_case("part3", "i=k<j<l", |m| -m, |_| vec![]),
            eo_case("part4", "i<k=j<l", |m| m, |b| vec![format!("Xb({},{})*{}", b.i, b.l, qx(b.i, b.j, b.m - 1))]),
            eo_case("part5", "i<k<j=l", |m| m, |b| {
                vec![format!("-{QQ}*X({},{})*Xb({},{})*{}", b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part6", "i<k<j<l", |_| 0, |b| {
                vec![format!("-{}*{QQ}*X({},{})*Xb({},{})*{}", qp(-b.m + 1), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part7", "k=i<l<j", |m| -m, |b| {
                vec![format!("q^-1*{QQ}*Xb({},{})*X({},{})*{}", b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part8", "k<i=l<j", |m| -m, |b| vec![format!("-q^-1*Xb({},{})*{}", b.k, b.j, qx(b.i, b.j, b.m - 1))]),
            eo_case("part9", "k<i<l=j", |m| m, |_| vec![]),
            eo_case("part10", "k<i<l<j", |_| 0, |b| {
                vec![format!("{}*{QQ}*Xb({},{})*X({},{})*{}", qp(b.m - 1), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
        ],
    });

    v.push(Family {
        id: "q-div-pneo",
        label: "Prop q-div-pneo",
        vars: "ijkl",
        base: "i<j,k>l",
        exps: "m",
        kind: q,
        omega: true,
        cases: vec![
            eo_case("part1", "i<j<=l<k or l<k<=i<j or l<i<j<k", |_| 0, |_| vec![]),
            eo_case("part2", "i=l,j=k", |_| 0, |b| {
                vec![
                    format!("-{}*Kb{}*K{}^-1*{}", qp(b.m - 1), b.j, b.i, qx(b.i, b.j, b.m - 1)),
                    format!("{}*K{}^-1*Kb{}*{}", qp(-b.m + 1), b.j, b.i, qx(b.i, b.j, b.m - 1)),
                    format!("-Xb({},{})*K{}^-1*K{}^-1*{}", b.i, b.j, b.j, b.i, qx(b.i, b.j, b.m - 2)),
                ]
            }),
            eo_case("part3", "i<l<k<j", |_| 0, |b| {
                let kk = format!("K{}^-1*K{}^-1", b.l, b.k);
                vec![
                    format!("{}*{QQ}*{kk}*Xb({},{})*X({},{})*{}", qp(b.m), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("-{}*{QQ}*{kk}*X({},{})*Xb({},{})*{}", qp(-b.m + 2), b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("-{QQ}^2*{kk}*X({},{})*Xb({},{})*X({},{})*{}", b.k, b.j, b.i, b.j, b.i, b.l, qx(b.i, b.j, b.m - 2)),
                ]
            }),
            eo_case("part4", "i=l<j<k", |_| 0, |b| {
                vec![format!("-{}*K{}^-1*K{}*Xb({},{})*{}", qp(b.m - 1), b.i, b.j, b.k, b.j, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part5", "i<l<j=k", |_| 0, |b| {
                vec![
                    format!("{}*{QQ}*K{}^-1*Kb{}*X({},{})*{}", qp(b.m - 1), b.l, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("{}*K{}^-1*K{}^-1*Xb({},{})*{}", qp(-b.m + 1), b.l, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1)),
                    format!("q^-1*{QQ}*K{}^-1*K{}^-1*Xb({},{})*X({},{})*{}", b.l, b.j, b.i, b.j, b.i, b.l, qx(b.i, b.j, b.m - 2)),
                ]
            }),
            eo_case("part6", "i<l<j<k", |_| 0, |b| {
                vec![format!("{}*{QQ}*K{}^-1*K{}*Xb({},{})*X({},{})*{}", qp(b.m - 1), b.l, b.j, b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part7", "l=i<k<j", |_| 0, |b| {
                vec![
                    format!("-{}*Xb({},{})*K{}^-1*K{}^-1*{}", qp(b.m - 1), b.k, b.j, b.i, b.k, qx(b.i, b.j, b.m - 1)),
                    format!("-{}*{QQ}*X({},{})*Kb{}*K{}^-1*{}", qp(-b.m + 1), b.k, b.j, b.i, b.k, qx(b.i, b.j, b.m - 1)),
                    format!("q^-1*{QQ}*X({},{})*Xb({},{})*K{}^-1*K{}^-1*{}", b.k, b.j, b.i, b.j, b.i, b.k, qx(b.i, b.j, b.m - 2)),
                ]
            }),
            eo_case("part8", "l<i<k=j", |_| 0, |b| {
                vec![format!("{}*Xb({},{})*K{}*K{}^-1*{}", qp(-b.m + 1), b.i, b.l, b.i, b.j, qx(b.i, b.j, b.m - 1))]
            }),
            eo_case("part9", "l<i<k<j", |_| 0, |b| {
                vec![format!("-{}*{QQ}*K{}*K{}^-1*X({},{})*Xb({},{})*{}", qp(-b.m + 1), b.i, b.k, b.k, b.j, b.i, b.l, qx(b.i, b.j, b.m - 1))]
            }),
        ],
    });

    let xk = |name: &str, cond: &'static str, lead: fn(i64) -> i64, tail: Tail| -> Case {
        case(
            name,
            cond,
            dyn_tpl(move |b| {
                let mut t = vec![format!("{}*Kb{}*{}", qp(lead(b.m)), b.a, qx(b.i, b.j, b.m))];
                t.extend(tail(b));
                (format!("{}*Kb{}", qx(b.i, b.j, b.m), b.a), sum(t))
            }),
        )
    };
    v.push(Family {
        id: "q-div-XKbar",
        label: "Prop q-div-XKbar",
        vars: "ija",
        base: "i<j",
        exps: "m",
        kind: q,
        omega: true,
        cases: vec![
            xk("part1", "a<i or j<a", |_| 0, |_| vec![]),
            xk("part2", "a=i", |m| -m, |b| vec![format!("-K{}^-1*Xb({},{})*{}", b.i, b.i, b.j, qx(b.i, b.j, b.m - 1))]),
            xk("part3", "a=j", |m| m, |b| vec![format!("K{}^-1*Xb({},{})*{}", b.j, b.i, b.j, qx(b.i, b.j, b.m - 1))]),
            // middle term carries X̄_{i,a}, matching the element I in the proof
            xk("part4", "i<a<j", |_| 0, |b| {
                vec![
                    format!("{}*{QQ}*Xb({},{})*X({},{})*K{}^-1*{}", qp(b.m), b.a, b.j, b.i, b.a, b.a, qx(b.i, b.j, b.m - 1)),
                    format!("-{}*{QQ}*X({},{})*Xb({},{})*K{}^-1*{}", qp(-b.m + 2), b.a, b.j, b.i, b.a, b.a, qx(b.i, b.j, b.m - 1)),
                    format!("-{QQ}^2*X({},{})*Xb({},{})*X({},{})*K{}^-1*{}", b.a, b.j, b.i, b.j, b.i, b.a, b.a, qx(b.i, b.j, b.m - 2)),
                ]
            }),
        ],
    });
    v
}

// ---------------------------------------------------------------------------
// abstract commutation lemmas, instantiated

fn dp(z: &Element, t: i64) -> Element {
    if t < 0 {
        return Element::zero();
    }
    let mut p = Element::one();
    for _ in 0..t {
        p = p.mul_unchecked(z);
    }
    p.scale(&qfactorial(t as u32).inv().expect("nonzero"))
}

fn qs(e: i64) -> Scalar {
    Scalar::q_pow(e)
}

/// The X, Y and extra elements of one instance, parsed from templates.
fn parts(b: &Binds, t: &[&str]) -> Result<Vec<Element>, ParseError> {
    t.iter().map(|s| b.parse(s)).collect()
}

fn abstract_families() -> Vec<Family> {
    let q = Kind::Quantum;
    let mut v = Vec::new();

    // basic-lemma1 hypotheses and conclusions: (suffix, condition, [X, Y, Z], part)
    let l1: [(&str, &'static str, [&'static str; 3], u8); 2] = [
        ("part1", "i<k<j<l", ["X({i},{j})", "X({k},{l})", "-(q-q^-1)*X({k},{j})*X({i},{l})"], 1),
        ("part2", "i<k=j<l", ["X({i},{j})", "X({k},{l})", "X({i},{l})"], 2),
    ];
    let mut hyp = Vec::new();
    let mut concl = Vec::new();
    for (name, cond, t, part) in l1 {
        hyp.push(case(
            &format!("{name}-hyp"),
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, z) = (&p[0], &p[1], &p[2]);
                // XY = c YX + Z, XZ = d ZX, ZY = d YZ combined with independent weights
                let (c, d) = if part == 1 { (qs(0), qs(-2)) } else { (qs(1), qs(-1)) };
                let mut lhs = &(x * y) - &(y * x).scale(&c);
                lhs -= z;
                let h2 = &(x * z) - &(z * x).scale(&d);
                let h3 = &(z * y) - &(y * z).scale(&d);
                Ok((&(&lhs + &h2.scale(&qs(3))) + &h3.scale(&qs(7)), Element::zero()))
            }),
        ));
        concl.push(case(
            name,
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, z) = (&p[0], &p[1], &p[2]);
                let lhs = &dp(x, b.m) * &dp(y, b.s);
                let mut rhs = Element::zero();
                for u in 0..=b.m.min(b.s) {
                    let e = if part == 1 { -(b.m + b.s) * u + u * (3 * u + 1) / 2 } else { (b.m - u) * (b.s - u) };
                    rhs += &(&(&dp(y, b.s - u) * &dp(z, u)) * &dp(x, b.m - u)).scale(&qs(e));
                }
                Ok((lhs, rhs))
            }),
        ));
    }
    v.push(Family { id: "basic-lemma1", label: "Lemma basic-lemma1", vars: "ijkl", base: "i<j,k<l", exps: "", kind: q, omega: false, cases: hyp });
    v.push(Family { id: "basic-lemma1", label: "Lemma basic-lemma1", vars: "ijkl", base: "i<j,k<l", exps: "ms", kind: q, omega: false, cases: concl });

    // Corollary: XY = qYX − Z, XZ = q^{-1}ZX  ⇒  X^{(m)}Y = q^m Y X^{(m)} − Z X^{(m-1)}
    let cor: [(&str, &'static str, [&'static str; 3]); 2] = [
        ("ppeo-a", "i<k=j<l", ["X({i},{j})", "Xb({k},{l})", "-Xb({i},{l})"]),
        ("ppeo-b", "i<k<j=l", ["X({i},{j})", "Xb({k},{l})", "(q-q^-1)*X({k},{j})*Xb({i},{l})"]),
    ];
    let mut hyp = Vec::new();
    let mut concl = Vec::new();
    for (name, cond, t) in cor {
        hyp.push(case(
            &format!("{name}-hyp"),
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, z) = (&p[0], &p[1], &p[2]);
                let h1 = &(&(x * y) - &(y * x).scale(&qs(1))) + z;
                let h2 = &(x * z) - &(z * x).scale(&qs(-1));
                Ok((&h1 + &h2.scale(&qs(5)), Element::zero()))
            }),
        ));
        concl.push(case(
            name,
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, z) = (&p[0], &p[1], &p[2]);
                let rhs = &(&(y * &dp(x, b.m))).scale(&qs(b.m)) - &(z * &dp(x, b.m - 1));
                Ok((&dp(x, b.m) * y, rhs))
            }),
        ));
    }
    v.push(Family { id: "basic-cor", label: "Cor basic-cor", vars: "ijkl", base: "i<j,k<l", exps: "", kind: q, omega: false, cases: hyp });
    v.push(Family { id: "basic-cor", label: "Cor basic-cor", vars: "ijkl", base: "i<j,k<l", exps: "m", kind: q, omega: false, cases: concl });

    // basic-lemma2: XY = YX + H − I, XH = q²HX − J, XI = q⁻²IX + q⁻²J, XJ = JX
    let l2: [(&str, &'static str, &'static str, &'static str, [&'static str; 5]); 3] = [
        (
            "ppeo",
            "ijkl",
            "i<j,k<l",
            "i<k<l<j",
            ["X({i},{j})", "Xb({k},{l})", "(q-q^-1)*Xb({k},{j})*X({i},{l})", "(q-q^-1)*X({k},{j})*Xb({i},{l})", "(q-q^-1)^2*X({k},{j})*Xb({i},{j})*X({i},{l})"],
        ),
        ("pneo", "ijkl", "i<j,k>l", "i=l,j=k", ["X({i},{j})", "Xb({k},{l})", "-Kb{j}*K{i}^-1", "-K{j}^-1*Kb{i}", "q*Xb({i},{j})*K{j}^-1*K{i}^-1"]),
        (
            "XKbar",
            "ija",
            "i<j",
            "i<a<j",
            [
                "X({i},{j})",
                "Kb{a}",
                "q*(q-q^-1)*Xb({a},{j})*X({i},{a})*K{a}^-1",
                "q*(q-q^-1)*X({a},{j})*Xb({i},{a})*K{a}^-1",
                "q*(q-q^-1)^2*X({a},{j})*Xb({i},{j})*X({i},{a})*K{a}^-1",
            ],
        ),
    ];
    for (name, vars, base, cond, t) in l2 {
        let hyp = case(
            &format!("{name}-hyp"),
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, h, i, j) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
                let h1 = &(&(&(x * y) - &(y * x)) - h) + i;
                let h2 = &(&(x * h) - &(h * x).scale(&qs(2))) + j;
                let h3 = &(&(x * i) - &(i * x).scale(&qs(-2))) - &j.scale(&qs(-2));
                let h4 = &(x * j) - &(j * x);
                let tot = &(&(&h1 + &h2.scale(&qs(5))) + &h3.scale(&qs(11))) + &h4.scale(&qs(17));
                Ok((tot, Element::zero()))
            }),
        );
        let concl = case(
            name,
            cond,
            Box::new(move |b| {
                let p = parts(b, &t)?;
                let (x, y, h, i, j) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
                let m = b.m;
                let mut rhs = y * &dp(x, m);
                rhs += &(h * &dp(x, m - 1)).scale(&qs(m - 1));
                rhs -= &(i * &dp(x, m - 1)).scale(&qs(-m + 1));
                rhs -= &(j * &dp(x, m - 2)).scale(&qs(-1));
                Ok((&dp(x, m) * y, rhs))
            }),
        );
        v.push(Family { id: "basic-lemma2", label: "Lemma basic-lemma2", vars, base, exps: "", kind: q, omega: false, cases: vec![hyp] });
        v.push(Family { id: "basic-lemma2", label: "Lemma basic-lemma2", vars, base, exps: "m", kind: q, omega: false, cases: vec![concl] });
    }
    v
}

// ---------------------------------------------------------------------------
// Lusztig form identities

fn lusztig_families() -> Vec<Family> {
    let q = Kind::Quantum;
    vec![
        Family {
            id: "Kbarsq",
            label: "Lemma Kbarsq",
            vars: "i",
            base: "",
            exps: "",
            kind: q,
            omega: false,
            cases: vec![
                case("main", "", tpl("Kb{i}*Kb{i}", "q^-1*K{i}*Kbr({i};0;1) - q^-1*(q-q^-1)*Kbr({i};0;2)")),
                case("simplified", "", tpl("Kb{i}*Kb{i}", "(K{i}^2 - K{i}^-2)/(q^2-q^-2)")),
            ],
        },
        Family {
            id: "Xoddsq",
            label: "Eq. Xoddsq",
            vars: "ij",
            base: "i<j",
            exps: "",
            kind: q,
            omega: false,
            cases: vec![
                case("pos", "", tpl("Xb({i},{j})*Xb({i},{j})", "-(q-q^-1)*Xd({i},{j};2)")),
                case("pos-ratio", "", tpl("Xb({i},{j})*Xb({i},{j})", "-(q-q^-1)/(q+q^-1)*X({i},{j})^2")),
                case("neg", "", tpl("Xb({j},{i})*Xb({j},{i})", "(q-q^-1)*Xd({j},{i};2)")),
                case("neg-ratio", "", tpl("Xb({j},{i})*Xb({j},{i})", "(q-q^-1)/(q+q^-1)*X({j},{i})^2")),
            ],
        },
        Family {
            id: "div-recursion",
            label: "Eq. div-recursion",
            vars: "ij",
            base: "i<j",
            exps: "m",
            kind: q,
            omega: true,
            cases: vec![Case {
                name: "pos".into(),
                cond: Cond::Pred(|b| b.j - b.i > 1),
                build: dyn_tpl(|b| {
                    let (i, j, k, m) = (b.i, b.j, b.i + 1, b.m);
                    let mut t = vec![
                        format!("{}*{}", qx(i, k, m), qx(k, j, m)),
                        format!("-{}*{}*{}", qp(m * m), qx(k, j, m), qx(i, k, m)),
                    ];
                    for u in 1..m {
                        t.push(format!("-{}*{}*{}*{}", qp((m - u) * (m - u)), qx(k, j, m - u), qx(i, j, u), qx(i, k, m - u)));
                    }
                    (qx(i, j, m), sum(t))
                }),
            }],
        },
    ]
}

// ---------------------------------------------------------------------------
// classical divided-power formulas

fn pair_eps(k: i64, i: i64, j: i64) -> i64 {
    (k == i) as i64 - (k == j) as i64
}

/// (ε, β) when α_{ij} + α_{kl} is a root.
fn root_sum(b: &Binds) -> Option<(i64, i64, i64)> {
    if b.j == b.k && b.i != b.l {
        Some((1, b.i, b.l))
    } else if b.i == b.l && b.j != b.k {
        Some((-1, b.k, b.j))
    } else {
        None
    }
}

fn classical_families() -> Vec<Family> {
    let c = Kind::Classical;
    let opp = |b: &Binds| b.i == b.l && b.j == b.k;
    let xx = |b: &Binds| format!("{}*{}", cx(b.i, b.j, b.m), cx(b.k, b.l, b.s));
    let xx_sw = |b: &Binds| format!("{}*{}", cx(b.k, b.l, b.s), cx(b.i, b.j, b.m));
    let xo = |b: &Binds| format!("{}*xb({},{})", cx(b.i, b.j, b.m), b.k, b.l);
    let xo_sw = |b: &Binds| format!("xb({},{})*{}", b.k, b.l, cx(b.i, b.j, b.m));
    let oo = |b: &Binds| format!("xb({},{})*xb({},{})", b.i, b.j, b.k, b.l);
    let oo_sw = |b: &Binds| format!("-xb({},{})*xb({},{})", b.k, b.l, b.i, b.j);
    vec![
        Family {
            id: "div-root",
            label: "Prop div-root",
            vars: "ijkl",
            base: "i!=j,k!=l",
            exps: "ms",
            kind: c,
            omega: false,
            cases: vec![
                Case {
                    name: "1-opposite".into(),
                    cond: Cond::Pred(|b| b.i == b.l && b.j == b.k),
                    build: dyn_tpl(move |b| {
                        let mut t = vec![xx_sw(b)];
                        for u in 1..=tmin(b) {
                            t.push(format!(
                                "{}*{}*{}",
                                cx(b.k, b.l, b.s - u),
                                hbinom_diff(b.i, b.j, -b.m - b.s + 2 * u, u),
                                cx(b.i, b.j, b.m - u)
                            ));
                        }
                        (xx(b), sum(t))
                    }),
                },
                Case {
                    name: "1-root".into(),
                    cond: Cond::Pred(|b| root_sum(b).is_some()),
                    build: dyn_tpl(move |b| {
                        let (eps, bi, bj) = root_sum(b).unwrap();
                        let mut t = vec![xx_sw(b)];
                        for u in 1..=tmin(b) {
                            let sign = if eps < 0 && u % 2 == 1 { "-" } else { "" };
                            t.push(format!("{sign}{}*{}*{}", cx(b.k, b.l, b.s - u), cx(bi, bj, u), cx(b.i, b.j, b.m - u)));
                        }
                        (xx(b), sum(t))
                    }),
                },
                Case {
                    name: "1-other".into(),
                    cond: Cond::Pred(|b| !(b.i == b.l && b.j == b.k) && root_sum(b).is_none()),
                    build: dyn_tpl(move |b| (xx(b), xx_sw(b))),
                },
            ],
        },
        Family {
            id: "div-root",
            label: "Prop div-root",
            vars: "ijkl",
            base: "i!=j,k!=l",
            exps: "m",
            kind: c,
            omega: false,
            cases: vec![
                Case {
                    name: "2-opposite".into(),
                    cond: Cond::Pred(opp),
                    build: dyn_tpl(move |b| {
                        let t = vec![
                            xo_sw(b),
                            format!("(hb{}-hb{})*{}", b.i, b.j, cx(b.i, b.j, b.m - 1)),
                            format!("-xb({},{})*{}", b.i, b.j, cx(b.i, b.j, b.m - 2)),
                        ];
                        (xo(b), sum(t))
                    }),
                },
                Case {
                    name: "2-root".into(),
                    cond: Cond::Pred(|b| root_sum(b).is_some()),
                    build: dyn_tpl(move |b| {
                        let (eps, bi, bj) = root_sum(b).unwrap();
                        (xo(b), sum(vec![xo_sw(b), format!("{eps}*xb({bi},{bj})*{}", cx(b.i, b.j, b.m - 1))]))
                    }),
                },
                Case {
                    name: "2-other".into(),
                    cond: Cond::Pred(|b| !(b.i == b.l && b.j == b.k) && root_sum(b).is_none()),
                    build: dyn_tpl(move |b| (xo(b), xo_sw(b))),
                },
            ],
        },
        Family {
            id: "div-root",
            label: "Prop div-root",
            vars: "ijkl",
            base: "i!=j,k!=l",
            exps: "",
            kind: c,
            omega: false,
            cases: vec![
                Case {
                    name: "3-opposite".into(),
                    cond: Cond::Pred(opp),
                    build: dyn_tpl(move |b| (oo(b), sum(vec![oo_sw(b), format!("h{}+h{}", b.i, b.j)]))),
                },
                Case {
                    name: "3-root".into(),
                    cond: Cond::Pred(|b| root_sum(b).is_some()),
                    build: dyn_tpl(move |b| {
                        let (_, bi, bj) = root_sum(b).unwrap();
                        (oo(b), sum(vec![oo_sw(b), format!("x({bi},{bj})")]))
                    }),
                },
                Case {
                    name: "3-other".into(),
                    cond: Cond::Pred(|b| !(b.i == b.l && b.j == b.k) && root_sum(b).is_none()),
                    build: dyn_tpl(move |b| (oo(b), oo_sw(b))),
                },
            ],
        },
        Family {
            id: "div-root",
            label: "Prop div-root",
            vars: "ijk",
            base: "i!=j",
            exps: "m",
            kind: c,
            omega: false,
            cases: vec![
                Case {
                    name: "4-even".into(),
                    cond: Cond::Chain(""),
                    build: dyn_tpl(|b| {
                        let e = pair_eps(b.k, b.i, b.j);
                        (
                            format!("{}*hb{}", cx(b.i, b.j, b.m), b.k),
                            sum(vec![format!("hb{}*{}", b.k, cx(b.i, b.j, b.m)), format!("{}*xb({},{})*{}", -e, b.i, b.j, cx(b.i, b.j, b.m - 1))]),
                        )
                    }),
                },
                Case {
                    name: "5-even".into(),
                    cond: Cond::Chain(""),
                    build: dyn_tpl(|b| {
                        let e = pair_eps(b.k, b.i, b.j);
                        (format!("{}*h{}", cx(b.i, b.j, b.m), b.k), format!("(h{}{})*{}", b.k, offset(-b.m * e), cx(b.i, b.j, b.m)))
                    }),
                },
            ],
        },
        Family {
            id: "div-root",
            label: "Prop div-root",
            vars: "ijk",
            base: "i!=j",
            exps: "",
            kind: c,
            omega: false,
            cases: vec![
                Case {
                    name: "4-odd".into(),
                    cond: Cond::Chain(""),
                    build: dyn_tpl(|b| {
                        let e = pair_eps(b.k, b.i, b.j).abs();
                        (format!("xb({},{})*hb{}", b.i, b.j, b.k), sum(vec![format!("-hb{}*xb({},{})", b.k, b.i, b.j), format!("{e}*x({},{})", b.i, b.j)]))
                    }),
                },
                Case {
                    name: "5-odd".into(),
                    cond: Cond::Chain(""),
                    build: dyn_tpl(|b| {
                        let e = pair_eps(b.k, b.i, b.j);
                        (format!("xb({},{})*h{}", b.i, b.j, b.k), format!("(h{}{})*xb({},{})", b.k, offset(-e), b.i, b.j))
                    }),
                },
            ],
        },
        Family {
            id: "odd-square",
            label: "Eq. odd-square",
            vars: "ij",
            base: "i!=j",
            exps: "",
            kind: c,
            omega: false,
            cases: vec![case("xbar", "", tpl("xb({i},{j})*xb({i},{j})", "0"))],
        },
        Family {
            id: "odd-square",
            label: "Eq. odd-square",
            vars: "i",
            base: "",
            exps: "",
            kind: c,
            omega: false,
            cases: vec![case("hbar", "", tpl("hb{i}*hb{i}", "h{i}"))],
        },
    ]
}

fn all_families() -> Vec<Family> {
    let mut v = classical_families();
    v.extend(six_families());
    v.extend(div_families());
    v.extend(abstract_families());
    v.extend(lusztig_families());
    v
}

// ---------------------------------------------------------------------------
// instantiation

fn engines(kind: Kind) -> Vec<Engine> {
    match kind {
        Kind::Quantum => vec![Engine::L, Engine::X, Engine::Rep],
        Kind::Classical => vec![Engine::Classical, Engine::Rep],
    }
}

fn ranges_of(vars: &str, exps: &str, b: &Binds, n: u8) -> BTreeMap<String, i64> {
    let mut r = BTreeMap::new();
    r.insert("n".to_string(), n as i64);
    for v in vars.chars().chain(exps.chars()) {
        r.insert(v.to_string(), b.get(v));
    }
    r
}

fn index_tuples(vars: &str, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in vars.chars() {
        let mut next = Vec::new();
        for t in &out {
            for x in 1..=max {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn instantiate(f: &Family, cfg: &CorpusConfig, out: &mut Vec<Identity>) {
    let exps: Vec<Vec<i64>> = match f.exps {
        "" => vec![vec![]],
        "m" => (1..=cfg.max_exp as i64).map(|m| vec![m]).collect(),
        _ => (1..=cfg.max_exp as i64).flat_map(|m| (1..=cfg.max_exp as i64).map(move |s| vec![m, s])).collect(),
    };
    for c in &f.cases {
        let id = format!("{}/{}", f.id, c.name);
        for idx in index_tuples(f.vars, cfg.max_n as i64) {
            let mut b = Binds::default();
            for (v, x) in f.vars.chars().zip(&idx) {
                b.set(v, *x);
            }
            if !condition_holds(f.base, &b) {
                continue;
            }
            let ok = match &c.cond {
                Cond::Chain(s) => condition_holds(s, &b),
                Cond::Pred(p) => p(&b),
            };
            if !ok {
                continue;
            }
            let n = idx.iter().copied().max().unwrap_or(1).max(1) as u8;
            for e in &exps {
                let mut b = b;
                for (v, x) in f.exps.chars().zip(e) {
                    b.set(v, *x);
                }
                let (lhs, rhs) = (c.build)(&b).unwrap_or_else(|e| panic!("template {id} does not parse: {e}"));
                let ranges = ranges_of(f.vars, f.exps, &b, n);
                if f.omega {
                    let ol = omega(&lhs).expect("quantum letters");
                    let or = omega(&rhs).expect("quantum letters");
                    out.push(Identity { id: format!("{id}/omega"), label: f.label.into(), lhs: ol, rhs: or, ranges: ranges.clone(), engines: engines(f.kind) });
                }
                out.push(Identity { id: id.clone(), label: f.label.into(), lhs, rhs, ranges, engines: engines(f.kind) });
            }
        }
    }
}

/// Defining relations QQ1–QQ6 as identities "relation = 0".
fn relation_identities(cfg: &CorpusConfig, out: &mut Vec<Identity>) {
    for n in 1..=cfg.max_n {
        for (name, rel) in dj_relations(n) {
            let (id, idx) = match name.rsplit_once('/') {
                Some((a, b)) if b.chars().next().map_or(false, |c| c.is_ascii_digit()) => (a.to_string(), b.to_string()),
                _ => (name.clone(), String::new()),
            };
            let mut ranges = BTreeMap::new();
            ranges.insert("n".to_string(), n as i64);
            for (v, x) in ["i", "j"].iter().zip(idx.split(',').filter(|s| !s.is_empty())) {
                ranges.insert(v.to_string(), x.parse().unwrap_or(0));
            }
            out.push(Identity { id, label: "Prop presentqUq".into(), lhs: rel, rhs: Element::zero(), ranges, engines: vec![Engine::L, Engine::X, Engine::Rep] });
        }
    }
}

/// Idempotent calculus in the quotient U_q(n, r).
fn quotient_identities(cfg: &CorpusConfig, out: &mut Vec<Identity>) {
    use crate::classical::compositions;
    use crate::freealg::Gen;
    use crate::scalar::bracket_eval;
    for &(n, r) in &cfg.schur_grid {
        let lams = compositions(n as usize, r);
        let idem = |l: &[u32]| Element::gen(Gen::QIdem(l.to_vec()));
        let mut push = |id: &str, label: &str, lhs: Element, rhs: Element, extra: &[(&str, i64)]| {
            let mut ranges = BTreeMap::new();
            ranges.insert("n".to_string(), n as i64);
            ranges.insert("r".to_string(), r as i64);
            for (k, v) in extra {
                ranges.insert(k.to_string(), *v);
            }
            out.push(Identity { id: id.into(), label: label.into(), lhs, rhs, ranges, engines: vec![Engine::Schur, Engine::Rep] });
        };
        let mut total = Element::zero();
        for (a, la) in lams.iter().enumerate() {
            total += &idem(la);
            for (b, lb) in lams.iter().enumerate() {
                let rhs = if a == b { idem(la) } else { Element::zero() };
                push("q-property/orthogonal", "Prop q-property", &idem(la) * &idem(lb), rhs, &[("lambda", a as i64), ("mu", b as i64)]);
            }
            for i in 1..=n {
                let li = la[i as usize - 1] as i64;
                let k = Element::gen(Gen::k(i));
                push("q-property/K", "Prop q-property", &k * &idem(la), idem(la).scale(&Scalar::q_pow(li)), &[("lambda", a as i64), ("i", i as i64)]);
                for c in -1i32..=1 {
                    for t in 1..=2u32 {
                        let br = Element::gen(Gen::KBracket { i, c, t });
                        let val = bracket_eval(li, c as i64, t);
                        push("q-property/bracket", "Prop q-property", &br * &idem(la), idem(la).scale(&val), &[("lambda", a as i64), ("i", i as i64), ("c", c as i64), ("t", t as i64)]);
                    }
                }
                let kb = Element::gen(Gen::KBar(i));
                push("q-root-idem/Kbar", "Prop q-root-idem", &kb * &idem(la), &idem(la) * &kb, &[("lambda", a as i64), ("i", i as i64)]);
                if li == 0 {
                    push("q-property/Kbar-zero", "Prop q-property", &kb * &idem(la), Element::zero(), &[("lambda", a as i64), ("i", i as i64)]);
                }
            }
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    // λ + α_{ij}
                    let shift = |l: &[u32], s: i64| -> Option<Vec<u32>> {
                        let mut v: Vec<i64> = l.iter().map(|&x| x as i64).collect();
                        v[i as usize - 1] += s;
                        v[j as usize - 1] -= s;
                        if v.iter().all(|&x| x >= 0) {
                            Some(v.into_iter().map(|x| x as u32).collect())
                        } else {
                            None
                        }
                    };
                    for (odd, g) in [(false, Gen::QX { i, j, s: 1 }), (true, Gen::QXBar { i, j })] {
                        let x = Element::gen(g);
                        let tag = if odd { "odd" } else { "even" };
                        let rhs = shift(la, 1).map_or(Element::zero(), |mu| &idem(&mu) * &x);
                        push(&format!("q-root-idem/right-{tag}"), "Prop q-root-idem", &x * &idem(la), rhs, &[("lambda", a as i64), ("i", i as i64), ("j", j as i64)]);
                        let rhs = shift(la, -1).map_or(Element::zero(), |mu| &x * &idem(&mu));
                        push(&format!("q-root-idem/left-{tag}"), "Prop q-root-idem", &idem(la) * &x, rhs, &[("lambda", a as i64), ("i", i as i64), ("j", j as i64)]);
                    }
                }
            }
        }
        push("q-property/sum", "Prop q-property", total, Element::one(), &[]);
        // [K; b] = 0 for |b| > r
        for i in 1..=n {
            let br = Element::gen(Gen::KBracket { i, c: 0, t: r + 1 });
            push("q-property/bound", "Prop q-property", br, Element::zero(), &[("i", i as i64)]);
        }
    }
}

/// Every identity of the corpus under the given bounds.
pub fn commutation_corpus(cfg: &CorpusConfig) -> Vec<Identity> {
    let mut out = Vec::new();
    for f in all_families() {
        instantiate(&f, cfg, &mut out);
    }
    relation_identities(cfg, &mut out);
    quotient_identities(cfg, &mut out);
    out
}

/// Labels that must be covered by at least one corpus id.
pub const IN_SCOPE_LABELS: &[&str] = &[
    "Prop div-root",
    "Eq. odd-square",
    "Lemma q-ppee",
    "Lemma q-pnee",
    "Lemma q-ppeo",
    "Lemma q-pneo",
    "Lemma q-ppoo",
    "Lemma q-pnoo",
    "Lemma q-XKbar",
    "Prop q-div-ppee",
    "Prop q-div-pnee",
    "Prop q-div-ppeo",
    "Prop q-div-pneo",
    "Prop q-div-XKbar",
    "Lemma basic-lemma1",
    "Cor basic-cor",
    "Lemma basic-lemma2",
    "Lemma Kbarsq",
    "Eq. Xoddsq",
    "Prop presentqUq",
    "Prop q-property",
    "Prop q-root-idem",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conditions() {
        let b = Binds { i: 1, j: 2, k: 2, l: 3, ..Default::default() };
        assert!(condition_holds("i<k=j<l", &b));
        assert!(!condition_holds("i<k<j<l", &b));
        assert!(condition_holds("i<k<j<l or i<j<=k<l", &b));
        assert!(condition_holds("i<j,k<l", &b));
        assert!(!condition_holds("i=l,j=k", &b));
        assert!(condition_holds("i!=j", &b));
        assert!(condition_holds("", &b));
    }

    #[test]
    fn helpers() {
        assert_eq!(qx(1, 2, 0), "1");
        assert_eq!(qx(1, 2, -1), "0");
        assert_eq!(qx(1, 3, 2), "Xd(1,3;2)");
        assert_eq!(kpow(2, -3), "K2^-3");
    }

    #[test]
    fn small_corpus_shape() {
        let cfg = CorpusConfig { max_n: 3, max_exp: 1, schur_grid: vec![(2, 1)] };
        let c = commutation_corpus(&cfg);
        let ex: Vec<_> = c.iter().filter(|x| x.id == "q-ppee/case3").collect();
        // i<k=j<l needs three distinct indices: only (1,2,2,3)
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].ranges["n"], 3);
        assert!(c.iter().any(|x| x.id == "QQ4/EbarFbar"));
        assert!(c.iter().any(|x| x.id == "odd-square/xbar"));
    }

    fn nonzero_quantum(lhs: &str, rhs: &str, n: u8) -> bool {
        use crate::expr::parse_element;
        let d = &parse_element(lhs).unwrap() - &parse_element(rhs).unwrap();
        !crate::quantum::l_normal_form(n, &d).unwrap().is_zero()
    }

    #[test]
    fn xkbar_middle_term_needs_bar() {
        let lhs = "Xd(1,3;1)*Kb2";
        let printed = "Kb2*Xd(1,3;1) + q*(q-q^-1)*Xb(2,3)*X(1,2)*K2^-1 - q*(q-q^-1)*X(2,3)*X(1,2)*K2^-1";
        let fixed = "Kb2*Xd(1,3;1) + q*(q-q^-1)*Xb(2,3)*X(1,2)*K2^-1 - q*(q-q^-1)*X(2,3)*Xb(1,2)*K2^-1";
        assert!(nonzero_quantum(lhs, printed, 3));
        assert!(!nonzero_quantum(lhs, fixed, 3));
    }

    #[test]
    fn odd_hbar_sign() {
        use crate::expr::parse_element;
        let sys = crate::classical::classical_rules(2);
        let lhs = parse_element("xb(1,2)*hb1").unwrap();
        let printed = parse_element("-hb1*xb(1,2) - x(1,2)").unwrap();
        let fixed = parse_element("-hb1*xb(1,2) + x(1,2)").unwrap();
        assert!(!sys.normal_form(&(&lhs - &printed)).unwrap().is_zero());
        assert!(sys.normal_form(&(&lhs - &fixed)).unwrap().is_zero());
    }
}
