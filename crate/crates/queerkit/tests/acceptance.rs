//! Acceptance suite: one line per criterion, exact checks only.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use queerkit::classical::{
    classical_rules, dim_schur, enumerate_matrices, qs_idem_relations, qs_ideal_relations, qs_relations, schur_basis, schur_normal_form,
};
use queerkit::corpus::{commutation_corpus, CorpusConfig};
use queerkit::freealg::{Element, Gen, RewriteSystem, Strategy};
use queerkit::quantum::{
    comultiply_slot, dj_generator, dj_relations, ideal_relations, l_letters, lusztig_normal_form, lusztig_rules, olshanski_rules, omega,
    qq_idem_relations, quantum_schur_basis, quantum_schur_normal_form, x_normal_form,
};
use queerkit::scalar::Scalar;
use queerkit::tensor_rep::{
    hecke_clifford_generators, operator_rank, phi_r, sergeev_generators, supercommutant_dim, weight_projection, weights, ClassicalRep,
    QuantumRep, SparseOperator, TensorSpace,
};
use queerkit::verify::{run_corpus, Engine, RunOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: [(usize, u32); 6] = [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)];
const SMALL: [(usize, u32); 3] = [(1, 1), (1, 2), (2, 2)];

type Check = Result<String, String>;

fn q0() -> BigRational {
    BigRational::new(5.into(), 3.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn specialize(ops: &[SparseOperator<Scalar>]) -> Result<Vec<SparseOperator<BigRational>>, String> {
    ops.iter().map(|o| o.specialize(&q0()).map_err(|e| e.to_string())).collect()
}

fn dimension_triangle() -> Check {
    for (n, r) in GRID {
        let closed: usize = dim_schur(n as u32, r).try_into().map_err(|_| "dim overflow".to_string())?;
        let enumerated = enumerate_matrices(n, r).len();
        let commutant = supercommutant_dim(&TensorSpace::new(n, r as usize), &sergeev_generators(n, r as usize));
        ensure(closed == enumerated && enumerated == commutant, || format!("({n},{r}): {closed} / {enumerated} / {commutant}"))?;
    }
    ensure(enumerate_matrices(2, 2).len() == 32, || "dim Q(2,2) != 32".into())?;
    Ok("6 grid points, dim Q(2,2) = 32".into())
}

fn quantum_dimension() -> Check {
    for (n, r) in SMALL {
        let d = supercommutant_dim(&TensorSpace::new(n, r as usize), &hecke_clifford_generators(n, r as usize));
        ensure(d == enumerate_matrices(n, r).len(), || format!("symbolic ({n},{r}): {d}"))?;
    }
    for (n, r) in GRID {
        let gens = specialize(&hecke_clifford_generators(n, r as usize))?;
        let d = supercommutant_dim(&TensorSpace::new(n, r as usize), &gens);
        ensure(d == enumerate_matrices(n, r).len(), || format!("q0 = 5/3 ({n},{r}): {d}"))?;
    }
    Ok("symbolic on 3 points, q0 = 5/3 on 6".into())
}

fn relation_annihilation() -> Check {
    let mut count = 0;
    for (n, r) in GRID {
        let (nn, rr) = (n as u8, r as usize);
        let crep = ClassicalRep::new(n, rr);
        for (name, x) in qs_relations(nn).into_iter().chain(qs_ideal_relations(nn, r)) {
            let op = crep.act(&x).map_err(|e| format!("{name}: {e}"))?;
            ensure(op.is_zero(), || format!("{name} at ({n},{r}) under phi_r"))?;
            count += 1;
        }
        let qrep = QuantumRep::new(n, rr);
        for (name, x) in dj_relations(nn).into_iter().chain(ideal_relations(nn, r)) {
            let op = qrep.act(&x).map_err(|e| format!("{name}: {e}"))?;
            ensure(op.is_zero(), || format!("{name} at ({n},{r}) under Phi_r"))?;
            count += 1;
        }
    }
    Ok(format!("{count} relation instances vanish"))
}

fn corpus_pass() -> Check {
    let corpus = commutation_corpus(&CorpusConfig::default());
    let opts = RunOptions { engines: Some(vec![Engine::L]), ..RunOptions::default() };
    let report = run_corpus(&corpus, &opts);
    let checked = report.entries.iter().filter(|e| !e.outcomes.is_empty()).count();
    let bad = report.entries.iter().filter(|e| !e.outcomes.is_empty() && !e.status.is_pass()).count();
    ensure(bad == 0, || format!("{bad} of {checked} identities fail on L"))?;
    ensure(checked > 0, || "no identity ran on L".into())?;
    Ok(format!("{checked} identities normalize to zero on L"))
}

fn basis_rank() -> Check {
    for (n, r) in GRID {
        let basis = schur_basis(n, r);
        let ops: Vec<_> = basis.iter().map(|b| phi_r(&b.element, n, r as usize)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let k = operator_rank(&ops);
        ensure(k == basis.len(), || format!("phi_r ({n},{r}): rank {k} of {}", basis.len()))?;
        let rep = QuantumRep::new(n, r as usize);
        let qb = quantum_schur_basis(n, r);
        let qops: Vec<_> = qb.iter().map(|b| rep.act(&b.element)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        if SMALL.contains(&(n, r)) {
            let k = operator_rank(&qops);
            ensure(k == qb.len(), || format!("Phi_r symbolic ({n},{r}): rank {k}"))?;
        }
        let k = operator_rank(&specialize(&qops)?);
        ensure(k == qb.len(), || format!("Phi_r at q0 ({n},{r}): rank {k}"))?;
    }
    Ok("full rank on the grid".into())
}

fn presentation_equivalence() -> Check {
    let mut count = 0;
    for n in 1..=3u8 {
        let sys = olshanski_rules(n);
        for (name, x) in dj_relations(n) {
            let y = x.substitute(&|g| dj_generator(g).unwrap_or_else(|| Element::gen(g.clone())));
            let nf = sys.normal_form(&y).map_err(|e| format!("{name}: {e}"))?;
            ensure(nf.is_zero(), || format!("{name} at n = {n}: {nf}"))?;
            count += 1;
        }
    }
    for (n, r) in GRID {
        let nn = n as u8;
        for (name, x) in qs_idem_relations(nn, r) {
            let nf = schur_normal_form(nn, r, &x).map_err(|e| format!("{name}: {e}"))?;
            ensure(nf.is_zero(), || format!("{name} at ({n},{r}): {nf}"))?;
            count += 1;
        }
        for (name, x) in qq_idem_relations(nn, r) {
            let nf = quantum_schur_normal_form(nn, r, &x).map_err(|e| format!("{name}: {e}"))?;
            ensure(nf.is_zero(), || format!("{name} at ({n},{r}): {nf}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} relations normalize to zero"))
}

fn pick_pair(rng: &mut ChaCha8Rng, n: u8) -> (u8, u8) {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..=n);
    while j == i {
        j = rng.gen_range(1..=n);
    }
    (i, j)
}

fn classical_letter(rng: &mut ChaCha8Rng, n: u8) -> Gen {
    let (i, j) = pick_pair(rng, n);
    match rng.gen_range(0..4) {
        0 => Gen::h(i),
        1 => Gen::HBar(i),
        2 => Gen::X { i, j, s: rng.gen_range(1..=2) },
        _ => Gen::XBar { i, j },
    }
}

fn l_letter(rng: &mut ChaCha8Rng, n: u8) -> Gen {
    let ls = l_letters(n);
    let (i, j) = ls[rng.gen_range(0..ls.len())];
    Gen::L { i, j }
}

fn lusztig_letter(rng: &mut ChaCha8Rng, n: u8) -> Gen {
    let (i, j) = pick_pair(rng, n);
    match rng.gen_range(0..6) {
        0 => Gen::K { i, e: if rng.gen_bool(0.5) { 1 } else { -1 } },
        1 => Gen::KBar(i),
        2 => Gen::QX { i, j, s: rng.gen_range(1..=2) },
        3 => Gen::QXBar { i, j },
        4 => Gen::KBracket { i, c: rng.gen_range(-1..=1), t: rng.gen_range(1..=2) },
        _ => Gen::QX { i, j, s: 1 },
    }
}

fn random_word(rng: &mut ChaCha8Rng, letter: fn(&mut ChaCha8Rng, u8) -> Gen, n: u8, max_len: usize) -> Element {
    let len = rng.gen_range(1..=max_len);
    Element::word((0..len).map(|_| letter(rng, n)).collect())
}

fn confluent(sys: &RewriteSystem, rng: &mut ChaCha8Rng, letter: fn(&mut ChaCha8Rng, u8) -> Gen, n: u8) -> Result<(), String> {
    let a = random_word(rng, letter, n, 2);
    let b = random_word(rng, letter, n, 2);
    let c = random_word(rng, letter, n, 1);
    let nf = |x: &Element| sys.normal_form(x).map_err(|e| format!("{x}: {e}"));
    let left = nf(&(&nf(&(&a * &b))? * &c))?;
    let right = nf(&(&a * &nf(&(&b * &c))?))?;
    ensure(left == right, || format!("association on ({a})({b})({c})"))?;
    let abc = &(&a * &b) * &c;
    let other = sys.normal_form_with(&abc, Strategy::Rightmost).map_err(|e| e.to_string())?;
    ensure(left == other, || format!("strategy on {abc}"))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let engines: [(&str, fn(u8) -> RewriteSystem, fn(&mut ChaCha8Rng, u8) -> Gen); 3] =
        [("classical", classical_rules, classical_letter), ("L", olshanski_rules, l_letter), ("X", lusztig_rules, lusztig_letter)];
    for (name, make, letter) in engines {
        let systems = [make(2), make(3)];
        for t in 0..1000 {
            let k = t % 2;
            confluent(&systems[k], &mut rng, letter, k as u8 + 2).map_err(|e| format!("confluence {name}: {e}"))?;
        }
    }
    for t in 0..500 {
        let n = 2 + (t % 2) as u8;
        let x = random_word(&mut rng, lusztig_letter, n, 2);
        let y = random_word(&mut rng, lusztig_letter, n, 2);
        let om = |z: &Element| omega(z).map_err(|e| e.to_string());
        let nf = |z: &Element| x_normal_form(n, z).map_err(|e| e.to_string());
        let xy = &x * &y;
        ensure(om(&xy)? == &om(&y)? * &om(&x)?, || format!("Omega reverses ({x})({y})"))?;
        ensure(nf(&om(&xy)?)? == nf(&om(&nf(&xy)?)?)?, || format!("Omega respects relations on ({x})({y})"))?;
    }
    for n in 1..=3u8 {
        for (i, j) in l_letters(n) {
            let x = Element::gen(Gen::L { i, j });
            let dx = queerkit::quantum::comultiply(&x).map_err(|e| e.to_string())?;
            let a = comultiply_slot(&dx, 1).map_err(|e| e.to_string())?;
            let b = comultiply_slot(&dx, 2).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("coassociativity on L({i},{j}) at n = {n}"))?;
        }
    }
    for t in 0..500 {
        let n = 2 + (t % 2) as u8;
        let x = random_word(&mut rng, lusztig_letter, n, 3);
        let nf = lusztig_normal_form(n, &x).map_err(|e| e.to_string())?;
        ensure(nf.terms().all(|(_, c)| c.is_laurent()), || format!("non-integral normal form of {x}: {nf}"))?;
    }
    for (n, r) in GRID {
        let rep = QuantumRep::new(n, r as usize);
        let space = TensorSpace::new(n, r as usize);
        let lams = weights(n, r as usize);
        let projs: Vec<_> =
            lams.iter().map(|l| rep.act(&Element::gen(Gen::QIdem(l.clone())))).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let mut total = SparseOperator::zero(space.dim(), 0);
        for (a, pa) in projs.iter().enumerate() {
            ensure(*pa == weight_projection(&space, &lams[a]), || format!("Phi_r(1_{:?}) at ({n},{r})", lams[a]))?;
            for (b, pb) in projs.iter().enumerate() {
                let want = if a == b { pa.clone() } else { SparseOperator::zero(space.dim(), 0) };
                ensure(pa.compose(pb) == want, || format!("1_{:?} 1_{:?} at ({n},{r})", lams[a], lams[b]))?;
            }
            total = total.add(pa);
        }
        ensure(total == SparseOperator::identity(space.dim()), || format!("sum of 1_lambda at ({n},{r})"))?;
    }
    Ok("confluence 3x1000, Omega 500, coassociativity, integrality 500, projections".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("dimension triangle", dimension_triangle),
        ("quantum dimension equality", quantum_dimension),
        ("relation annihilation", relation_annihilation),
        ("corpus pass on L", corpus_pass),
        ("basis rank", basis_rank),
        ("presentation equivalence", presentation_equivalence),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} ({secs:.1}s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
