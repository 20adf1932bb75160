use queerkit::freealg::{Element, Gen};
use queerkit::quantum::{l_normal_form, lusztig_normal_form, omega, x_normal_form};
use queerkit::tensor_rep::QuantumRep;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letter(rng: &mut ChaCha8Rng, n: u8, divided: bool) -> Gen {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..=n);
    while n > 1 && j == i {
        j = rng.gen_range(1..=n);
    }
    match rng.gen_range(0..5) {
        0 => Gen::K { i, e: if rng.gen_bool(0.5) { 1 } else { -1 } },
        1 => Gen::KBar(i),
        2 if n > 1 => Gen::QX { i, j, s: if divided { rng.gen_range(1..=2) } else { 1 } },
        3 if n > 1 => Gen::QXBar { i, j },
        4 if divided => Gen::KBracket { i, c: 0, t: rng.gen_range(1..=2) },
        _ => Gen::KBar(i),
    }
}

fn word(rng: &mut ChaCha8Rng, n: u8, len: usize, divided: bool) -> Element {
    Element::word((0..len).map(|_| letter(rng, n, divided)).collect())
}

#[test]
fn normal_forms_preserve_the_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, r) in [(2u8, 2usize), (3, 2), (2, 3)] {
        let rep = QuantumRep::new(n as usize, r);
        for _ in 0..8 {
            let x = word(&mut rng, n, 4, false);
            let want = rep.act(&x).unwrap();
            assert_eq!(rep.act(&l_normal_form(n, &x).unwrap()).unwrap(), want, "L {x}");
            assert_eq!(rep.act(&x_normal_form(n, &x).unwrap()).unwrap(), want, "X {x}");
            assert_eq!(rep.act(&lusztig_normal_form(n, &x).unwrap()).unwrap(), want, "Lusztig {x}");
        }
    }
}

#[test]
fn normal_forms_are_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [2u8, 3] {
        for _ in 0..10 {
            let x = word(&mut rng, n, 4, true);
            let a = x_normal_form(n, &x).unwrap();
            assert_eq!(x_normal_form(n, &a).unwrap(), a);
            let b = lusztig_normal_form(n, &x).unwrap();
            assert_eq!(lusztig_normal_form(n, &b).unwrap(), b);
        }
    }
}

#[test]
fn lusztig_products_are_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in [2u8, 3] {
        for _ in 0..15 {
            let x = word(&mut rng, n, 3, true);
            let nf = lusztig_normal_form(n, &x).unwrap();
            for (w, c) in nf.terms() {
                assert!(c.is_laurent(), "{x}: coefficient {c} of {w:?}");
            }
        }
    }
}

#[test]
fn omega_respects_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [2u8, 3] {
        for _ in 0..10 {
            let x = word(&mut rng, n, 4, true);
            let nf = x_normal_form(n, &x).unwrap();
            let a = x_normal_form(n, &omega(&x).unwrap()).unwrap();
            let b = x_normal_form(n, &omega(&nf).unwrap()).unwrap();
            assert_eq!(a, b, "{x}");
            assert_eq!(omega(&omega(&x).unwrap()).unwrap(), x);
        }
    }
}

#[test]
fn lusztig_rules_agree_with_direct_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in [2u8, 3] {
        let sys = queerkit::quantum::lusztig_rules(n);
        for _ in 0..10 {
            let x = word(&mut rng, n, 3, true);
            assert_eq!(sys.normal_form(&x).unwrap(), lusztig_normal_form(n, &x).unwrap(), "{x}");
        }
    }
}

#[test]
fn quantum_schur_normal_form_preserves_the_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for (n, r) in [(2u8, 2u32), (2, 3), (3, 2)] {
        let rep = QuantumRep::new(n as usize, r as usize);
        for _ in 0..6 {
            let x = word(&mut rng, n, 3, true);
            let nf = queerkit::quantum::quantum_schur_normal_form(n, r, &x).unwrap();
            assert_eq!(rep.act(&nf).unwrap(), rep.act(&x).unwrap(), "{x}");
        }
    }
}

#[test]
fn quantum_basis_images_are_independent() {
    for (n, r) in [(1usize, 1u32), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
        let rep = QuantumRep::new(n, r as usize);
        let basis = queerkit::quantum::quantum_schur_basis(n, r);
        let ops: Vec<_> = basis.iter().map(|b| rep.act(&b.element).unwrap()).collect();
        assert_eq!(queerkit::tensor_rep::operator_rank(&ops), basis.len(), "({n},{r})");
    }
}
