//! Fixed workloads shared by the benchmarks.

use queerkit::expr::parse_element;
use queerkit::freealg::Element;

/// A classical word of length six over q(3).
pub fn classical_word() -> Element {
    parse_element("x(3,1)*xb(1,2)*e1*hb2*f2*xd(1,3;2)").expect("valid")
}

/// A quantum word of length five over U_q(q(3)).
pub fn quantum_word() -> Element {
    parse_element("E1*Fb2*Kb1*F1*E2").expect("valid")
}

/// A Lusztig-form word with divided powers over U_q(q(3)).
pub fn lusztig_word() -> Element {
    parse_element("Xd(1,3;2)*Kbr(2;0;1)*Xd(3,1;2)*Kb3").expect("valid")
}
