//! Computational toolkit for the queer Lie superalgebra q(n), its quantum group
//! U_q(q(n)) and their (quantum) q-Schur superalgebras.

pub mod scalar;
pub mod expr;
pub mod freealg;
pub mod classical;
pub mod linalg;
pub mod quotient;
pub mod quantum;
pub mod tensor_rep;
pub mod corpus;
pub mod verify;
