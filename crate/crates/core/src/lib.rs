//! Ancilla-free quantum squaring and exponentiation circuits over GF(2^n)
//! in polynomial basis.
//!
//! The squarer is a CNOT-only circuit on exactly `n` qubits whose outputs
//! are read through a permutation. The exponentiator computes
//! `a^(2^n - 2)`, the multiplicative inverse for `a ≠ 0`, on `n²` qubits
//! and returns every work register to zero.
//!
//! ```
//! use gf2m_qsynth::{synth_square, FieldSpec};
//!
//! let field = FieldSpec::parse("x^10+x^3+1").unwrap();
//! let sq = synth_square(&field).unwrap();
//! assert_eq!((sq.circuit.width(), sq.gate_count(), sq.depth()), (10, 6, 2));
//! ```

pub mod bits;
pub mod circuit;
pub mod cli;
pub mod cost;
pub mod error;
pub mod exponentiation;
pub mod gf2m;
pub mod linalg;
pub mod multiplier;
pub mod report;
pub mod sim;
pub mod squaring;

pub use bits::BitVec;
pub use circuit::{Circuit, Gate};
pub use cost::CostReport;
pub use error::{Error, Result};
pub use exponentiation::{expo_cost, synth_exponentiation, verify_exponentiation, ExpoCircuit};
pub use gf2m::{BinaryPolynomial, FieldElement, FieldSpec};
pub use multiplier::{mult_gate_cost, synth_mult};
pub use squaring::{synth_square, SquaringCircuit};
