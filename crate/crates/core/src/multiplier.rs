//! Toffoli-based GF(2^n) multiply-accumulate: `(A, B, C) → (A, B, A·B + C)`.
//!
//! Every partial product `α_i β_j` contributes `x^(i+j) mod f(x)` to the
//! result, so one Toffoli per set bit of that reduced monomial, controlled
//! on `A_i` and `B_j`, targeting the matching bit of `C`. Controls only touch
//! `A ∪ B` and targets only `C`, so all gates commute.

use std::collections::BTreeMap;

use crate::circuit::Circuit;
use crate::cost::CostReport;
use crate::error::Result;
use crate::gf2m::FieldSpec;

#[derive(Clone, Debug)]
pub struct MultiplierCircuit {
    /// Width `3n`: `A = [0, n)`, `B = [n, 2n)`, `C = [2n, 3n)`.
    pub circuit: Circuit,
    pub field: FieldSpec,
}

impl MultiplierCircuit {
    pub fn n(&self) -> usize {
        self.field.degree()
    }

    pub fn a(&self, i: usize) -> usize {
        i
    }

    pub fn b(&self, j: usize) -> usize {
        self.n() + j
    }

    pub fn c(&self, t: usize) -> usize {
        2 * self.n() + t
    }

    pub fn cost(&self) -> CostReport {
        CostReport::for_circuit(
            &self.field.to_string(),
            self.n(),
            &self.circuit,
            BTreeMap::from([("partial_products".to_string(), self.circuit.len())]),
        )
    }
}

/// Gates in row-major order: `i`, then `j`, then target bit ascending.
pub fn synth_mult(spec: &FieldSpec) -> Result<MultiplierCircuit> {
    let n = spec.degree();
    let reduced: Vec<Vec<usize>> = (0..2 * n - 1)
        .map(|k| spec.reduce_power(k).exponents())
        .collect();
    let mut circuit = Circuit::new(3 * n);
    for i in 0..n {
        for j in 0..n {
            for &t in &reduced[i + j] {
                circuit.push_toffoli(i, n + j, 2 * n + t)?;
            }
        }
    }
    circuit.annotate("modulus", spec.to_string());
    circuit.annotate(
        "component",
        format!("GF(2^{n}) multiplier (A,B,C) -> (A,B,A*B+C)"),
    );
    for i in 0..n {
        circuit.set_output_label(i, format!("A_{i}"));
        circuit.set_output_label(n + i, format!("B_{i}"));
        circuit.set_output_label(2 * n + i, format!("C_{i}"));
    }
    Ok(MultiplierCircuit {
        circuit,
        field: spec.clone(),
    })
}

/// `Σ_{i,j} wt(x^(i+j) mod f)`, computed per exponent `k = i + j` weighted by
/// the number of index pairs summing to `k`.
pub fn mult_gate_cost(spec: &FieldSpec) -> usize {
    let n = spec.degree();
    (0..2 * n - 1)
        .map(|k| {
            let pairs = if k < n { k + 1 } else { 2 * n - 1 - k };
            pairs * spec.reduce_power(k).weight()
        })
        .sum()
}
