//! Gate/qubit/depth accounting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{compute_schedule, Circuit};

/// Costs of a synthesized circuit. One CNOT or one Toffoli counts as one gate;
/// the two kinds are also reported separately. No Clifford+T decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    /// The modulus in monomial form.
    pub field: String,
    pub n: usize,
    pub gate_count: usize,
    pub cnot_count: usize,
    pub toffoli_count: usize,
    pub qubit_count: usize,
    /// Layer count of the greedy schedule; absent when the circuit was costed
    /// analytically without being built.
    pub depth: Option<usize>,
    pub breakdown: BTreeMap<String, usize>,
    #[serde(default)]
    pub ancilla_count: usize,
    /// Set when the squarer came from the elimination fallback.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fallback: bool,
    /// `(n-1) · G_K`: gates of the forward squarings only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squaring_metric: Option<usize>,
    /// `2(n-1) · G_K`: forward and reversed squarings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squaring_gates_total: Option<usize>,
    /// `(n-1)·G_K + (n-2)·G_U + (n-1)·G_K⁻¹ + (n-2)·G_U⁻¹`, the closed form
    /// quoted for the exponentiation circuit (excludes copies).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_total: Option<usize>,
}

impl CostReport {
    /// Counts gates and schedules `c`; `breakdown` must sum to the gate count.
    pub fn for_circuit(
        field: &str,
        n: usize,
        c: &Circuit,
        breakdown: BTreeMap<String, usize>,
    ) -> CostReport {
        debug_assert_eq!(breakdown.values().sum::<usize>(), c.len());
        CostReport {
            field: field.to_string(),
            n,
            gate_count: c.len(),
            cnot_count: c.cnot_count(),
            toffoli_count: c.toffoli_count(),
            qubit_count: c.width(),
            depth: Some(compute_schedule(c).depth()),
            breakdown,
            ancilla_count: c.ancillae().len(),
            fallback: false,
            squaring_metric: None,
            squaring_gates_total: None,
            closed_form_total: None,
        }
    }

    pub fn breakdown_total(&self) -> usize {
        self.breakdown.values().sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_contract_fields() {
        let mut c = Circuit::new(3);
        c.push_cnot(0, 1).unwrap();
        c.push_toffoli(0, 1, 2).unwrap();
        let r = CostReport::for_circuit(
            "x^3+x+1",
            3,
            &c,
            BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 1)]),
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "field",
            "n",
            "gate_count",
            "cnot_count",
            "toffoli_count",
            "qubit_count",
            "depth",
            "breakdown",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["depth"], 2);
        assert_eq!(r.breakdown_total(), r.gate_count);
        let back: CostReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
