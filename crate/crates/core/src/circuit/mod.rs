//! Gate-level IR for reversible CNOT/Toffoli circuits.

mod qasm;
mod schedule;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use qasm::{emit_qasm, parse_qasm};
pub use schedule::{compute_schedule, gates_commute, Schedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    /// Feynman gate: `target ^= control`.
    Cnot { control: usize, target: usize },
    /// `target ^= control1 & control2`.
    Toffoli {
        control1: usize,
        control2: usize,
        target: usize,
    },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(control1: usize, control2: usize, target: usize) -> Self {
        Gate::Toffoli {
            control1,
            control2,
            target,
        }
    }

    pub fn controls(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::Cnot { control, .. } => (control, None),
            Gate::Toffoli {
                control1, control2, ..
            } => (control1, Some(control2)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => target,
        }
    }

    /// Controls first, then the target.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        self.controls().chain(std::iter::once(self.target()))
    }

    pub fn is_toffoli(&self) -> bool {
        matches!(self, Gate::Toffoli { .. })
    }

    /// Maps every qubit index through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::Cnot { control, target } => Gate::cnot(f(control), f(target)),
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => Gate::toffoli(f(control1), f(control2), f(target)),
        }
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let qs: Vec<usize> = self.qubits().collect();
        for &q in &qs {
            if q >= width {
                return Err(Error::QubitOutOfRange { index: q, width });
            }
        }
        for (i, &q) in qs.iter().enumerate() {
            if qs[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } => write!(f, "CNOT({control}->{target})"),
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => write!(f, "TOFFOLI({control1},{control2}->{target})"),
        }
    }
}

/// A named half-open gate range `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

/// An ordered gate list on `width` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    output_labels: BTreeMap<usize, String>,
    ancillae: Vec<usize>,
    segments: Vec<Segment>,
    annotations: Vec<(String, String)>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            ..Default::default()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_toffoli()).count()
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_toffoli()).count()
    }

    pub fn is_cnot_only(&self) -> bool {
        self.toffoli_count() == 0
    }

    /// Appends `gate` after validating it against the width.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn push_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::cnot(control, target))
    }

    pub fn push_toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<()> {
        self.push(Gate::toffoli(c1, c2, target))
    }

    /// Appends every gate of `other`, with its qubit `q` placed at `map[q]`.
    /// Segments of `other` are carried over, shifted.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        assert_eq!(
            map.len(),
            other.width,
            "qubit map must cover the sub-circuit"
        );
        let offset = self.gates.len();
        for g in &other.gates {
            self.push(g.remap(|q| map[q]))?;
        }
        for s in &other.segments {
            self.segments.push(Segment {
                name: s.name.clone(),
                start: s.start + offset,
                end: s.end + offset,
            });
        }
        Ok(())
    }

    /// Runs `build` and records the gates it appends as a named segment.
    pub fn segment<T>(
        &mut self,
        name: impl Into<String>,
        build: impl FnOnce(&mut Circuit) -> Result<T>,
    ) -> Result<T> {
        let start = self.gates.len();
        let out = build(self)?;
        let end = self.gates.len();
        self.segments.push(Segment {
            name: name.into(),
            start,
            end,
        });
        Ok(out)
    }

    /// Names the existing gate range `[start, end)`.
    pub fn add_segment(&mut self, name: impl Into<String>, start: usize, end: usize) {
        assert!(
            start <= end && end <= self.gates.len(),
            "segment out of range"
        );
        self.segments.push(Segment {
            name: name.into(),
            start,
            end,
        });
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn find_segment(&self, name: &str) -> Option<&Segment> {
        self.segments.iter().find(|s| s.name == name)
    }

    /// Copy of gates `[start, end)` as a standalone circuit of the same width.
    pub fn slice(&self, start: usize, end: usize) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates[start..end].to_vec(),
            output_labels: BTreeMap::new(),
            ancillae: self.ancillae.clone(),
            segments: Vec::new(),
            annotations: self.annotations.clone(),
        }
    }

    pub fn set_output_label(&mut self, qubit: usize, label: impl Into<String>) {
        assert!(qubit < self.width);
        self.output_labels.insert(qubit, label.into());
    }

    pub fn output_labels(&self) -> &BTreeMap<usize, String> {
        &self.output_labels
    }

    /// Marks qubits that must be initialized to zero.
    pub fn set_ancillae(&mut self, qubits: Vec<usize>) {
        assert!(qubits.iter().all(|&q| q < self.width));
        self.ancillae = qubits;
    }

    pub fn ancillae(&self) -> &[usize] {
        &self.ancillae
    }

    pub fn annotate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.annotations.push((key.into(), value.into()));
    }

    pub fn annotations(&self) -> &[(String, String)] {
        &self.annotations
    }

    pub(crate) fn from_parts(
        width: usize,
        gates: Vec<Gate>,
        output_labels: BTreeMap<usize, String>,
    ) -> Circuit {
        Circuit {
            width,
            gates,
            output_labels,
            ..Default::default()
        }
    }

    /// Same gates in `order`.
    pub fn reordered(&self, order: &[usize]) -> Circuit {
        let mut c = self.clone();
        c.gates = order.iter().map(|&i| self.gates[i]).collect();
        c.segments.clear();
        c
    }
}

/// Appends `gate` to a copy of `c`.
pub fn append_gate(c: &Circuit, gate: Gate) -> Result<Circuit> {
    let mut out = c.clone();
    out.push(gate)?;
    Ok(out)
}

/// The logical reverse. CNOT and Toffoli are involutions, so reversing the
/// order inverts the circuit. Segment ranges are mirrored and labels dropped.
pub fn reverse_circuit(c: &Circuit) -> Circuit {
    let len = c.gates.len();
    Circuit {
        width: c.width,
        gates: c.gates.iter().rev().copied().collect(),
        output_labels: BTreeMap::new(),
        ancillae: c.ancillae.clone(),
        segments: c
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                name: s.name.clone(),
                start: len - s.end,
                end: len - s.start,
            })
            .collect(),
        annotations: c.annotations.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_examples() {
        let c = Circuit::new(2);
        let c = append_gate(&c, Gate::cnot(0, 1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(
            append_gate(&c, Gate::cnot(0, 0)),
            Err(Error::DuplicateQubit(0))
        );
        assert_eq!(
            append_gate(&c, Gate::cnot(0, 2)),
            Err(Error::QubitOutOfRange { index: 2, width: 2 })
        );
        let t = append_gate(&Circuit::new(3), Gate::toffoli(0, 1, 2)).unwrap();
        assert_eq!(t.toffoli_count(), 1);
        assert_eq!(
            append_gate(&Circuit::new(3), Gate::toffoli(0, 1, 1)),
            Err(Error::DuplicateQubit(1))
        );
    }

    #[test]
    fn reverse_examples() {
        let mut c = Circuit::new(4);
        c.push_cnot(0, 1).unwrap();
        c.push_cnot(2, 3).unwrap();
        let r = reverse_circuit(&c);
        assert_eq!(r.gates(), &[Gate::cnot(2, 3), Gate::cnot(0, 1)]);
        assert_eq!(reverse_circuit(&r).gates(), c.gates());
    }

    #[test]
    fn segments_shift_and_mirror() {
        let mut inner = Circuit::new(2);
        inner
            .segment("pair", |c| {
                c.push_cnot(0, 1)?;
                c.push_cnot(1, 0)
            })
            .unwrap();
        let mut outer = Circuit::new(4);
        outer.push_cnot(0, 3).unwrap();
        outer.append_mapped(&inner, &[2, 3]).unwrap();
        let s = outer.find_segment("pair").unwrap();
        assert_eq!((s.start, s.end), (1, 3));
        assert_eq!(outer.gates()[1], Gate::cnot(2, 3));
        let r = reverse_circuit(&outer);
        let s = r.find_segment("pair").unwrap();
        assert_eq!((s.start, s.end), (0, 2));
    }
}
