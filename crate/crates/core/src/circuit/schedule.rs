//! Depth scheduling: greedy layering of gates into qubit-disjoint parallel sets.

use std::collections::HashSet;

use super::{Circuit, Gate};

/// Parallel layers of gate indices. Depth is the number of layers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schedule {
    layers: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Gate indices in layer order.
    pub fn flatten(&self) -> Vec<usize> {
        self.layers.iter().flatten().copied().collect()
    }

    /// Checks that the layers partition `0..c.len()` and that each layer's
    /// gates act on pairwise disjoint qubits.
    pub fn is_valid_for(&self, c: &Circuit) -> bool {
        let mut seen = vec![false; c.len()];
        for layer in &self.layers {
            let mut used = HashSet::new();
            for &g in layer {
                if g >= c.len() || seen[g] {
                    return false;
                }
                seen[g] = true;
                if !c.gates()[g].qubits().all(|q| used.insert(q)) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Two gates commute when no qubit is a control of one and the target of
/// the other. Shared controls and shared targets are both fine.
pub fn gates_commute(a: &Gate, b: &Gate) -> bool {
    !a.controls().any(|q| q == b.target()) && !b.controls().any(|q| q == a.target())
}

/// Greedy in-order layering.
///
/// Conceptually: the first unplaced gate opens a layer; every later unplaced
/// gate joins it if it is qubit-disjoint from the layer and commutes with
/// each unplaced gate it would overtake; the leftovers are layered the same
/// way. That is equivalent to assigning each gate, in order, the smallest
/// layer strictly above every earlier non-commuting gate and not already
/// occupied on any of its qubits, which is what this computes in one pass.
pub fn compute_schedule(c: &Circuit) -> Schedule {
    let w = c.width();
    let mut top_as_control = vec![0usize; w];
    let mut top_as_target = vec![0usize; w];
    let mut occupied: Vec<HashSet<usize>> = vec![HashSet::new(); w];
    let mut layers: Vec<Vec<usize>> = Vec::new();

    for (idx, g) in c.gates().iter().enumerate() {
        let t = g.target();
        let mut floor = top_as_control[t];
        for q in g.controls() {
            floor = floor.max(top_as_target[q]);
        }
        // layers are 1-based here
        let mut layer = floor + 1;
        while g.qubits().any(|q| occupied[q].contains(&layer)) {
            layer += 1;
        }
        for q in g.controls() {
            top_as_control[q] = top_as_control[q].max(layer);
            occupied[q].insert(layer);
        }
        top_as_target[t] = top_as_target[t].max(layer);
        occupied[t].insert(layer);

        if layers.len() < layer {
            layers.resize_with(layer, Vec::new);
        }
        layers[layer - 1].push(idx);
    }
    Schedule { layers }
}
