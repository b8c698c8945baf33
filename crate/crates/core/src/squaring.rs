//! Ancilla-free in-place squaring circuits.
//!
//! Squaring is linear over GF(2): `A^2 = Σ α_i · x^(2i) mod f(x)`. Each input
//! qubit `i` owns a reduction row `x^(2i) mod f`. Every qubit is assigned one
//! output coefficient it already contributes to; the remaining contributions
//! are XORed in with CNOTs. Qubits with `2i < n` keep their value and become
//! `Y_{2i}`, so only the upper half of the rows costs gates.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::bits::BitVec;
use crate::circuit::{compute_schedule, Circuit, Schedule};
use crate::cost::CostReport;
use crate::error::{Error, Result};
use crate::gf2m::{BinaryPolynomial, FieldSpec};
use crate::linalg::LinearMap;
use crate::sim::{exhaustive_check, extract_linear, CheckReport};

/// `x^(2i) mod f(x)` for input qubit `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionRow {
    pub source_qubit: usize,
    pub bits: BinaryPolynomial,
}

pub fn reduction_rows(spec: &FieldSpec) -> Vec<ReductionRow> {
    (0..spec.degree())
        .map(|i| ReductionRow {
            source_qubit: i,
            bits: spec.reduce_power(2 * i),
        })
        .collect()
}

/// The relabeling `σ`: after the circuit runs, qubit `i` holds `Y_{σ(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputAssignment {
    sigma: Vec<usize>,
    inverse: Vec<usize>,
}

impl OutputAssignment {
    /// Validates that `sigma` is a permutation of `0..sigma.len()`.
    pub fn from_sigma(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &k) in sigma.iter().enumerate() {
            if k >= n || inverse[k] != usize::MAX {
                return Err(Error::Verification(format!(
                    "output assignment is not a permutation: {sigma:?}"
                )));
            }
            inverse[k] = i;
        }
        Ok(OutputAssignment { sigma, inverse })
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// Output coefficient held by qubit `i`.
    pub fn output_of(&self, qubit: usize) -> usize {
        self.sigma[qubit]
    }

    /// Qubit holding output coefficient `k`.
    pub fn qubit_of(&self, output: usize) -> usize {
        self.inverse[output]
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Reads a squarer's output register into coefficient order.
    pub fn read_outputs(&self, state: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for (q, &k) in self.sigma.iter().enumerate() {
            out.set(k, state.get(q));
        }
        out
    }
}

/// Picks `σ`. Qubits with `2i < n` are pinned to `2i`; the others are matched
/// to the remaining outputs along the set bits of their rows. Among all
/// perfect matchings this returns the one that, scanning rows in ascending
/// order, gives each row the smallest output still completable.
pub fn assign_outputs(rows: &[ReductionRow]) -> Result<OutputAssignment> {
    let n = rows.len();
    let mut sigma = vec![usize::MAX; n];
    let mut owner = vec![usize::MAX; n];
    for i in (0..n).filter(|i| 2 * i < n) {
        sigma[i] = 2 * i;
        owner[2 * i] = i;
    }
    let high: Vec<usize> = (0..n).filter(|i| 2 * i >= n).collect();
    let adj: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| {
            if 2 * r.source_qubit < n {
                return Vec::new();
            }
            r.bits
                .exponents()
                .into_iter()
                .filter(|&k| k < n && owner[k] == usize::MAX)
                .collect()
        })
        .collect();

    let mut matcher = Matcher {
        adj: &adj,
        sigma,
        owner,
        locked: vec![false; n],
        seen: vec![false; n],
    };
    for i in 0..n {
        if 2 * i < n {
            matcher.locked[i] = true;
        }
    }

    // any perfect matching first
    for &i in &high {
        matcher.seen.iter_mut().for_each(|s| *s = false);
        if !matcher.augment(i, usize::MAX) {
            return Err(Error::NoPerfectMatching);
        }
    }

    // then lexicographic refinement
    for &i in &high {
        for &k in &adj[i] {
            if matcher.sigma[i] == k {
                break;
            }
            let j = matcher.owner[k];
            if matcher.locked[j] {
                continue;
            }
            if matcher.try_swap(i, k) {
                break;
            }
        }
        matcher.locked[i] = true;
    }

    OutputAssignment::from_sigma(matcher.sigma)
}

struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    sigma: Vec<usize>,
    owner: Vec<usize>,
    locked: Vec<bool>,
    seen: Vec<bool>,
}

impl Matcher<'_> {
    /// Augmenting-path search from row `r`, succeeding when it reaches an
    /// unowned output, or output `goal` if one is given.
    fn augment(&mut self, r: usize, goal: usize) -> bool {
        for idx in 0..self.adj[r].len() {
            let k = self.adj[r][idx];
            if self.seen[k] {
                continue;
            }
            self.seen[k] = true;
            let o = self.owner[k];
            let free = if goal == usize::MAX {
                o == usize::MAX
            } else {
                k == goal
            };
            if free || (o != usize::MAX && !self.locked[o] && self.augment(o, goal)) {
                self.sigma[r] = k;
                self.owner[k] = r;
                return true;
            }
        }
        false
    }

    /// Moves row `i` onto output `k`, re-routing the current owner of `k`
    /// through unlocked rows to the output `i` releases.
    fn try_swap(&mut self, i: usize, k: usize) -> bool {
        let (old_sigma, old_owner) = (self.sigma.clone(), self.owner.clone());
        let released = self.sigma[i];
        let j = self.owner[k];
        self.owner[released] = usize::MAX;
        self.sigma[i] = k;
        self.owner[k] = i;
        self.sigma[j] = usize::MAX;
        self.locked[i] = true;
        self.seen.iter_mut().for_each(|s| *s = false);
        self.seen[k] = true;
        if self.augment(j, released) {
            return true;
        }
        self.locked[i] = false;
        self.sigma = old_sigma;
        self.owner = old_owner;
        false
    }
}

/// Emits the CNOT network for `rows` under `assignment`: for every set bit
/// `k ≠ σ(i)` of row `i`, a CNOT from qubit `i` into the qubit that will hold
/// `Y_k`.
///
/// All CNOTs sourced at a qubit must fire before that qubit is targeted.
/// Source groups are topologically ordered (smallest ready qubit first);
/// within a group, targets follow ascending `k`. If the precedence relation
/// has a cycle the map is instead synthesized by Gaussian elimination and the
/// returned flag is set.
pub fn emit_cnots(rows: &[ReductionRow], assignment: &OutputAssignment) -> Result<(Circuit, bool)> {
    let n = rows.len();
    assert_eq!(assignment.len(), n);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for row in rows {
        let i = row.source_qubit;
        if !row.bits.coeff(assignment.output_of(i)) {
            return Err(Error::Verification(format!(
                "qubit {i} assigned Y_{} but its row {} lacks that term",
                assignment.output_of(i),
                row.bits
            )));
        }
        for k in row.bits.exponents() {
            if k >= n {
                return Err(Error::Verification(format!("row {i} is not reduced")));
            }
            if k != assignment.output_of(i) {
                groups[i].push(assignment.qubit_of(k));
            }
        }
    }

    // group(q) before group(p) whenever p targets q
    let mut indegree = vec![0usize; n];
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, targets) in groups.iter().enumerate() {
        for &q in targets {
            if !groups[q].is_empty() {
                successors[q].push(p);
                indegree[p] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&q| !groups[q].is_empty() && indegree[q] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::new();
    while let Some(Reverse(q)) = ready.pop() {
        order.push(q);
        for &p in &successors[q] {
            indegree[p] -= 1;
            if indegree[p] == 0 {
                ready.push(Reverse(p));
            }
        }
    }

    let mut circuit = Circuit::new(n);
    let sources = groups.iter().filter(|g| !g.is_empty()).count();
    if order.len() == sources {
        for q in order {
            for &t in &groups[q] {
                circuit.push_cnot(q, t)?;
            }
        }
        return Ok((circuit, false));
    }

    let target = squaring_target_map(rows, assignment);
    for (c, t) in target.synthesize_cnots()? {
        circuit.push_cnot(c, t)?;
    }
    Ok((circuit, true))
}

/// The in-place map the circuit must realize: qubit `q` ends as `Y_{σ(q)}`.
fn squaring_target_map(rows: &[ReductionRow], assignment: &OutputAssignment) -> LinearMap {
    let n = rows.len();
    let mut m = LinearMap::zeros(n);
    for row in rows {
        for k in row.bits.exponents() {
            m.set(assignment.qubit_of(k), row.source_qubit, true);
        }
    }
    m
}

/// `Σ_{i : 2i ≥ n} (wt(x^(2i) mod f) − 1)`.
pub fn predicted_gate_count(rows: &[ReductionRow]) -> usize {
    let n = rows.len();
    rows.iter()
        .filter(|r| 2 * r.source_qubit >= n)
        .map(|r| r.bits.weight() - 1)
        .sum()
}

/// An `n`-qubit CNOT-only squarer with its output relabeling.
#[derive(Clone, Debug)]
pub struct SquaringCircuit {
    pub circuit: Circuit,
    pub assignment: OutputAssignment,
    pub field: FieldSpec,
    /// True when the gates came from the elimination fallback.
    pub fallback: bool,
    pub schedule: Schedule,
}

impl SquaringCircuit {
    pub fn gate_count(&self) -> usize {
        self.circuit.len()
    }

    pub fn depth(&self) -> usize {
        self.schedule.depth()
    }

    pub fn cost(&self) -> CostReport {
        let mut r = CostReport::for_circuit(
            &self.field.to_string(),
            self.field.degree(),
            &self.circuit,
            BTreeMap::from([("squaring".to_string(), self.circuit.len())]),
        );
        r.fallback = self.fallback;
        r
    }
}

/// Builds the squarer for `spec`: reduction rows, output assignment, CNOT
/// emission, then greedy layering. The gate list is returned in layer order.
/// The realized linear map is checked against the Frobenius matrix before
/// returning.
pub fn synth_square(spec: &FieldSpec) -> Result<SquaringCircuit> {
    let n = spec.degree();
    let rows = reduction_rows(spec);
    let assignment = assign_outputs(&rows)?;
    let (raw, fallback) = emit_cnots(&rows, &assignment)?;

    let layered = compute_schedule(&raw);
    let mut circuit = raw.reordered(&layered.flatten());
    circuit.annotate("modulus", spec.to_string());
    circuit.annotate("component", format!("GF(2^{n}) in-place squarer"));
    for q in 0..n {
        circuit.set_output_label(q, format!("Y_{}", assignment.output_of(q)));
    }
    // layer order is a fixed point of the scheduler
    let schedule = compute_schedule(&circuit);
    debug_assert_eq!(schedule.depth(), layered.depth());

    let sq = SquaringCircuit {
        circuit,
        assignment,
        field: spec.clone(),
        fallback,
        schedule,
    };
    if !verify_linear(&sq)? {
        return Err(Error::Verification(format!(
            "squarer for {spec} does not realize the Frobenius map"
        )));
    }
    Ok(sq)
}

/// Extracts the circuit's linear map, undoes the output relabeling and
/// compares against the Frobenius matrix.
pub fn verify_linear(sq: &SquaringCircuit) -> Result<bool> {
    let m = extract_linear(&sq.circuit)?;
    let n = sq.field.degree();
    if m.dim() != n || sq.assignment.len() != n {
        return Ok(false);
    }
    // row k of the relabeled map is the row of the qubit holding Y_k
    let perm: Vec<usize> = (0..n).map(|k| sq.assignment.qubit_of(k)).collect();
    Ok(m.permute_rows(&perm) == sq.field.frobenius_matrix())
}

/// Simulates the squarer and compares the relabeled outputs with field
/// squaring: every input when `2^n <= limit`, else `limit` sampled inputs.
pub fn check_squarer(sq: &SquaringCircuit, limit: u64) -> CheckReport {
    let spec = &sq.field;
    let sigma = sq.assignment.sigma();
    exhaustive_check(
        &sq.circuit,
        |s| {
            let a = spec.element_from_bits(s).expect("width n");
            let y = spec.square(&a).expect("same field").to_bits();
            let mut out = BitVec::zeros(s.len());
            for (q, &k) in sigma.iter().enumerate() {
                out.set(q, y.get(k));
            }
            out
        },
        limit,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn field(s: &str) -> FieldSpec {
        FieldSpec::parse(s).unwrap()
    }

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn rows_for_x10_x3_1() {
        let rows = reduction_rows(&field("x^10+x^3+1"));
        assert_eq!(rows[5].bits, p("x^3+1"));
        assert_eq!(rows[9].bits, p("x^8+x^4+x"));
        for (i, row) in rows.iter().take(5).enumerate() {
            assert_eq!(row.bits, BinaryPolynomial::monomial(2 * i));
        }
        let rows = reduction_rows(&field("x^4+x+1"));
        assert_eq!(rows[2].bits, p("x+1"));
        assert_eq!(rows[3].bits, p("x^3+x^2"));
    }

    #[test]
    fn assignment_examples() {
        let a = assign_outputs(&reduction_rows(&field("x^10+x^3+1"))).unwrap();
        assert_eq!(a.sigma(), &[0, 2, 4, 6, 8, 3, 5, 7, 9, 1]);
        let a = assign_outputs(&reduction_rows(&field("x^2+x+1"))).unwrap();
        assert_eq!(a.sigma(), &[0, 1]);
        let a = assign_outputs(&reduction_rows(&field("x^4+x+1"))).unwrap();
        assert_eq!(a.sigma(), &[0, 2, 1, 3]);
    }

    #[test]
    fn singular_map_has_no_matching() {
        let spec = FieldSpec::new_allow_reducible(p("x^4+x^2+1")).unwrap();
        assert_eq!(
            assign_outputs(&reduction_rows(&spec)),
            Err(Error::NoPerfectMatching)
        );
        assert!(matches!(synth_square(&spec), Err(Error::NoPerfectMatching)));
    }

    #[test]
    fn lexicographic_choice_needs_rerouting() {
        // greedy would give row 2 output 1 and leave row 3 stranded
        let rows = vec![
            ReductionRow {
                source_qubit: 0,
                bits: p("1"),
            },
            ReductionRow {
                source_qubit: 1,
                bits: p("x^2"),
            },
            ReductionRow {
                source_qubit: 2,
                bits: p("x^3+x"),
            },
            ReductionRow {
                source_qubit: 3,
                bits: p("x+1"),
            },
        ];
        let a = assign_outputs(&rows).unwrap();
        assert_eq!(a.sigma(), &[0, 2, 3, 1]);
    }

    #[test]
    fn cnot_examples() {
        let spec = field("x^10+x^3+1");
        let rows = reduction_rows(&spec);
        let (c, fb) = emit_cnots(&rows, &assign_outputs(&rows).unwrap()).unwrap();
        assert!(!fb);
        let mut got = c.gates().to_vec();
        got.sort_by_key(|g| (g.controls().next(), g.target()));
        let want: Vec<Gate> = [(5, 0), (6, 1), (7, 2), (8, 3), (9, 2), (9, 4)]
            .into_iter()
            .map(|(a, b)| Gate::cnot(a, b))
            .collect();
        assert_eq!(got, want);

        let spec = field("x^2+x+1");
        let rows = reduction_rows(&spec);
        let (c, _) = emit_cnots(&rows, &assign_outputs(&rows).unwrap()).unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(1, 0)]);

        let spec = field("x^4+x+1");
        let rows = reduction_rows(&spec);
        let (c, _) = emit_cnots(&rows, &assign_outputs(&rows).unwrap()).unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(2, 0), Gate::cnot(3, 1)]);
    }

    #[test]
    fn x10_x3_1_layer_order() {
        let sq = synth_square(&field("x^10+x^3+1")).unwrap();
        let want: Vec<Gate> = [(5, 0), (6, 1), (7, 2), (8, 3), (9, 4), (9, 2)]
            .into_iter()
            .map(|(a, b)| Gate::cnot(a, b))
            .collect();
        assert_eq!(sq.circuit.gates(), want.as_slice());
        assert_eq!(sq.depth(), 2);
        assert_eq!(sq.circuit.width(), 10);
    }

    #[test]
    fn cyclic_precedence_falls_back() {
        let rows = vec![
            ReductionRow {
                source_qubit: 0,
                bits: p("x+1"),
            },
            ReductionRow {
                source_qubit: 1,
                bits: p("x^2+x"),
            },
            ReductionRow {
                source_qubit: 2,
                bits: p("x^2+x+1"),
            },
        ];
        let a = OutputAssignment::from_sigma(vec![0, 1, 2]).unwrap();
        let (c, fallback) = emit_cnots(&rows, &a).unwrap();
        assert!(fallback);
        let m = extract_linear(&c).unwrap();
        assert_eq!(m, squaring_target_map(&rows, &a));
    }

    #[test]
    fn verify_linear_detects_broken_circuits() {
        let sq = synth_square(&field("x^10+x^3+1")).unwrap();
        assert!(verify_linear(&sq).unwrap());

        let mut identity = sq.clone();
        identity.circuit = Circuit::new(10);
        assert!(!verify_linear(&identity).unwrap());

        for drop in 0..sq.circuit.len() {
            let mut mutated = sq.clone();
            let keep: Vec<usize> = (0..sq.circuit.len()).filter(|&i| i != drop).collect();
            mutated.circuit = sq.circuit.reordered(&keep);
            assert!(!verify_linear(&mutated).unwrap(), "dropped gate {drop}");
        }

        let mut toffoli = sq.clone();
        toffoli.circuit.push_toffoli(0, 1, 2).unwrap();
        assert_eq!(verify_linear(&toffoli), Err(Error::NonlinearCircuit));
    }

    #[test]
    fn gate_formula_holds_for_table_trinomials() {
        for (f, gates, depth) in [
            ("x^15+x+1", 7, 1),
            ("x^20+x^3+1", 11, 2),
            ("x^127+x+1", 63, 1),
        ] {
            let spec = field(f);
            let sq = synth_square(&spec).unwrap();
            assert_eq!(sq.gate_count(), gates, "{f}");
            assert_eq!(sq.depth(), depth, "{f}");
            assert_eq!(predicted_gate_count(&reduction_rows(&spec)), gates);
        }
    }

    #[test]
    fn read_outputs_applies_sigma() {
        let a = OutputAssignment::from_sigma(vec![2, 0, 1]).unwrap();
        let s = BitVec::from_bools(&[true, false, false]);
        assert_eq!(
            a.read_outputs(&s),
            BitVec::from_bools(&[false, false, true])
        );
        assert!(OutputAssignment::from_sigma(vec![0, 0]).is_err());
    }
}
