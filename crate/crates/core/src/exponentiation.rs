//! Quantum inversion `Y = A^(2^n - 2) mod f(x)` from squarers and multipliers.
//!
//! Layout: `A` on qubits `[0, n)`, ancilla registers `B[0..n-2]` of `n`
//! qubits each, `n²` qubits total. The forward pass squares `A` in place
//! `n-1` times, copies `A²` into `B[0]` and accumulates
//! `B[i-1] = A^(2^i) · B[i-2]`; the backward pass uncomputes everything
//! except `B[n-2]`.
//!
//! The squarer leaves its output permuted (qubit `i` holds `Y_σ(i)`), so
//! `A`'s coefficients drift across its qubits. The composer tracks that
//! placement and wires each later component through it; no swap gates.

use std::collections::BTreeMap;

use crate::bits::BitVec;
use crate::circuit::{reverse_circuit, Circuit};
use crate::cost::CostReport;
use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};
use crate::multiplier::{mult_gate_cost, synth_mult};
use crate::sim::{sample_states, simulate_all, BasisState};
use crate::squaring::{synth_square, SquaringCircuit};

pub const STEP1: &str = "step1";
pub const STEP2: &str = "step2";

/// Register placement for an `n`-bit exponentiator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpoLayout {
    pub n: usize,
}

impl ExpoLayout {
    pub fn width(&self) -> usize {
        self.n * self.n
    }

    /// Number of `B` registers, `n - 1`.
    pub fn b_registers(&self) -> usize {
        self.n - 1
    }

    /// Qubit of coefficient `j` of `B[k]`.
    pub fn b(&self, k: usize, j: usize) -> usize {
        debug_assert!(k < self.b_registers() && j < self.n);
        self.n * (k + 1) + j
    }

    pub fn b_qubits(&self, k: usize) -> Vec<usize> {
        (0..self.n).map(|j| self.b(k, j)).collect()
    }

    /// The initial state `(a, 0, …, 0)`.
    pub fn input_state(&self, a: &FieldElement) -> BasisState {
        let mut s = BitVec::zeros(self.width());
        s.write_slice(0, &a.to_bits());
        s
    }

    pub fn read_b(&self, spec: &FieldSpec, state: &BasisState, k: usize) -> FieldElement {
        spec.element_from_bits(&state.slice(self.b(k, 0), self.n))
            .expect("register width")
    }

    /// Reads `A` whose coefficient `j` sits on qubit `placement[j]`.
    pub fn read_a(
        &self,
        spec: &FieldSpec,
        state: &BasisState,
        placement: &[usize],
    ) -> FieldElement {
        let bits = BitVec::from_bools(&placement.iter().map(|&q| state.get(q)).collect::<Vec<_>>());
        spec.element_from_bits(&bits).expect("register width")
    }
}

/// Component counts of a built exponentiator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ComponentCounts {
    pub forward_squarings: usize,
    pub reverse_squarings: usize,
    pub multiplications: usize,
    pub reverse_multiplications: usize,
    /// Copy stages of `n` CNOTs each.
    pub copies: usize,
}

impl ComponentCounts {
    pub fn for_degree(n: usize) -> Self {
        if n == 2 {
            ComponentCounts {
                forward_squarings: 1,
                reverse_squarings: 1,
                multiplications: 0,
                reverse_multiplications: 0,
                copies: 1,
            }
        } else {
            ComponentCounts {
                forward_squarings: n - 1,
                reverse_squarings: n - 1,
                multiplications: n - 2,
                reverse_multiplications: n - 3,
                copies: 2,
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpoCircuit {
    pub circuit: Circuit,
    pub field: FieldSpec,
    pub layout: ExpoLayout,
    pub counts: ComponentCounts,
    /// Where `A`'s coefficients sit once the forward pass has finished.
    pub a_placement_after_step1: Vec<usize>,
    pub squarer: SquaringCircuit,
    pub multiplier_gates: usize,
    pub cost: CostReport,
}

impl ExpoCircuit {
    /// Gate range of the forward pass.
    pub fn step1_range(&self) -> (usize, usize) {
        let s = self.circuit.find_segment(STEP1).expect("step1 segment");
        (s.start, s.end)
    }

    /// The forward pass as a standalone circuit.
    pub fn step1_circuit(&self) -> Circuit {
        let (start, end) = self.step1_range();
        self.circuit.slice(start, end)
    }
}

struct Composer<'a> {
    circuit: Circuit,
    layout: ExpoLayout,
    square: &'a Circuit,
    unsquare: Circuit,
    sigma: &'a [usize],
    multiply: Circuit,
    unmultiply: Circuit,
    /// placement[j] = qubit holding coefficient j of A
    placement: Vec<usize>,
}

impl Composer<'_> {
    fn square(&mut self) -> Result<()> {
        let map = self.placement.clone();
        self.circuit
            .segment("square A", |c| c.append_mapped(self.square, &map))?;
        let mut next = vec![0; self.layout.n];
        for (i, &q) in map.iter().enumerate() {
            next[self.sigma[i]] = q;
        }
        self.placement = next;
        Ok(())
    }

    fn unsquare(&mut self) -> Result<()> {
        let map: Vec<usize> = self.sigma.iter().map(|&k| self.placement[k]).collect();
        let unsquare = &self.unsquare;
        self.circuit
            .segment("unsquare A", |c| c.append_mapped(unsquare, &map))?;
        self.placement = map;
        Ok(())
    }

    fn copy_into_b0(&mut self, name: &str) -> Result<()> {
        let layout = self.layout;
        let placement = self.placement.clone();
        self.circuit.segment(name, |c| {
            for (j, &q) in placement.iter().enumerate() {
                c.push_cnot(q, layout.b(0, j))?;
            }
            Ok(())
        })
    }

    fn mult_map(&self, src: usize, dst: usize) -> Vec<usize> {
        let mut map = self.placement.clone();
        map.extend(self.layout.b_qubits(src));
        map.extend(self.layout.b_qubits(dst));
        map
    }

    fn multiply(&mut self, src: usize, dst: usize) -> Result<()> {
        let map = self.mult_map(src, dst);
        let m = &self.multiply;
        self.circuit
            .segment(format!("multiply A*B[{src}] into B[{dst}]"), |c| {
                c.append_mapped(m, &map)
            })
    }

    fn unmultiply(&mut self, src: usize, dst: usize) -> Result<()> {
        let map = self.mult_map(src, dst);
        let m = &self.unmultiply;
        self.circuit
            .segment(format!("unmultiply A*B[{src}] from B[{dst}]"), |c| {
                c.append_mapped(m, &map)
            })
    }
}

/// Builds the exponentiation circuit for `spec` (`n ≥ 2`).
///
/// Forward pass: square `A`; copy `A` into `B[0]`; for `i = 2..=n-1`, square
/// `A` and multiply `A · B[i-2]` into `B[i-1]`. Backward pass: for
/// `i = n-2` down to `2`, unsquare `A` and unmultiply `A · B[i-2]` out of
/// `B[i-1]`; unsquare; uncopy `B[0]`; unsquare.
///
/// For `n = 2` the loops are empty and uncopying would clear the result, so
/// the circuit is square, copy, unsquare, leaving `B[0] = a²`.
pub fn synth_exponentiation(spec: &FieldSpec) -> Result<ExpoCircuit> {
    let n = spec.degree();
    let layout = ExpoLayout { n };
    let squarer = synth_square(spec)?;
    let multiplier = synth_mult(spec)?;

    let mut circuit = Circuit::new(layout.width());
    circuit.annotate("modulus", spec.to_string());
    circuit.annotate(
        "component",
        format!("GF(2^{n}) exponentiation A -> A^(2^{n}-2) in B[{}]", n - 2),
    );
    let mut comp = Composer {
        circuit,
        layout,
        square: &squarer.circuit,
        unsquare: reverse_circuit(&squarer.circuit),
        sigma: squarer.assignment.sigma(),
        multiply: multiplier.circuit.clone(),
        unmultiply: reverse_circuit(&multiplier.circuit),
        placement: (0..n).collect(),
    };

    comp.square()?;
    comp.copy_into_b0("copy A into B[0]")?;
    for i in 2..n {
        comp.square()?;
        comp.multiply(i - 2, i - 1)?;
    }
    let after_step1 = comp.placement.clone();
    let mid = comp.circuit.len();

    if n == 2 {
        comp.unsquare()?;
    } else {
        for i in (2..=n - 2).rev() {
            comp.unsquare()?;
            comp.unmultiply(i - 2, i - 1)?;
        }
        comp.unsquare()?;
        comp.copy_into_b0("uncopy A from B[0]")?;
        comp.unsquare()?;
    }
    let end = comp.circuit.len();
    debug_assert_eq!(comp.placement, (0..n).collect::<Vec<_>>());

    let mut circuit = comp.circuit;
    circuit.add_segment(STEP1, 0, mid);
    circuit.add_segment(STEP2, mid, end);
    for j in 0..n {
        circuit.set_output_label(j, format!("A_{j}"));
    }
    for k in 0..layout.b_registers() {
        for j in 0..n {
            circuit.set_output_label(layout.b(k, j), format!("B[{k}]_{j}"));
        }
    }
    circuit.set_ancillae((n..layout.width()).collect());

    let counts = ComponentCounts::for_degree(n);
    let g_k = squarer.gate_count();
    let g_u = multiplier.circuit.len();
    let breakdown = breakdown(n, &counts, g_k, g_u);
    if breakdown.values().sum::<usize>() != circuit.len() {
        return Err(Error::Verification(format!(
            "exponentiator gate count {} disagrees with component breakdown",
            circuit.len()
        )));
    }
    let mut cost = CostReport::for_circuit(&spec.to_string(), n, &circuit, breakdown);
    annotate_metrics(&mut cost, n, g_k, g_u);
    cost.fallback = squarer.fallback;

    Ok(ExpoCircuit {
        circuit,
        field: spec.clone(),
        layout,
        counts,
        a_placement_after_step1: after_step1,
        squarer,
        multiplier_gates: g_u,
        cost,
    })
}

fn breakdown(
    n: usize,
    counts: &ComponentCounts,
    g_k: usize,
    g_u: usize,
) -> BTreeMap<String, usize> {
    BTreeMap::from([
        (
            "forward_squarings".to_string(),
            counts.forward_squarings * g_k,
        ),
        (
            "reverse_squarings".to_string(),
            counts.reverse_squarings * g_k,
        ),
        ("multiplications".to_string(), counts.multiplications * g_u),
        (
            "reverse_multiplications".to_string(),
            counts.reverse_multiplications * g_u,
        ),
        ("copies".to_string(), counts.copies * n),
    ])
}

fn annotate_metrics(cost: &mut CostReport, n: usize, g_k: usize, g_u: usize) {
    cost.squaring_metric = Some((n - 1) * g_k);
    cost.squaring_gates_total = Some(2 * (n - 1) * g_k);
    cost.closed_form_total = Some(2 * (n - 1) * g_k + 2 * (n - 2) * g_u);
}

/// Costs the exponentiator for `spec` without building it. Gate totals come
/// from the squarer (synthesized) and the multiplier cost formula; depth is
/// left unset.
pub fn expo_cost(spec: &FieldSpec) -> Result<CostReport> {
    let n = spec.degree();
    let squarer = synth_square(spec)?;
    let g_k = squarer.gate_count();
    let g_u = mult_gate_cost(spec);
    let counts = ComponentCounts::for_degree(n);
    let breakdown = breakdown(n, &counts, g_k, g_u);
    let gate_count = breakdown.values().sum();
    let toffoli_count = (counts.multiplications + counts.reverse_multiplications) * g_u;
    let mut cost = CostReport {
        field: spec.to_string(),
        n,
        gate_count,
        cnot_count: gate_count - toffoli_count,
        toffoli_count,
        qubit_count: n * n,
        depth: None,
        breakdown,
        ancilla_count: n * n - n,
        fallback: squarer.fallback,
        squaring_metric: None,
        squaring_gates_total: None,
        closed_form_total: None,
    };
    annotate_metrics(&mut cost, n, g_k, g_u);
    Ok(cost)
}

/// Which output clause failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpoClause {
    /// `B[n-2] ≠ a^(2^n-2)`.
    Result,
    /// `A` not restored to `a`.
    ARestored,
    /// Some `B[0..n-3]` not back to zero.
    AncillaeZero,
    /// State after the forward pass differs from the expected products.
    Step1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpoFailure {
    pub input: FieldElement,
    pub clause: ExpoClause,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExpoVerification {
    pub checked: u64,
    pub exhaustive: bool,
    pub failure_count: u64,
    pub failures: Vec<ExpoFailure>,
}

impl ExpoVerification {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn first_failure(&self) -> Option<&ExpoFailure> {
        self.failures.first()
    }

    fn fail(&mut self, input: &FieldElement, clause: ExpoClause, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < 8 {
            self.failures.push(ExpoFailure {
                input: input.clone(),
                clause,
                detail,
            });
        }
    }
}

/// Inputs used by [`verify_exponentiation`]: every field element when
/// `2^n ≤ limit`, otherwise `limit` fixed-seed samples.
pub fn verification_inputs(spec: &FieldSpec, limit: u64) -> (Vec<FieldElement>, bool) {
    let n = spec.degree();
    if n < 64 && (1u64 << n) <= limit {
        (spec.elements().collect(), true)
    } else {
        let xs = sample_states(n, limit)
            .map(|b| spec.element_from_bits(&b).expect("width n"))
            .collect();
        (xs, false)
    }
}

/// Simulates on `(a, 0, …, 0)` and checks the result register, the restored
/// `A`, the cleared ancillae, and the forward-pass state
/// `A = a^(2^(n-1))`, `B[0] = a²`, `B[i-1] = Π_{j=1..i} a^(2^j)`.
pub fn verify_exponentiation(e: &ExpoCircuit, limit: u64) -> Result<ExpoVerification> {
    let spec = &e.field;
    let layout = e.layout;
    let n = layout.n;
    let (inputs, exhaustive) = verification_inputs(spec, limit);
    let states: Vec<BasisState> = inputs.iter().map(|a| layout.input_state(a)).collect();
    let finals = simulate_all(&e.circuit, &states)?;
    let mids = simulate_all(&e.step1_circuit(), &states)?;
    let identity: Vec<usize> = (0..n).collect();

    let mut report = ExpoVerification {
        checked: inputs.len() as u64,
        exhaustive,
        ..Default::default()
    };
    for ((a, fin), mid) in inputs.iter().zip(&finals).zip(&mids) {
        let want = spec.exp_fermat(a)?;
        let got = layout.read_b(spec, fin, n - 2);
        if got != want {
            report.fail(
                a,
                ExpoClause::Result,
                format!("B[{}] = {got}, expected {want}", n - 2),
            );
        }
        let a_out = layout.read_a(spec, fin, &identity);
        if &a_out != a {
            report.fail(a, ExpoClause::ARestored, format!("A = {a_out}"));
        }
        if let Some(k) = (0..n.saturating_sub(2)).find(|&k| !layout.read_b(spec, fin, k).is_zero())
        {
            report.fail(
                a,
                ExpoClause::AncillaeZero,
                format!("B[{k}] = {}", layout.read_b(spec, fin, k)),
            );
        }
        if let Some(msg) = step1_mismatch(e, a, mid)? {
            report.fail(a, ExpoClause::Step1, msg);
        }
    }
    Ok(report)
}

fn step1_mismatch(e: &ExpoCircuit, a: &FieldElement, mid: &BasisState) -> Result<Option<String>> {
    let spec = &e.field;
    let layout = e.layout;
    let n = layout.n;
    // a^(2^(n-1)) by repeated squaring
    let mut power = a.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 1..n {
        power = spec.square(&power)?;
        powers.push(power.clone()); // powers[j-1] = a^(2^j)
    }
    let a_mid = layout.read_a(spec, mid, &e.a_placement_after_step1);
    if a_mid != powers[n - 2] {
        return Ok(Some(format!("A = {a_mid}, expected {}", powers[n - 2])));
    }
    let mut product = powers[0].clone();
    let b0 = layout.read_b(spec, mid, 0);
    if b0 != product {
        return Ok(Some(format!("B[0] = {b0}, expected {product}")));
    }
    for i in 2..n {
        product = spec.mul(&product, &powers[i - 1])?;
        let b = layout.read_b(spec, mid, i - 1);
        if b != product {
            return Ok(Some(format!("B[{}] = {b}, expected {product}", i - 1)));
        }
    }
    Ok(None)
}
