//! Exact basis-state simulation of CNOT/Toffoli circuits.
//!
//! All gates here are classical reversible, so a computational basis state
//! maps to a single basis state and simulation is a bit-vector walk over the
//! gate list. [`simulate_lanes`] runs 64 states at once, one `u64` per qubit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVec;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::LinearMap;

/// A computational basis state; bit `q` is qubit `q`.
pub type BasisState = BitVec;

/// Seed used by every sampled check.
pub const SAMPLE_SEED: u64 = 0x6f2_5eed;

pub fn simulate(c: &Circuit, s: &BasisState) -> Result<BasisState> {
    if s.len() != c.width() {
        return Err(Error::WidthMismatch {
            expected: c.width(),
            found: s.len(),
        });
    }
    let mut state = s.clone();
    apply_gates(c.gates(), &mut state);
    Ok(state)
}

pub(crate) fn apply_gates(gates: &[Gate], state: &mut BitVec) {
    for g in gates {
        match *g {
            Gate::Cnot { control, target } => {
                if state.get(control) {
                    state.flip(target);
                }
            }
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => {
                if state.get(control1) && state.get(control2) {
                    state.flip(target);
                }
            }
        }
    }
}

/// Bit-sliced simulation: `lanes[q]` holds qubit `q` for 64 independent states.
pub fn simulate_lanes(c: &Circuit, lanes: &mut [u64]) -> Result<()> {
    if lanes.len() != c.width() {
        return Err(Error::WidthMismatch {
            expected: c.width(),
            found: lanes.len(),
        });
    }
    for g in c.gates() {
        match *g {
            Gate::Cnot { control, target } => lanes[target] ^= lanes[control],
            Gate::Toffoli {
                control1,
                control2,
                target,
            } => lanes[target] ^= lanes[control1] & lanes[control2],
        }
    }
    Ok(())
}

/// The matrix of a CNOT-only circuit, built column by column from unit inputs.
pub fn extract_linear(c: &Circuit) -> Result<LinearMap> {
    if !c.is_cnot_only() {
        return Err(Error::NonlinearCircuit);
    }
    let n = c.width();
    let mut m = LinearMap::zeros(n);
    for col in 0..n {
        let out = simulate(c, &BitVec::unit(n, col))?;
        for r in out.ones() {
            m.set(r, col, true);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub input: BasisState,
    pub expected: BasisState,
    pub actual: BasisState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    /// Number of basis states compared.
    pub checked: u64,
    /// True if every basis state of the circuit's width was covered.
    pub exhaustive: bool,
    pub mismatch_count: u64,
    /// The first few mismatches, in enumeration order.
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    const KEEP: usize = 8;

    fn new(exhaustive: bool) -> Self {
        CheckReport {
            checked: 0,
            exhaustive,
            mismatch_count: 0,
            mismatches: Vec::new(),
        }
    }

    fn record(&mut self, input: &BasisState, expected: BasisState, actual: BasisState) {
        self.checked += 1;
        if expected != actual {
            self.mismatch_count += 1;
            if self.mismatches.len() < Self::KEEP {
                self.mismatches.push(Mismatch {
                    input: input.clone(),
                    expected,
                    actual,
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }
}

/// Uniform random states from the fixed seed.
pub fn sample_states(width: usize, count: u64) -> impl Iterator<Item = BasisState> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..count).map(move |_| {
        let mut s = BitVec::zeros(width);
        for q in 0..width {
            if rng.random::<bool>() {
                s.set(q, true);
            }
        }
        s
    })
}

/// Compares `simulate(c, ·)` against `oracle` on every basis state when
/// `2^width <= limit`, otherwise on `limit` fixed-seed random states.
pub fn exhaustive_check<F>(c: &Circuit, oracle: F, limit: u64) -> CheckReport
where
    F: Fn(&BasisState) -> BasisState,
{
    let w = c.width();
    let exhaustive = w < 64 && (1u64 << w) <= limit;
    if exhaustive {
        check_states(
            c,
            (0..1u64 << w).map(|m| BitVec::from_u64(w, m)),
            oracle,
            true,
        )
    } else {
        check_states(c, sample_states(w, limit), oracle, false)
    }
}

/// Simulates up to 64 states in one bit-sliced pass.
pub fn simulate_batch(c: &Circuit, states: &[BasisState]) -> Result<Vec<BasisState>> {
    assert!(states.len() <= 64, "at most 64 states per batch");
    let w = c.width();
    let mut lanes = vec![0u64; w];
    for (lane, s) in states.iter().enumerate() {
        if s.len() != w {
            return Err(Error::WidthMismatch {
                expected: w,
                found: s.len(),
            });
        }
        for q in s.ones() {
            lanes[q] |= 1 << lane;
        }
    }
    simulate_lanes(c, &mut lanes)?;
    Ok((0..states.len())
        .map(|lane| {
            let mut out = BitVec::zeros(w);
            for (q, l) in lanes.iter().enumerate() {
                if (l >> lane) & 1 == 1 {
                    out.set(q, true);
                }
            }
            out
        })
        .collect())
}

/// Simulates any number of states, 64 at a time.
pub fn simulate_all(c: &Circuit, states: &[BasisState]) -> Result<Vec<BasisState>> {
    let mut out = Vec::with_capacity(states.len());
    for chunk in states.chunks(64) {
        out.extend(simulate_batch(c, chunk)?);
    }
    Ok(out)
}

/// Compares on an explicit list of inputs.
pub fn check_states<I, F>(c: &Circuit, inputs: I, oracle: F, exhaustive: bool) -> CheckReport
where
    I: IntoIterator<Item = BasisState>,
    F: Fn(&BasisState) -> BasisState,
{
    let mut report = CheckReport::new(exhaustive);
    let mut batch: Vec<BasisState> = Vec::with_capacity(64);
    let flush = |batch: &mut Vec<BasisState>, report: &mut CheckReport| {
        let outs = simulate_batch(c, batch).expect("input state width");
        for (s, actual) in batch.iter().zip(outs) {
            report.record(s, oracle(s), actual);
        }
        batch.clear();
    };
    for s in inputs {
        batch.push(s);
        if batch.len() == 64 {
            flush(&mut batch, &mut report);
        }
    }
    if !batch.is_empty() {
        flush(&mut batch, &mut report);
    }
    report
}

/// Checks that `c` acts as the identity. Exhaustive over all `2^width`
/// states when that is at most `limit`, sampled otherwise. The exhaustive
/// path enumerates states directly in bit-sliced form.
pub fn check_identity(c: &Circuit, limit: u64) -> CheckReport {
    let w = c.width();
    if !(w < 64 && (1u64 << w) <= limit) {
        return exhaustive_check(c, |s| s.clone(), limit);
    }
    const LOW: [u64; 6] = [
        0xaaaa_aaaa_aaaa_aaaa,
        0xcccc_cccc_cccc_cccc,
        0xf0f0_f0f0_f0f0_f0f0,
        0xff00_ff00_ff00_ff00,
        0xffff_0000_ffff_0000,
        0xffff_ffff_0000_0000,
    ];
    let total = 1u64 << w;
    let live = if total >= 64 {
        u64::MAX
    } else {
        (1u64 << total) - 1
    };
    let batches = total.div_ceil(64);
    let mut report = CheckReport::new(true);
    let mut lanes = vec![0u64; w];
    let mut input = vec![0u64; w];
    for b in 0..batches {
        for q in 0..w {
            input[q] = if q < 6 {
                LOW[q]
            } else if (b >> (q - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            } & live;
        }
        lanes.copy_from_slice(&input);
        simulate_lanes(c, &mut lanes).expect("width matches");
        let diff = input
            .iter()
            .zip(&lanes)
            .fold(0u64, |acc, (a, b)| acc | (a ^ b));
        let lanes_in_batch = total.min(64);
        report.checked += lanes_in_batch;
        if diff != 0 {
            report.mismatch_count += diff.count_ones() as u64;
            let lane = diff.trailing_zeros();
            if report.mismatches.len() < CheckReport::KEEP {
                let unpack = |v: &[u64]| {
                    BitVec::from_bools(&v.iter().map(|l| (l >> lane) & 1 == 1).collect::<Vec<_>>())
                };
                let inp = unpack(&input);
                report.mismatches.push(Mismatch {
                    expected: inp.clone(),
                    input: inp,
                    actual: unpack(&lanes),
                });
            }
        }
    }
    report
}
