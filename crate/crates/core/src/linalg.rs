//! Square matrices over GF(2).

use std::fmt;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// An `n × n` matrix over GF(2) acting on column vectors: output bit `r`
/// is the parity of `row(r) & input`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    rows: Vec<BitVec>,
}

impl LinearMap {
    pub fn zeros(n: usize) -> Self {
        LinearMap {
            rows: vec![BitVec::zeros(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds from rows; every row must have `rows.len()` bits.
    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        LinearMap { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.dim());
        let mut out = BitVec::zeros(self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// `self · other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let n = self.dim();
        assert_eq!(n, other.dim());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(n);
                for k in row.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        LinearMap { rows }
    }

    /// Reorders rows: row `r` of the result is row `perm[r]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> LinearMap {
        assert_eq!(perm.len(), self.dim());
        LinearMap {
            rows: perm.iter().map(|&p| self.rows[p].clone()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let n = self.dim();
        let mut rank = 0;
        for c in 0..n {
            let Some(p) = (rank..n).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Determinant over GF(2): 1 iff invertible.
    pub fn det(&self) -> bool {
        self.is_invertible()
    }

    /// Synthesizes an in-place CNOT network realizing this map.
    ///
    /// Row-reduces to the identity using only row additions; each addition of
    /// row `c` into row `t` is a CNOT with control `c` and target `t`. The
    /// circuit is the recorded sequence reversed. Returns `(control, target)` pairs.
    pub fn synthesize_cnots(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.dim();
        let mut rows = self.rows.clone();
        let mut ops = Vec::new();
        let mut add = |rows: &mut Vec<BitVec>, src: usize, dst: usize| {
            let s = rows[src].clone();
            rows[dst].xor_assign(&s);
            ops.push((src, dst));
        };
        for c in 0..n {
            if !rows[c].get(c) {
                let p = (c + 1..n)
                    .find(|&r| rows[r].get(c))
                    .ok_or(Error::SingularMap)?;
                add(&mut rows, p, c);
            }
            for r in 0..n {
                if r != c && rows[r].get(c) {
                    add(&mut rows, c, r);
                }
            }
        }
        ops.reverse();
        Ok(ops)
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinearMap {}x{}", self.dim(), self.dim())?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply_cnots(ops: &[(usize, usize)], x: &BitVec) -> BitVec {
        let mut s = x.clone();
        for &(c, t) in ops {
            if s.get(c) {
                s.flip(t);
            }
        }
        s
    }

    #[test]
    fn singular_detected() {
        let m = LinearMap::from_rows(vec![BitVec::from_u64(2, 0b11), BitVec::from_u64(2, 0b11)]);
        assert!(!m.is_invertible());
        assert_eq!(m.rank(), 1);
        assert_eq!(m.synthesize_cnots(), Err(Error::SingularMap));
    }

    #[test]
    fn synthesis_realizes_random_invertible_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 50 {
            let n = rng.random_range(2..=10);
            let m = LinearMap::from_rows(
                (0..n)
                    .map(|_| BitVec::from_u64(n, rng.random::<u64>()))
                    .collect(),
            );
            if !m.is_invertible() {
                assert!(m.synthesize_cnots().is_err());
                continue;
            }
            let ops = m.synthesize_cnots().unwrap();
            for i in 0..n {
                let e = BitVec::unit(n, i);
                assert_eq!(apply_cnots(&ops, &e), m.apply(&e));
            }
            done += 1;
        }
    }

    #[test]
    fn compose_matches_sequential_apply() {
        let a = LinearMap::from_rows((0..5).map(|i| BitVec::from_u64(5, 1 << i | 1)).collect());
        let b = LinearMap::from_rows(
            (0..5)
                .map(|i| BitVec::from_u64(5, 0b10101 >> i | 1 << i))
                .collect(),
        );
        for x in 0..32 {
            let v = BitVec::from_u64(5, x);
            assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
        }
    }
}
