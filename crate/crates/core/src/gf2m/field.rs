//! GF(2^n) in polynomial basis.

use std::fmt;
use std::sync::Arc;

use super::irreducible::is_irreducible;
use super::poly::BinaryPolynomial;
use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::linalg::LinearMap;

#[derive(Debug)]
struct FieldInner {
    modulus: BinaryPolynomial,
    n: usize,
    irreducible: bool,
}

/// A binary field defined by its modulus `f(x)`. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl FieldSpec {
    /// Validates `modulus`: degree at least 2, irreducible over GF(2).
    pub fn new(modulus: BinaryPolynomial) -> Result<Self> {
        let n = Self::check_degree(&modulus)?;
        if !is_irreducible(&modulus)? {
            return Err(Error::Reducible(modulus.to_string()));
        }
        Ok(Self::build(modulus, n, true))
    }

    /// Skips the irreducibility requirement. Arithmetic is then over the
    /// quotient ring GF(2)[x]/f, which has zero divisors; synthesis will
    /// usually fail on such moduli.
    pub fn new_allow_reducible(modulus: BinaryPolynomial) -> Result<Self> {
        let n = Self::check_degree(&modulus)?;
        let irreducible = is_irreducible(&modulus)?;
        Ok(Self::build(modulus, n, irreducible))
    }

    fn check_degree(modulus: &BinaryPolynomial) -> Result<usize> {
        match modulus.degree() {
            Some(n) if n >= 2 => Ok(n),
            d => Err(Error::Degree {
                poly: modulus.to_string(),
                degree: d.map_or(-1, |d| d as i64),
                min: 2,
            }),
        }
    }

    fn build(modulus: BinaryPolynomial, n: usize, irreducible: bool) -> Self {
        FieldSpec {
            inner: Arc::new(FieldInner {
                modulus,
                n,
                irreducible,
            }),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.parse()?)
    }

    pub fn modulus(&self) -> &BinaryPolynomial {
        &self.inner.modulus
    }

    /// Extension degree `n`.
    pub fn degree(&self) -> usize {
        self.inner.n
    }

    pub fn is_irreducible(&self) -> bool {
        self.inner.irreducible
    }

    /// `x^k mod f(x)`.
    pub fn reduce_power(&self, k: usize) -> BinaryPolynomial {
        BinaryPolynomial::monomial(k)
            .rem(self.modulus())
            .expect("modulus is nonzero")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: BinaryPolynomial::zero(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: BinaryPolynomial::one(),
        }
    }

    /// Binds `value` to this field. Its degree must be below `n`; no implicit reduction.
    pub fn element(&self, value: BinaryPolynomial) -> Result<FieldElement> {
        if value.degree().is_some_and(|d| d >= self.degree()) {
            return Err(Error::ElementWidth {
                value: value.to_string(),
                n: self.degree(),
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn element_from_u64(&self, mask: u64) -> Result<FieldElement> {
        self.element(BinaryPolynomial::from_u64(mask))
    }

    /// Interprets exactly `n` bits as coefficients `α_0 … α_{n-1}`.
    pub fn element_from_bits(&self, bits: &BitVec) -> Result<FieldElement> {
        if bits.len() != self.degree() {
            return Err(Error::ElementWidth {
                value: bits.to_string(),
                n: self.degree(),
            });
        }
        self.element(BinaryPolynomial::from_bits(bits))
    }

    /// All `2^n` elements in mask order. Only sensible for small `n`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        assert!(self.degree() < 64);
        (0u64..1 << self.degree()).map(|m| self.element_from_u64(m).expect("mask fits"))
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.field != *self {
            return Err(Error::FieldMismatch {
                expected: self.to_string(),
                found: a.field.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            field: self.clone(),
            value: &a.value + &b.value,
        })
    }

    /// `a · b mod f(x)` by MSB-first shift-and-add with reduction at each step.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let n = self.degree();
        let mut acc = BinaryPolynomial::zero();
        for i in (0..n).rev() {
            acc = acc.shl(1);
            if acc.coeff(n) {
                acc += self.modulus();
            }
            if b.value.coeff(i) {
                acc += &a.value;
            }
        }
        Ok(FieldElement {
            field: self.clone(),
            value: acc,
        })
    }

    /// `a^2 = Σ α_i x^(2i) mod f(x)`: spread the coefficients, then reduce once.
    pub fn square(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        let spread =
            BinaryPolynomial::from_exponents(a.value.exponents().into_iter().map(|i| 2 * i));
        Ok(FieldElement {
            field: self.clone(),
            value: spread.rem(self.modulus())?,
        })
    }

    /// `a^(2^n - 2)` by square-and-multiply. For `a ≠ 0` this is `a^-1`; `0` maps to `0`.
    pub fn exp_fermat(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        // exponent bits MSB first: n-1 ones, then a zero
        let n = self.degree();
        let mut acc = self.one();
        for bit in (0..n).rev() {
            acc = self.square(&acc)?;
            if bit != 0 {
                acc = self.mul(&acc, a)?;
            }
        }
        Ok(acc)
    }

    /// `a^e` for a machine-word exponent.
    pub fn pow(&self, a: &FieldElement, e: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut acc = self.one();
        for bit in (0..64).rev() {
            acc = self.square(&acc)?;
            if (e >> bit) & 1 == 1 {
                acc = self.mul(&acc, a)?;
            }
        }
        Ok(acc)
    }

    /// The squaring map as an `n × n` matrix: column `i` holds `x^(2i) mod f(x)`.
    pub fn frobenius_matrix(&self) -> LinearMap {
        let n = self.degree();
        let mut m = LinearMap::zeros(n);
        for i in 0..n {
            for k in self.reduce_power(2 * i).exponents() {
                m.set(k, i, true);
            }
        }
        m
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.inner.modulus, f)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldSpec(GF(2^{}) mod {})",
            self.inner.n, self.inner.modulus
        )
    }
}

/// An element of a [`FieldSpec`]; coefficients `α_0 … α_{n-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    value: BinaryPolynomial,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> &BinaryPolynomial {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Exactly `n` bits.
    pub fn to_bits(&self) -> BitVec {
        self.value.to_bits(self.field.degree())
    }

    pub fn to_u64(&self) -> u64 {
        self.value.words().first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in GF(2^{})", self.value, self.field.degree())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

/// `a + b`.
pub fn gf_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.field.add(a, b)
}

/// `a · b mod f(x)` in `spec`.
pub fn gf_mul(a: &FieldElement, b: &FieldElement, spec: &FieldSpec) -> Result<FieldElement> {
    spec.mul(a, b)
}

pub fn gf_square(a: &FieldElement, spec: &FieldSpec) -> Result<FieldElement> {
    spec.square(a)
}

pub fn gf_exp_fermat(a: &FieldElement, spec: &FieldSpec) -> Result<FieldElement> {
    spec.exp_fermat(a)
}

pub fn frobenius_matrix(spec: &FieldSpec) -> LinearMap {
    spec.frobenius_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf16() -> FieldSpec {
        FieldSpec::parse("x^4+x+1").unwrap()
    }

    fn el(f: &FieldSpec, s: &str) -> FieldElement {
        f.element(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(matches!(
            FieldSpec::parse("x^2+1"),
            Err(Error::Reducible(_))
        ));
        assert!(matches!(FieldSpec::parse("x+1"), Err(Error::Degree { .. })));
        assert!(matches!(FieldSpec::parse("x"), Err(Error::Degree { .. })));
        let r = FieldSpec::new_allow_reducible("x^2+1".parse().unwrap()).unwrap();
        assert!(!r.is_irreducible());
    }

    #[test]
    fn element_width_is_enforced() {
        let f = gf16();
        assert!(f.element("x^4".parse().unwrap()).is_err());
        assert!(f.element_from_bits(&BitVec::zeros(5)).is_err());
        assert!(f.element_from_bits(&BitVec::zeros(4)).is_ok());
    }

    #[test]
    fn add_examples() {
        let f = gf16();
        let a = f.element_from_u64(0b0101).unwrap();
        let b = f.element_from_u64(0b0011).unwrap();
        assert_eq!(gf_add(&a, &b).unwrap().to_u64(), 0b0110);
        assert!(gf_add(&a, &a).unwrap().is_zero());
        assert_eq!(gf_add(&a, &f.zero()).unwrap(), a);
    }

    #[test]
    fn mismatched_fields_rejected() {
        let f = gf16();
        let g = FieldSpec::parse("x^4+x^3+1").unwrap();
        let a = f.one();
        let b = g.one();
        assert!(matches!(gf_add(&a, &b), Err(Error::FieldMismatch { .. })));
        assert!(gf_mul(&a, &a, &g).is_err());
        assert!(gf_square(&a, &g).is_err());
    }

    #[test]
    fn mul_examples() {
        let f = gf16();
        assert_eq!(
            gf_mul(&el(&f, "x"), &el(&f, "x^3"), &f).unwrap(),
            el(&f, "x+1")
        );
        for a in f.elements() {
            assert_eq!(gf_mul(&a, &f.one(), &f).unwrap(), a);
            assert!(gf_mul(&a, &f.zero(), &f).unwrap().is_zero());
        }
    }

    #[test]
    fn square_examples() {
        let f = gf16();
        assert_eq!(gf_square(&el(&f, "x"), &f).unwrap(), el(&f, "x^2"));
        assert_eq!(gf_square(&el(&f, "x^2"), &f).unwrap(), el(&f, "x+1"));
        assert_eq!(gf_square(&f.one(), &f).unwrap(), f.one());
        assert_eq!(gf_square(&f.zero(), &f).unwrap(), f.zero());
    }

    #[test]
    fn fermat_examples() {
        let f = gf16();
        assert_eq!(gf_exp_fermat(&f.one(), &f).unwrap(), f.one());
        assert_eq!(gf_exp_fermat(&f.zero(), &f).unwrap(), f.zero());
        assert_eq!(gf_exp_fermat(&el(&f, "x"), &f).unwrap(), el(&f, "x^3+1"));
        for a in f.elements().skip(1) {
            let inv = gf_exp_fermat(&a, &f).unwrap();
            assert_eq!(gf_mul(&a, &inv, &f).unwrap(), f.one(), "{a}");
        }
    }

    #[test]
    fn fermat_matches_generic_pow() {
        let f = FieldSpec::parse("x^7+x+1").unwrap();
        for a in f.elements() {
            assert_eq!(f.exp_fermat(&a).unwrap(), f.pow(&a, (1 << 7) - 2).unwrap());
        }
    }

    #[test]
    fn frobenius_small_cases() {
        let f = FieldSpec::parse("x^2+x+1").unwrap();
        let m = f.frobenius_matrix();
        // Y0 = α0 ⊕ α1, Y1 = α1
        assert!(m.get(0, 0) && m.get(0, 1));
        assert!(!m.get(1, 0) && m.get(1, 1));

        let f = FieldSpec::parse("x^10+x^3+1").unwrap();
        let m = f.frobenius_matrix();
        for i in 0..5 {
            for k in 0..10 {
                assert_eq!(m.get(k, i), k == 2 * i);
            }
        }
        assert!(m.is_invertible());
    }

    #[test]
    fn frobenius_applies_square() {
        let f = FieldSpec::parse("x^9+x^4+1").unwrap();
        let m = f.frobenius_matrix();
        for a in f.elements() {
            let sq = f.square(&a).unwrap();
            assert_eq!(m.apply(&a.to_bits()), sq.to_bits());
        }
    }

    proptest! {
        #[test]
        fn add_is_associative_commutative_self_inverse(a in 0u64..1 << 13, b in 0u64..1 << 13, c in 0u64..1 << 13) {
            let f = FieldSpec::parse("x^13+x^4+x^3+x+1").unwrap();
            let (a, b, c) = (f.element_from_u64(a).unwrap(), f.element_from_u64(b).unwrap(), f.element_from_u64(c).unwrap());
            let ab_c = gf_add(&gf_add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = gf_add(&a, &gf_add(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(gf_add(&a, &b).unwrap(), gf_add(&b, &a).unwrap());
            prop_assert!(gf_add(&a, &a).unwrap().is_zero());
        }

        #[test]
        fn mul_distributes_over_add(a in 0u64..1 << 13, b in 0u64..1 << 13, c in 0u64..1 << 13) {
            let f = FieldSpec::parse("x^13+x^4+x^3+x+1").unwrap();
            let (a, b, c) = (f.element_from_u64(a).unwrap(), f.element_from_u64(b).unwrap(), f.element_from_u64(c).unwrap());
            let lhs = f.mul(&a, &f.add(&b, &c).unwrap()).unwrap();
            let rhs = f.add(&f.mul(&a, &b).unwrap(), &f.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn poly_mod_remainder_identity(p in proptest::collection::vec(any::<u64>(), 0..4), fmask in 2u64..1 << 20) {
            let p = BinaryPolynomial::from_words(p);
            let f = BinaryPolynomial::from_u64(fmask);
            let (q, r) = p.div_rem(&f).unwrap();
            prop_assert!(r.degree().is_none_or(|d| d < f.degree().unwrap()));
            prop_assert_eq!(&p + &q.mul(&f), r);
        }
    }
}
