//! Polynomials over GF(2).

use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A polynomial over GF(2). Bit `i` of the packed representation is the
/// coefficient of `x^i`.
///
/// The word vector never has trailing zero words, so the zero polynomial is
/// the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPolynomial {
    words: Vec<u64>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        BinaryPolynomial { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        BinaryPolynomial { words }
    }

    /// Sum of `x^e` over the given exponents. Repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn from_u64(mask: u64) -> Self {
        Self::from_words(vec![mask])
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        BinaryPolynomial { words }
    }

    pub fn from_bits(bits: &BitVec) -> Self {
        Self::from_words(bits.words().to_vec())
    }

    /// Coefficients as a bit vector of exactly `len` bits.
    ///
    /// Panics if the polynomial does not fit.
    pub fn to_bits(&self, len: usize) -> BitVec {
        assert!(
            self.degree().is_none_or(|d| d < len),
            "polynomial of degree {:?} does not fit in {len} bits",
            self.degree()
        );
        BitVec::from_words(len, self.words.clone())
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn toggle(&mut self, k: usize) {
        if self.words.len() <= k / 64 {
            self.words.resize(k / 64 + 1, 0);
        }
        self.words[k / 64] ^= 1 << (k % 64);
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Multiplies by `x^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::from_words(words)
    }

    fn xor_shifted(&mut self, other: &Self, k: usize) {
        let (ws, bs) = (k / 64, k % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.normalize();
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for e in other.exponents() {
            acc.xor_shifted(self, e);
        }
        acc
    }

    /// `p(x)^2`: coefficient `i` moves to position `2i`.
    pub fn square(&self) -> Self {
        let mut words = vec![0u64; self.words.len() * 2];
        for (i, &w) in self.words.iter().enumerate() {
            words[2 * i] = spread(w as u32);
            words[2 * i + 1] = spread((w >> 32) as u32);
        }
        Self::from_words(words)
    }

    /// Quotient and remainder, reducing by repeated XOR of shifted `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::ZeroModulus)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            quot.toggle(r - d);
            rem.xor_shifted(divisor, r - d);
        }
        Ok((quot, rem))
    }

    /// `self mod modulus`.
    pub fn rem(&self, modulus: &Self) -> Result<Self> {
        Ok(self.div_rem(modulus)?.1)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a
    }

    /// Renders the big-endian hex coefficient mask (e.g. `0x409` for `x^10+x^3+1`).
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0x0".to_string();
        }
        let mut s = format!("0x{:x}", self.words.last().unwrap());
        for w in self.words.iter().rev().skip(1) {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }
}

/// Interleaves the bits of `v` with zeros.
fn spread(v: u32) -> u64 {
    let mut x = v as u64;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// `p mod f`, the free-function form of [`BinaryPolynomial::rem`].
pub fn poly_mod(p: &BinaryPolynomial, f: &BinaryPolynomial) -> Result<BinaryPolynomial> {
    p.rem(f)
}

impl Add for &BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn add(self, rhs: Self) -> BinaryPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&BinaryPolynomial> for BinaryPolynomial {
    fn add_assign(&mut self, rhs: &BinaryPolynomial) {
        self.xor_shifted(rhs, 0);
    }
}

impl Mul for &BinaryPolynomial {
    type Output = BinaryPolynomial;

    fn mul(self, rhs: Self) -> BinaryPolynomial {
        BinaryPolynomial::mul(self, rhs)
    }
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPolynomial({self})")
    }
}

/// Accepts monomial sums (`x^10+x^3+1`, whitespace and `*` tolerated, `X`
/// accepted for `x`) or a big-endian hex coefficient mask (`0x409`).
impl FromStr for BinaryPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        if let Some(hex) = compact
            .strip_prefix("0x")
            .or_else(|| compact.strip_prefix("0X"))
        {
            return parse_hex(hex).ok_or_else(|| err("invalid hex digits"));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for term in compact.split('+') {
            let e = parse_term(term).ok_or_else(|| err(&format!("bad term {term:?}")))?;
            p.toggle(e);
        }
        Ok(p)
    }
}

fn parse_term(term: &str) -> Option<usize> {
    match term {
        "1" => return Some(0),
        "x" | "X" => return Some(1),
        _ => {}
    }
    let rest = term
        .strip_prefix("x^")
        .or_else(|| term.strip_prefix("X^"))
        .or_else(|| term.strip_prefix("x**"))?;
    let rest = rest.trim_start_matches('{').trim_end_matches('}');
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn parse_hex(hex: &str) -> Option<BinaryPolynomial> {
    let hex = hex.trim_start_matches('0');
    if hex.is_empty() {
        return Some(BinaryPolynomial::zero());
    }
    let mut words = Vec::new();
    let bytes = hex.as_bytes();
    let mut end = bytes.len();
    while end > 0 {
        let start = end.saturating_sub(16);
        let chunk = std::str::from_utf8(&bytes[start..end]).ok()?;
        words.push(u64::from_str_radix(chunk, 16).ok()?);
        end = start;
    }
    Some(BinaryPolynomial::from_words(words))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_monomial_form() {
        let f = p("x^10 + x^3 + 1");
        assert_eq!(f.degree(), Some(10));
        assert_eq!(f.to_string(), "x^10+x^3+1");
        assert_eq!(p("x^{4}+x+1").to_string(), "x^4+x+1");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("x").to_string(), "x");
    }

    #[test]
    fn hex_and_monomial_agree() {
        assert_eq!(p("0x409"), p("x^10+x^3+1"));
        assert_eq!(p("x^10+x^3+1").to_hex(), "0x409");
        let big = BinaryPolynomial::from_exponents([512, 8, 5, 2, 0]);
        assert_eq!(big.to_hex().parse::<BinaryPolynomial>().unwrap(), big);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "x^", "y+1", "x^-3", "0xzz", "x^3++1"] {
            assert!(bad.parse::<BinaryPolynomial>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn repeated_terms_cancel() {
        assert_eq!(p("x^3+x^3+1"), BinaryPolynomial::one());
    }

    #[test]
    fn reduce_x10_by_x10_x3_1() {
        let f = p("x^10+x^3+1");
        assert_eq!(
            poly_mod(&BinaryPolynomial::monomial(10), &f).unwrap(),
            p("x^3+1")
        );
        assert_eq!(
            poly_mod(&BinaryPolynomial::monomial(4), &f).unwrap(),
            p("x^4")
        );
        assert!(poly_mod(&BinaryPolynomial::zero(), &f).unwrap().is_zero());
    }

    #[test]
    fn zero_modulus_rejected() {
        assert_eq!(
            poly_mod(&p("x+1"), &BinaryPolynomial::zero()),
            Err(Error::ZeroModulus)
        );
    }

    #[test]
    fn square_matches_mul() {
        let a = BinaryPolynomial::from_exponents([0, 5, 31, 32, 63, 64, 100]);
        assert_eq!(a.square(), a.mul(&a));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x+1)(x^2+x+1) and (x+1)^2
        let a = p("x^3+1");
        let b = p("x^2+1");
        assert_eq!(a.gcd(&b), p("x+1"));
    }
}
