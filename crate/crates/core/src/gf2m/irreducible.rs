//! Irreducibility testing and standard modulus selection.

use super::poly::BinaryPolynomial;
use crate::error::{Error, Result};

/// Ben-Or's test: `p` of degree `n` is irreducible iff
/// `gcd(x^(2^k) - x, p) = 1` for every `k ≤ n/2`. Reducible inputs usually
/// exit early through a small factor.
pub fn is_irreducible(p: &BinaryPolynomial) -> Result<bool> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        d => {
            return Err(Error::Degree {
                poly: p.to_string(),
                degree: d.map_or(-1, |d| d as i64),
                min: 1,
            })
        }
    };
    if n == 1 {
        return Ok(true);
    }
    if !p.coeff(0) {
        return Ok(false);
    }
    let x = BinaryPolynomial::monomial(1);
    // frob = x^(2^k) mod p
    let mut frob = x.clone();
    for _ in 1..=n / 2 {
        frob = frob.square().rem(p)?;
        let diff = &frob + &x;
        if diff.gcd(p).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least irreducible trinomial `x^n + x^k + 1` (smallest `k`), if any.
///
/// Degrees divisible by 8 have none (Swan), so they are not searched.
pub fn least_irreducible_trinomial(n: usize) -> Option<BinaryPolynomial> {
    if n.is_multiple_of(8) {
        return None;
    }
    (1..n)
        .map(|k| BinaryPolynomial::from_exponents([n, k, 0]))
        .find(|p| is_irreducible(p).unwrap_or(false))
}

/// Least irreducible pentanomial `x^n + x^a + x^b + x^c + 1`, `n > a > b > c > 0`,
/// minimizing `(a, b, c)` lexicographically (equivalently, the integer value
/// of the coefficient mask).
pub fn least_irreducible_pentanomial(n: usize) -> Option<BinaryPolynomial> {
    for a in 3..n {
        for b in 2..a {
            for c in 1..b {
                let p = BinaryPolynomial::from_exponents([n, a, b, c, 0]);
                if is_irreducible(&p).unwrap_or(false) {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// Minimal-weight irreducible polynomial of degree `n`, ties broken by the
/// smallest coefficient mask: a trinomial when one exists, else a pentanomial.
pub fn standard_modulus(n: usize) -> Option<BinaryPolynomial> {
    match n {
        0 => None,
        1 => Some(BinaryPolynomial::from_exponents([1, 0])),
        2 => Some(BinaryPolynomial::from_exponents([2, 1, 0])),
        _ => least_irreducible_trinomial(n).or_else(|| least_irreducible_pentanomial(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn known_cases() {
        assert!(is_irreducible(&p("x^10+x^3+1")).unwrap());
        assert!(!is_irreducible(&p("x^2+1")).unwrap());
        assert!(is_irreducible(&p("x^4+x+1")).unwrap());
        assert!(is_irreducible(&p("x^2+x+1")).unwrap());
        assert!(is_irreducible(&p("x")).unwrap());
        // x^4+x^2+1 = (x^2+x+1)^2
        assert!(!is_irreducible(&p("x^4+x^2+1")).unwrap());
        // x^6+x^3+1 is irreducible (9th cyclotomic); x^6+x+1 as well
        assert!(is_irreducible(&p("x^6+x^3+1")).unwrap());
    }

    #[test]
    fn constant_rejected() {
        assert!(is_irreducible(&BinaryPolynomial::one()).is_err());
        assert!(is_irreducible(&BinaryPolynomial::zero()).is_err());
    }

    #[test]
    fn trial_division_oracle_small_degrees() {
        // every polynomial of degree <= 9 against trial division by all
        // polynomials of degree 1..=deg/2
        for mask in 2u64..1 << 10 {
            let poly = BinaryPolynomial::from_u64(mask);
            let d = poly.degree().unwrap();
            let reducible = (2u64..1 << (d / 2 + 1)).any(|m| {
                let q = BinaryPolynomial::from_u64(m);
                let qd = q.degree().unwrap();
                qd >= 1 && qd <= d / 2 && poly.rem(&q).unwrap().is_zero()
            });
            assert_eq!(is_irreducible(&poly).unwrap(), !reducible, "{poly}");
        }
    }

    #[test]
    fn standard_trinomials() {
        assert_eq!(standard_modulus(10).unwrap(), p("x^10+x^3+1"));
        assert_eq!(standard_modulus(15).unwrap(), p("x^15+x+1"));
        assert_eq!(standard_modulus(20).unwrap(), p("x^20+x^3+1"));
        assert_eq!(standard_modulus(4).unwrap(), p("x^4+x+1"));
    }

    #[test]
    fn trinomials_of_degree_multiple_of_eight_are_reducible() {
        for n in [8usize, 16, 24] {
            for k in 1..n {
                let t = BinaryPolynomial::from_exponents([n, k, 0]);
                assert!(!is_irreducible(&t).unwrap(), "{t}");
            }
        }
    }

    #[test]
    fn no_trinomial_for_degree_multiple_of_eight() {
        assert!(least_irreducible_trinomial(8).is_none());
        assert_eq!(standard_modulus(8).unwrap(), p("x^8+x^4+x^3+x+1"));
    }
}
