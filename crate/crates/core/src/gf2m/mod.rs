//! Exact arithmetic over GF(2)[x] and GF(2^n). Every synthesized circuit is
//! checked against these routines.

mod field;
mod irreducible;
mod poly;

pub use field::{
    frobenius_matrix, gf_add, gf_exp_fermat, gf_mul, gf_square, FieldElement, FieldSpec,
};
pub use irreducible::{
    is_irreducible, least_irreducible_pentanomial, least_irreducible_trinomial, standard_modulus,
};
pub use poly::{poly_mod, BinaryPolynomial};
