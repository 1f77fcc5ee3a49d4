//! Finite fields, polynomials over them, their factorization, linear algebra,
//! and exact rational polynomials and series.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod rational;

pub use factor::{factor, is_irreducible, is_squarefree, Factorization};
pub use field::{Elem, Extension, Field};
pub use linalg::{Mat, Subspace};
pub use poly::Poly;
pub use rational::{Poly2, RatPoly, Series, Q};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field F_{p}^{k} exceeds the table limit")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("no embedding of the base field was found")]
    NoEmbedding,
    #[error("coefficient {0} is not a valid field element")]
    BadCoefficient(i64),
}

/// Parse a comma-separated coefficient list, low degree first, reducing
/// signed integers into the prime field.
pub fn parse_poly(f: &Field, text: &str) -> Result<Poly, AlgebraError> {
    let mut coeffs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let n: i64 = part.parse().map_err(|_| AlgebraError::BadCoefficient(0))?;
        if f.is_prime_field() {
            coeffs.push(f.from_int(n));
        } else if (0..f.order() as i64).contains(&n) {
            coeffs.push(n as Elem);
        } else {
            return Err(AlgebraError::BadCoefficient(n));
        }
    }
    Ok(Poly::new(coeffs))
}
