//! Exact computations around stable germs of regular semisimple self-adjoint
//! operators on split quadratic spaces over finite fields.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: finite fields, polynomials, factorization, linear algebra,
//!   exact rational polynomials.
//! - [`zeta`]: hyperelliptic point counts, Weil polynomials, stable
//!   coefficients `a_m` and symmetric power counts.
//! - [`catalan`]: Catalan polynomials and the triangular matrices built
//!   from them.
//! - [`weyl`]: signed-permutation sums that evaluate nilpotent orbital
//!   integrals.
//! - [`quadrics`]: pencils of quadrics, orbit representatives, flag
//!   censuses and orbital sums.
//! - [`germs`]: germ expansions solved from flag data and the closed
//!   formulas.
//! - [`endoscopy`]: the endoscopic convolution identity and biquadratic
//!   covers.
//! - [`verify`]: the verification suites with their reports.

pub mod algebra;
pub mod catalan;
pub mod endoscopy;
pub mod germs;
pub mod quadrics;
pub mod verify;
pub mod weyl;
pub mod zeta;
