//! Quadratic spaces over finite fields, self-adjoint operators, rational
//! orbits, isotropic flag varieties and orbital integrals.

pub mod flags;
pub mod forms;
pub mod group;
pub mod orbital;
pub mod orbits;
pub mod torsion;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error)]
pub enum QuadricsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("characteristic polynomial must be monic and squarefree")]
    NotRegular,
    #[error("SO_{n}(F_{q}) has order {order}, over the enumeration bound")]
    GroupTooLarge { n: usize, q: u32, order: u128 },
    #[error("group closure reached {found} elements, expected {expected}")]
    GroupClosure { expected: u128, found: u128 },
    #[error("enumeration over {what} exceeds the size bound")]
    TooLarge { what: String },
    #[error("m = {m} out of range for g = {g}")]
    BadIndex { m: usize, g: usize },
}

pub use flags::{
    common_isotropic, even_census, odd_census, odd_predicates, EvenCensus, FlagPredicates,
    OddCensus,
};
pub use forms::{split_basis, split_gram, CornerSign, Pencil};
pub use group::{cached_so, enumerate_so, so_order, MAX_GROUP_ORDER};
pub use orbital::{exact_flags_from_group, orbital_count, NilpotentFamily};
pub use orbits::{build_orbit_representatives, OrbitLabel, OrbitRep, SquareClasses};
pub use torsion::{torsion_sizes, TorsionSizes};
