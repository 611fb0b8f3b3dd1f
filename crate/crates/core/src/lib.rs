//! Exact computations with weighted-homogeneous hypersurfaces: graded
//! Jacobian rings, the sector decomposition of `Hom(Delta, Delta(t)[m])`,
//! Hochschild invariants, infinitesimal variations of Hodge structure and
//! weighted normal forms.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod hs;
pub mod ivhs;
pub mod jacobian;
pub mod linalg;
pub mod normalform;
pub mod sectors;
pub mod wpoly;

pub use error::{Error, Result};
pub use jacobian::{GradedPiece, JacobianRing, MultiplicationTensor};
pub use wpoly::{
    monomials_of_degree, parse_polynomial, weighted_degree, CoordinateChange, Monomial,
    WPolynomial, WeightedRing,
};
