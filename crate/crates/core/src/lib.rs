//! Finite multiplicative lattices, weak ideal systems on commutative monoids,
//! and the lifting of a lattice along a wire to a weak ideal system whose
//! ideal lattice is isomorphic to it.
//!
//! The divisibility lattice of the naturals and norm images of imaginary
//! quadratic orders live in [`nat`] and are generic over the integer type.

#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod lifting;
pub mod monoid;
pub mod nat;
pub mod quadratic;

pub use bits::{Mask, MAX_ELEMENTS};
pub use enumerate::{enumerate_small_lattices, find_isomorphism};
pub use error::{LoadError, OracleViolation};
pub use lattice::{verify_lattice, FiniteLattice, LatticeData, LatticeError, LatticeVerdict};
pub use lifting::{analyze_wire, lift, LiftError, LiftResult, WireReport};
pub use monoid::{ClosureMap, FiniteMonoid, IdealLattice};
pub use nat::{nat_join, nat_meet, nat_residual};
pub use quadratic::{QuadError, QuadInt, QuadOrder};

/// `ℤ[√d]` with machine-word coefficients.
pub type QuadOrder64 = QuadOrder<i64>;
/// `ℤ[√d]` with 128-bit coefficients.
pub type QuadOrder128 = QuadOrder<i128>;
/// `ℤ[√d]` with arbitrary-precision coefficients.
pub type BigQuadOrder = QuadOrder<num_bigint::BigInt>;
