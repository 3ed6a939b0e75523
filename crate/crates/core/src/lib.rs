//! Exact computations around the twisted cohomology of level-ℓ mapping class
//! groups with coefficients in tensor powers of Prym representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`abelian_group`] models the deck group `D = (Z/ℓ)^{2g}` and general finite abelian groups.
//! * [`partitions`] enumerates set partitions, weighted partitions and `D`-weighted partitions.
//! * [`algebra`] holds normal-form arithmetic and graded dimensions of the quotient algebras,
//!   together with an independent generators-and-relations oracle.
//! * [`series`] builds dimension tables (stable cohomology, twisted cohomology, strata).
//! * [`symmetry`] computes `S_r` permutation characters and their decompositions.
//! * [`rigidity`] does the exact symplectic linear algebra for commutants.
//! * [`cli`] is the batch front end.
//!
//! Everything is exact: big integers, polynomials in the symbol `m = |D|` and
//! rationals. Nothing here claims that an abstract algebra equals an actual
//! cohomology group outside the stable ranges exposed by [`series::in_stable_range`].

pub mod abelian_group;
pub mod algebra;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod par;
pub mod partitions;
pub mod poly;
pub mod rigidity;
pub mod series;
pub mod symmetry;

pub use error::{Error, Result};
