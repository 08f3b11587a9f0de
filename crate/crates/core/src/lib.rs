//! Exact verification toolkit for Ulrich objects in bounded derived categories.
//!
//! The crate works with a small family of polarized model varieties (projective
//! spaces, quadrics, products of projective spaces, Picard-rank-one surfaces and
//! elliptic curves). Sheaves are symbolic descriptors backed by exact cohomology
//! oracles, and complexes are represented by their cohomology sheaves plus
//! opaque gluing data. Every number is an integer or an exact rational.
//!
//! The main entry points are:
//!
//! * [`cohomology::sheaf_table`] for twisted cohomology tables,
//! * [`ulrich::is_ulrich_sheaf`] and [`ulrich::is_ulrich_object`],
//! * [`chern::ulrich_chern_solve`] for the Riemann–Roch constraints,
//! * [`generators::generator_gate`] for K-group rank gating,
//! * [`bridgeland::central_charge`] and [`bridgeland::heart_gate`].

pub mod bridgeland;
pub mod chern;
pub mod cohomology;
pub mod complexes;
mod error;
pub mod generators;
pub mod lattice;
pub mod rational;
pub mod ulrich;
pub mod variety;

pub use error::{Error, Result};
