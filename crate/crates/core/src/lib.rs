//! Verification kernel for the Galois-cohomological invariants and index
//! reduction of degree-6 del Pezzo surfaces.

pub mod brauer;
pub mod cohomology;
pub mod error;
pub mod hexagon;
pub mod index_reduction;
pub mod involution;
pub mod k_theory;
pub mod lattice;
pub mod par;
pub mod report;
pub mod schema;
pub mod verify;
