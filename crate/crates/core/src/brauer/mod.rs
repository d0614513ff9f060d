//! Brauer classes over a global field seen through finitely many places.
//!
//! A class over an étale algebra is one local invariant in `Q/Z` per place,
//! summing to zero on each field factor. Restriction multiplies by the
//! relative local degree and corestriction sums over the places above.

mod class;
mod enumerate;
mod etale;
mod qz;
mod surface;

pub use class::{corestriction, restriction, BrauerClass};
pub use enumerate::{
    check_bound, check_psi, check_psi_all, cor_trivial_classes, enumerate_towers,
    enumerate_valid_pairs, k_patterns, l_patterns, matching_pairs, PsiCheck, ALLOWED_BOUNDS,
};
pub use etale::{
    compose_etale, Component, Composite, EtaleAlgebra, GlobalFieldModel, Place, PlaceMap,
};
pub use qz::Qz;
pub use surface::{
    natural_automorphisms, pair_violations, same_surface, validate_pair, GroupElement,
    PairViolation, PlacePermutation, SurfaceData, Tower,
};
