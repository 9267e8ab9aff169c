//! The canonical connection of a reduced structure: an invariant complement
//! to the image of the antisymmetrization map, the unique decomposition of
//! the structure tensor into connection coefficients plus torsion, the
//! curvature of the resulting connection form, and pointwise equivalence
//! comparison of two structures.

mod canonical;
mod compare;
mod complement;
mod curvature;

pub use canonical::{canonical_connection, ConnectionData};
pub use compare::{
    compare_structures, invariant_sample, CompareRow, EquivalenceVerdict, InvariantSample,
    Verdict,
};
pub use complement::{invariant_complement, invariant_complement_weighted, ComplementModel};
pub use curvature::{curvature, CurvatureData};
