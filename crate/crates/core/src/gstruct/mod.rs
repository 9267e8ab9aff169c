//! Structure groups of adapted coframes and their first-order algebra.
//!
//! The model space is `V = V' ⊕ span{v}` of dimension `2n+1` with basis
//! `(e₁, …, e_{2n}, v)` and the standard complex structure `J₀` on `V'`.
//! This module builds the Lie algebra bases of the three structure groups,
//! the antisymmetrization map `𝒜(S)(u∧v) = S(u)v − S(v)u` on `Hom(V, 𝔤)`,
//! the quotient orbit spaces with explicit cross-sections, the tensor
//! representation `σ(g)S(u∧v) = g⁻¹S(gu∧gv)` and its induced action on
//! classes, and stabilizer algebras inside the conformal orthogonal algebra.

mod amap;
mod group;
mod model;
mod orbit;
mod stabilizer;
mod tensor;

pub use amap::{amap, amap_matrix, hom_map_from_coords};
pub use group::{cayley_orthogonal, random_group_element, GroupElement};
pub use model::{build_lie_algebra, GeneratorTag, Level, LieAlgebraModel, ModelSpace};
pub use orbit::{build_orbit_space, e_action, OrbitSpaceModel, SectionLabel};
pub use stabilizer::{stabilizer_algebra, stabilizer_dimension_f64, standard_skew_form};
pub use tensor::{flat_index, sigma_action_exact, sigma_action_f64, tensor_block, Hom2Tensor, TensorBlock};
