//! Coframe reduction and canonical connections for sub-Riemannian contact
//! structures.
//!
//! A sub-Riemannian structure on a `(2n+1)`-dimensional chart is a contact
//! form together with a fiberwise inner product on its kernel distribution.
//! This crate computes the associated local invariants by the method of
//! equivalence:
//!
//! * [`linalg`] — exact rational linear algebra (row echelon, kernels,
//!   quotients) and the floating-point skew normal form under orthogonal
//!   congruence.
//! * [`symexpr`] — a small expression language for chart coefficients with
//!   symbolic differentiation and exterior calculus on one- and two-forms.
//! * [`gstruct`] — structure groups of adapted coframes, their Lie algebra
//!   bases, the antisymmetrization map `S ↦ S(u)v − S(v)u`, orbit spaces and
//!   stabilizers.
//! * [`reduction`] — adapted coframes from a structure specification,
//!   structure coefficients, and the two-step normalization down to a
//!   unitary structure group.
//! * [`connection`] — the invariant complement, the canonical connection
//!   with its torsion and curvature, and pointwise equivalence comparison.
//! * [`contact`] — the bridge to contact Riemannian geometry: Reeb fields,
//!   associated metrics and the existence test for an associated form.
//!
//! All algebraic setup (Lie algebra bases, images, quotients) is done over
//! exact rationals so dimension counts never depend on tolerances; pointwise
//! geometry on a chart is done in `f64` with a single global absolute
//! tolerance that callers may override.

pub mod connection;
pub mod contact;
pub mod error;
pub mod gstruct;
pub mod linalg;
pub mod models;
pub mod reduction;
pub mod report;
pub mod symexpr;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Exact scalar of the rational tower.
pub type Rat = num_rational::BigRational;

/// Default absolute tolerance for all floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default step for finite-difference stencils along chart axes.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Integer as an exact rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Exact rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(p.into(), q.into())
}
