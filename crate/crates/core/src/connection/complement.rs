//! The invariant complement to the image of the antisymmetrization map at
//! the reduced level.

use nalgebra::DMatrix;

use crate::gstruct::{
    amap_matrix, build_lie_algebra, cayley_orthogonal, flat_index, sigma_action_exact,
    tensor_block, Hom2Tensor, Level, LieAlgebraModel, TensorBlock,
};
use crate::linalg::{npairs, orthogonal_complement, pairs, Mat, QuotientModel, Subspace};
use crate::{rat, ratio, Error, Rat, Result};

/// A complement `C` to the image of the antisymmetrization map on
/// `Hom(V, 𝔤₂)` inside `Hom(V∧V, V)`, invariant under the reduced group's
/// tensor representation, together with the projector onto `C` along the
/// image and float-tower caches for pointwise solves.
#[derive(Clone, Debug)]
pub struct ComplementModel {
    n: usize,
    quotient: QuotientModel,
    gram_desc: String,
    alg: LieAlgebraModel,
    amap_f64: DMatrix<f64>,
    projector_f64: DMatrix<f64>,
    /// Exact pseudo-inverse of the reduced Lie algebra basis (flattened),
    /// cast to floats: maps a matrix to its coordinates in that basis.
    g2_coords_f64: DMatrix<f64>,
    g2_flat_f64: DMatrix<f64>,
}

impl ComplementModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vdim(&self) -> usize {
        2 * self.n + 1
    }

    /// Dimension of the complement.
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Echelon basis of the complement.
    pub fn basis(&self) -> &Mat {
        self.quotient.section()
    }

    pub fn image(&self) -> &Subspace {
        self.quotient.kernel()
    }

    /// Exact projector onto the complement along the image.
    pub fn projector(&self) -> &Mat {
        self.quotient.projector()
    }

    pub fn gram_description(&self) -> &str {
        &self.gram_desc
    }

    pub fn algebra(&self) -> &LieAlgebraModel {
        &self.alg
    }

    pub(crate) fn amap_f64(&self) -> &DMatrix<f64> {
        &self.amap_f64
    }

    pub(crate) fn projector_f64(&self) -> &DMatrix<f64> {
        &self.projector_f64
    }

    pub(crate) fn g2_coords_f64(&self) -> &DMatrix<f64> {
        &self.g2_coords_f64
    }

    pub(crate) fn g2_flat_f64(&self) -> &DMatrix<f64> {
        &self.g2_flat_f64
    }

    /// Coordinates of a (float) tensor in the complement basis.
    pub fn complement_coords(&self, t: &Hom2Tensor<f64>) -> nalgebra::DVector<f64> {
        self.quotient.class_coords_f64(&t.flat_vector())
    }

    /// Number of complement coordinates.
    pub fn coord_labels(&self) -> Vec<String> {
        let vdim = self.vdim();
        self.basis_leading_tensors()
            .into_iter()
            .map(|idx| {
                let pair = idx / vdim;
                let k = idx % vdim;
                let (i, j) = pairs(vdim).nth(pair).unwrap();
                format!("C[{},{}|{}]", i + 1, j + 1, k + 1)
            })
            .collect()
    }

    fn basis_leading_tensors(&self) -> Vec<usize> {
        let b = self.basis();
        (0..b.nrows())
            .map(|r| {
                (0..b.ncols())
                    .position(|c| !num_traits::Zero::is_zero(b.at(r, c)))
                    .expect("echelon basis rows are nonzero")
            })
            .collect()
    }
}

/// Infinitesimal tensor representation of a Lie algebra element `x` on a
/// tensor: `(x·T)(u∧w) = −x·T(u∧w) + T(xu∧w) + T(u∧xw)`.
fn lie_sigma(x: &Mat, t: &Hom2Tensor<Rat>) -> Hom2Tensor<Rat> {
    let d = t.vdim();
    let mut out = Hom2Tensor::<Rat>::zero(d);
    for (i, j) in pairs(d) {
        for k in 0..d {
            let mut acc = Rat::from_integer(0.into());
            // −x·T(e_i∧e_j) in coordinate k.
            for m in 0..d {
                acc -= x.at(k, m) * &t.get(i, j, m);
            }
            // T(xe_i ∧ e_j) + T(e_i ∧ xe_j) in coordinate k.
            for a in 0..d {
                if !num_traits::Zero::is_zero(x.at(a, i)) {
                    acc += x.at(a, i) * &t.get(a, j, k);
                }
                if !num_traits::Zero::is_zero(x.at(a, j)) {
                    acc += x.at(a, j) * &t.get(i, a, k);
                }
            }
            if i < j {
                out.set_upper(i, j, k, acc);
            }
        }
    }
    out
}

/// Builds the invariant complement with the standard gram (the basis
/// tensors `(e_i*∧e_j*)⊗e_k` declared orthonormal).
pub fn invariant_complement(n: usize) -> Result<ComplementModel> {
    invariant_complement_weighted(n, &[rat(1), rat(1), rat(1), rat(1)])
}

/// Builds the invariant complement with a block-weighted gram: one positive
/// weight per graded block of `Hom(V∧V, V)` in the order
/// (prime-pair→prime, prime-pair→v, mixed→prime, mixed→v). Block-constant
/// diagonal grams are preserved by the reduced group, which keeps the
/// complement invariant; the invariance is still verified exactly and a
/// violation is reported as an error.
pub fn invariant_complement_weighted(n: usize, weights: &[Rat; 4]) -> Result<ComplementModel> {
    use num_traits::Signed;
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::invalid("gram weights must be positive"));
    }
    let vdim = 2 * n + 1;
    let total = npairs(vdim) * vdim;
    let amap = amap_matrix(n, Level::G2);
    let image = Subspace::from_span(amap.transpose());

    let mut gram = Mat::zeros(total, total);
    for (i, j) in pairs(vdim) {
        for k in 0..vdim {
            let w = match tensor_block(i, j, k, n) {
                TensorBlock::PrimePrimeToPrime => &weights[0],
                TensorBlock::PrimePrimeToV => &weights[1],
                TensorBlock::MixedToPrime => &weights[2],
                TensorBlock::MixedToV => &weights[3],
            };
            let idx = flat_index(i, j, k, vdim);
            gram.set(idx, idx, w.clone());
        }
    }
    let standard = weights.iter().all(|w| *w == rat(1));
    let gram_desc = if standard {
        "standard (basis tensors orthonormal)".to_string()
    } else {
        format!(
            "block-diagonal weights ({}, {}, {}, {})",
            weights[0], weights[1], weights[2], weights[3]
        )
    };

    let complement = orthogonal_complement(&image, &gram)?;
    let quotient = QuotientModel::new(image, complement.basis().clone())
        .map_err(|e| Error::Inconsistent(format!("complement does not split the space: {e}")))?;

    let alg = build_lie_algebra(n, Level::G2);
    verify_invariance(&alg, &quotient)?;

    // Float caches.
    let amap_f64 = amap.to_f64();
    let projector_f64 = quotient.projector().to_f64();
    let (g2_flat, g2_coords) = basis_pseudo_inverse(&alg);

    Ok(ComplementModel {
        n,
        quotient,
        gram_desc,
        alg,
        amap_f64,
        projector_f64,
        g2_coords_f64: g2_coords,
        g2_flat_f64: g2_flat,
    })
}

/// Exact invariance check of the complement: infinitesimally for every
/// basis generator, and at group level for Cayley rotations of the
/// generators.
fn verify_invariance(alg: &LieAlgebraModel, quotient: &QuotientModel) -> Result<()> {
    let vdim = 2 * alg.n() + 1;
    let complement_rows: Vec<Vec<Rat>> = (0..quotient.dim())
        .map(|r| quotient.section().row_vec(r))
        .collect();
    let complement = Subspace::from_span(quotient.section().clone());
    for x in alg.basis() {
        for row in &complement_rows {
            let t = Hom2Tensor::from_flat(vdim, row.clone());
            let moved = lie_sigma(x, &t);
            if !complement.contains(moved.flat()) {
                return Err(Error::invalid(
                    "complement is not infinitesimally invariant under the reduced group",
                ));
            }
        }
        // Group level: a rational rotation generated by the same direction.
        let scaled = x.scale(&ratio(1, 3));
        let g = embed_cayley(&scaled, vdim);
        for row in &complement_rows {
            let t = Hom2Tensor::from_flat(vdim, row.clone());
            let moved = sigma_action_exact(&g, &t)?;
            if !complement.contains(moved.flat()) {
                return Err(Error::invalid(
                    "complement is not invariant under the reduced group",
                ));
            }
        }
    }
    Ok(())
}

/// Cayley transform of a reduced-algebra element, embedded so the
/// distinguished direction is fixed.
fn embed_cayley(x: &Mat, vdim: usize) -> Mat {
    let d = vdim - 1;
    let block = Mat::from_fn(d, d, |r, c| x.at(r, c).clone());
    let rot = cayley_orthogonal(&block);
    let mut g = Mat::identity(vdim);
    for r in 0..d {
        for c in 0..d {
            g.set(r, c, rot.at(r, c).clone());
        }
    }
    g
}

/// Flattened basis matrix of the reduced Lie algebra and its exact
/// pseudo-inverse `(BᵀB)⁻¹Bᵀ`, both as floats.
fn basis_pseudo_inverse(alg: &LieAlgebraModel) -> (DMatrix<f64>, DMatrix<f64>) {
    let vdim = 2 * alg.n() + 1;
    let rows = vdim * vdim;
    let cols = alg.dim();
    let b = Mat::from_fn(rows, cols, |r, c| {
        alg.basis()[c].at(r / vdim, r % vdim).clone()
    });
    let bt = b.transpose();
    let pinv = bt
        .matmul(&b)
        .inverse()
        .expect("basis matrices are independent")
        .matmul(&bt);
    (b.to_f64(), pinv.to_f64())
}
