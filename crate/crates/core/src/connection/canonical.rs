//! The canonical connection: the unique decomposition of the structure
//! tensor into an antisymmetrization image plus a torsion in the invariant
//! complement.

use nalgebra::{DMatrix, DVector};

use super::complement::ComplementModel;
use crate::gstruct::Hom2Tensor;
use crate::linalg::least_squares_solve;
use crate::reduction::ReducedStructure;
use crate::{Error, Result};

/// Connection data at a point of the reduced structure.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub point: Vec<f64>,
    /// Connection coefficients: row `s` holds the reduced-algebra
    /// coordinates of the value on the `s`-th frame direction.
    pub gamma: DMatrix<f64>,
    /// Torsion tensor, lying in the invariant complement.
    pub torsion: Hom2Tensor<f64>,
    /// Torsion coordinates in the complement basis.
    pub torsion_coords: DVector<f64>,
}

impl ConnectionData {
    /// The connection value on frame direction `s` as a matrix in the
    /// reduced algebra.
    pub fn gamma_matrix(&self, s: usize, cmpl: &ComplementModel) -> DMatrix<f64> {
        let vdim = cmpl.vdim();
        let coords = self.gamma.row(s).transpose();
        let flat = cmpl.g2_flat_f64() * coords;
        DMatrix::from_fn(vdim, vdim, |r, c| flat[r * vdim + c])
    }

    pub fn max_gamma(&self) -> f64 {
        self.gamma.abs().max()
    }
}

/// Solves `c = 𝒜(Γ) + τ` with `τ` in the complement. Injectivity of the
/// antisymmetrization map on the reduced level makes `Γ` unique; the
/// residual of the split is checked and a failure is an internal
/// inconsistency, not bad input.
pub fn canonical_connection(
    red: &ReducedStructure,
    cmpl: &ComplementModel,
    point: &[f64],
) -> Result<ConnectionData> {
    assert_eq!(red.n(), cmpl.n(), "complement level mismatch");
    let vdim = cmpl.vdim();
    let tensor = red.structure_tensor(point)?;
    let flat = tensor.flat_vector();
    let torsion_flat = cmpl.projector_f64() * &flat;
    let image_part = &flat - &torsion_flat;
    let gamma_coords = least_squares_solve(cmpl.amap_f64(), &image_part);
    // Consistency: the image part must actually be hit.
    let residual = cmpl.amap_f64() * &gamma_coords - &image_part;
    let tol = (red.settings().tol * 1e3).max(1e-6);
    if residual.abs().max() > tol {
        return Err(Error::Inconsistent(format!(
            "structure tensor does not split against the complement \
             (residual {:.3e} at {point:?})",
            residual.abs().max()
        )));
    }
    let dim_g2 = cmpl.algebra().dim();
    let gamma = DMatrix::from_fn(vdim, dim_g2, |s, a| gamma_coords[s * dim_g2 + a]);
    let torsion = Hom2Tensor::from_flat(vdim, torsion_flat.iter().copied().collect());
    let torsion_coords = cmpl.complement_coords(&torsion);
    Ok(ConnectionData {
        point: point.to_vec(),
        gamma,
        torsion,
        torsion_coords,
    })
}
