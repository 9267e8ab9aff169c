//! Structure coefficients of a coframe field at a point.

use nalgebra::DMatrix;

use super::types::CoframeField;
use crate::gstruct::Hom2Tensor;
use crate::linalg::pairs;
use crate::{Error, Result};

/// Structure coefficients `c^k_{ij}` at a point, defined by
/// `dθ^k = Σ_{i<j} c^k_{ij} θ^i∧θ^j`.
#[derive(Clone, Debug)]
pub struct StructureCoefficients {
    pub point: Vec<f64>,
    pub c: Hom2Tensor<f64>,
}

/// Computes the coefficients by exact symbolic differentiation of the
/// coframe field followed by evaluation and a change into the coframe
/// basis through the dual frame.
pub fn structure_coefficients(
    cf: &CoframeField,
    point: &[f64],
) -> Result<StructureCoefficients> {
    let theta = cf.eval_matrix(point)?;
    let frame = theta
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularCoframe {
            point: point.to_vec(),
        })?;
    let dthetas = cf.eval_dforms(point)?;
    let c = tensor_from_dforms(&dthetas, &frame, point)?;
    Ok(StructureCoefficients {
        point: point.to_vec(),
        c,
    })
}

/// Pairs coordinate-basis two-form matrices with a frame to produce the
/// coefficients in the coframe basis.
pub(crate) fn tensor_from_dforms(
    dthetas: &[DMatrix<f64>],
    frame: &DMatrix<f64>,
    point: &[f64],
) -> Result<Hom2Tensor<f64>> {
    let dim = dthetas.len();
    let mut c = Hom2Tensor::<f64>::zero(dim);
    for (k, d) in dthetas.iter().enumerate() {
        let in_frame = frame.transpose() * d * frame;
        for (i, j) in pairs(dim) {
            let v = in_frame[(i, j)];
            if !v.is_finite() {
                return Err(Error::eval(point, "non-finite structure coefficient"));
            }
            c.set_upper(i, j, k, v);
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::reduction::adapted_coframe;

    #[test]
    fn heisenberg_structure_coefficients() {
        // Only c³₁₂ = 1.
        let cf = adapted_coframe(&models::heisenberg()).unwrap();
        for pt in [[0.0, 0.0, 0.0], [0.6, -0.1, 0.8]] {
            let sc = structure_coefficients(&cf, &pt).unwrap();
            for (i, j) in pairs(3) {
                for k in 0..3 {
                    let expected = if (i, j, k) == (0, 1, 2) { 1.0 } else { 0.0 };
                    assert!(
                        (sc.c.get(i, j, k) - expected).abs() < 1e-12,
                        "c^{k}_{i}{j} at {pt:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn unit_five_dim_structure_coefficients() {
        // c⁵₁₂ = c⁵₃₄ = 1, everything else vanishes.
        let cf = adapted_coframe(&models::r5_unit()).unwrap();
        let pt = [0.3, 0.1, -0.5, 0.7, 0.2];
        let sc = structure_coefficients(&cf, &pt).unwrap();
        for (i, j) in pairs(5) {
            for k in 0..5 {
                let expected = if k == 4 && ((i, j) == (0, 1) || (i, j) == (2, 3)) {
                    1.0
                } else {
                    0.0
                };
                assert!(
                    (sc.c.get(i, j, k) - expected).abs() < 1e-12,
                    "c^{k}_{i}{j}"
                );
            }
        }
    }

    #[test]
    fn top_block_nondegenerate_iff_contact() {
        let cf = adapted_coframe(&models::heisenberg()).unwrap();
        let sc = structure_coefficients(&cf, &[0.2, 0.2, 0.2]).unwrap();
        let omega = sc.c.top_block();
        assert!(omega.determinant().abs() > 0.5);
    }

    #[test]
    fn reconstruction_reproduces_dforms() {
        // dθ^k rebuilt from the coefficients matches the symbolic value.
        let cf = adapted_coframe(&models::heisenberg_nonflat()).unwrap();
        let pt = [0.4, -0.6, 0.3];
        let sc = structure_coefficients(&cf, &pt).unwrap();
        let theta = cf.eval_matrix(&pt).unwrap();
        let dthetas = cf.eval_dforms(&pt).unwrap();
        for k in 0..3 {
            let mut in_frame = DMatrix::<f64>::zeros(3, 3);
            for (i, j) in pairs(3) {
                in_frame[(i, j)] = sc.c.get(i, j, k);
                in_frame[(j, i)] = -sc.c.get(i, j, k);
            }
            let rebuilt = theta.transpose() * in_frame * &theta;
            assert!((rebuilt - &dthetas[k]).abs().max() < 1e-10, "k={k}");
        }
    }
}
