//! Curvature of the canonical connection form, `R = dω + ω∧ω`, with the
//! exterior derivative realized by central differences of the connection
//! coefficients along chart axes.

use nalgebra::{DMatrix, DVector};

use super::canonical::canonical_connection;
use super::complement::ComplementModel;
use crate::linalg::{pair_index, pairs};
use crate::reduction::ReducedStructure;
use crate::{Error, Result};

/// Curvature components at a point.
#[derive(Clone, Debug)]
pub struct CurvatureData {
    pub point: Vec<f64>,
    /// `R^a_{ij}`: rows indexed by the coframe pair `(i < j)`, columns by
    /// the reduced-algebra basis index `a`. Antisymmetry in `(i, j)` holds
    /// by construction.
    pub components: DMatrix<f64>,
    /// Largest residual of the curvature matrices against the span of the
    /// reduced algebra.
    pub algebra_violation: f64,
}

impl CurvatureData {
    pub fn max_abs(&self) -> f64 {
        self.components.abs().max()
    }
}

/// Coordinate components of the connection one-form at a point:
/// `ω_μ = Σ_s Γ(e_s)·θ^s_μ`, returned as one matrix per chart axis.
fn connection_form_at(
    red: &ReducedStructure,
    cmpl: &ComplementModel,
    point: &[f64],
) -> Result<Vec<DMatrix<f64>>> {
    let vdim = cmpl.vdim();
    let conn = canonical_connection(red, cmpl, point)?;
    let theta = red.coframe_value(point)?;
    let gammas: Vec<DMatrix<f64>> = (0..vdim).map(|s| conn.gamma_matrix(s, cmpl)).collect();
    let mut omega = Vec::with_capacity(vdim);
    for mu in 0..vdim {
        let mut w = DMatrix::<f64>::zeros(vdim, vdim);
        for (s, g) in gammas.iter().enumerate() {
            if theta[(s, mu)] != 0.0 {
                w += g * theta[(s, mu)];
            }
        }
        omega.push(w);
    }
    Ok(omega)
}

/// Curvature of the canonical connection at a point with stencil step `h`.
pub fn curvature(
    red: &ReducedStructure,
    cmpl: &ComplementModel,
    point: &[f64],
    h: f64,
) -> Result<CurvatureData> {
    let vdim = cmpl.vdim();
    let omega0 = connection_form_at(red, cmpl, point)?;
    // ∂_μ ω by central differences; a stencil point that cannot be
    // evaluated surfaces as the usual evaluation error.
    let mut domega = Vec::with_capacity(vdim);
    for mu in 0..vdim {
        let mut pp = point.to_vec();
        pp[mu] += h;
        let mut pm = point.to_vec();
        pm[mu] -= h;
        let op = connection_form_at(red, cmpl, &pp)?;
        let om = connection_form_at(red, cmpl, &pm)?;
        let diffs: Vec<DMatrix<f64>> = op
            .into_iter()
            .zip(om)
            .map(|(a, b)| (a - b).unscale(2.0 * h))
            .collect();
        domega.push(diffs);
    }
    // R_{μν} = ∂_μω_ν − ∂_νω_μ + [ω_μ, ω_ν], then conversion to the
    // reduced-algebra coordinates and the coframe basis.
    let frame = red.frame_value(point)?;
    let mut coord_curv: Vec<DVector<f64>> = Vec::with_capacity(vdim * vdim);
    let mut violation = 0.0f64;
    let mut r_coords = vec![DMatrix::<f64>::zeros(vdim, vdim); cmpl.algebra().dim()];
    for mu in 0..vdim {
        for nu in 0..vdim {
            if mu == nu {
                coord_curv.push(DVector::zeros(cmpl.algebra().dim()));
                continue;
            }
            let r = &domega[mu][nu] - &domega[nu][mu] + &omega0[mu] * &omega0[nu]
                - &omega0[nu] * &omega0[mu];
            let flat = DVector::from_fn(vdim * vdim, |i, _| r[(i / vdim, i % vdim)]);
            let coords = cmpl.g2_coords_f64() * &flat;
            let recon = cmpl.g2_flat_f64() * &coords;
            violation = violation.max((recon - &flat).abs().max());
            for (a, slot) in r_coords.iter_mut().enumerate() {
                slot[(mu, nu)] = coords[a];
            }
            coord_curv.push(coords);
        }
    }
    // Convert the form indices to the reduced coframe basis.
    let npair = crate::linalg::npairs(vdim);
    let mut components = DMatrix::<f64>::zeros(npair, cmpl.algebra().dim());
    for (a, slot) in r_coords.iter().enumerate() {
        let in_frame = frame.transpose() * slot * &frame;
        for (i, j) in pairs(vdim) {
            // Antisymmetrize to scrub numerical asymmetry.
            components[(pair_index(i, j, vdim), a)] =
                0.5 * (in_frame[(i, j)] - in_frame[(j, i)]);
        }
    }
    if !components.iter().all(|x| x.is_finite()) {
        return Err(Error::eval(point, "non-finite curvature component"));
    }
    Ok(CurvatureData {
        point: point.to_vec(),
        components,
        algebra_violation: violation,
    })
}
