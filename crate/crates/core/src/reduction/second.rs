//! Second normalization: a shear of the distribution slots along the top
//! form kills the mixed block of the top-form differential.

use nalgebra::{DMatrix, DVector};

use super::structure::structure_coefficients;
use super::types::CoframeField;
use crate::symexpr::{solve_symbolic, Expr};
use crate::{Error, Result};

/// Result of the pointwise second normalization.
#[derive(Clone, Debug)]
pub struct SecondReduction {
    /// Rows of the shifted coframe value at the point.
    pub coframe_value: DMatrix<f64>,
    /// The shear vector `b`: the new slots are `θ^i + b_i·θ^{top}`.
    pub b_shift: DVector<f64>,
}

/// Shear matrix `[[I, b], [0, 1]]`.
pub(crate) fn shift_matrix(b: &DVector<f64>) -> DMatrix<f64> {
    let d = b.len();
    let mut m = DMatrix::identity(d + 1, d + 1);
    for i in 0..d {
        m[(i, d)] = b[i];
    }
    m
}

/// Pointwise second normalization of a first-reduced coframe field. The
/// shear is the unique solution of `Ω·b = m` where `Ω` is the top-form
/// block and `m` the mixed column; nondegeneracy of `Ω` makes it unique.
pub fn second_reduction(cf: &CoframeField, point: &[f64]) -> Result<SecondReduction> {
    let sc = structure_coefficients(cf, point)?;
    let omega = sc.c.top_block();
    let mixed = sc.c.mixed_col();
    let b = omega
        .lu()
        .solve(&mixed)
        .ok_or_else(|| Error::ContactDegeneracy {
            point: point.to_vec(),
            detail: "top-form block is singular in the second normalization".into(),
        })?;
    let coframe_value = shift_matrix(&b) * cf.eval_matrix(point)?;
    Ok(SecondReduction {
        coframe_value,
        b_shift: b,
    })
}

/// Symbolic second normalization: solves the same system over expressions
/// and returns the shifted field together with the shear expressions.
pub fn second_reduction_symbolic(cf: &CoframeField) -> Result<(CoframeField, Vec<Expr>)> {
    let d = cf.dim() - 1;
    let top = &cf.dforms()[d];
    let frame = cf.frame();
    // Ω_ij = dθ^top(Y_i, Y_j), m_i = dθ^top(Y_i, Z).
    let mut rows = Vec::with_capacity(d);
    let mut rhs = Vec::with_capacity(d);
    for i in 0..d {
        rows.push(
            (0..d)
                .map(|j| top.apply(&frame[i], &frame[j]))
                .collect::<Vec<_>>(),
        );
        rhs.push(top.apply(&frame[i], &frame[d]));
    }
    let b = solve_symbolic(&rows, &rhs, cf.dim())?;
    let shifted = cf.shift_by(&b)?;
    Ok((shifted, b))
}
