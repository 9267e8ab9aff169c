//! First normalization: rotate the distribution slots so the top-form block
//! takes its skew normal form and rescale the top slot by the leading block
//! scalar.

use nalgebra::DMatrix;

use super::structure::structure_coefficients;
use super::types::CoframeField;
use crate::linalg::skew_normal_form;
use crate::symexpr::Expr;
use crate::{Error, Result};

/// Result of the pointwise first normalization.
#[derive(Clone, Debug)]
pub struct FirstReduction {
    /// Rows of the reduced coframe value at the point.
    pub coframe_value: DMatrix<f64>,
    /// Skew spectrum of the top-form block in the orthonormal coframe,
    /// descending.
    pub lambdas: Vec<f64>,
    /// Normalized invariants `μᵢ = λᵢ/λ₁` (so `μ₁ = 1`).
    pub mu: Vec<f64>,
    /// The orthogonal block rotation applied to the distribution slots.
    pub rotation: DMatrix<f64>,
}

/// Gauge matrix `block-diag(Pᵀ, 1/λ₁)` for a given normal form.
pub(crate) fn first_gauge_matrix(p: &DMatrix<f64>, lambda1: f64) -> DMatrix<f64> {
    let d = p.nrows();
    let mut g = DMatrix::zeros(d + 1, d + 1);
    g.view_mut((0, 0), (d, d)).copy_from(&p.transpose());
    g[(d, d)] = 1.0 / lambda1;
    g
}

/// Pointwise first normalization of an adapted coframe field.
pub fn first_reduction(cf: &CoframeField, point: &[f64], tol: f64) -> Result<FirstReduction> {
    let sc = structure_coefficients(cf, point)?;
    let omega = sc.c.top_block();
    let (p, lambdas) = skew_normal_form(&omega, tol).map_err(|e| match e {
        Error::ContactDegeneracy { detail, .. } => Error::ContactDegeneracy {
            point: point.to_vec(),
            detail,
        },
        other => other,
    })?;
    let gauge = first_gauge_matrix(&p, lambdas[0]);
    let coframe_value = gauge * cf.eval_matrix(point)?;
    let mu = lambdas.iter().map(|l| l / lambdas[0]).collect();
    Ok(FirstReduction {
        coframe_value,
        lambdas,
        mu,
        rotation: p,
    })
}

/// Symbolic first normalization for the three-dimensional case, where the
/// top-form block is a single coefficient: no rotation is needed beyond a
/// possible slot swap fixing the sign, and the top slot rescales by the
/// coefficient itself.
///
/// Returns the first-reduced field together with the (positive) coefficient
/// expression.
pub fn first_reduction_symbolic(cf: &CoframeField, tol: f64) -> Result<(CoframeField, Expr)> {
    assert_eq!(cf.n(), 1, "symbolic fast path is three-dimensional only");
    let lambda_of = |field: &CoframeField| {
        field.dforms()[2].apply(&field.frame()[0], &field.frame()[1])
    };
    let mut field = cf.clone();
    let mut lambda = lambda_of(&field);
    // Fix the sign at a probe point; the coefficient cannot vanish on a
    // contact chart, so its sign is locally constant.
    let probe = crate::symexpr::Probe::new(field.dim());
    let mut sign: Option<f64> = None;
    for pt in probe.points() {
        if let Ok(v) = lambda.eval(pt) {
            if v.abs() > tol {
                sign = Some(v.signum());
                break;
            }
        }
    }
    let Some(sign) = sign else {
        return Err(Error::ContactDegeneracy {
            point: vec![],
            detail: "top-form coefficient vanishes at every probe point".into(),
        });
    };
    if sign < 0.0 {
        field = field.swap_first_two()?;
        lambda = lambda_of(&field);
    }
    let reduced = field.normalize_top(&lambda)?;
    Ok((reduced, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::reduction::adapted_coframe;
    use crate::{rat, DEFAULT_TOL};

    #[test]
    fn heisenberg_first_reduction_is_trivial() {
        let cf = adapted_coframe(&models::heisenberg()).unwrap();
        let pt = [0.3, -0.4, 0.2];
        let fr = first_reduction(&cf, &pt, DEFAULT_TOL).unwrap();
        assert_eq!(fr.lambdas.len(), 1);
        assert!((fr.lambdas[0] - 1.0).abs() < 1e-12);
        assert!((fr.rotation.clone() - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-12);
        let raw = cf.eval_matrix(&pt).unwrap();
        assert!((fr.coframe_value - raw).abs().max() < 1e-12);
    }

    #[test]
    fn scaled_top_form_renormalizes() {
        // Top form 3·(dz + x dy): the block coefficient is 3 and the
        // reduced top slot ends at the contact form itself.
        let spec = models::heisenberg_scaled_eta(rat(3));
        let cf = adapted_coframe(&spec).unwrap();
        let pt = [0.5, 0.1, -0.3];
        let fr = first_reduction(&cf, &pt, DEFAULT_TOL).unwrap();
        assert!((fr.lambdas[0] - 3.0).abs() < 1e-12);
        // Reduced top row = (0, x, 1): the unscaled contact form.
        let top = fr.coframe_value.row(2);
        assert!((top[0]).abs() < 1e-12);
        assert!((top[1] - pt[0]).abs() < 1e-12);
        assert!((top[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symbolic_path_matches_pointwise() {
        let spec = models::heisenberg_nonflat();
        let cf = adapted_coframe(&spec).unwrap();
        let (reduced, lambda) = first_reduction_symbolic(&cf, DEFAULT_TOL).unwrap();
        for pt in [[0.2, 0.4, -0.1], [-0.6, 0.3, 0.8]] {
            let fr = first_reduction(&cf, &pt, DEFAULT_TOL).unwrap();
            let l = lambda.eval(&pt).unwrap();
            assert!((l - fr.lambdas[0]).abs() < 1e-10);
            let sym = reduced.eval_matrix(&pt).unwrap();
            assert!((sym - fr.coframe_value).abs().max() < 1e-10);
        }
    }

    #[test]
    fn unit_five_dim_lambdas_and_stabilizer() {
        let cf = adapted_coframe(&models::r5_unit()).unwrap();
        let pt = [0.1, 0.2, 0.3, 0.4, 0.5];
        let fr = first_reduction(&cf, &pt, DEFAULT_TOL).unwrap();
        assert_eq!(fr.lambdas.len(), 2);
        assert!((fr.lambdas[0] - 1.0).abs() < 1e-12);
        assert!((fr.lambdas[1] - 1.0).abs() < 1e-12);
        assert!((fr.mu[1] - 1.0).abs() < 1e-12);
        // The slice point block-diag(J₂, J₂) is stabilized by u(2).
        let nf = crate::linalg::skew_block_diag(&fr.lambdas);
        assert_eq!(crate::gstruct::stabilizer_dimension_f64(&nf, 1e-9), 4);
    }

    #[test]
    fn non_contact_input_degenerates() {
        let spec = models::non_contact();
        let cf = adapted_coframe(&spec);
        // The Reeb solve already fails for dz on the frame route, so the
        // degenerate block is caught earlier or here.
        match cf {
            Err(Error::ContactDegeneracy { .. }) | Err(Error::InvalidInput(_)) => {}
            Ok(cf) => {
                let res = first_reduction(&cf, &[0.1, 0.2, 0.3], DEFAULT_TOL);
                assert!(matches!(res, Err(Error::ContactDegeneracy { .. })));
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
