//! Adapted coframes: the top slot is the declared contact form and the
//! first `2n` slots restrict to an orthonormal coframe of the distribution.

use super::reeb::reeb_of;
use super::types::{CoframeField, MetricData, Stage, SubRiemannianSpec};
use crate::symexpr::{invert_symbolic, Expr, OneForm, Probe};
use crate::{Error, Result};

/// Builds an adapted coframe field for the specification.
///
/// For the declared-frame representation the frame is orthonormalized by
/// Gram–Schmidt over expression arithmetic (square-root nodes keep the
/// result symbolic) and completed by the Reeb field of the declared form;
/// the coframe is the symbolic dual. For the declared-coframe
/// representation the forms are taken as given and the frame is obtained by
/// symbolic inversion.
pub fn adapted_coframe(spec: &SubRiemannianSpec) -> Result<CoframeField> {
    let dim = spec.dim();
    let d = dim - 1;
    match spec.metric() {
        MetricData::Frame { vectors, gram } => {
            validate_frame_in_kernel(spec, vectors)?;
            let xi = reeb_of(spec.eta(), spec.chart())?;
            let ortho = gram_schmidt(vectors, gram)?;
            // Full frame matrix: columns Y₁, …, Y_{2n}, ξ.
            let mut rows = Vec::with_capacity(dim);
            for mu in 0..dim {
                let mut row = Vec::with_capacity(dim);
                for y in ortho.iter() {
                    row.push(y[mu].clone());
                }
                row.push(xi[mu].clone());
                rows.push(row);
            }
            let inv = invert_symbolic(&rows, dim).map_err(|e| {
                Error::invalid(format!("frame is degenerate, cannot build dual coframe: {e}"))
            })?;
            let mut forms: Vec<OneForm> = inv
                .into_iter()
                .take(d)
                .map(OneForm::new)
                .collect();
            // The dual slot of the Reeb direction is the declared form
            // itself; use it exactly.
            forms.push(spec.eta().clone());
            let mut frame = ortho;
            frame.push(xi);
            CoframeField::new(spec.chart().clone(), forms, frame, Stage::Raw)
        }
        MetricData::Coframe(given) => {
            let mut forms = given.clone();
            forms.push(spec.eta().clone());
            let rows: Vec<Vec<Expr>> = forms
                .iter()
                .map(|f| f.coeffs().to_vec())
                .collect();
            let inv = invert_symbolic(&rows, dim).map_err(|e| {
                Error::invalid(format!("declared coframe is degenerate: {e}"))
            })?;
            // inverse columns are the dual frame vectors.
            let frame: Vec<Vec<Expr>> = (0..dim)
                .map(|i| (0..dim).map(|mu| inv[mu][i].clone()).collect())
                .collect();
            CoframeField::new(spec.chart().clone(), forms, frame, Stage::Raw)
        }
    }
}

/// The declared frame must span the kernel of the contact form; checked at
/// probe points.
fn validate_frame_in_kernel(spec: &SubRiemannianSpec, vectors: &[Vec<Expr>]) -> Result<()> {
    let probe = Probe::new(spec.dim());
    for (a, vec) in vectors.iter().enumerate() {
        let value = spec.eta().apply(vec);
        if probe.probably_nonzero(&value) {
            return Err(Error::invalid(format!(
                "frame vector {} does not annihilate the contact form",
                a + 1
            )));
        }
    }
    Ok(())
}

/// Gram–Schmidt over expression arithmetic: returns coordinate components
/// of an orthonormal frame spanning the same distribution.
fn gram_schmidt(vectors: &[Vec<Expr>], gram: &[Vec<Expr>]) -> Result<Vec<Vec<Expr>>> {
    let d = vectors.len();
    let dim = vectors[0].len();
    // Coefficients of the orthonormal vectors in the declared-frame basis.
    let mut coeffs: Vec<Vec<Expr>> = Vec::with_capacity(d);
    let inner = |a: &[Expr], b: &[Expr]| -> Expr {
        let mut acc = Expr::zero();
        for i in 0..d {
            for j in 0..d {
                acc = Expr::add(
                    acc,
                    Expr::mul(
                        Expr::mul(a[i].clone(), b[j].clone()),
                        gram[i][j].clone(),
                    ),
                );
            }
        }
        acc
    };
    for k in 0..d {
        let mut u: Vec<Expr> = (0..d)
            .map(|i| if i == k { Expr::one() } else { Expr::zero() })
            .collect();
        for prev in &coeffs {
            // u ← u − ⟨u, Y⟩·Y with Y already normalized.
            let proj = inner(&u, prev);
            for (slot, y) in u.iter_mut().zip(prev) {
                *slot = Expr::sub(slot.clone(), Expr::mul(proj.clone(), y.clone()));
            }
        }
        let norm = Expr::sqrt(inner(&u, &u));
        let y: Vec<Expr> = u
            .into_iter()
            .map(|c| Expr::div(c, norm.clone()))
            .collect();
        coeffs.push(y);
    }
    // Back to coordinates.
    Ok(coeffs
        .iter()
        .map(|alpha| {
            (0..dim)
                .map(|mu| {
                    let mut acc = Expr::zero();
                    for (a, coeff) in alpha.iter().enumerate() {
                        acc = Expr::add(acc, Expr::mul(coeff.clone(), vectors[a][mu].clone()));
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use nalgebra::DMatrix;

    fn coframe_rows_at(cf: &CoframeField, point: &[f64]) -> DMatrix<f64> {
        cf.eval_matrix(point).unwrap()
    }

    #[test]
    fn heisenberg_adapted_coframe_is_dx_dy_alpha() {
        let spec = models::heisenberg();
        let cf = adapted_coframe(&spec).unwrap();
        for pt in [[0.0, 0.0, 0.0], [0.3, -0.8, 0.5]] {
            let theta = coframe_rows_at(&cf, &pt);
            let expected = DMatrix::from_row_slice(
                3,
                3,
                &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, pt[0], 1.0],
            );
            assert!((theta - expected).abs().max() < 1e-12);
        }
    }

    #[test]
    fn unit_five_dim_example_coframe() {
        let spec = models::r5_unit();
        let cf = adapted_coframe(&spec).unwrap();
        let pt = [0.4, -0.2, 0.7, 0.1, 0.0];
        let theta = coframe_rows_at(&cf, &pt);
        // Rows: dx1, dy1, dx2, dy2, dz + x1 dy1 + x2 dy2.
        let mut expected = DMatrix::zeros(5, 5);
        expected[(0, 0)] = 1.0;
        expected[(1, 1)] = 1.0;
        expected[(2, 2)] = 1.0;
        expected[(3, 3)] = 1.0;
        expected[(4, 4)] = 1.0;
        expected[(4, 1)] = pt[0];
        expected[(4, 3)] = pt[2];
        assert!((theta - expected).abs().max() < 1e-12);
    }

    #[test]
    fn diagonal_metric_rescales_the_coframe() {
        // Coefficients (p, q, r, s) = (4, 9, 1/4, 1): coframe rows are
        // (2dx1, 3dy1, dx2/2, dy2, α).
        let spec = models::r5_example(
            crate::rat(4),
            crate::rat(9),
            crate::ratio(1, 4),
            crate::rat(1),
        );
        let cf = adapted_coframe(&spec).unwrap();
        let pt = [0.3, 0.5, -0.4, 0.2, 0.1];
        let theta = coframe_rows_at(&cf, &pt);
        let mut expected = DMatrix::zeros(5, 5);
        expected[(0, 0)] = 2.0;
        expected[(1, 1)] = 3.0;
        expected[(2, 2)] = 0.5;
        expected[(3, 3)] = 1.0;
        expected[(4, 4)] = 1.0;
        expected[(4, 1)] = pt[0];
        expected[(4, 3)] = pt[2];
        assert!((theta - expected).abs().max() < 1e-12);
    }

    #[test]
    fn nonflat_metric_coframe_keeps_duality() {
        let spec = models::heisenberg_nonflat();
        let cf = adapted_coframe(&spec).unwrap();
        let pt = [0.7, -0.3, 0.2];
        let theta = cf.eval_matrix(&pt).unwrap();
        let frame = cf.eval_frame(&pt).unwrap();
        let prod = theta * frame;
        assert!((prod - DMatrix::<f64>::identity(3, 3)).abs().max() < 1e-12);
        // θ² = sqrt(1+x²)·dy.
        let w = (1.0 + pt[0] * pt[0]).sqrt();
        assert!((cf.forms()[1].coeff(1).eval(&pt).unwrap() - w).abs() < 1e-12);
    }

    #[test]
    fn frame_outside_kernel_is_rejected() {
        use crate::symexpr::Chart;
        let chart = Chart::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        let eta = OneForm::new(vec![Expr::zero(), Expr::var(0), Expr::one()]);
        // ∂y is not in ker(dz + x dy).
        let metric = MetricData::Frame {
            vectors: vec![
                vec![Expr::one(), Expr::zero(), Expr::zero()],
                vec![Expr::zero(), Expr::one(), Expr::zero()],
            ],
            gram: vec![
                vec![Expr::one(), Expr::zero()],
                vec![Expr::zero(), Expr::one()],
            ],
        };
        let spec = SubRiemannianSpec::new(chart, eta, metric).unwrap();
        assert!(adapted_coframe(&spec).is_err());
    }
}
