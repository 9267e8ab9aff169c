//! The full per-point normalization pipeline.
//!
//! For a three-dimensional structure the reduced coframe field is built
//! symbolically and every downstream quantity is an exact evaluation. In
//! higher dimensions the normal form needs eigenvalue extraction, so the
//! reduced field is realized as a deterministic pointwise gauge against the
//! raw adapted coframe; its differential splits into an exact part (the
//! symbolic derivative of the raw field) plus a gauge part obtained by
//! central differences of the gauge function.

use nalgebra::{DMatrix, DVector};

use super::adapted::adapted_coframe;
use super::first::{first_gauge_matrix, first_reduction, first_reduction_symbolic};
use super::second::{second_reduction_symbolic, shift_matrix};
use super::structure::{structure_coefficients, tensor_from_dforms};
use super::types::{CoframeField, SubRiemannianSpec};
use crate::gstruct::{stabilizer_dimension_f64, Hom2Tensor};
use crate::linalg::{skew_block_diag, skew_normal_form};
use crate::symexpr::Expr;
use crate::{Error, Result, DEFAULT_FD_STEP, DEFAULT_TOL};

/// Tolerances threaded through the pipeline.
#[derive(Clone, Copy, Debug)]
pub struct PipelineSettings {
    /// Absolute tolerance for all float comparisons.
    pub tol: f64,
    /// Step for finite-difference stencils along chart axes.
    pub fd_step: f64,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        PipelineSettings {
            tol: DEFAULT_TOL,
            fd_step: DEFAULT_FD_STEP,
        }
    }
}

/// How the reduced coframe field is realized.
#[derive(Clone, Debug)]
pub enum Backend {
    /// Fully symbolic reduced field (three-dimensional structures).
    Symbolic {
        field: CoframeField,
        lambda: Expr,
        shear: Vec<Expr>,
    },
    /// Deterministic pointwise gauge against the raw field.
    Pointwise,
}

/// Per-point record of the normalization data.
#[derive(Clone, Debug)]
pub struct ReductionRecord {
    pub point: Vec<f64>,
    /// Skew spectrum of the top-form block, descending.
    pub lambdas: Vec<f64>,
    /// Normalized invariants `μᵢ = λᵢ/λ₁`.
    pub mu: Vec<f64>,
    /// The shear applied by the second normalization.
    pub b_shift: Vec<f64>,
    /// Rows of the reduced coframe value at the point.
    pub coframe: DMatrix<f64>,
    /// Stabilizer dimension of the normal form at this point.
    pub stabilizer_dim: usize,
}

/// A structure together with its reduced coframe field.
#[derive(Clone, Debug)]
pub struct ReducedStructure {
    spec: SubRiemannianSpec,
    raw: CoframeField,
    backend: Backend,
    settings: PipelineSettings,
}

/// Runs both normalizations and returns the reduced structure.
pub fn reduce(spec: &SubRiemannianSpec, settings: PipelineSettings) -> Result<ReducedStructure> {
    let raw = adapted_coframe(spec)?;
    let backend = if spec.n() == 1 {
        let (first, lambda) = first_reduction_symbolic(&raw, settings.tol)?;
        let (field, shear) = second_reduction_symbolic(&first)?;
        Backend::Symbolic {
            field,
            lambda,
            shear,
        }
    } else {
        Backend::Pointwise
    };
    Ok(ReducedStructure {
        spec: spec.clone(),
        raw,
        backend,
        settings,
    })
}

impl ReducedStructure {
    pub fn spec(&self) -> &SubRiemannianSpec {
        &self.spec
    }

    pub fn raw(&self) -> &CoframeField {
        &self.raw
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn settings(&self) -> PipelineSettings {
        self.settings
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// The symbolic reduced field, when one exists.
    pub fn reduced_field(&self) -> Option<&CoframeField> {
        match &self.backend {
            Backend::Symbolic { field, .. } => Some(field),
            Backend::Pointwise => None,
        }
    }

    /// First-normalization gauge at a point: `block-diag(Pᵀ, 1/λ₁)`.
    fn first_gauge(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let sc = structure_coefficients(&self.raw, point)?;
        let (p, lambdas) =
            skew_normal_form(&sc.c.top_block(), self.settings.tol).map_err(|e| match e {
                Error::ContactDegeneracy { detail, .. } => Error::ContactDegeneracy {
                    point: point.to_vec(),
                    detail,
                },
                other => other,
            })?;
        Ok(first_gauge_matrix(&p, lambdas[0]))
    }

    /// Structure tensor of the field `gauge(x)·raw(x)` at `point`: the raw
    /// part of the differential is exact, the gauge part is a central
    /// difference of the gauge function.
    fn gauged_tensor(
        &self,
        point: &[f64],
        gauge: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>,
    ) -> Result<Hom2Tensor<f64>> {
        let dim = self.dim();
        let h = self.settings.fd_step;
        let g0 = gauge(point)?;
        let raw_theta = self.raw.eval_matrix(point)?;
        let theta = &g0 * &raw_theta;
        let frame = theta
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularCoframe {
                point: point.to_vec(),
            })?;
        let mut dgauge = Vec::with_capacity(dim);
        for mu in 0..dim {
            let mut pp = point.to_vec();
            pp[mu] += h;
            let mut pm = point.to_vec();
            pm[mu] -= h;
            let step = (gauge(&pp)? - gauge(&pm)?).unscale(2.0 * h);
            dgauge.push(step);
        }
        let draw = self.raw.eval_dforms(point)?;
        let mut dthetas = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut d = DMatrix::<f64>::zeros(dim, dim);
            for j in 0..dim {
                if g0[(k, j)] != 0.0 {
                    d += &draw[j] * g0[(k, j)];
                }
            }
            for mu in 0..dim {
                for nu in 0..dim {
                    let mut acc = 0.0;
                    for j in 0..dim {
                        acc += dgauge[mu][(k, j)] * raw_theta[(j, nu)]
                            - dgauge[nu][(k, j)] * raw_theta[(j, mu)];
                    }
                    d[(mu, nu)] += acc;
                }
            }
            dthetas.push(d);
        }
        tensor_from_dforms(&dthetas, &frame, point)
    }

    /// Full gauge of the second normalization together with the shear.
    fn second_gauge_parts(&self, point: &[f64]) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let g1 = self.first_gauge(point)?;
        let t1 = self.gauged_tensor(point, &|x| self.first_gauge(x))?;
        let b = t1
            .top_block()
            .lu()
            .solve(&t1.mixed_col())
            .ok_or_else(|| Error::ContactDegeneracy {
                point: point.to_vec(),
                detail: "top-form block is singular in the second normalization".into(),
            })?;
        Ok((shift_matrix(&b) * g1, b))
    }

    /// Rows of the reduced coframe at a point.
    pub fn coframe_value(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        match &self.backend {
            Backend::Symbolic { field, .. } => field.eval_matrix(point),
            Backend::Pointwise => {
                let (g, _) = self.second_gauge_parts(point)?;
                Ok(g * self.raw.eval_matrix(point)?)
            }
        }
    }

    /// Dual frame of the reduced coframe at a point (columns).
    pub fn frame_value(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.coframe_value(point)?
            .try_inverse()
            .ok_or_else(|| Error::SingularCoframe {
                point: point.to_vec(),
            })
    }

    /// Structure tensor of the reduced coframe field at a point.
    pub fn structure_tensor(&self, point: &[f64]) -> Result<Hom2Tensor<f64>> {
        match &self.backend {
            Backend::Symbolic { field, .. } => Ok(structure_coefficients(field, point)?.c),
            Backend::Pointwise => {
                self.gauged_tensor(point, &|x| self.second_gauge_parts(x).map(|(g, _)| g))
            }
        }
    }

    /// Full per-point record: spectrum, normalized invariants, shear,
    /// reduced coframe and stabilizer dimension. Validates the metric at
    /// the point.
    pub fn record_at(&self, point: &[f64]) -> Result<ReductionRecord> {
        self.spec.gram_at(point)?;
        let fr = first_reduction(&self.raw, point, self.settings.tol)?;
        let (b_shift, coframe) = match &self.backend {
            Backend::Symbolic { field, shear, .. } => {
                let b: Result<Vec<f64>> = shear.iter().map(|e| e.eval(point)).collect();
                (b?, field.eval_matrix(point)?)
            }
            Backend::Pointwise => {
                let (g, b) = self.second_gauge_parts(point)?;
                (
                    b.iter().copied().collect(),
                    g * self.raw.eval_matrix(point)?,
                )
            }
        };
        let stabilizer_dim =
            stabilizer_dimension_f64(&skew_block_diag(&fr.mu), self.settings.tol);
        Ok(ReductionRecord {
            point: point.to_vec(),
            lambdas: fr.lambdas,
            mu: fr.mu,
            b_shift,
            coframe,
            stabilizer_dim,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pairs;
    use crate::models;

    fn settings() -> PipelineSettings {
        PipelineSettings::default()
    }

    fn assert_slice_form(red: &ReducedStructure, point: &[f64], tol: f64) {
        let t = red.structure_tensor(point).unwrap();
        let rec = red.record_at(point).unwrap();
        let omega = t.top_block();
        let expected = skew_block_diag(&rec.mu);
        assert!(
            (omega - expected).abs().max() < tol,
            "top block not in normal form at {point:?}"
        );
        assert!(
            t.mixed_col().abs().max() < tol,
            "mixed block did not vanish at {point:?}"
        );
    }

    #[test]
    fn heisenberg_pipeline_slice_membership() {
        let red = reduce(&models::heisenberg(), settings()).unwrap();
        for pt in [[0.0, 0.0, 0.0], [0.5, -0.5, 1.0], [-0.9, 0.4, 0.2]] {
            assert_slice_form(&red, &pt, 1e-9);
            let rec = red.record_at(&pt).unwrap();
            assert_eq!(rec.stabilizer_dim, 1);
            assert!(rec.b_shift.iter().all(|b| b.abs() < 1e-12));
        }
    }

    #[test]
    fn nonflat_pipeline_slice_membership() {
        let red = reduce(&models::heisenberg_nonflat(), settings()).unwrap();
        for pt in [[0.3, -0.2, 0.6], [-0.8, 0.1, 0.4]] {
            assert_slice_form(&red, &pt, 1e-9);
        }
    }

    #[test]
    fn five_dim_pointwise_pipeline_slice_membership() {
        let red = reduce(
            &models::r5_example(crate::rat(1), crate::rat(1), crate::rat(1), crate::rat(4)),
            settings(),
        )
        .unwrap();
        let pt = [0.2, -0.4, 0.1, 0.3, 0.7];
        assert_slice_form(&red, &pt, 1e-8);
        let rec = red.record_at(&pt).unwrap();
        assert!((rec.lambdas[0] - 1.0).abs() < 1e-9);
        assert!((rec.lambdas[1] - 0.5).abs() < 1e-9);
        assert!((rec.mu[1] - 0.5).abs() < 1e-9);
        // Distinct block scalars break the stabilizer to the torus.
        assert_eq!(rec.stabilizer_dim, 2);
    }

    #[test]
    fn symbolic_and_pointwise_backends_agree() {
        let spec = models::heisenberg_nonflat();
        let sym = reduce(&spec, settings()).unwrap();
        // Force the pointwise backend on the same structure.
        let pointwise = ReducedStructure {
            spec: spec.clone(),
            raw: sym.raw.clone(),
            backend: Backend::Pointwise,
            settings: settings(),
        };
        for pt in [[0.3, 0.2, -0.5], [-0.4, 0.7, 0.1]] {
            let a = sym.structure_tensor(&pt).unwrap();
            let b = pointwise.structure_tensor(&pt).unwrap();
            let mut max = 0.0f64;
            for (i, j) in pairs(3) {
                for k in 0..3 {
                    max = max.max((a.get(i, j, k) - b.get(i, j, k)).abs());
                }
            }
            assert!(max < 1e-6, "backend mismatch {max} at {pt:?}");
            let ra = sym.record_at(&pt).unwrap();
            let rb = pointwise.record_at(&pt).unwrap();
            assert!((ra.lambdas[0] - rb.lambdas[0]).abs() < 1e-10);
            for (x, y) in ra.b_shift.iter().zip(&rb.b_shift) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn reeb_direction_is_dual_to_top_slot() {
        // After both normalizations the frame vector dual to the top slot
        // is the Reeb field of the normalized contact form.
        let spec = models::heisenberg_nonflat();
        let red = reduce(&spec, settings()).unwrap();
        let field = red.reduced_field().unwrap();
        let chart = spec.chart().clone();
        let top = field.top_form().clone();
        let xi = crate::reduction::reeb_of(&top, &chart).unwrap();
        for pt in [[0.2, -0.3, 0.4], [0.7, 0.5, -0.1]] {
            let frame = red.frame_value(&pt).unwrap();
            for mu in 0..3 {
                let expected = xi[mu].eval(&pt).unwrap();
                assert!((frame[(mu, 2)] - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn metric_violation_is_reported() {
        // Metric (1 − x²)dy² degenerates for |x| ≥ 1.
        use crate::reduction::{MetricData, SubRiemannianSpec};
        use crate::symexpr::{parse, Chart, Expr, OneForm};
        let chart = Chart::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        let eta = OneForm::new(vec![Expr::zero(), parse("x", &chart).unwrap(), Expr::one()]);
        let metric = MetricData::Frame {
            vectors: vec![
                vec![Expr::one(), Expr::zero(), Expr::zero()],
                vec![Expr::zero(), Expr::one(), Expr::neg(parse("x", &chart).unwrap())],
            ],
            gram: vec![
                vec![Expr::one(), Expr::zero()],
                vec![Expr::zero(), parse("1 - x^2", &chart).unwrap()],
            ],
        };
        let spec = SubRiemannianSpec::new(chart, eta, metric).unwrap();
        let red = reduce(&spec, settings()).unwrap();
        assert!(red.record_at(&[0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            red.record_at(&[2.0, 0.0, 0.0]),
            Err(Error::MetricNotPositive { .. })
        ));
    }
}
