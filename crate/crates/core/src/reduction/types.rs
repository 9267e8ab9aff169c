//! Structure specifications and coframe fields.

use nalgebra::DMatrix;

use crate::linalg::Mat;
use crate::symexpr::{Chart, Expr, OneForm, Probe, TwoForm};
use crate::{Error, Result};

/// Fiberwise inner product on the distribution, given either on a declared
/// frame of vector fields spanning the kernel of the contact form, or
/// implicitly through a declared orthonormal coframe.
#[derive(Clone, Debug)]
pub enum MetricData {
    Frame {
        /// `2n` vector fields spanning the distribution (coordinate
        /// components, symbolic).
        vectors: Vec<Vec<Expr>>,
        /// Gram matrix of the inner product on those vectors.
        gram: Vec<Vec<Expr>>,
    },
    /// `2n` one-forms whose restrictions to the distribution are declared
    /// orthonormal.
    Coframe(Vec<OneForm>),
}

/// A sub-Riemannian structure on a chart: a contact-form candidate `eta`
/// and an inner product on its kernel.
#[derive(Clone, Debug)]
pub struct SubRiemannianSpec {
    chart: Chart,
    eta: OneForm,
    metric: MetricData,
}

impl SubRiemannianSpec {
    pub fn new(chart: Chart, eta: OneForm, metric: MetricData) -> Result<SubRiemannianSpec> {
        let dim = chart.dim();
        if dim < 3 || dim % 2 == 0 {
            return Err(Error::invalid(format!(
                "chart dimension must be odd and at least 3, got {dim}"
            )));
        }
        if eta.dim() != dim {
            return Err(Error::invalid("contact form dimension mismatch"));
        }
        let expected = dim - 1;
        match &metric {
            MetricData::Frame { vectors, gram } => {
                if vectors.len() != expected || vectors.iter().any(|v| v.len() != dim) {
                    return Err(Error::invalid(format!(
                        "frame must consist of {expected} vectors of dimension {dim}"
                    )));
                }
                if gram.len() != expected || gram.iter().any(|r| r.len() != expected) {
                    return Err(Error::invalid("gram grid dimension mismatch"));
                }
            }
            MetricData::Coframe(forms) => {
                if forms.len() != expected || forms.iter().any(|f| f.dim() != dim) {
                    return Err(Error::invalid(format!(
                        "coframe must consist of {expected} forms of dimension {dim}"
                    )));
                }
            }
        }
        Ok(SubRiemannianSpec { chart, eta, metric })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eta(&self) -> &OneForm {
        &self.eta
    }

    pub fn metric(&self) -> &MetricData {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn n(&self) -> usize {
        (self.chart.dim() - 1) / 2
    }

    /// Gram matrix of the metric evaluated at a point (identity for the
    /// declared-coframe representation). Errors if not positive definite.
    pub fn gram_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.dim() - 1;
        let gram = match &self.metric {
            MetricData::Frame { gram, .. } => {
                let mut m = DMatrix::zeros(d, d);
                for i in 0..d {
                    for j in 0..d {
                        m[(i, j)] = gram[i][j].eval(point)?;
                    }
                }
                m
            }
            MetricData::Coframe(_) => DMatrix::identity(d, d),
        };
        let chol = nalgebra::Cholesky::new(gram.clone());
        if chol.is_none() {
            return Err(Error::MetricNotPositive {
                point: point.to_vec(),
            });
        }
        Ok(gram)
    }
}

/// Provenance of a coframe field within the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Raw,
    FirstReduced,
    SecondReduced,
}

/// A field of coframes on the chart: `2n+1` one-forms with the top form in
/// the last slot, together with the dual frame (kept symbolic so structure
/// coefficients can be paired without re-inversion).
#[derive(Clone, Debug)]
pub struct CoframeField {
    chart: Chart,
    forms: Vec<OneForm>,
    frame: Vec<Vec<Expr>>,
    dforms: Vec<TwoForm>,
    stage: Stage,
}

impl CoframeField {
    /// Builds a coframe field and validates duality `θ^i(Y_j) = δ_ij` at
    /// probe points (skipping points where evaluation fails).
    pub fn new(
        chart: Chart,
        forms: Vec<OneForm>,
        frame: Vec<Vec<Expr>>,
        stage: Stage,
    ) -> Result<CoframeField> {
        let dim = chart.dim();
        if forms.len() != dim || forms.iter().any(|f| f.dim() != dim) {
            return Err(Error::invalid("coframe must have dim forms of matching dimension"));
        }
        if frame.len() != dim || frame.iter().any(|v| v.len() != dim) {
            return Err(Error::invalid("frame must have dim vectors of matching dimension"));
        }
        let dforms = forms.iter().map(|f| f.exterior_d()).collect();
        let field = CoframeField {
            chart,
            forms,
            frame,
            dforms,
            stage,
        };
        field.validate_duality()?;
        Ok(field)
    }

    fn validate_duality(&self) -> Result<()> {
        let probe = Probe::new(self.dim());
        let mut checked = 0;
        for pt in probe_points(&probe) {
            match self.eval_matrix(pt) {
                Ok(theta) => {
                    let frame = match self.eval_frame(pt) {
                        Ok(f) => f,
                        Err(_) => continue,
                    };
                    let prod = &theta * &frame;
                    let dim = self.dim();
                    if (prod - DMatrix::<f64>::identity(dim, dim)).abs().max() > 1e-6 {
                        return Err(Error::Inconsistent(format!(
                            "frame is not dual to the coframe at probe point {pt:?}"
                        )));
                    }
                    checked += 1;
                }
                Err(_) => continue,
            }
        }
        if checked == 0 {
            return Err(Error::invalid(
                "coframe could not be evaluated at any probe point",
            ));
        }
        Ok(())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn forms(&self) -> &[OneForm] {
        &self.forms
    }

    pub fn top_form(&self) -> &OneForm {
        &self.forms[self.dim() - 1]
    }

    pub fn frame(&self) -> &[Vec<Expr>] {
        &self.frame
    }

    pub fn dforms(&self) -> &[TwoForm] {
        &self.dforms
    }

    /// Coframe values: row `k` holds the coordinate components of `θ^k`.
    pub fn eval_matrix(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (k, form) in self.forms.iter().enumerate() {
            for mu in 0..dim {
                m[(k, mu)] = form.coeff(mu).eval(point)?;
            }
        }
        Ok(m)
    }

    /// Frame values: column `i` holds the components of the dual vector
    /// `Y_i`.
    pub fn eval_frame(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, vec) in self.frame.iter().enumerate() {
            for mu in 0..dim {
                m[(mu, i)] = vec[mu].eval(point)?;
            }
        }
        Ok(m)
    }

    /// Full antisymmetric coefficient matrices of `dθ^k`, exact symbolic
    /// derivatives evaluated at the point.
    pub fn eval_dforms(&self, point: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        self.dforms.iter().map(|d| d.eval(point)).collect()
    }

    /// Applies a constant exact group matrix on the left: `θ̃ = g·θ`,
    /// with the dual frame transported by `g⁻¹`.
    pub fn transform_const(&self, g: &Mat) -> Result<CoframeField> {
        let dim = self.dim();
        assert_eq!((g.nrows(), g.ncols()), (dim, dim));
        let ginv = g
            .inverse()
            .ok_or_else(|| Error::invalid("constant coframe transform must be invertible"))?;
        let mut forms = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut f = OneForm::zero(dim);
            for j in 0..dim {
                if !num_traits::Zero::is_zero(g.at(i, j)) {
                    f = f.add(&self.forms[j].scale(&Expr::Const(g.at(i, j).clone())));
                }
            }
            forms.push(f);
        }
        let mut frame = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut v = vec![Expr::zero(); dim];
            for k in 0..dim {
                if !num_traits::Zero::is_zero(ginv.at(k, j)) {
                    let coeff = Expr::Const(ginv.at(k, j).clone());
                    for (mu, slot) in v.iter_mut().enumerate() {
                        *slot = Expr::add(
                            slot.clone(),
                            Expr::mul(coeff.clone(), self.frame[k][mu].clone()),
                        );
                    }
                }
            }
            frame.push(v);
        }
        CoframeField::new(self.chart.clone(), forms, frame, self.stage)
    }

    /// Rescales the top form by `1/lambda` (and the last frame vector by
    /// `lambda`), producing a first-reduced field.
    pub(crate) fn normalize_top(&self, lambda: &Expr) -> Result<CoframeField> {
        let dim = self.dim();
        let mut forms = self.forms.clone();
        forms[dim - 1] = self.forms[dim - 1].scale(&Expr::div(Expr::one(), lambda.clone()));
        let mut frame = self.frame.clone();
        frame[dim - 1] = self.frame[dim - 1]
            .iter()
            .map(|c| Expr::mul(lambda.clone(), c.clone()))
            .collect();
        CoframeField::new(self.chart.clone(), forms, frame, Stage::FirstReduced)
    }

    /// Shear `θ^i ↦ θ^i + b_i·θ^top` (and `Z ↦ Z − Σ b_i Y_i`), producing a
    /// second-reduced field.
    pub(crate) fn shift_by(&self, b: &[Expr]) -> Result<CoframeField> {
        let dim = self.dim();
        assert_eq!(b.len(), dim - 1);
        let mut forms = self.forms.clone();
        for (i, bi) in b.iter().enumerate() {
            forms[i] = self.forms[i].add(&self.forms[dim - 1].scale(bi));
        }
        let mut frame = self.frame.clone();
        let mut z = self.frame[dim - 1].clone();
        for (i, bi) in b.iter().enumerate() {
            for (mu, slot) in z.iter_mut().enumerate() {
                *slot = Expr::sub(
                    slot.clone(),
                    Expr::mul(bi.clone(), self.frame[i][mu].clone()),
                );
            }
        }
        frame[dim - 1] = z;
        CoframeField::new(self.chart.clone(), forms, frame, Stage::SecondReduced)
    }

    /// Swaps the first two coframe slots (used to fix the sign of the
    /// top-form block in the symbolic path).
    pub(crate) fn swap_first_two(&self) -> Result<CoframeField> {
        let mut forms = self.forms.clone();
        forms.swap(0, 1);
        let mut frame = self.frame.clone();
        frame.swap(0, 1);
        CoframeField::new(self.chart.clone(), forms, frame, self.stage)
    }
}

pub(crate) fn probe_points(probe: &Probe) -> impl Iterator<Item = &[f64]> {
    probe.points().iter().map(|p| p.as_slice())
}
