//! The Riemannian extension of a structure along a chosen contact form.

use nalgebra::{DMatrix, DVector};

use crate::reduction::{adapted_coframe, reeb_of, SubRiemannianSpec};
use crate::symexpr::{invert_symbolic, solve_symbolic, Chart, Expr, OneForm, Probe, TwoForm};
use crate::{Error, Result};

/// The contact Riemannian data built from a structure and a choice of
/// contact form: the Reeb field, the extended metric
/// (`g̃|_D = g`, `g̃(ξ,ξ) = 1`, `g̃(ξ, D) = 0`) and the `(1,1)`-tensor
/// determined by `g̃(X, φY) = dη(X, Y)` with `φξ = 0`.
#[derive(Clone, Debug)]
pub struct ContactMetricData {
    chart: Chart,
    eta: OneForm,
    deta: TwoForm,
    xi: Vec<Expr>,
    gtilde: Vec<Vec<Expr>>,
    phi: Option<Vec<Vec<Expr>>>,
    /// Orthonormal frame of the distribution, extended by the Reeb field.
    frame: Vec<Vec<Expr>>,
}

impl ContactMetricData {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn eta(&self) -> &OneForm {
        &self.eta
    }

    pub fn reeb(&self) -> &[Expr] {
        &self.xi
    }

    pub fn metric_grid(&self) -> &[Vec<Expr>] {
        &self.gtilde
    }

    /// Symbolic `(1,1)`-tensor grid when the defining system solved
    /// symbolically.
    pub fn phi_grid(&self) -> Option<&[Vec<Expr>]> {
        self.phi.as_deref()
    }

    pub fn frame(&self) -> &[Vec<Expr>] {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn metric_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.dim();
        let mut g = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = self.gtilde[i][j].eval(point)?;
            }
        }
        Ok(g)
    }

    pub fn reeb_at(&self, point: &[f64]) -> Result<DVector<f64>> {
        let d = self.dim();
        let mut v = DVector::zeros(d);
        for (i, c) in self.xi.iter().enumerate() {
            v[i] = c.eval(point)?;
        }
        Ok(v)
    }

    pub fn deta_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.deta.eval(point)
    }

    /// The `(1,1)`-tensor at a point: prefers the symbolic grid, falling
    /// back to the per-point linear solve `g̃·φ = dη` when the grid cannot
    /// be evaluated (symbolic pivots may carry removable singularities).
    pub fn phi_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let d = self.dim();
        if let Some(grid) = &self.phi {
            let mut m = DMatrix::zeros(d, d);
            let mut ok = true;
            'fill: for i in 0..d {
                for j in 0..d {
                    match grid[i][j].eval(point) {
                        Ok(v) => m[(i, j)] = v,
                        Err(_) => {
                            ok = false;
                            break 'fill;
                        }
                    }
                }
            }
            if ok {
                return Ok(m);
            }
        }
        let g = self.metric_at(point)?;
        let deta = self.deta_at(point)?;
        g.lu()
            .solve(&deta)
            .ok_or_else(|| Error::SingularCoframe {
                point: point.to_vec(),
            })
    }
}

/// Builds the contact Riemannian data for a structure and a contact form
/// with the same kernel (typically a rescaling of the declared one).
pub fn build_contact_metric(
    spec: &SubRiemannianSpec,
    eta_choice: &OneForm,
) -> Result<ContactMetricData> {
    let chart = spec.chart().clone();
    let dim = chart.dim();
    if eta_choice.dim() != dim {
        return Err(Error::invalid("contact form dimension mismatch"));
    }
    let adapted = adapted_coframe(spec)?;
    let ortho: Vec<Vec<Expr>> = adapted.frame()[..dim - 1].to_vec();
    // The chosen form must annihilate the distribution.
    let probe = Probe::new(dim);
    for (i, y) in ortho.iter().enumerate() {
        if probe.probably_nonzero(&eta_choice.apply(y)) {
            return Err(Error::invalid(format!(
                "chosen form does not vanish on distribution direction {}",
                i + 1
            )));
        }
    }
    let xi = reeb_of(eta_choice, &chart)?;
    // Dual coframe of (Y₁, …, Y_{2n}, ξ); the last dual slot is the chosen
    // form itself.
    let mut frame_matrix = Vec::with_capacity(dim);
    for mu in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for y in &ortho {
            row.push(y[mu].clone());
        }
        row.push(xi[mu].clone());
        frame_matrix.push(row);
    }
    let inv = invert_symbolic(&frame_matrix, dim)
        .map_err(|e| Error::invalid(format!("frame completion is degenerate: {e}")))?;
    let mut thetas: Vec<OneForm> = inv.into_iter().take(dim - 1).map(OneForm::new).collect();
    thetas.push(eta_choice.clone());

    // g̃ = Σ θ^i⊗θ^i + η⊗η.
    let gtilde: Vec<Vec<Expr>> = (0..dim)
        .map(|mu| {
            (0..dim)
                .map(|nu| {
                    let mut acc = Expr::zero();
                    for t in &thetas {
                        acc = Expr::add(
                            acc,
                            Expr::mul(t.coeff(mu).clone(), t.coeff(nu).clone()),
                        );
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let deta = eta_choice.exterior_d();
    // Try a symbolic (1,1)-tensor on small systems; Gaussian elimination
    // over expressions can blow up on larger ones, where the per-point
    // solve is the default anyway.
    let total_size: usize = gtilde.iter().flatten().map(expr_size).sum();
    let phi = if total_size <= 400 {
        solve_phi_symbolic(&gtilde, &deta, dim).ok()
    } else {
        None
    };

    let mut frame = ortho;
    frame.push(xi.clone());
    Ok(ContactMetricData {
        chart,
        eta: eta_choice.clone(),
        deta,
        xi,
        gtilde,
        phi,
        frame,
    })
}

fn expr_size(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 1,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            1 + expr_size(a) + expr_size(b)
        }
        Expr::Pow(a, _) | Expr::Sqrt(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
            1 + expr_size(a)
        }
    }
}

fn solve_phi_symbolic(
    gtilde: &[Vec<Expr>],
    deta: &TwoForm,
    dim: usize,
) -> Result<Vec<Vec<Expr>>> {
    // Column ν of φ solves g̃·φ_ν = dη(·, ν).
    let mut cols = Vec::with_capacity(dim);
    for nu in 0..dim {
        let rhs: Vec<Expr> = (0..dim).map(|mu| deta.coeff(mu, nu)).collect();
        cols.push(solve_symbolic(gtilde, &rhs, dim)?);
    }
    Ok((0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i].clone()).collect())
        .collect())
}
