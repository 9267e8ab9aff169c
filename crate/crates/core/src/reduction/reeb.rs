//! The Reeb field of a contact form: the unique vector field with
//! `η(ξ) = 1` and `i_ξ dη = 0`.

use super::types::SubRiemannianSpec;
use crate::symexpr::{solve_symbolic, Chart, Expr, OneForm};
use crate::{Error, Result};

/// Solves the defining linear system symbolically for an arbitrary
/// one-form on the chart.
pub fn reeb_of(eta: &OneForm, chart: &Chart) -> Result<Vec<Expr>> {
    let dim = chart.dim();
    let deta = eta.exterior_d();
    // Rows: Σ_μ ξ^μ·dη(e_μ, e_ν) = 0 for every ν, plus η(ξ) = 1.
    let mut rows: Vec<Vec<Expr>> = Vec::with_capacity(dim + 1);
    let mut rhs: Vec<Expr> = Vec::with_capacity(dim + 1);
    for nu in 0..dim {
        rows.push((0..dim).map(|mu| deta.coeff(mu, nu)).collect());
        rhs.push(Expr::zero());
    }
    rows.push(eta.coeffs().to_vec());
    rhs.push(Expr::one());
    solve_symbolic(&rows, &rhs, dim).map_err(|_| Error::ContactDegeneracy {
        point: vec![],
        detail: "Reeb system is degenerate; the form is not contact".into(),
    })
}

/// Reeb field of the declared contact form of a specification.
pub fn reeb_field(spec: &SubRiemannianSpec) -> Result<Vec<Expr>> {
    reeb_of(spec.eta(), spec.chart())
}
