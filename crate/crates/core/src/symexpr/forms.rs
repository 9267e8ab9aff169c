//! Coordinate charts and exterior calculus on symbolic one- and two-forms.

use nalgebra::{DMatrix, DVector};

use super::expr::Expr;
use crate::linalg::{npairs, pair_index, pairs};
use crate::{Error, Result};

/// A coordinate chart: a dimension and unique variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new(names: Vec<String>) -> Result<Chart> {
        if names.is_empty() {
            return Err(Error::invalid("chart needs at least one variable"));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate chart variable `{n}`")));
            }
        }
        Ok(Chart { names })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders an expression using this chart's variable names.
    pub fn render(&self, e: &Expr) -> String {
        super::expr::display_with_names(e, &self.names)
    }
}

/// One-form `Σ cᵢ dxᵢ` with symbolic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    dim: usize,
    coeffs: Vec<Expr>,
}

impl OneForm {
    pub fn new(coeffs: Vec<Expr>) -> OneForm {
        OneForm {
            dim: coeffs.len(),
            coeffs,
        }
    }

    pub fn zero(dim: usize) -> OneForm {
        OneForm::new(vec![Expr::zero(); dim])
    }

    /// The coordinate differential `dxᵢ`.
    pub fn dx(dim: usize, i: usize) -> OneForm {
        let mut w = OneForm::zero(dim);
        w.coeffs[i] = Expr::one();
        w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize) -> &Expr {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        assert_eq!(self.dim, other.dim);
        OneForm::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Expr::add(a.clone(), b.clone()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Expr) -> OneForm {
        OneForm::new(self.coeffs.iter().map(|c| Expr::mul(s.clone(), c.clone())).collect())
    }

    /// Value of the form on a vector field with symbolic components.
    pub fn apply(&self, vector: &[Expr]) -> Expr {
        assert_eq!(vector.len(), self.dim);
        self.coeffs
            .iter()
            .zip(vector)
            .fold(Expr::zero(), |acc, (c, v)| {
                Expr::add(acc, Expr::mul(c.clone(), v.clone()))
            })
    }

    pub fn eval(&self, point: &[f64]) -> Result<DVector<f64>> {
        let mut out = DVector::zeros(self.dim);
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.eval(point)?;
        }
        Ok(out)
    }

    /// Exterior derivative: `(dw)ᵢⱼ = ∂ᵢwⱼ − ∂ⱼwᵢ` for `i < j`.
    pub fn exterior_d(&self) -> TwoForm {
        let mut coeffs = Vec::with_capacity(npairs(self.dim));
        for (i, j) in pairs(self.dim) {
            coeffs.push(Expr::sub(self.coeffs[j].diff(i), self.coeffs[i].diff(j)));
        }
        TwoForm {
            dim: self.dim,
            coeffs,
        }
    }

    /// Pullback along the coordinate map `x ↦ (map₀(x), …)` from a source
    /// chart of dimension `map.len()`-target into `src_dim` variables:
    /// `φ*(Σ aμ dyμ) = Σν (Σμ (aμ∘φ)·∂νφμ) dxν`.
    pub fn pullback(&self, map: &[Expr], src_dim: usize) -> OneForm {
        assert_eq!(map.len(), self.dim);
        let mut out = vec![Expr::zero(); src_dim];
        for (mu, a) in self.coeffs.iter().enumerate() {
            let a_comp = a.subst(map);
            for (nu, slot) in out.iter_mut().enumerate() {
                *slot = Expr::add(
                    slot.clone(),
                    Expr::mul(a_comp.clone(), map[mu].diff(nu)),
                );
            }
        }
        OneForm::new(out)
    }
}

/// Two-form stored strictly upper-triangular: coefficient of `dxᵢ∧dxⱼ` for
/// `i < j`, antisymmetry by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    dim: usize,
    coeffs: Vec<Expr>,
}

impl TwoForm {
    pub fn zero(dim: usize) -> TwoForm {
        TwoForm {
            dim,
            coeffs: vec![Expr::zero(); npairs(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Signed coefficient for an arbitrary index pair.
    pub fn coeff(&self, i: usize, j: usize) -> Expr {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.coeffs[pair_index(i, j, self.dim)].clone(),
            Ordering::Greater => Expr::neg(self.coeffs[pair_index(j, i, self.dim)].clone()),
            Ordering::Equal => Expr::zero(),
        }
    }

    pub fn coeffs_upper(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn set_upper(&mut self, i: usize, j: usize, e: Expr) {
        assert!(i < j);
        self.coeffs[pair_index(i, j, self.dim)] = e;
    }

    /// Value of the form on two vector fields with symbolic components.
    pub fn apply(&self, u: &[Expr], v: &[Expr]) -> Expr {
        let mut acc = Expr::zero();
        for (i, j) in pairs(self.dim) {
            let c = &self.coeffs[pair_index(i, j, self.dim)];
            if c.is_zero() {
                continue;
            }
            let minor = Expr::sub(
                Expr::mul(u[i].clone(), v[j].clone()),
                Expr::mul(u[j].clone(), v[i].clone()),
            );
            acc = Expr::add(acc, Expr::mul(c.clone(), minor));
        }
        acc
    }

    /// Full antisymmetric coefficient matrix at a point.
    pub fn eval(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j) in pairs(self.dim) {
            let v = self.coeffs[pair_index(i, j, self.dim)].eval(point)?;
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        Ok(m)
    }

    pub fn max_abs_at(&self, point: &[f64]) -> Result<f64> {
        let mut m: f64 = 0.0;
        for c in &self.coeffs {
            m = m.max(c.eval(point)?.abs());
        }
        Ok(m)
    }
}

/// Differential of a 0-form (the gradient one-form).
pub fn d_scalar(e: &Expr, dim: usize) -> OneForm {
    OneForm::new((0..dim).map(|i| e.diff(i)).collect())
}
