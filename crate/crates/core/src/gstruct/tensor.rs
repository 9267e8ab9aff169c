//! Vector-valued antisymmetric two-tensors on the model space.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::linalg::{npairs, pair_index, pairs, rat_to_f64, Mat};
use crate::{Error, Rat, Result};

/// Flat index of the coefficient `T^k_{ij}` (`i < j`) in the
/// `vdim·C(vdim,2)`-dimensional coordinate space: pair-major, then `k`.
pub fn flat_index(i: usize, j: usize, k: usize, vdim: usize) -> usize {
    pair_index(i, j, vdim) * vdim + k
}

/// Element of `Hom(V∧V, V)`: coefficients `T^k_{ij}` stored for `i < j`,
/// with the antisymmetric extension `T^k_{ji} = −T^k_{ij}` implied.
#[derive(Clone, Debug, PartialEq)]
pub struct Hom2Tensor<T> {
    vdim: usize,
    data: Vec<T>,
}

impl<T> Hom2Tensor<T>
where
    T: Clone + Zero + std::ops::Neg<Output = T>,
{
    pub fn zero(vdim: usize) -> Self {
        Hom2Tensor {
            vdim,
            data: vec![T::zero(); npairs(vdim) * vdim],
        }
    }

    pub fn from_flat(vdim: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), npairs(vdim) * vdim);
        Hom2Tensor { vdim, data }
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    pub fn flat(&self) -> &[T] {
        &self.data
    }

    /// Coefficient `T^k_{ij}` for arbitrary `i ≠ j` (signed).
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.data[flat_index(i, j, k, self.vdim)].clone(),
            Ordering::Greater => -self.data[flat_index(j, i, k, self.vdim)].clone(),
            Ordering::Equal => T::zero(),
        }
    }

    pub fn set_upper(&mut self, i: usize, j: usize, k: usize, v: T) {
        assert!(i < j);
        self.data[flat_index(i, j, k, self.vdim)] = v;
    }

    /// The value `T(e_i ∧ e_j) ∈ V` as a coordinate vector, `i < j`.
    pub fn value_on(&self, i: usize, j: usize) -> Vec<T> {
        (0..self.vdim).map(|k| self.get(i, j, k)).collect()
    }
}

impl Hom2Tensor<Rat> {
    pub fn to_f64(&self) -> Hom2Tensor<f64> {
        Hom2Tensor {
            vdim: self.vdim,
            data: self.data.iter().map(rat_to_f64).collect(),
        }
    }
}

impl Hom2Tensor<f64> {
    pub fn flat_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.data)
    }

    /// The `2n×2n` block `T^{v}_{ij}` for `i, j < 2n` (the top-form part on
    /// the distribution directions), as an antisymmetric matrix.
    pub fn top_block(&self) -> DMatrix<f64> {
        let d = self.vdim - 1;
        let mut m = DMatrix::zeros(d, d);
        for (i, j) in pairs(d) {
            let v = self.get(i, j, d);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        m
    }

    /// The mixed column `T^{v}_{i,v}` for `i < 2n`.
    pub fn mixed_col(&self) -> DVector<f64> {
        let d = self.vdim - 1;
        DVector::from_fn(d, |i, _| self.get(i, d, d))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, other: &Hom2Tensor<f64>) -> Hom2Tensor<f64> {
        assert_eq!(self.vdim, other.vdim);
        Hom2Tensor {
            vdim: self.vdim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Which of the four graded blocks of `Hom(V∧V, V)` the basis tensor
/// `(e_i*∧e_j*)⊗e_k` belongs to, splitting pairs by whether `j` is the
/// distinguished direction and values by whether `k` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorBlock {
    /// `i < j < 2n`, `k < 2n`
    PrimePrimeToPrime,
    /// `i < j < 2n`, `k = v`
    PrimePrimeToV,
    /// `j = v`, `k < 2n`
    MixedToPrime,
    /// `j = v`, `k = v`
    MixedToV,
}

pub fn tensor_block(i: usize, j: usize, k: usize, n: usize) -> TensorBlock {
    let v = 2 * n;
    debug_assert!(i < j && j <= v && k <= v);
    match (j == v, k == v) {
        (false, false) => TensorBlock::PrimePrimeToPrime,
        (false, true) => TensorBlock::PrimePrimeToV,
        (true, false) => TensorBlock::MixedToPrime,
        (true, true) => TensorBlock::MixedToV,
    }
}

/// Tensor representation of an invertible `g`: `(σ(g)T)(u∧v) = g⁻¹T(gu∧gv)`.
/// Exact tower.
pub fn sigma_action_exact(g: &Mat, t: &Hom2Tensor<Rat>) -> Result<Hom2Tensor<Rat>> {
    let d = t.vdim();
    assert_eq!((g.nrows(), g.ncols()), (d, d));
    let ginv = g
        .inverse()
        .ok_or_else(|| Error::invalid("sigma action of a singular matrix"))?;
    let mut out = Hom2Tensor::<Rat>::zero(d);
    for (i, j) in pairs(d) {
        // value = Σ_{a<b} (g_ai·g_bj − g_aj·g_bi) T(e_a∧e_b)
        let mut value = vec![Rat::zero(); d];
        for (a, b) in pairs(d) {
            let coeff = g.at(a, i) * g.at(b, j) - g.at(a, j) * g.at(b, i);
            if coeff.is_zero() {
                continue;
            }
            for (k, slot) in value.iter_mut().enumerate() {
                let term = &coeff * &t.get(a, b, k);
                *slot = slot.clone() + term;
            }
        }
        let transformed = ginv.mul_vec(&value);
        for (k, val) in transformed.into_iter().enumerate() {
            out.set_upper(i, j, k, val);
        }
    }
    Ok(out)
}

/// Float-tower variant of [`sigma_action_exact`].
pub fn sigma_action_f64(g: &DMatrix<f64>, t: &Hom2Tensor<f64>) -> Result<Hom2Tensor<f64>> {
    let d = t.vdim();
    assert_eq!((g.nrows(), g.ncols()), (d, d));
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::invalid("sigma action of a singular matrix"))?;
    let mut out = Hom2Tensor::<f64>::zero(d);
    for (i, j) in pairs(d) {
        let mut value = DVector::<f64>::zeros(d);
        for (a, b) in pairs(d) {
            let coeff = g[(a, i)] * g[(b, j)] - g[(a, j)] * g[(b, i)];
            if coeff == 0.0 {
                continue;
            }
            for k in 0..d {
                value[k] += coeff * t.get(a, b, k);
            }
        }
        let transformed = &ginv * value;
        for k in 0..d {
            out.set_upper(i, j, k, transformed[k]);
        }
    }
    Ok(out)
}
