//! Exact-rational and floating-point linear algebra.
//!
//! The exact tower ([`Mat`], [`Subspace`], [`QuotientModel`]) backs every
//! algebraic-setup computation so that dimension counts are bit-exact. The
//! float tower (plain `nalgebra` matrices) backs pointwise geometry where
//! eigenvalue extraction is unavoidable, most notably the skew-symmetric
//! normal form under orthogonal congruence.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};

use crate::{Error, Rat, Result};

/// Number of unordered index pairs `i < j` in dimension `d`.
pub fn npairs(d: usize) -> usize {
    d * (d - 1) / 2
}

/// Flat index of the pair `(i, j)` with `i < j < d`, lexicographic.
pub fn pair_index(i: usize, j: usize, d: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

/// Iterator over all pairs `(i, j)` with `i < j < d` in lexicographic order.
pub fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
}

// ---------------------------------------------------------------------------
// Exact tower
// ---------------------------------------------------------------------------

/// Dense matrix over exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        assert!(!rows.is_empty(), "no rows");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data: Vec<Rat> = rows.into_iter().flatten().collect();
        Mat {
            rows: data.len() / cols,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rat(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row_vec(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Mat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                if !self.at(r, k).is_zero() && !other.at(k, c).is_zero() {
                    acc += self.at(r, k) * other.at(k, c);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        acc += self.at(r, c) * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - other.at(r, c))
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && pairs(self.rows).all(|(i, j)| self.at(i, j) == self.at(j, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| self.at(i, i).is_zero())
            && pairs(self.rows).all(|(i, j)| *self.at(i, j) == -self.at(j, i))
    }

    /// Reduced row-echelon form and rank. The row space is preserved.
    pub fn rref(&self) -> (Mat, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m.at(pivot_row, col).clone();
            for c in col..m.cols {
                let v = m.at(pivot_row, c) / &inv;
                m.set(pivot_row, c, v);
            }
            for r in 0..m.rows {
                if r != pivot_row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &factor * m.at(pivot_row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Null space, returned with a reduced-echelon basis.
    pub fn kernel(&self) -> Subspace {
        let (r, rank) = self.rref();
        let mut pivot_cols = Vec::with_capacity(rank);
        let mut col = 0;
        for row in 0..rank {
            while col < self.cols && r.at(row, col).is_zero() {
                col += 1;
            }
            pivot_cols.push(col);
        }
        let free_cols: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        if free_cols.is_empty() {
            return Subspace::zero(self.cols);
        }
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -r.at(row, f).clone();
            }
            basis.push(v);
        }
        Subspace::from_span(Mat::from_rows(basis))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Rat::zero();
            };
            if src != col {
                m.swap_rows(col, src);
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                if !m.at(r, col).is_zero() {
                    let factor = m.at(r, col) / &pivot;
                    for c in col..n {
                        let v = m.at(r, c) - &factor * m.at(col, c);
                        m.set(r, c, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let (r, rank) = self.hstack(&Mat::identity(n)).rref();
        if rank < n {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    /// One exact solution of `self · x = rhs`, or `None` if inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, rhs.len());
        let aug = self.hstack(&Mat::from_rows(rhs.iter().map(|x| vec![x.clone()]).collect()));
        let (r, _) = aug.rref();
        let mut x = vec![Rat::zero(); self.cols];
        for row in 0..self.rows {
            let lead = (0..self.cols).find(|&c| !r.at(row, c).is_zero());
            match lead {
                Some(c) => x[c] = r.at(row, self.cols).clone(),
                None => {
                    if !r.at(row, self.cols).is_zero() {
                        return None;
                    }
                }
            }
        }
        Some(x)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| rat_to_f64(self.at(r, c)))
    }
}

/// Rational to nearest double.
pub fn rat_to_f64(x: &Rat) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Good enough for the magnitudes this crate produces.
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(x: &num_bigint::BigInt) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// Subspaces and quotients
// ---------------------------------------------------------------------------

/// Linear subspace of `Q^ambient` with a reduced-echelon basis. The echelon
/// basis is unique for a given subspace, so `PartialEq` decides equality of
/// subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
    dim: usize,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zeros(0.max(1) - 1 + 1, ambient), // placeholder replaced below
            dim: 0,
        }
        .normalized_zero()
    }

    fn normalized_zero(mut self) -> Self {
        self.basis = Mat {
            rows: 0,
            cols: self.ambient,
            data: vec![],
        };
        self
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
            dim: ambient,
        }
    }

    /// Subspace spanned by the rows of `span`.
    pub fn from_span(span: Mat) -> Self {
        let ambient = span.ncols();
        let (r, rank) = span.rref();
        let basis = Mat::from_fn(rank, ambient, |i, j| r.at(i, j).clone());
        Subspace {
            ambient,
            basis,
            dim: rank,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.dim).map(|r| self.basis.row_vec(r)).collect()
    }

    /// Residual of `v` after reduction against the echelon basis. Zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for r in 0..self.dim {
            let lead = (0..self.ambient)
                .find(|&c| !self.basis.at(r, c).is_zero())
                .expect("echelon row cannot be zero");
            if !w[lead].is_zero() {
                let factor = w[lead].clone();
                for c in lead..self.ambient {
                    let v = &w[c] - &factor * self.basis.at(r, c);
                    w[c] = v;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// True when `self + other` is a direct sum filling the ambient space.
    pub fn complements(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        if self.dim + other.dim != self.ambient {
            return false;
        }
        self.basis.vstack(&other.basis).rank() == self.ambient
    }
}

/// Exact check that a symmetric matrix is positive definite (all pivots of
/// symmetric elimination positive).
pub fn is_positive_definite(gram: &Mat) -> bool {
    if !gram.is_symmetric() {
        return false;
    }
    let n = gram.nrows();
    let mut m = gram.clone();
    for k in 0..n {
        let pivot = m.at(k, k).clone();
        if !pivot.is_positive() {
            return false;
        }
        for r in k + 1..n {
            if !m.at(r, k).is_zero() {
                let factor = m.at(r, k) / &pivot;
                for c in k..n {
                    let v = m.at(r, c) - &factor * m.at(k, c);
                    m.set(r, c, v);
                }
            }
        }
    }
    true
}

/// Gram-orthogonal complement of a subspace. Exact; errors on a gram matrix
/// that is not symmetric positive definite.
pub fn orthogonal_complement(s: &Subspace, gram: &Mat) -> Result<Subspace> {
    if gram.nrows() != s.ambient_dim() || gram.ncols() != s.ambient_dim() {
        return Err(Error::invalid("gram dimension mismatch"));
    }
    if !is_positive_definite(gram) {
        return Err(Error::DegenerateGram);
    }
    if s.dim() == 0 {
        return Ok(Subspace::full(s.ambient_dim()));
    }
    let complement = s.basis().matmul(gram).kernel();
    debug_assert!(complement.complements(s));
    Ok(complement)
}

/// Quotient of `Q^ambient` by a `kernel` subspace, realized by an explicit
/// cross-section: the coset representatives in `section` map to a basis of
/// the quotient, and `projector` is the projection onto their span along the
/// kernel.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    ambient: usize,
    kernel: Subspace,
    section: Mat,
    projector: Mat,
    /// Top block of the inverse change-of-basis: maps an ambient vector to
    /// its coordinates in the section basis.
    coords: Mat,
    coords_f64: DMatrix<f64>,
}

impl QuotientModel {
    /// Builds the quotient model. `section` rows must complete the kernel to
    /// a direct sum of the ambient space.
    pub fn new(kernel: Subspace, section: Mat) -> Result<Self> {
        let ambient = kernel.ambient_dim();
        if section.ncols() != ambient {
            return Err(Error::invalid("section dimension mismatch"));
        }
        let q = section.nrows();
        if q + kernel.dim() != ambient {
            return Err(Error::invalid(format!(
                "section rank {} plus kernel dim {} does not fill ambient {}",
                q,
                kernel.dim(),
                ambient
            )));
        }
        // Change of basis with section vectors first, kernel basis after.
        let m = section.vstack(kernel.basis()).transpose();
        let Some(minv) = m.inverse() else {
            return Err(Error::invalid("section does not complement the kernel"));
        };
        let coords = Mat::from_fn(q, ambient, |r, c| minv.at(r, c).clone());
        let projector = section.transpose().matmul(&coords);
        let coords_f64 = coords.to_f64();
        Ok(QuotientModel {
            ambient,
            kernel,
            section,
            projector,
            coords,
            coords_f64,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.section.nrows()
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn section(&self) -> &Mat {
        &self.section
    }

    pub fn projector(&self) -> &Mat {
        &self.projector
    }

    /// Coordinates of the class of `v` in the section basis. Exact.
    pub fn class_coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.coords.mul_vec(v)
    }

    /// Float variant of [`QuotientModel::class_coords`].
    pub fn class_coords_f64(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.coords_f64 * v
    }

    /// Representative tensor of a class given in section coordinates.
    pub fn lift(&self, class: &[Rat]) -> Vec<Rat> {
        assert_eq!(class.len(), self.dim());
        let mut out = vec![Rat::zero(); self.ambient];
        for (i, coeff) in class.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for c in 0..self.ambient {
                let v = &out[c] + coeff * self.section.at(i, c);
                out[c] = v;
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Float tower
// ---------------------------------------------------------------------------

/// Minimizer of `‖m·x − target‖₂`; for rank-deficient `m` the minimum-norm
/// minimizer. The residual is orthogonal to the column space of `m`.
pub fn least_squares_solve(m: &DMatrix<f64>, target: &DVector<f64>) -> DVector<f64> {
    let svd = m.clone().svd(true, true);
    svd.solve(target, 1e-13)
        .expect("SVD solve cannot fail with both factors computed")
}

/// Skew normal form under orthogonal congruence.
///
/// For an antisymmetric `omega` of even size `2n`, returns `(P, lambdas)`
/// with `P` orthogonal and `Pᵀ·omega·P = block-diag(λ₁J₂, …, λₙJ₂)`,
/// `J₂ = [[0,1],[−1,0]]`, `λ₁ ≥ … ≥ λₙ > 0`.
///
/// The decomposition is deterministic: eigenvalues of `omegaᵀ·omega` are
/// processed in descending order and the first basis vector of every 2-plane
/// is flipped to make its leading entry positive.
pub fn skew_normal_form(omega: &DMatrix<f64>, tol: f64) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let d = omega.nrows();
    if d != omega.ncols() || d % 2 != 0 || d == 0 {
        return Err(Error::invalid("skew normal form needs an even-sized square matrix"));
    }
    let asym = (omega + omega.transpose()).abs().max();
    let scale = omega.abs().max().max(1.0);
    if asym > 1e-9 * scale {
        return Err(Error::invalid("matrix is not antisymmetric"));
    }
    let n = d / 2;
    let sym = omega.transpose() * omega;
    let eig = nalgebra::SymmetricEigen::new(sym);
    // Sort eigenpairs by descending eigenvalue.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(d);
    let mut lambdas = Vec::with_capacity(n);
    let mut p = DMatrix::zeros(d, d);
    let mut block = 0;
    for &idx in &order {
        if block == n {
            break;
        }
        let mut u: DVector<f64> = eig.eigenvectors.column(idx).into();
        for c in &chosen {
            let proj = u.dot(c);
            u -= c * proj;
        }
        let norm = u.norm();
        if norm < 0.5 {
            // Already captured by an earlier 2-plane of the same eigenvalue.
            continue;
        }
        u /= norm;
        let lambda2 = eig.eigenvalues[idx].max(0.0);
        let lambda = lambda2.sqrt();
        if lambda <= tol {
            return Err(Error::ContactDegeneracy {
                point: vec![],
                detail: format!("skew spectrum value {lambda:.3e} below tolerance {tol:.1e}"),
            });
        }
        // Deterministic sign: leading entry of u positive.
        if let Some(lead) = (0..d).find(|&i| u[i].abs() > 1e-8) {
            if u[lead] < 0.0 {
                u = -u;
            }
        }
        let w = -(omega * &u) / lambda;
        p.set_column(2 * block, &u);
        p.set_column(2 * block + 1, &w);
        lambdas.push(lambda);
        chosen.push(u);
        chosen.push(w);
        block += 1;
    }
    if block < n {
        return Err(Error::ContactDegeneracy {
            point: vec![],
            detail: "could not extract a full set of 2-planes".into(),
        });
    }
    Ok((p, lambdas))
}

/// Block diagonal `diag(λ₁J₂, …, λₙJ₂)` with `J₂ = [[0,1],[−1,0]]`.
pub fn skew_block_diag(lambdas: &[f64]) -> DMatrix<f64> {
    let d = 2 * lambdas.len();
    let mut m = DMatrix::zeros(d, d);
    for (k, &l) in lambdas.iter().enumerate() {
        m[(2 * k, 2 * k + 1)] = l;
        m[(2 * k + 1, 2 * k)] = -l;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use proptest::prelude::*;

    fn mat_j2(scale: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, scale, -scale, 0.0])
    }

    #[test]
    fn rref_identity() {
        let (r, rank) = Mat::identity(3).rref();
        assert_eq!(r, Mat::identity(3));
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_zero() {
        let (r, rank) = Mat::zeros(2, 5).rref();
        assert_eq!(r, Mat::zeros(2, 5));
        assert_eq!(rank, 0);
    }

    #[test]
    fn kernel_identity_is_zero() {
        let k = Mat::identity(4).kernel();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_of_row_sum() {
        let k = Mat::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[rat(1), rat(-1)]));
        assert!(!k.contains(&[rat(1), rat(1)]));
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[rat(3), rat(2)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
        assert_eq!(m.det(), rat(1));
    }

    #[test]
    fn orthogonal_complement_line_in_plane() {
        let s = Subspace::from_span(Mat::from_i64(&[&[1, 0]]));
        let c = orthogonal_complement(&s, &Mat::identity(2)).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&[rat(0), rat(1)]));
    }

    #[test]
    fn orthogonal_complement_of_full_space() {
        let s = Subspace::full(3);
        let c = orthogonal_complement(&s, &Mat::identity(3)).unwrap();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn orthogonal_complement_rejects_degenerate_gram() {
        let s = Subspace::from_span(Mat::from_i64(&[&[1, 0]]));
        let gram = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            orthogonal_complement(&s, &gram),
            Err(Error::DegenerateGram)
        ));
    }

    #[test]
    fn quotient_model_invariants() {
        // Quotient of Q^3 by span{(1,1,0)} with section {e1, e3}.
        let kernel = Subspace::from_span(Mat::from_i64(&[&[1, 1, 0]]));
        let section = Mat::from_i64(&[&[1, 0, 0], &[0, 0, 1]]);
        let q = QuotientModel::new(kernel, section).unwrap();
        assert_eq!(q.dim(), 2);
        let p = q.projector();
        // projector² = projector, exactly.
        assert_eq!(p.matmul(p), *p);
        // projector annihilates the kernel.
        assert!(q
            .projector()
            .mul_vec(&[rat(1), rat(1), rat(0)])
            .iter()
            .all(|x| x.is_zero()));
        // projector is the identity on the section.
        assert_eq!(q.class_coords(&[rat(1), rat(0), rat(0)]), vec![rat(1), rat(0)]);
        assert_eq!(q.class_coords(&[rat(0), rat(0), rat(1)]), vec![rat(0), rat(1)]);
        // class of e2 = class of -e1.
        assert_eq!(q.class_coords(&[rat(0), rat(1), rat(0)]), vec![rat(-1), rat(0)]);
    }

    #[test]
    fn least_squares_identity_and_average() {
        let m = DMatrix::<f64>::identity(3, 3);
        let t = DVector::from_row_slice(&[1.0, -2.0, 0.5]);
        assert!((least_squares_solve(&m, &t) - t).norm() < 1e-12);

        let m = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let t = DVector::from_row_slice(&[1.0, 3.0]);
        let x = least_squares_solve(&m, &t);
        assert!((x[0] - 2.0).abs() < 1e-12);
        // Residual orthogonal to the column space.
        let r = &t - &m * &x;
        assert!((m.transpose() * r).abs().max() < 1e-12);
    }

    #[test]
    fn skew_normal_form_j2() {
        let (p, l) = skew_normal_form(&mat_j2(1.0), 1e-9).unwrap();
        assert!((p.clone() - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-12);
        assert_eq!(l.len(), 1);
        assert!((l[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skew_normal_form_scaled() {
        let (_, l) = skew_normal_form(&mat_j2(3.0), 1e-9).unwrap();
        assert!((l[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn skew_normal_form_two_blocks_rotated() {
        // block-diag(2J₂, 5J₂) conjugated by a rotation; spectrum is
        // {±5i, ±2i} so the lambdas must come back as [5, 2].
        let mut omega = DMatrix::zeros(4, 4);
        omega[(0, 1)] = 2.0;
        omega[(1, 0)] = -2.0;
        omega[(2, 3)] = 5.0;
        omega[(3, 2)] = -5.0;
        // A rotation mixing all four axes.
        let angles = [(0usize, 2usize, 0.7f64), (1, 3, -0.4), (0, 3, 1.1)];
        let mut q = DMatrix::<f64>::identity(4, 4);
        for &(i, j, a) in &angles {
            let mut g = DMatrix::<f64>::identity(4, 4);
            g[(i, i)] = a.cos();
            g[(j, j)] = a.cos();
            g[(i, j)] = -a.sin();
            g[(j, i)] = a.sin();
            q = q * g;
        }
        let conj = &q * omega * q.transpose();
        let (p, l) = skew_normal_form(&conj, 1e-9).unwrap();
        assert!((l[0] - 5.0).abs() < 1e-9);
        assert!((l[1] - 2.0).abs() < 1e-9);
        let recon = &p * skew_block_diag(&l) * p.transpose();
        assert!((recon - conj).abs().max() < 1e-9);
    }

    #[test]
    fn skew_normal_form_rejects_degenerate() {
        let omega = DMatrix::<f64>::zeros(2, 2);
        assert!(matches!(
            skew_normal_form(&omega, 1e-9),
            Err(Error::ContactDegeneracy { .. })
        ));
    }

    #[test]
    fn positive_definite_check() {
        assert!(is_positive_definite(&Mat::identity(3)));
        assert!(is_positive_definite(&Mat::from_i64(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&Mat::from_i64(&[&[1, 2], &[2, 1]])));
        assert!(!is_positive_definite(&Mat::from_i64(&[&[0, 0], &[0, 1]])));
    }

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
    }

    fn mat_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Mat> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(rat_strategy(), r * c).prop_map(move |data| Mat {
                rows: r,
                cols: c,
                data,
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rref_is_idempotent(m in mat_strategy(6, 8)) {
            let (r1, k1) = m.rref();
            let (r2, k2) = r1.rref();
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(k1, k2);
        }

        #[test]
        fn rank_nullity(m in mat_strategy(12, 60)) {
            let rank = m.rank();
            let kernel = m.kernel();
            prop_assert_eq!(rank + kernel.dim(), m.ncols());
            for row in kernel.basis_rows() {
                prop_assert!(m.mul_vec(&row).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn skew_reconstruction(n in 1usize..=3, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = 2 * n;
            let mut omega = DMatrix::<f64>::zeros(d, d);
            for (i, j) in pairs(d) {
                let v: f64 = rng.gen_range(-3.0..3.0);
                omega[(i, j)] = v;
                omega[(j, i)] = -v;
            }
            match skew_normal_form(&omega, 1e-9) {
                Ok((p, l)) => {
                    prop_assert!((p.transpose() * &p - DMatrix::<f64>::identity(d, d)).abs().max() < 1e-9);
                    let recon = &p * skew_block_diag(&l) * p.transpose();
                    prop_assert!((recon - omega).abs().max() < 1e-8);
                    for w in l.windows(2) {
                        prop_assert!(w[0] >= w[1] - 1e-12);
                    }
                }
                Err(Error::ContactDegeneracy { .. }) => {
                    // Random matrix happened to be near-degenerate; acceptable.
                }
                Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
            }
        }
    }
}
