//! Stabilizer algebras of nondegenerate skew forms inside the conformal
//! orthogonal algebra.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::linalg::{npairs, pair_index, pairs, Mat, Subspace};
use crate::{rat, Error, Rat, Result};

/// Coefficient of the stabilizer equation `XᵀΩ + ΩX = 0` at the matrix
/// position `(i, j)` for `X` ranging over the generator `gen`.
fn equation_entry(gen: &Mat, omega: &Mat, i: usize, j: usize) -> Rat {
    let d = omega.nrows();
    let mut acc = Rat::zero();
    for k in 0..d {
        acc += gen.at(k, i) * omega.at(k, j) + omega.at(i, k) * gen.at(k, j);
    }
    acc
}

/// Lie algebra of the conformal-orthogonal stabilizer of a nondegenerate
/// antisymmetric form: all `X = a + t·I` with `a` antisymmetric satisfying
/// `XᵀΩ + ΩX = 0`, returned as an echelon basis in the coordinates
/// `(a_{pq} for p < q lexicographic, t)`.
pub fn stabilizer_algebra(omega: &Mat) -> Result<Subspace> {
    let d = omega.nrows();
    if !omega.is_antisymmetric() {
        return Err(Error::invalid("stabilizer of a non-antisymmetric form"));
    }
    if omega.det().is_zero() {
        return Err(Error::ContactDegeneracy {
            point: vec![],
            detail: "stabilizer of a degenerate form".into(),
        });
    }
    let unknowns = npairs(d) + 1;
    // One equation per strict upper-triangle position: the equation matrix
    // is antisymmetric, so the rest is redundant.
    let mut system = Mat::zeros(npairs(d), unknowns);
    for (col, (p, q)) in pairs(d).enumerate() {
        let mut gen = Mat::zeros(d, d);
        gen.set(q, p, rat(1));
        gen.set(p, q, rat(-1));
        for (i, j) in pairs(d) {
            system.set(pair_index(i, j, d), col, equation_entry(&gen, omega, i, j));
        }
    }
    let ident = Mat::identity(d);
    for (i, j) in pairs(d) {
        system.set(
            pair_index(i, j, d),
            npairs(d),
            equation_entry(&ident, omega, i, j),
        );
    }
    Ok(system.kernel())
}

/// Dimension of the stabilizer algebra for a floating-point form, via the
/// singular values of the same linear system.
pub fn stabilizer_dimension_f64(omega: &DMatrix<f64>, tol: f64) -> usize {
    let d = omega.nrows();
    let unknowns = npairs(d) + 1;
    let mut system = DMatrix::<f64>::zeros(npairs(d), unknowns);
    let entry = |gen: &DMatrix<f64>, i: usize, j: usize| {
        let mut acc = 0.0;
        for k in 0..d {
            acc += gen[(k, i)] * omega[(k, j)] + omega[(i, k)] * gen[(k, j)];
        }
        acc
    };
    for (col, (p, q)) in pairs(d).enumerate() {
        let mut gen = DMatrix::<f64>::zeros(d, d);
        gen[(q, p)] = 1.0;
        gen[(p, q)] = -1.0;
        for (i, j) in pairs(d) {
            system[(pair_index(i, j, d), col)] = entry(&gen, i, j);
        }
    }
    let ident = DMatrix::<f64>::identity(d, d);
    for (i, j) in pairs(d) {
        system[(pair_index(i, j, d), npairs(d))] = entry(&ident, i, j);
    }
    let svd = system.svd(false, false);
    let scale = svd.singular_values.iter().cloned().fold(1.0f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > tol.max(1e-12) * scale)
        .count();
    unknowns - rank
}

/// The standard form `block-diag(λ₁J₂, …, λₙJ₂)` over the rationals.
pub fn standard_skew_form(lambdas: &[Rat]) -> Mat {
    let d = 2 * lambdas.len();
    let mut m = Mat::zeros(d, d);
    for (k, l) in lambdas.iter().enumerate() {
        m.set(2 * k, 2 * k + 1, l.clone());
        m.set(2 * k + 1, 2 * k, -l.clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn standard_form_stabilizer_is_unitary_algebra() {
        // All block scalars equal: the stabilizer is u(n), dimension n².
        for n in 1..=3 {
            let omega = standard_skew_form(&vec![rat(1); n]);
            let stab = stabilizer_algebra(&omega).unwrap();
            assert_eq!(stab.dim(), n * n, "n={n}");
        }
    }

    #[test]
    fn any_nondegenerate_form_in_dim_two_gives_dimension_one() {
        for l in [rat(1), rat(3), ratio(-2, 5), ratio(7, 3)] {
            let omega = standard_skew_form(&[l]);
            assert_eq!(stabilizer_algebra(&omega).unwrap().dim(), 1);
        }
    }

    #[test]
    fn distinct_block_scalars_break_to_torus() {
        // block-diag(J₂, 2J₂): the stabilizer drops to u(1)×u(1).
        let omega = standard_skew_form(&[rat(1), rat(2)]);
        let stab = stabilizer_algebra(&omega).unwrap();
        assert_eq!(stab.dim(), 2);
        // The two block rotations are in the stabilizer: a_{01} and a_{23}
        // coordinates with t = 0.
        let mut gen1 = vec![rat(0); npairs(4) + 1];
        gen1[pair_index(0, 1, 4)] = rat(1);
        assert!(stab.contains(&gen1));
        let mut gen2 = vec![rat(0); npairs(4) + 1];
        gen2[pair_index(2, 3, 4)] = rat(1);
        assert!(stab.contains(&gen2));
        // Float oracle agrees.
        assert_eq!(stabilizer_dimension_f64(&omega.to_f64(), 1e-9), 2);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let omega = Mat::zeros(2, 2);
        assert!(matches!(
            stabilizer_algebra(&omega),
            Err(Error::ContactDegeneracy { .. })
        ));
    }

    #[test]
    fn conformal_direction_never_survives() {
        // Any solution has t = 0: the t-coordinate of every basis vector of
        // the stabilizer vanishes.
        for lambdas in [vec![rat(1)], vec![rat(1), rat(2)], vec![rat(2), rat(2)]] {
            let omega = standard_skew_form(&lambdas);
            let stab = stabilizer_algebra(&omega).unwrap();
            let t_col = npairs(omega.nrows());
            for row in stab.basis_rows() {
                assert!(row[t_col].is_zero());
            }
        }
    }
}
