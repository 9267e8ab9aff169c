//! The antisymmetrization map from `Hom(V, 𝔤)` into `Hom(V∧V, V)`.

use super::model::{build_lie_algebra, Level, LieAlgebraModel};
use super::tensor::{flat_index, Hom2Tensor};
use crate::linalg::{npairs, pairs, Mat};
use crate::Rat;

/// `𝒜(S)(u ∧ w) = S(u)w − S(w)u` for a linear map `S: V → End(V)` given by
/// its values `maps[s] = S(e_s)` on the basis.
pub fn amap(maps: &[Mat]) -> Hom2Tensor<Rat> {
    let vdim = maps.len();
    assert!(maps.iter().all(|m| m.nrows() == vdim && m.ncols() == vdim));
    let mut t = Hom2Tensor::<Rat>::zero(vdim);
    for (i, j) in pairs(vdim) {
        // S(e_i)·e_j − S(e_j)·e_i
        let a = maps[i].col_vec(j);
        let b = maps[j].col_vec(i);
        for k in 0..vdim {
            t.set_upper(i, j, k, &a[k] - &b[k]);
        }
    }
    t
}

/// `S: V → 𝔤` from coordinates in the basis `e_s*⊗B_a` (s-major, then the
/// Lie algebra basis index): returns the list `S(e_s)`.
pub fn hom_map_from_coords(alg: &LieAlgebraModel, coords: &[Rat]) -> Vec<Mat> {
    let vdim = 2 * alg.n() + 1;
    assert_eq!(coords.len(), vdim * alg.dim());
    (0..vdim)
        .map(|s| {
            let chunk = &coords[s * alg.dim()..(s + 1) * alg.dim()];
            alg.element(chunk)
        })
        .collect()
}

/// Matrix of the antisymmetrization map on `Hom(V, 𝔤_level)`.
///
/// Rows are indexed by the flat coordinates of `Hom(V∧V, V)` (see
/// [`flat_index`]); columns by the basis `e_s*⊗B_a` of `Hom(V, 𝔤)`,
/// s-major. Exact.
pub fn amap_matrix(n: usize, level: Level) -> Mat {
    let alg = build_lie_algebra(n, level);
    let vdim = 2 * n + 1;
    let rows = npairs(vdim) * vdim;
    let cols = vdim * alg.dim();
    let mut m = Mat::zeros(rows, cols);
    for s in 0..vdim {
        for (a, gen) in alg.basis().iter().enumerate() {
            let col = s * alg.dim() + a;
            // Image tensor of e_s*⊗B_a: T(e_i∧e_j) = δ_si·B e_j − δ_sj·B e_i.
            for (i, j) in pairs(vdim) {
                if i == s {
                    for k in 0..vdim {
                        if !num_traits::Zero::is_zero(gen.at(k, j)) {
                            m.set(flat_index(i, j, k, vdim), col, gen.at(k, j).clone());
                        }
                    }
                } else if j == s {
                    for k in 0..vdim {
                        if !num_traits::Zero::is_zero(gen.at(k, i)) {
                            let v = m.at(flat_index(i, j, k, vdim), col) - gen.at(k, i);
                            m.set(flat_index(i, j, k, vdim), col, v);
                        }
                    }
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gstruct::model::{translation_generator, rotation_generator};
    use crate::linalg::Subspace;
    use crate::rat;
    use num_traits::Zero;

    #[test]
    fn amap_of_zero_is_zero() {
        let maps = vec![Mat::zeros(3, 3); 3];
        let t = amap(&maps);
        assert!(t.flat().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn amap_of_shear_is_wedge_with_v() {
        // The image of e_s*⊗II_k is (e_s*∧v*)⊗e_k.
        let n = 1;
        let vdim = 3;
        for s in 0..2 {
            for k in 0..2 {
                let mut maps = vec![Mat::zeros(vdim, vdim); vdim];
                maps[s] = translation_generator(k, vdim);
                let t = amap(&maps);
                let mut expected = Hom2Tensor::<Rat>::zero(vdim);
                expected.set_upper(s, 2 * n, k, rat(1));
                assert_eq!(t, expected, "s={s} k={k}");
            }
        }
    }

    #[test]
    fn amap_of_rotation_matches_display() {
        // The image of e_s*⊗I_pq is (e_s*∧e_p*)⊗e_q − (e_s*∧e_q*)⊗e_p.
        let vdim = 5;
        let (p, q) = (1, 3);
        for s in 0..vdim {
            let mut maps = vec![Mat::zeros(vdim, vdim); vdim];
            maps[s] = rotation_generator(p, q, vdim);
            let t = amap(&maps);
            let mut expected = Hom2Tensor::<Rat>::zero(vdim);
            let mut add = |i: usize, j: usize, k: usize, v: i64| {
                if i == j {
                    return;
                }
                let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
                let cur = expected.get(a, b, k);
                expected.set_upper(a, b, k, cur + rat(sign * v));
            };
            add(s, p, q, 1);
            add(s, q, p, -1);
            assert_eq!(t, expected, "s={s}");
        }
    }

    #[test]
    fn amap_matrix_rank_n1_full_level() {
        // 9×12 matrix with rank 8, consistent with a 1-dimensional quotient.
        let m = amap_matrix(1, Level::G);
        assert_eq!((m.nrows(), m.ncols()), (9, 12));
        assert_eq!(m.rank(), 8);
        // Independent float oracle for the rank.
        let svd = m.to_f64().svd(false, false);
        let float_rank = svd.singular_values.iter().filter(|s| **s > 1e-9).count();
        assert_eq!(float_rank, 8);
    }

    #[test]
    fn amap_matrix_kernel_trivial_on_reduced_level() {
        // The first prolongation of the reduced structure group vanishes.
        for n in 1..=2 {
            let m = amap_matrix(n, Level::G2);
            assert_eq!(m.kernel().dim(), 0, "n={n}");
        }
    }

    #[test]
    fn prime_valued_wedges_lie_in_full_image() {
        // Every (e_i*∧e_j*)⊗e_k with i, j, k < 2n lies in the image of the
        // antisymmetrization map at the full level.
        for n in 1..=2 {
            let vdim = 2 * n + 1;
            let image = Subspace::from_span(amap_matrix(n, Level::G).transpose());
            for (i, j) in pairs(2 * n) {
                for k in 0..2 * n {
                    let mut t = Hom2Tensor::<Rat>::zero(vdim);
                    t.set_upper(i, j, k, rat(1));
                    assert!(
                        image.contains(t.flat()),
                        "n={n} tensor ({i},{j})⊗{k} not in image"
                    );
                }
            }
        }
    }
}
