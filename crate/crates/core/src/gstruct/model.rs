//! The model space and Lie algebra bases of the three structure groups.

use crate::linalg::{npairs, pairs, Mat};
use crate::{rat, Rat};

/// Reduction level of the structure group.
///
/// * [`Level::G`] — block matrices `[[A, b], [0, c]]` with `A ∈ O(2n)`,
///   `b ∈ ℝ^{2n}`, `c ≠ 0`: the full group of adapted-coframe changes.
/// * [`Level::G1`] — `A ∈ U(n)`, `c = 1`: after normalizing the top-form
///   block.
/// * [`Level::G2`] — additionally `b = 0`: after absorbing the mixed block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    G,
    G1,
    G2,
}

/// Which generator family a Lie algebra basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorTag {
    /// `I_pq = e_p*⊗e_q − e_q*⊗e_p`, a plane rotation of `V'`.
    Rotation { p: usize, q: usize },
    /// `II_k = v*⊗e_k`, shearing the distinguished direction into `V'`.
    Translation { k: usize },
    /// `III = v*⊗v`, scaling the distinguished direction.
    Dilation,
    /// `A_pq`, the projection of `I_pq` onto the `J₀`-commutant.
    Unitary { p: usize, q: usize },
}

/// The model vector space `V = V' ⊕ span{v}`, `dim V = 2n+1`, with basis
/// `(e₁, …, e_{2n}, v)` and the standard complex structure on `V'`
/// (`J₀e_{2k−1} = e_{2k}`).
#[derive(Clone, Copy, Debug)]
pub struct ModelSpace {
    n: usize,
}

impl ModelSpace {
    pub fn new(n: usize) -> ModelSpace {
        assert!(n >= 1);
        ModelSpace { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of `V`.
    pub fn vdim(&self) -> usize {
        2 * self.n + 1
    }

    /// Index of the distinguished basis vector `v`.
    pub fn v_index(&self) -> usize {
        2 * self.n
    }

    /// `J₀` on `V'` as a `2n×2n` matrix: `J₀e_{2k−1} = e_{2k}`,
    /// `J₀e_{2k} = −e_{2k−1}`.
    pub fn j0(&self) -> Mat {
        let d = 2 * self.n;
        let mut m = Mat::zeros(d, d);
        for k in 0..self.n {
            m.set(2 * k + 1, 2 * k, rat(1));
            m.set(2 * k, 2 * k + 1, rat(-1));
        }
        m
    }

    /// `J₀` embedded in `End(V)` with zero on the distinguished direction.
    pub fn j0_full(&self) -> Mat {
        embed_prime(&self.j0(), self.vdim())
    }
}

/// Embeds a `2n×2n` matrix into `(2n+1)×(2n+1)` as the top-left block.
pub(crate) fn embed_prime(a: &Mat, vdim: usize) -> Mat {
    let mut m = Mat::zeros(vdim, vdim);
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            m.set(r, c, a.at(r, c).clone());
        }
    }
    m
}

/// Lie algebra of a structure group: a basis of `(2n+1)×(2n+1)` matrices in
/// the block shape `[[A, b], [0, c]]` demanded by the level, plus tags
/// recording which generator family each basis element came from.
#[derive(Clone, Debug)]
pub struct LieAlgebraModel {
    n: usize,
    level: Level,
    basis: Vec<Mat>,
    tags: Vec<GeneratorTag>,
}

impl LieAlgebraModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn tags(&self) -> &[GeneratorTag] {
        &self.tags
    }

    /// Expected dimension from the group description.
    pub fn expected_dim(n: usize, level: Level) -> usize {
        match level {
            Level::G => npairs(2 * n) + 2 * n + 1,
            Level::G1 => n * n + 2 * n,
            Level::G2 => n * n,
        }
    }

    /// The element `Σ coords[a]·basis[a]` as a matrix.
    pub fn element(&self, coords: &[Rat]) -> Mat {
        assert_eq!(coords.len(), self.basis.len());
        let vdim = 2 * self.n + 1;
        let mut m = Mat::zeros(vdim, vdim);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !num_traits::Zero::is_zero(c) {
                m = m.add(&b.scale(c));
            }
        }
        m
    }
}

/// Plane rotation generator `I_pq` on `V'`, embedded in `End(V)`:
/// `e_p ↦ e_q`, `e_q ↦ −e_p`.
pub(crate) fn rotation_generator(p: usize, q: usize, vdim: usize) -> Mat {
    let mut m = Mat::zeros(vdim, vdim);
    m.set(q, p, rat(1));
    m.set(p, q, rat(-1));
    m
}

/// Shear generator `II_k = v*⊗e_k`.
pub(crate) fn translation_generator(k: usize, vdim: usize) -> Mat {
    let mut m = Mat::zeros(vdim, vdim);
    m.set(k, vdim - 1, rat(1));
    m
}

/// Unitary generator: projection of `I_pq` onto the commutant of `J₀`,
/// `A_pq = I_pq − J₀·I_pq·J₀`, embedded in `End(V)`.
pub(crate) fn unitary_generator(p: usize, q: usize, model: &ModelSpace) -> Mat {
    let vdim = model.vdim();
    let i_pq = rotation_generator(p, q, vdim);
    let j0 = model.j0_full();
    i_pq.sub(&j0.matmul(&i_pq).matmul(&j0))
}

/// Builds the Lie algebra basis for the requested level.
///
/// The unitary generators `A_pq` are linearly dependent across `(p, q)`;
/// a maximal independent subset is selected by greedy echelonization in
/// lexicographic `(p, q)` order, which gives a deterministic basis of the
/// expected dimension `n²`.
pub fn build_lie_algebra(n: usize, level: Level) -> LieAlgebraModel {
    assert!(n >= 1);
    let model = ModelSpace::new(n);
    let vdim = model.vdim();
    let mut basis = Vec::new();
    let mut tags = Vec::new();
    match level {
        Level::G => {
            for (p, q) in pairs(2 * n) {
                basis.push(rotation_generator(p, q, vdim));
                tags.push(GeneratorTag::Rotation { p, q });
            }
            for k in 0..2 * n {
                basis.push(translation_generator(k, vdim));
                tags.push(GeneratorTag::Translation { k });
            }
            let mut dilation = Mat::zeros(vdim, vdim);
            dilation.set(vdim - 1, vdim - 1, rat(1));
            basis.push(dilation);
            tags.push(GeneratorTag::Dilation);
        }
        Level::G1 | Level::G2 => {
            let mut echelon: Vec<Vec<Rat>> = Vec::new();
            for (p, q) in pairs(2 * n) {
                let gen = unitary_generator(p, q, &model);
                let mut flat = Vec::with_capacity(vdim * vdim);
                for r in 0..vdim {
                    for c in 0..vdim {
                        flat.push(gen.at(r, c).clone());
                    }
                }
                if extends_span(&mut echelon, flat) {
                    basis.push(gen);
                    tags.push(GeneratorTag::Unitary { p, q });
                }
            }
            if level == Level::G1 {
                for k in 0..2 * n {
                    basis.push(translation_generator(k, vdim));
                    tags.push(GeneratorTag::Translation { k });
                }
            }
        }
    }
    let m = LieAlgebraModel {
        n,
        level,
        basis,
        tags,
    };
    debug_assert_eq!(m.dim(), LieAlgebraModel::expected_dim(n, level));
    m
}

/// Reduces `v` against an incremental echelon set; pushes the residual and
/// returns true when it is nonzero (i.e. `v` extended the span).
fn extends_span(echelon: &mut Vec<Vec<Rat>>, mut v: Vec<Rat>) -> bool {
    use num_traits::Zero;
    for row in echelon.iter() {
        let lead = row.iter().position(|x| !x.is_zero()).unwrap();
        if !v[lead].is_zero() {
            let factor = &v[lead] / &row[lead];
            for (slot, r) in v.iter_mut().zip(row) {
                let t = slot.clone() - &factor * r;
                *slot = t;
            }
        }
    }
    if v.iter().all(|x| x.is_zero()) {
        false
    } else {
        echelon.push(v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn j0_squares_to_minus_identity_on_prime() {
        for n in 1..=3 {
            let model = ModelSpace::new(n);
            let j = model.j0();
            let sq = j.matmul(&j);
            assert_eq!(sq, Mat::identity(2 * n).scale(&rat(-1)));
        }
    }

    #[test]
    fn dims_match_group_description() {
        // n=1: one I_12, two II_k, one III.
        assert_eq!(build_lie_algebra(1, Level::G).dim(), 4);
        // n=1: u(1) is one-dimensional.
        assert_eq!(build_lie_algebra(1, Level::G2).dim(), 1);
        // n=2: four independent A_pq plus four II_k.
        assert_eq!(build_lie_algebra(2, Level::G1).dim(), 8);
        for n in 1..=3 {
            for level in [Level::G, Level::G1, Level::G2] {
                assert_eq!(
                    build_lie_algebra(n, level).dim(),
                    LieAlgebraModel::expected_dim(n, level)
                );
            }
        }
    }

    #[test]
    fn unitary_generators_commute_with_j0_and_are_antisymmetric() {
        for n in 1..=3 {
            let model = ModelSpace::new(n);
            let j0 = model.j0_full();
            for gen in build_lie_algebra(n, Level::G2).basis() {
                assert!(gen.matmul(&j0).sub(&j0.matmul(gen)).is_zero());
                assert!(gen.add(&gen.transpose()).is_zero());
                // v is killed: last column and last row vanish.
                let vdim = model.vdim();
                for r in 0..vdim {
                    assert!(gen.at(r, vdim - 1).is_zero());
                    assert!(gen.at(vdim - 1, r).is_zero());
                }
            }
        }
    }

    #[test]
    fn n1_unitary_generator_is_j0() {
        let model = ModelSpace::new(1);
        let alg = build_lie_algebra(1, Level::G2);
        // A_12 spans u(1); it is a multiple of J₀.
        let gen = &alg.basis()[0];
        let j0 = model.j0_full();
        // gen = 2·J₀ for n = 1.
        assert_eq!(*gen, j0.scale(&rat(2)));
    }
}
