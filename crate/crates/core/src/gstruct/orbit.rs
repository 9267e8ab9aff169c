//! Orbit spaces of the antisymmetrization map with explicit cross-sections.

use super::amap::amap_matrix;
use super::group::GroupElement;
use super::model::Level;
use super::tensor::{flat_index, sigma_action_exact, Hom2Tensor};
use crate::linalg::{npairs, orthogonal_complement, pairs, Mat, QuotientModel, Subspace};
use crate::{rat, Error, Rat, Result};
use num_traits::Zero;

/// Label attached to each cross-section vector of an orbit space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionLabel {
    /// `(e_i*∧e_j*)⊗v` — the top-form block on the distribution directions.
    OmegaBlock { i: usize, j: usize },
    /// `(e_i*∧v*)⊗v` — the mixed block.
    MixedBlock { i: usize },
    /// `(e_i*∧e_j*)⊗e_k` — completion inside `Hom(V'∧V', V')`.
    APart { i: usize, j: usize, k: usize },
    /// Echelon-basis vector of the invariant complement (reduced level).
    Complement,
}

/// Quotient of `Hom(V∧V, V)` by the image of the antisymmetrization map on
/// `Hom(V, 𝔤_level)`, together with labels identifying the cross-section
/// with the graded pieces it represents.
#[derive(Clone, Debug)]
pub struct OrbitSpaceModel {
    n: usize,
    level: Level,
    quotient: QuotientModel,
    labels: Vec<SectionLabel>,
}

impl OrbitSpaceModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn quotient(&self) -> &QuotientModel {
        &self.quotient
    }

    pub fn labels(&self) -> &[SectionLabel] {
        &self.labels
    }

    /// Image of the antisymmetrization map (the subspace quotiented out).
    pub fn image(&self) -> &Subspace {
        self.quotient.kernel()
    }

    /// Class coordinates of a tensor in the section basis. Exact.
    pub fn class_of(&self, t: &Hom2Tensor<Rat>) -> Vec<Rat> {
        self.quotient.class_coords(t.flat())
    }

    /// Representative tensor of a class.
    pub fn lift(&self, class: &[Rat]) -> Hom2Tensor<Rat> {
        let vdim = 2 * self.n + 1;
        Hom2Tensor::from_flat(vdim, self.quotient.lift(class))
    }
}

/// Builds the orbit space for the requested level.
///
/// * Full level: the section is `{(e_i*∧e_j*)⊗v : i < j ≤ 2n}`, so the
///   quotient is identified with the space of `V/V'`-valued two-forms on
///   `V'`; its dimension is `n(2n−1)`.
/// * Intermediate level: the section keeps the top-form and mixed
///   representatives and completes them inside `Hom(V'∧V', V')`.
/// * Reduced level: the section is the orthogonal complement of the image
///   (standard gram); the map is injective there, so the quotient has full
///   complementary dimension.
pub fn build_orbit_space(n: usize, level: Level) -> Result<OrbitSpaceModel> {
    let vdim = 2 * n + 1;
    let v = 2 * n;
    let total = npairs(vdim) * vdim;
    let image = Subspace::from_span(amap_matrix(n, level).transpose());

    let mut section_rows: Vec<Vec<Rat>> = Vec::new();
    let mut labels = Vec::new();
    let unit = |i: usize, j: usize, k: usize| {
        let mut row = vec![Rat::zero(); total];
        row[flat_index(i, j, k, vdim)] = rat(1);
        row
    };

    match level {
        Level::G => {
            for (i, j) in pairs(v) {
                section_rows.push(unit(i, j, v));
                labels.push(SectionLabel::OmegaBlock { i, j });
            }
        }
        Level::G1 => {
            let mut working = image.basis_rows();
            let push = |rows: &mut Vec<Vec<Rat>>,
                            labels: &mut Vec<SectionLabel>,
                            working: &mut Vec<Vec<Rat>>,
                            row: Vec<Rat>,
                            label: SectionLabel,
                            required: bool| {
                let mut trial = working.clone();
                if extends_span(&mut trial, row.clone()) {
                    *working = trial;
                    rows.push(row);
                    labels.push(label);
                } else if required {
                    panic!("required section vector dependent on the image");
                }
            };
            for (i, j) in pairs(v) {
                push(
                    &mut section_rows,
                    &mut labels,
                    &mut working,
                    unit(i, j, v),
                    SectionLabel::OmegaBlock { i, j },
                    true,
                );
            }
            for i in 0..v {
                push(
                    &mut section_rows,
                    &mut labels,
                    &mut working,
                    unit(i, v, v),
                    SectionLabel::MixedBlock { i },
                    true,
                );
            }
            // Complete inside Hom(V'∧V', V').
            for (i, j) in pairs(v) {
                for k in 0..v {
                    push(
                        &mut section_rows,
                        &mut labels,
                        &mut working,
                        unit(i, j, k),
                        SectionLabel::APart { i, j, k },
                        false,
                    );
                }
            }
        }
        Level::G2 => {
            let complement = orthogonal_complement(&image, &Mat::identity(total))?;
            for row in complement.basis_rows() {
                section_rows.push(row);
                labels.push(SectionLabel::Complement);
            }
        }
    }

    let section = Mat::from_rows(section_rows);
    let quotient = QuotientModel::new(image, section).map_err(|e| {
        Error::Inconsistent(format!("orbit-space section does not complete the image: {e}"))
    })?;
    if level == Level::G {
        debug_assert_eq!(quotient.dim(), n * (2 * n - 1));
    }
    Ok(OrbitSpaceModel {
        n,
        level,
        quotient,
        labels,
    })
}

fn extends_span(echelon: &mut Vec<Vec<Rat>>, mut v: Vec<Rat>) -> bool {
    use num_traits::Zero;
    for row in echelon.iter() {
        let lead = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("echelon rows are nonzero");
        if !v[lead].is_zero() {
            let factor = &v[lead] / &row[lead];
            for (slot, r) in v.iter_mut().zip(row) {
                let t = slot.clone() - &factor * r;
                *slot = t;
            }
        }
    }
    if v.iter().all(num_traits::Zero::is_zero) {
        false
    } else {
        // Keep a triangular shape: insert sorted by leading index.
        let lead = v.iter().position(|x| !num_traits::Zero::is_zero(x)).unwrap();
        let pos = echelon
            .iter()
            .position(|r| {
                r.iter().position(|x| !num_traits::Zero::is_zero(x)).unwrap() > lead
            })
            .unwrap_or(echelon.len());
        echelon.insert(pos, v);
        true
    }
}

/// Induced action of a group element on a class in the orbit space,
/// derived from the master convention `c(p·g) = σ(g)⁻¹c(p)`: the element
/// acts on classes through `σ(g⁻¹)` of any representative.
pub fn e_action(g: &GroupElement, model: &OrbitSpaceModel, class: &[Rat]) -> Result<Vec<Rat>> {
    let lifted = model.lift(class);
    let transformed = sigma_action_exact(&g.inverse().matrix(), &lifted)?;
    Ok(model.class_of(&transformed))
}
