//! Structure group elements over the exact tower.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::model::{build_lie_algebra, embed_prime, Level, ModelSpace};
use crate::linalg::{pairs, Mat};
use crate::{rat, ratio, Error, Rat, Result};

/// Element of a structure group, stored by blocks `[[A, b], [0, c]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    n: usize,
    level: Level,
    a: Mat,
    b: Vec<Rat>,
    c: Rat,
}

impl GroupElement {
    pub fn new(n: usize, level: Level, a: Mat, b: Vec<Rat>, c: Rat) -> Result<GroupElement> {
        let d = 2 * n;
        if a.nrows() != d || a.ncols() != d || b.len() != d {
            return Err(Error::invalid("group element block dimensions"));
        }
        let g = GroupElement { n, level, a, b, c };
        g.validate()?;
        Ok(g)
    }

    pub fn identity(n: usize, level: Level) -> GroupElement {
        GroupElement {
            n,
            level,
            a: Mat::identity(2 * n),
            b: vec![Rat::zero(); 2 * n],
            c: Rat::one(),
        }
    }

    fn validate(&self) -> Result<()> {
        let d = 2 * self.n;
        if self.a.transpose().matmul(&self.a) != Mat::identity(d) {
            return Err(Error::invalid("rotation block is not orthogonal"));
        }
        match self.level {
            Level::G => {
                if self.c.is_zero() {
                    return Err(Error::invalid("scaling block must be nonzero"));
                }
            }
            Level::G1 | Level::G2 => {
                if !self.c.is_one() {
                    return Err(Error::invalid("scaling block must be one at this level"));
                }
                let j0 = ModelSpace::new(self.n).j0();
                if self.a.matmul(&j0) != j0.matmul(&self.a) {
                    return Err(Error::invalid("rotation block does not commute with J0"));
                }
                if self.level == Level::G2 && self.b.iter().any(|x| !x.is_zero()) {
                    return Err(Error::invalid("shear block must vanish at this level"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn rotation(&self) -> &Mat {
        &self.a
    }

    pub fn shear(&self) -> &[Rat] {
        &self.b
    }

    pub fn scaling(&self) -> &Rat {
        &self.c
    }

    /// The full `(2n+1)×(2n+1)` matrix.
    pub fn matrix(&self) -> Mat {
        let vdim = 2 * self.n + 1;
        let mut m = embed_prime(&self.a, vdim);
        for (k, bk) in self.b.iter().enumerate() {
            m.set(k, vdim - 1, bk.clone());
        }
        m.set(vdim - 1, vdim - 1, self.c.clone());
        m
    }

    pub fn matrix_f64(&self) -> DMatrix<f64> {
        self.matrix().to_f64()
    }

    /// Group inverse: `[[Aᵀ, −Aᵀb/c], [0, 1/c]]`.
    pub fn inverse(&self) -> GroupElement {
        let at = self.a.transpose();
        let mut b = at.mul_vec(&self.b);
        for x in &mut b {
            *x = -(x.clone() / &self.c);
        }
        GroupElement {
            n: self.n,
            level: self.level,
            a: at,
            b,
            c: self.c.recip(),
        }
    }
}

/// Cayley transform `(I − X/2)⁻¹(I + X/2)` of an antisymmetric rational
/// matrix: an exactly orthogonal rational rotation. When `X` commutes with
/// `J₀` so does the result.
pub fn cayley_orthogonal(x: &Mat) -> Mat {
    assert!(x.is_antisymmetric(), "cayley input must be antisymmetric");
    let n = x.nrows();
    let half = x.scale(&ratio(1, 2));
    let plus = Mat::identity(n).add(&half);
    let minus = Mat::identity(n).sub(&half);
    minus
        .inverse()
        .expect("I - X/2 is invertible for antisymmetric X")
        .matmul(&plus)
}

/// A random group element of the requested level with small rational
/// entries, built from a Cayley rotation so all invariants hold exactly.
pub fn random_group_element(n: usize, level: Level, rng: &mut impl Rng) -> GroupElement {
    let d = 2 * n;
    fn small(rng: &mut impl Rng, range: i64) -> Rat {
        ratio(rng.gen_range(-range..=range), rng.gen_range(1..=3))
    }
    let a = match level {
        Level::G => {
            let mut x = Mat::zeros(d, d);
            for (i, j) in pairs(d) {
                let v = small(rng, 2);
                x.set(i, j, v.clone());
                x.set(j, i, -v);
            }
            let mut a = cayley_orthogonal(&x);
            if rng.gen_bool(0.5) {
                // Cover the orientation-reversing component.
                let mut refl = Mat::identity(d);
                refl.set(0, 0, rat(-1));
                a = a.matmul(&refl);
            }
            a
        }
        Level::G1 | Level::G2 => {
            // Random element of the J₀-commutant inside the antisymmetric
            // matrices, then Cayley.
            let alg = build_lie_algebra(n, Level::G2);
            let coords: Vec<Rat> = (0..alg.dim()).map(|_| small(rng, 2)).collect();
            let full = alg.element(&coords);
            let x = Mat::from_fn(d, d, |r, c| full.at(r, c).clone());
            cayley_orthogonal(&x)
        }
    };
    let b = match level {
        Level::G | Level::G1 => (0..d).map(|_| small(rng, 2)).collect(),
        Level::G2 => vec![Rat::zero(); d],
    };
    let c = match level {
        Level::G => {
            let mut c = small(rng, 3);
            if c.is_zero() {
                c = rat(1);
            }
            if rng.gen_bool(0.3) {
                c = -c.abs();
            }
            c
        }
        _ => Rat::one(),
    };
    GroupElement::new(n, level, a, b, c).expect("construction satisfies level invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn cayley_produces_exact_rotations() {
        let x = Mat::from_rows(vec![
            vec![rat(0), ratio(2, 3)],
            vec![ratio(-2, 3), rat(0)],
        ]);
        let a = cayley_orthogonal(&x);
        assert_eq!(a.transpose().matmul(&a), Mat::identity(2));
    }

    #[test]
    fn random_elements_validate_and_invert() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for level in [Level::G, Level::G1, Level::G2] {
            for n in 1..=2 {
                for _ in 0..10 {
                    let g = random_group_element(n, level, &mut rng);
                    let inv = g.inverse();
                    let prod = g.matrix().matmul(&inv.matrix());
                    assert_eq!(prod, Mat::identity(2 * n + 1));
                }
            }
        }
    }
}
