//! The associated-metric identities and the pointwise existence search for
//! an associated contact form.

use nalgebra::DMatrix;

use super::metric::ContactMetricData;
use crate::reduction::{adapted_coframe, first_reduction, SubRiemannianSpec};
use crate::Result;

/// Violations of the three associated-metric identities at one point.
#[derive(Clone, Debug)]
pub struct AssociatedPointCheck {
    pub point: Vec<f64>,
    /// `g̃(ξ, X) = η(X)`
    pub reeb_pairing: f64,
    /// `g̃(X, φY) = dη(X, Y)`
    pub compatibility: f64,
    /// `φφX = −X + η(X)ξ`
    pub almost_complex: f64,
}

impl AssociatedPointCheck {
    pub fn max_violation(&self) -> f64 {
        self.reeb_pairing
            .max(self.compatibility)
            .max(self.almost_complex)
    }
}

/// Per-point verdict for a built contact metric.
#[derive(Clone, Debug)]
pub struct AssociatedVerdict {
    pub rows: Vec<AssociatedPointCheck>,
    pub associated: bool,
    pub tolerance: f64,
}

/// Evaluates the three identities on the coordinate frame at each point and
/// reports the maximal violation per identity.
pub fn check_associated(
    data: &ContactMetricData,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<AssociatedVerdict> {
    let dim = data.dim();
    let mut rows = Vec::with_capacity(points.len());
    let mut associated = true;
    for point in points {
        let g = data.metric_at(point)?;
        let xi = data.reeb_at(point)?;
        let eta = data.eta().eval(point)?;
        let phi = data.phi_at(point)?;
        let deta = data.deta_at(point)?;
        let reeb_pairing = (&g * &xi - &eta).abs().max();
        let compatibility = (&g * &phi - &deta).abs().max();
        let almost_complex = (&phi * &phi + DMatrix::<f64>::identity(dim, dim)
            - &xi * eta.transpose())
        .abs()
        .max();
        let row = AssociatedPointCheck {
            point: point.clone(),
            reeb_pairing,
            compatibility,
            almost_complex,
        };
        associated &= row.max_violation() < tol;
        rows.push(row);
    }
    Ok(AssociatedVerdict {
        rows,
        associated,
        tolerance: tol,
    })
}

/// Existence data for one sample point.
#[derive(Clone, Debug)]
pub struct ExistencePoint {
    pub point: Vec<f64>,
    /// The distinct values the square of the conformal factor would have to
    /// take (one per block of the skew spectrum).
    pub required_fsq: Vec<f64>,
    /// The factor when the requirements are consistent.
    pub f: Option<f64>,
}

/// Result of the pointwise search for an associated contact form `f·η`.
#[derive(Clone, Debug)]
pub struct AssociatedExistence {
    pub rows: Vec<ExistencePoint>,
    pub exists: bool,
    /// Obstruction certificate: the conflicting required squares at the
    /// first obstructed point.
    pub obstruction: Option<Vec<f64>>,
    pub tolerance: f64,
}

/// Searches for a constant-per-point conformal factor making the extended
/// metric associated. The restriction of the induced `(1,1)`-tensor to the
/// distribution squares to `−f²·λᵢ²` on the `i`-th block of the skew
/// spectrum, so the requirement is `f² = 1/λᵢ²` for every block: a factor
/// exists at the point exactly when all block scalars agree. In dimension
/// three there is a single block, so the search always succeeds and `f` is
/// the first-normalization scale `1/λ₁`.
pub fn search_associated_form(
    spec: &SubRiemannianSpec,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<AssociatedExistence> {
    let cf = adapted_coframe(spec)?;
    let mut rows = Vec::with_capacity(points.len());
    let mut exists = true;
    let mut obstruction = None;
    for point in points {
        let fr = first_reduction(&cf, point, tol)?;
        let mut required: Vec<f64> = fr.lambdas.iter().map(|l| 1.0 / (l * l)).collect();
        required.sort_by(|a, b| a.partial_cmp(b).unwrap());
        required.dedup_by(|a, b| (*a - *b).abs() < tol * (1.0 + a.abs()));
        let consistent = required.len() == 1;
        let f = if consistent {
            Some(1.0 / fr.lambdas[0])
        } else {
            None
        };
        if !consistent {
            exists = false;
            if obstruction.is_none() {
                obstruction = Some(required.clone());
            }
        }
        rows.push(ExistencePoint {
            point: point.clone(),
            required_fsq: required,
            f,
        });
    }
    Ok(AssociatedExistence {
        rows,
        exists,
        obstruction,
        tolerance: tol,
    })
}
