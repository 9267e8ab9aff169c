//! Pointwise comparison of two structures under a candidate equivalence
//! map. Matching invariants are necessary-condition evidence for local
//! equivalence, not a proof; a mismatch disproves the candidate map.

use nalgebra::{DMatrix, DVector};

use super::canonical::canonical_connection;
use super::complement::ComplementModel;
use super::curvature::curvature;
use crate::reduction::{reduce, PipelineSettings, ReducedStructure, SubRiemannianSpec};
use crate::symexpr::Expr;
use crate::{Error, Result};

/// The invariants compared at a single point: the skew spectrum, its
/// normalized ratios, and the torsion and curvature components in the
/// canonical coframe.
#[derive(Clone, Debug)]
pub struct InvariantSample {
    pub lambdas: Vec<f64>,
    pub mu: Vec<f64>,
    pub torsion: DVector<f64>,
    pub curvature: DMatrix<f64>,
}

/// Computes the comparison invariants of a reduced structure at a point.
pub fn invariant_sample(
    red: &ReducedStructure,
    cmpl: &ComplementModel,
    point: &[f64],
    fd_step: f64,
) -> Result<InvariantSample> {
    let rec = red.record_at(point)?;
    let conn = canonical_connection(red, cmpl, point)?;
    let curv = curvature(red, cmpl, point, fd_step)?;
    Ok(InvariantSample {
        lambdas: rec.lambdas,
        mu: rec.mu,
        torsion: conn.torsion_coords,
        curvature: curv.components,
    })
}

/// One row of the comparison table.
#[derive(Clone, Debug)]
pub struct CompareRow {
    pub point: Vec<f64>,
    pub mapped: Vec<f64>,
    pub lambda_diff: f64,
    pub mu_diff: f64,
    pub torsion_diff: f64,
    pub curvature_diff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Consistent,
    Inconsistent {
        component: String,
        point: Vec<f64>,
        lhs: f64,
        rhs: f64,
    },
}

#[derive(Clone, Debug)]
pub struct EquivalenceVerdict {
    pub rows: Vec<CompareRow>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl EquivalenceVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, Verdict::Consistent)
    }
}

fn first_failure(
    names: &mut dyn Iterator<Item = (String, f64, f64)>,
    tol: f64,
    point: &[f64],
) -> (f64, Option<Verdict>) {
    let mut max = 0.0f64;
    let mut failure = None;
    for (name, lhs, rhs) in names {
        let d = (lhs - rhs).abs();
        max = max.max(d);
        if failure.is_none() && d > tol {
            failure = Some(Verdict::Inconsistent {
                component: name,
                point: point.to_vec(),
                lhs,
                rhs,
            });
        }
    }
    (max, failure)
}

/// Reduces both specifications, transports the sample points through the
/// candidate map, and compares the invariant samples componentwise. The
/// map must be immersive at every sample point.
pub fn compare_structures(
    spec_a: &SubRiemannianSpec,
    spec_b: &SubRiemannianSpec,
    map: &[Expr],
    points: &[Vec<f64>],
    settings: PipelineSettings,
    report_tol: f64,
) -> Result<EquivalenceVerdict> {
    if spec_a.dim() != spec_b.dim() || map.len() != spec_b.dim() {
        return Err(Error::invalid(
            "compared structures and map must share the chart dimension",
        ));
    }
    let dim = spec_a.dim();
    let red_a = reduce(spec_a, settings)?;
    let red_b = reduce(spec_b, settings)?;
    let cmpl = super::complement::invariant_complement(spec_a.n())?;

    let mut rows = Vec::with_capacity(points.len());
    let mut verdict = Verdict::Consistent;
    for point in points {
        // Immersivity of the candidate map at the point.
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for mu in 0..dim {
            for nu in 0..dim {
                jac[(mu, nu)] = map[mu].diff(nu).eval(point)?;
            }
        }
        if jac.determinant().abs() < settings.tol {
            return Err(Error::NotImmersive {
                point: point.clone(),
            });
        }
        let mapped: Result<Vec<f64>> = map.iter().map(|e| e.eval(point)).collect();
        let mapped = mapped?;

        let sa = invariant_sample(&red_a, &cmpl, point, settings.fd_step)?;
        let sb = invariant_sample(&red_b, &cmpl, &mapped, settings.fd_step)?;

        let lambda_iter = sa
            .lambdas
            .iter()
            .zip(&sb.lambdas)
            .enumerate()
            .map(|(i, (x, y))| (format!("lambda[{}]", i + 1), *x, *y));
        let mu_iter = sa
            .mu
            .iter()
            .zip(&sb.mu)
            .enumerate()
            .map(|(i, (x, y))| (format!("mu[{}]", i + 1), *x, *y));
        let torsion_iter = sa
            .torsion
            .iter()
            .zip(sb.torsion.iter())
            .enumerate()
            .map(|(i, (x, y))| (format!("torsion[{i}]"), *x, *y));
        let curv_iter = sa
            .curvature
            .iter()
            .zip(sb.curvature.iter())
            .enumerate()
            .map(|(i, (x, y))| (format!("curvature[{i}]"), *x, *y));

        let (lambda_diff, f1) = first_failure(&mut lambda_iter.into_iter(), report_tol, point);
        let (mu_diff, f2) = first_failure(&mut mu_iter.into_iter(), report_tol, point);
        let (torsion_diff, f3) = first_failure(&mut torsion_iter.into_iter(), report_tol, point);
        let (curvature_diff, f4) = first_failure(&mut curv_iter.into_iter(), report_tol, point);
        if verdict == Verdict::Consistent {
            for f in [f1, f2, f3, f4].into_iter().flatten() {
                verdict = f;
                break;
            }
        }
        rows.push(CompareRow {
            point: point.clone(),
            mapped,
            lambda_diff,
            mu_diff,
            torsion_diff,
            curvature_diff,
        });
    }
    Ok(EquivalenceVerdict {
        rows,
        verdict,
        tolerance: report_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::symexpr::parse;

    fn identity_map(chart: &crate::symexpr::Chart) -> Vec<Expr> {
        (0..chart.dim()).map(Expr::var).collect()
    }

    fn sample_points() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.4, 0.2]]
    }

    #[test]
    fn heisenberg_vs_itself_is_consistent() {
        let a = models::heisenberg();
        let v = compare_structures(
            &a,
            &a,
            &identity_map(a.chart()),
            &sample_points(),
            PipelineSettings::default(),
            1e-6,
        )
        .unwrap();
        assert!(v.is_consistent());
    }

    #[test]
    fn translated_chart_is_consistent() {
        // (x, y, z) ↦ (x+1, y, z−y) is a contactomorphism preserving the
        // standard model.
        let a = models::heisenberg();
        let chart = a.chart();
        let map = vec![
            parse("x + 1", chart).unwrap(),
            parse("y", chart).unwrap(),
            parse("z - y", chart).unwrap(),
        ];
        let v = compare_structures(
            &a,
            &a,
            &map,
            &sample_points(),
            PipelineSettings::default(),
            1e-6,
        )
        .unwrap();
        assert!(v.is_consistent());
    }

    #[test]
    fn rotated_presentation_is_consistent() {
        // The rotated presentation is the pullback under the rotation R, so
        // the inverse rotation transports sample points correctly.
        let a = models::heisenberg();
        let b = models::heisenberg_rotated();
        let chart = a.chart();
        let map = vec![
            parse("3/5*x + 4/5*y", chart).unwrap(),
            parse("-4/5*x + 3/5*y", chart).unwrap(),
            parse("z", chart).unwrap(),
        ];
        let v = compare_structures(
            &a,
            &b,
            &map,
            &sample_points(),
            PipelineSettings::default(),
            1e-6,
        )
        .unwrap();
        assert!(v.is_consistent());
    }

    #[test]
    fn scaled_metric_is_flagged_with_lambda_discrepancy() {
        let a = models::heisenberg();
        let b = models::heisenberg_scaled_metric(crate::rat(4));
        let v = compare_structures(
            &a,
            &b,
            &identity_map(a.chart()),
            &sample_points(),
            PipelineSettings::default(),
            1e-6,
        )
        .unwrap();
        match &v.verdict {
            Verdict::Inconsistent {
                component,
                lhs,
                rhs,
                ..
            } => {
                assert_eq!(component, "lambda[1]");
                assert!((lhs - 1.0).abs() < 1e-9);
                assert!((rhs - 0.25).abs() < 1e-9);
            }
            Verdict::Consistent => panic!("expected an inconsistency"),
        }
    }

    #[test]
    fn non_immersive_map_is_rejected() {
        let a = models::heisenberg();
        let chart = a.chart();
        let map = vec![
            parse("x", chart).unwrap(),
            parse("x", chart).unwrap(),
            parse("z", chart).unwrap(),
        ];
        assert!(matches!(
            compare_structures(
                &a,
                &a,
                &map,
                &sample_points(),
                PipelineSettings::default(),
                1e-6
            ),
            Err(Error::NotImmersive { .. })
        ));
    }
}
