//! Built-in example structures used by tests and the command line.

use crate::reduction::{MetricData, SubRiemannianSpec};
use crate::symexpr::{parse, Chart, Expr, OneForm};
use crate::{rat, Rat};

fn chart(names: &[&str]) -> Chart {
    Chart::new(names.iter().map(|s| s.to_string()).collect()).expect("valid chart")
}

fn form(c: &Chart, coeffs: &[&str]) -> OneForm {
    OneForm::new(
        coeffs
            .iter()
            .map(|s| parse(s, c).expect("valid coefficient"))
            .collect(),
    )
}

fn vectors(c: &Chart, rows: &[&[&str]]) -> Vec<Vec<Expr>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse(s, c).expect("valid component")).collect())
        .collect()
}

fn const_grid(diag: &[Rat]) -> Vec<Vec<Expr>> {
    let d = diag.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Expr::Const(diag[i].clone())
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// The standard three-dimensional model: contact form `dz + x dy` with the
/// Euclidean metric on the frame `(∂x, ∂y − x∂z)`.
pub fn heisenberg() -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    let eta = form(&c, &["0", "x", "1"]);
    let metric = MetricData::Frame {
        vectors: vectors(&c, &[&["1", "0", "0"], &["0", "1", "-x"]]),
        gram: const_grid(&[rat(1), rat(1)]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// Same distribution and metric with the contact form scaled by a constant.
pub fn heisenberg_scaled_eta(s: Rat) -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    let base = form(&c, &["0", "x", "1"]);
    let eta = base.scale(&Expr::Const(s));
    let metric = MetricData::Frame {
        vectors: vectors(&c, &[&["1", "0", "0"], &["0", "1", "-x"]]),
        gram: const_grid(&[rat(1), rat(1)]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// Same distribution with the metric scaled by a constant.
pub fn heisenberg_scaled_metric(s: Rat) -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    let eta = form(&c, &["0", "x", "1"]);
    let metric = MetricData::Frame {
        vectors: vectors(&c, &[&["1", "0", "0"], &["0", "1", "-x"]]),
        gram: const_grid(&[s.clone(), s]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// A non-flat metric `dx² + (1+x²)dy²` on the standard contact form; its
/// first normalization rescales the top slot by a nonconstant factor.
pub fn heisenberg_nonflat() -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    let eta = form(&c, &["0", "x", "1"]);
    let w2 = parse("1 + x^2", &c).unwrap();
    let metric = MetricData::Frame {
        vectors: vectors(&c, &[&["1", "0", "0"], &["0", "1", "-x"]]),
        gram: vec![vec![Expr::one(), Expr::zero()], vec![Expr::zero(), w2]],
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// The standard model re-presented in rotated coordinates: the pullback of
/// [`heisenberg`] under the rotation `(x, y) ↦ (3x/5 − 4y/5, 4x/5 + 3y/5)`.
/// Locally equivalent to the standard model via that rotation.
pub fn heisenberg_rotated() -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    // u = 3/5·x − 4/5·y is the first rotated coordinate; the pulled-back
    // contact form is dz + u·d(4x/5 + 3y/5).
    let eta = form(
        &c,
        &["4/5*(3/5*x - 4/5*y)", "3/5*(3/5*x - 4/5*y)", "1"],
    );
    let metric = MetricData::Frame {
        vectors: vectors(
            &c,
            &[
                &["3/5", "-4/5", "0"],
                &["4/5", "3/5", "-(3/5*x - 4/5*y)"],
            ],
        ),
        gram: const_grid(&[rat(1), rat(1)]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// The five-dimensional diagonal family: contact form
/// `dz + x₁dy₁ + x₂dy₂` with metric `p dx₁² + q dy₁² + r dx₂² + s dy₂²`.
pub fn r5_example(p: Rat, q: Rat, r: Rat, s: Rat) -> SubRiemannianSpec {
    let c = chart(&["x1", "y1", "x2", "y2", "z"]);
    let eta = form(&c, &["0", "x1", "0", "x2", "1"]);
    let metric = MetricData::Frame {
        vectors: vectors(
            &c,
            &[
                &["1", "0", "0", "0", "0"],
                &["0", "1", "0", "0", "-x1"],
                &["0", "0", "1", "0", "0"],
                &["0", "0", "0", "1", "-x2"],
            ],
        ),
        gram: const_grid(&[p, q, r, s]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}

/// The five-dimensional example with unit coefficients.
pub fn r5_unit() -> SubRiemannianSpec {
    r5_example(rat(1), rat(1), rat(1), rat(1))
}

/// A non-contact input: `dz` on a three-dimensional chart.
pub fn non_contact() -> SubRiemannianSpec {
    let c = chart(&["x", "y", "z"]);
    let eta = form(&c, &["0", "0", "1"]);
    let metric = MetricData::Frame {
        vectors: vectors(&c, &[&["1", "0", "0"], &["0", "1", "0"]]),
        gram: const_grid(&[rat(1), rat(1)]),
    };
    SubRiemannianSpec::new(c, eta, metric).expect("valid spec")
}
