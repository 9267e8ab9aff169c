//! Expression trees, smart constructors, differentiation and evaluation.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::linalg::rat_to_f64;
use crate::{Error, Rat, Result};

/// Symbolic expression over a coordinate chart. Variables are identified by
/// index into the chart; names live on [`super::Chart`].
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rat),
    Var(usize),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, i32),
    Sqrt(Arc<Expr>),
    Sin(Arc<Expr>),
    Cos(Arc<Expr>),
    Exp(Arc<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rat::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Rat::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(crate::rat(n))
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Rat> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    // --- smart constructors: constant folding plus 0/1 identities ---

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            _ if a.is_zero() => b,
            _ if b.is_zero() => a,
            _ => Expr::Add(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            _ if b.is_zero() => a,
            _ => Expr::Sub(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::sub(Expr::zero(), a)
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            _ if a.is_zero() || b.is_zero() => Expr::zero(),
            _ if a.is_one() => b,
            _ if b.is_one() => a,
            _ => Expr::Mul(Arc::new(a), Arc::new(b)),
        }
    }

    /// Division. Folds only constant/constant with a nonzero denominator and
    /// the `b = 1` identity; `0/b` is kept so that division-by-zero still
    /// surfaces at evaluation.
    pub fn div(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) if !y.is_zero() => Expr::Const(x / y),
            _ if b.is_one() => a,
            _ => Expr::Div(Arc::new(a), Arc::new(b)),
        }
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        match (&a, k) {
            (_, 1) => a,
            (Expr::Const(c), _) if k >= 0 => Expr::Const(rat_pow(c, k)),
            (Expr::Const(c), _) if !c.is_zero() => Expr::Const(rat_pow(c, k)),
            (_, 0) => Expr::one(),
            _ => Expr::Pow(Arc::new(a), k),
        }
    }

    pub fn sqrt(a: Expr) -> Expr {
        if let Expr::Const(c) = &a {
            if !c.is_negative() {
                if let Some(root) = rat_sqrt_exact(c) {
                    return Expr::Const(root);
                }
            }
        }
        Expr::Sqrt(Arc::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        if a.is_zero() {
            return Expr::zero();
        }
        Expr::Sin(Arc::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        if a.is_zero() {
            return Expr::one();
        }
        Expr::Cos(Arc::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        if a.is_zero() {
            return Expr::one();
        }
        Expr::Exp(Arc::new(a))
    }

    /// Symbolic partial derivative with respect to variable `var`,
    /// unsimplified beyond constant folding.
    pub fn diff(&self, var: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(i) => {
                if *i == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Add(a, b) => Expr::add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => Expr::sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(var), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => {
                let num = Expr::sub(
                    Expr::mul(a.diff(var), (**b).clone()),
                    Expr::mul((**a).clone(), b.diff(var)),
                );
                Expr::div(num, Expr::pow((**b).clone(), 2))
            }
            Expr::Pow(a, k) => Expr::mul(
                Expr::mul(Expr::int(*k as i64), Expr::pow((**a).clone(), k - 1)),
                a.diff(var),
            ),
            Expr::Sqrt(a) => Expr::div(
                a.diff(var),
                Expr::mul(Expr::int(2), Expr::sqrt((**a).clone())),
            ),
            Expr::Sin(a) => Expr::mul(Expr::cos((**a).clone()), a.diff(var)),
            Expr::Cos(a) => Expr::neg(Expr::mul(Expr::sin((**a).clone()), a.diff(var))),
            Expr::Exp(a) => Expr::mul(Expr::exp((**a).clone()), a.diff(var)),
        }
    }

    /// Numeric value at a chart point.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        let v = self.eval_inner(point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::eval(point, "non-finite result"))
        }
    }

    fn eval_inner(&self, point: &[f64]) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => rat_to_f64(c),
            Expr::Var(i) => {
                if *i >= point.len() {
                    return Err(Error::eval(point, format!("variable index {i} out of range")));
                }
                point[*i]
            }
            Expr::Add(a, b) => a.eval_inner(point)? + b.eval_inner(point)?,
            Expr::Sub(a, b) => a.eval_inner(point)? - b.eval_inner(point)?,
            Expr::Mul(a, b) => a.eval_inner(point)? * b.eval_inner(point)?,
            Expr::Div(a, b) => {
                let d = b.eval_inner(point)?;
                if d == 0.0 {
                    return Err(Error::eval(point, "division by zero"));
                }
                a.eval_inner(point)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval_inner(point)?;
                if *k < 0 && base == 0.0 {
                    return Err(Error::eval(point, "zero raised to a negative power"));
                }
                base.powi(*k)
            }
            Expr::Sqrt(a) => {
                let v = a.eval_inner(point)?;
                if v < 0.0 {
                    return Err(Error::eval(point, "square root of a negative value"));
                }
                v.sqrt()
            }
            Expr::Sin(a) => a.eval_inner(point)?.sin(),
            Expr::Cos(a) => a.eval_inner(point)?.cos(),
            Expr::Exp(a) => a.eval_inner(point)?.exp(),
        })
    }

    /// Substitutes `map[i]` for variable `i`. Used for pullbacks and for
    /// composing with coordinate maps.
    pub fn subst(&self, map: &[Expr]) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Var(i) => map[*i].clone(),
            Expr::Add(a, b) => Expr::add(a.subst(map), b.subst(map)),
            Expr::Sub(a, b) => Expr::sub(a.subst(map), b.subst(map)),
            Expr::Mul(a, b) => Expr::mul(a.subst(map), b.subst(map)),
            Expr::Div(a, b) => Expr::div(a.subst(map), b.subst(map)),
            Expr::Pow(a, k) => Expr::pow(a.subst(map), *k),
            Expr::Sqrt(a) => Expr::sqrt(a.subst(map)),
            Expr::Sin(a) => Expr::sin(a.subst(map)),
            Expr::Cos(a) => Expr::cos(a.subst(map)),
            Expr::Exp(a) => Expr::exp(a.subst(map)),
        }
    }

    /// Largest variable index plus one, zero for constant expressions.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
            Expr::Pow(a, _) | Expr::Sqrt(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.arity()
            }
        }
    }
}

fn rat_pow(c: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow::pow(c.clone(), k as usize)
    } else {
        num_traits::pow::pow(c.clone(), (-k) as usize)
            .recip()
    }
}

/// Exact square root of a nonnegative rational, when one exists.
fn rat_sqrt_exact(c: &Rat) -> Option<Rat> {
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Probabilistic zero testing
// ---------------------------------------------------------------------------

/// Deterministic probe points used to decide whether an expression is
/// (almost certainly) identically zero. Evaluation is the arbiter: an
/// expression that vanishes at every probe point is treated as zero.
pub struct Probe {
    points: Vec<Vec<f64>>,
}

impl Probe {
    pub fn new(dim: usize) -> Probe {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5ca7_a201);
        let mut points = Vec::new();
        for _ in 0..6 {
            points.push((0..dim).map(|_| rng.gen_range(0.13..1.07)).collect());
        }
        // A couple of sign patterns to dodge parity-symmetric zeros.
        for _ in 0..2 {
            points.push(
                (0..dim)
                    .map(|_| {
                        let v: f64 = rng.gen_range(0.13..1.07);
                        if rng.gen_bool(0.5) {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect(),
            );
        }
        Probe { points }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// True when the expression evaluates to (numerically) zero at every
    /// probe point where it can be evaluated. Structural zero short-circuits.
    pub fn probably_zero(&self, e: &Expr) -> bool {
        if e.is_zero() {
            return true;
        }
        if e.as_const().is_some() {
            return false;
        }
        let mut evaluated = 0;
        for p in &self.points {
            if let Ok(v) = e.eval(p) {
                evaluated += 1;
                if v.abs() > 1e-9 {
                    return false;
                }
            }
        }
        evaluated > 0
    }

    /// True when the expression is probably nonzero (negation of
    /// [`Probe::probably_zero`], with untestable expressions treated as
    /// nonzero so they stay eligible as pivots).
    pub fn probably_nonzero(&self, e: &Expr) -> bool {
        !self.probably_zero(e)
    }
}

// ---------------------------------------------------------------------------
// Printing (round-trips through the parser to an AST-equal tree)
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Pow(..) => 3,
        Expr::Const(c) => {
            if c.is_negative() || !c.denom().is_one() {
                0 // needs parens inside tighter contexts
            } else {
                4
            }
        }
        _ => 4,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if prec(e) < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "_{i}"),
            Expr::Add(a, b) => {
                fmt_child(f, a, 1)?;
                write!(f, " + ")?;
                fmt_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                if a.is_zero() {
                    write!(f, "-")?;
                    return fmt_child(f, b, 3);
                }
                fmt_child(f, a, 1)?;
                write!(f, " - ")?;
                fmt_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                fmt_child(f, a, 2)?;
                write!(f, "*")?;
                fmt_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                fmt_child(f, a, 2)?;
                write!(f, "/")?;
                fmt_child(f, b, 3)
            }
            Expr::Pow(a, k) => {
                fmt_child(f, a, 4)?;
                write!(f, "^{k}")
            }
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

/// Renders an expression with chart variable names instead of `_i` indices.
pub(crate) fn display_with_names(e: &Expr, names: &[String]) -> String {
    let raw = e.to_string();
    // Variable tokens `_i` never collide with identifiers produced by the
    // printer, so a textual pass is safe and keeps Display simple.
    let mut out = raw;
    for (i, name) in names.iter().enumerate().rev() {
        out = out.replace(&format!("_{i}"), name);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    #[test]
    fn diff_constant_is_zero() {
        assert!(Expr::int(5).diff(0).is_zero());
    }

    #[test]
    fn diff_product() {
        // d/dx (x*y) = y on chart (x, y).
        let e = Expr::mul(Expr::var(0), Expr::var(1));
        assert_eq!(e.diff(0), Expr::var(1));
    }

    #[test]
    fn diff_chain_rule_sqrt() {
        // d/dx (sqrt(p)*x²) = 2*sqrt(p)*x with p a non-square constant.
        let e = Expr::mul(Expr::sqrt(Expr::int(2)), Expr::pow(Expr::var(0), 2));
        let d = e.diff(0);
        let at = |x: f64| d.eval(&[x]).unwrap();
        assert!((at(3.0) - 2.0 * 2.0f64.sqrt() * 3.0).abs() < 1e-12);
    }

    #[test]
    fn eval_product() {
        let e = Expr::add(Expr::mul(Expr::var(0), Expr::var(1)), Expr::int(0));
        assert_eq!(e.eval(&[2.0, 3.0, 0.0]).unwrap(), 6.0);
    }

    #[test]
    fn eval_division_by_zero_errors() {
        let e = Expr::div(Expr::one(), Expr::var(0));
        assert!(matches!(e.eval(&[0.0, 1.0]), Err(Error::Eval { .. })));
    }

    #[test]
    fn eval_sqrt_negative_errors() {
        let e = Expr::sqrt(Expr::var(0));
        assert!(matches!(e.eval(&[-1.0]), Err(Error::Eval { .. })));
    }

    #[test]
    fn sqrt_folds_perfect_squares_only() {
        assert_eq!(Expr::sqrt(Expr::Const(ratio(9, 4))), Expr::Const(ratio(3, 2)));
        assert!(matches!(Expr::sqrt(Expr::int(2)), Expr::Sqrt(_)));
    }

    #[test]
    fn probe_detects_zero_and_nonzero() {
        let probe = Probe::new(2);
        // x*y - y*x == 0 structurally unsatisfied but numerically zero.
        let e = Expr::sub(
            Expr::mul(Expr::var(0), Expr::var(1)),
            Expr::mul(Expr::var(1), Expr::var(0)),
        );
        assert!(probe.probably_zero(&e));
        assert!(probe.probably_nonzero(&Expr::var(0)));
        assert!(!probe.probably_zero(&Expr::Const(rat(2))));
    }
}
