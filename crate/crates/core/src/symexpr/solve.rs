//! Gaussian elimination over symbolic expressions.
//!
//! Pivot selection prefers exact nonzero constants and falls back to
//! expressions that are nonzero at deterministic probe points. The results
//! carry division nodes; evaluation at a chart point is the arbiter of
//! validity, so callers should treat evaluation errors downstream as the
//! usual degenerate-input signals.

use super::expr::{Expr, Probe};
use crate::{Error, Result};

/// Weight used to pick the cheapest admissible pivot.
fn size(e: &Expr) -> usize {
    match e {
        Expr::Const(_) | Expr::Var(_) => 1,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            1 + size(a) + size(b)
        }
        Expr::Pow(a, _) | Expr::Sqrt(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => 1 + size(a),
    }
}

fn pivot_score(e: &Expr, probe: &Probe) -> Option<usize> {
    if let Some(c) = e.as_const() {
        if num_traits::Zero::is_zero(c) {
            return None;
        }
        return Some(0);
    }
    if probe.probably_zero(e) {
        return None;
    }
    Some(size(e))
}

/// Solves the (possibly overdetermined, consistent) system `a · x = rhs`
/// symbolically. Requires a unique solution: every column must get a pivot.
pub fn solve_symbolic(a: &[Vec<Expr>], rhs: &[Expr], dim: usize) -> Result<Vec<Expr>> {
    let m = a.len();
    assert_eq!(rhs.len(), m);
    let n = if m == 0 { 0 } else { a[0].len() };
    let probe = Probe::new(dim);

    let mut rows: Vec<Vec<Expr>> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut used_rows = vec![false; m];

    for col in 0..n {
        // Choose the cheapest admissible pivot among unused rows.
        let mut best: Option<(usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if used_rows[r] {
                continue;
            }
            if let Some(score) = pivot_score(&row[col], &probe) {
                if best.map(|(s, _)| score < s).unwrap_or(true) {
                    best = Some((score, r));
                }
            }
        }
        let Some((_, prow)) = best else {
            return Err(Error::invalid(format!(
                "symbolic solve: no usable pivot for column {col} (system is degenerate)"
            )));
        };
        used_rows[prow] = true;
        pivot_of_col[col] = Some(prow);
        let pivot = rows[prow][col].clone();
        let pivot_row: Vec<Expr> = rows[prow].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == prow {
                continue;
            }
            let lead = row[col].clone();
            if lead.is_zero() {
                continue;
            }
            let factor = Expr::div(lead, pivot.clone());
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = Expr::sub(slot.clone(), Expr::mul(factor.clone(), pivot_row[c].clone()));
            }
        }
    }

    // Leftover rows must be (numerically) zero; otherwise inconsistent.
    for (r, row) in rows.iter().enumerate() {
        if used_rows[r] {
            continue;
        }
        if probe.probably_nonzero(&row[n]) {
            return Err(Error::invalid(
                "symbolic solve: inconsistent system (nonzero residual row)",
            ));
        }
    }

    let mut x = vec![Expr::zero(); n];
    for col in 0..n {
        let prow = pivot_of_col[col].unwrap();
        x[col] = Expr::div(rows[prow][n].clone(), rows[prow][col].clone());
    }
    Ok(x)
}

/// Symbolic matrix inverse via column-wise solves.
pub fn invert_symbolic(m: &[Vec<Expr>], dim: usize) -> Result<Vec<Vec<Expr>>> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut rhs = vec![Expr::zero(); n];
        rhs[j] = Expr::one();
        cols.push(solve_symbolic(m, &rhs, dim)?);
    }
    // cols[j] is the j-th column of the inverse.
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_constant_system() {
        // 2x + y = 3, x + y = 2.
        let a = vec![
            vec![Expr::int(2), Expr::one()],
            vec![Expr::one(), Expr::one()],
        ];
        let rhs = vec![Expr::int(3), Expr::int(2)];
        let x = solve_symbolic(&a, &rhs, 1).unwrap();
        assert_eq!(x[0].eval(&[0.0]).unwrap(), 1.0);
        assert_eq!(x[1].eval(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn solves_symbolic_triangular_system() {
        // On chart (x,): [[1, x], [0, 1]] · v = (x, 1) → v = (0, 1)... check:
        // v0 + x v1 = x, v1 = 1 → v0 = 0.
        let x = Expr::var(0);
        let a = vec![
            vec![Expr::one(), x.clone()],
            vec![Expr::zero(), Expr::one()],
        ];
        let rhs = vec![x, Expr::one()];
        let v = solve_symbolic(&a, &rhs, 1).unwrap();
        for t in [0.3, -0.8, 2.0] {
            assert!((v[0].eval(&[t]).unwrap()).abs() < 1e-14);
            assert!((v[1].eval(&[t]).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn overdetermined_consistent_system() {
        // x = 1 duplicated.
        let a = vec![vec![Expr::one()], vec![Expr::one()]];
        let rhs = vec![Expr::one(), Expr::one()];
        let x = solve_symbolic(&a, &rhs, 1).unwrap();
        assert_eq!(x[0].eval(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn inconsistent_system_errors() {
        let a = vec![vec![Expr::one()], vec![Expr::one()]];
        let rhs = vec![Expr::one(), Expr::int(2)];
        assert!(solve_symbolic(&a, &rhs, 1).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let x = Expr::var(0);
        let m = vec![
            vec![Expr::one(), x.clone(), Expr::zero()],
            vec![Expr::zero(), Expr::one(), Expr::zero()],
            vec![x.clone(), Expr::zero(), Expr::one()],
        ];
        let inv = invert_symbolic(&m, 1).unwrap();
        // m · inv = I numerically.
        for t in [0.5, -1.3] {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for k in 0..3 {
                        acc += m[i][k].eval(&[t]).unwrap() * inv[k][j].eval(&[t]).unwrap();
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((acc - expect).abs() < 1e-12, "entry ({i},{j}) at t={t}");
                }
            }
        }
    }
}
