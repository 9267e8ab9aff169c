//! Expression language for chart-coefficient functions.
//!
//! Expressions are immutable trees over rational constants and chart
//! variables, closed under `+ − × ÷`, integer powers, `sqrt`, `sin`, `cos`
//! and `exp`. Simplification is limited to constant folding and the 0/1
//! identities; numeric evaluation is the arbiter of equality. On top of the
//! scalar language, [`OneForm`] and [`TwoForm`] provide exterior calculus
//! over a coordinate chart.

mod expr;
mod forms;
mod parser;
mod solve;

pub use expr::{Expr, Probe};
pub use forms::{d_scalar, Chart, OneForm, TwoForm};
pub use parser::parse;
pub use solve::{invert_symbolic, solve_symbolic};
