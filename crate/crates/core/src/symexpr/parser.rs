//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := rational | ident | fn '(' expr ')' | '(' expr ')'
//! ```
//!
//! Whitespace-insensitive; `^` binds tighter than unary minus. Rational
//! literals are unsigned integers or decimals and convert exactly. Errors
//! carry the byte offset of the offending token.

use num_traits::Zero;

use super::expr::Expr;
use super::forms::Chart;
use crate::{Error, Rat, Result};

const FUNCTIONS: [&str; 4] = ["sqrt", "sin", "cos", "exp"];

/// Parses `src` against the chart's variable names.
pub fn parse(src: &str, chart: &Chart) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        chart,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::add(lhs, rhs);
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::sub(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                lhs = Expr::mul(lhs, rhs);
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                if let Some(c) = rhs.as_const() {
                    if c.is_zero() {
                        return Err(self.err("division by the constant zero"));
                    }
                }
                lhs = Expr::div(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            let inner = self.factor()?;
            return Ok(Expr::neg(inner));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let k = self.integer()?;
            return Ok(Expr::pow(base, k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat(b'-');
        self.skip_ws();
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let value: i32 = text
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -value } else { value })
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let mut frac_digits = 0usize;
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_digits = self.pos - frac_start;
            if frac_digits == 0 {
                return Err(self.err("expected digits after decimal point"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let digits: String = text.chars().filter(|c| *c != '.').collect();
        let numer: num_bigint::BigInt = digits
            .parse()
            .map_err(|_| self.err("malformed number"))?;
        let denom = num_bigint::BigInt::from(10u32).pow(frac_digits as u32);
        Ok(Expr::Const(Rat::new(numer, denom)))
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if FUNCTIONS.contains(&name) {
            self.expect(b'(')?;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(match name {
                "sqrt" => Expr::sqrt(arg),
                "sin" => Expr::sin(arg),
                "cos" => Expr::cos(arg),
                "exp" => Expr::exp(arg),
                _ => unreachable!(),
            });
        }
        match self.chart.index_of(name) {
            Some(i) => Ok(Expr::var(i)),
            None => {
                self.pos = start;
                Err(self.err(format!("unknown identifier `{name}`")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn chart_xyz() -> Chart {
        Chart::new(vec!["x1".into(), "y1".into(), "z".into()]).unwrap()
    }

    #[test]
    fn parses_product_plus_constant() {
        let e = parse("x1*y1 + 2", &chart_xyz()).unwrap();
        assert_eq!(
            e,
            Expr::add(Expr::mul(Expr::var(0), Expr::var(1)), Expr::int(2))
        );
    }

    #[test]
    fn differentiating_parsed_sum() {
        let e = parse("z + x1*y1", &chart_xyz()).unwrap();
        assert_eq!(e.diff(0), Expr::var(1));
    }

    #[test]
    fn unknown_identifier_reports_offset() {
        let err = parse("x1 + w", &chart_xyz()).unwrap_err();
        match err {
            Error::Parse { offset, message } => {
                assert_eq!(offset, 5);
                assert!(message.contains('w'));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn syntax_error_reports_offset() {
        let err = parse("x1 + ", &chart_xyz()).unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 5, .. }));
    }

    #[test]
    fn decimals_are_exact_rationals() {
        let e = parse("0.25", &chart_xyz()).unwrap();
        assert_eq!(e, Expr::Const(ratio(1, 4)));
    }

    #[test]
    fn rational_literals_fold() {
        let e = parse("3/4", &chart_xyz()).unwrap();
        assert_eq!(e, Expr::Const(ratio(3, 4)));
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        let e = parse("-x1^2", &chart_xyz()).unwrap();
        assert_eq!(e, Expr::neg(Expr::pow(Expr::var(0), 2)));
        let v = e.eval(&[3.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, -9.0);
    }

    #[test]
    fn negative_exponents() {
        let e = parse("x1^-2", &chart_xyz()).unwrap();
        assert_eq!(e.eval(&[2.0, 0.0, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn functions_parse() {
        let e = parse("sqrt(1 + x1^2) * sin(y1)", &chart_xyz()).unwrap();
        let v = e.eval(&[1.0, 0.5, 0.0]).unwrap();
        assert!((v - (2.0f64).sqrt() * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse("x1 * y1+ 2", &chart_xyz()).unwrap();
        let b = parse("x1*y1+2", &chart_xyz()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn print_parse_roundtrip_on_samples() {
        let chart = chart_xyz();
        for src in [
            "x1*y1 + 2",
            "-x1^2",
            "1/2*x1",
            "sqrt(1 + x1^2)",
            "x1 - (y1 - z)",
            "x1/(y1*z)",
            "(x1 + y1)^3",
            "cos(x1)*exp(y1) - sin(z)^2",
        ] {
            let e = parse(src, &chart).unwrap();
            let printed = chart.render(&e);
            let reparsed = parse(&printed, &chart).unwrap();
            assert_eq!(e, reparsed, "src `{src}` printed `{printed}`");
        }
    }
}
