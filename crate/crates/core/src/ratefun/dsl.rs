//! Recursive-descent parser for the rate-function DSL:
//!
//! ```text
//! expr := atom | "sum(" expr "," expr ")" | "prod(" expr "," expr ")"
//! atom := "const:" posreal | "poly:" posreal | "logpow:" posreal | "exp:" posreal
//! ```
//!
//! Semantics: `const:v -> v`, `poly:a -> (1+s)^a`, `logpow:b -> (log(e+s))^b`,
//! `exp:a -> e^(a s)`. All parameters must be strictly positive.

use std::f64::consts::E;

use super::RateError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Const(f64),
    Poly(f64),
    LogPow(f64),
    Exp(f64),
    Sum(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub(crate) fn eval(&self, s: f64) -> f64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Poly(a) => (1.0 + s).powf(*a),
            Expr::LogPow(b) => (E + s).ln().powf(*b),
            Expr::Exp(a) => (a * s).exp(),
            Expr::Sum(x, y) => x.eval(s) + y.eval(s),
            Expr::Prod(x, y) => x.eval(s) * y.eval(s),
        }
    }

    pub(crate) fn eval_log(&self, s: f64) -> f64 {
        match self {
            Expr::Const(v) => v.ln(),
            Expr::Poly(a) => a * s.ln_1p(),
            Expr::LogPow(b) => b * (E + s).ln().ln(),
            Expr::Exp(a) => a * s,
            Expr::Sum(x, y) => log_add_exp(x.eval_log(s), y.eval_log(s)),
            Expr::Prod(x, y) => x.eval_log(s) + y.eval_log(s),
        }
    }

    /// Structural strictness: every atom except a constant grows strictly
    /// (parameters are positive), and a sum or product of positive
    /// non-decreasing factors is strict as soon as one operand is.
    pub(crate) fn strictly_increasing(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Poly(_) | Expr::LogPow(_) | Expr::Exp(_) => true,
            Expr::Sum(x, y) | Expr::Prod(x, y) => {
                x.strictly_increasing() || y.strictly_increasing()
            }
        }
    }
}

pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn take(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), RateError> {
        if self.take(token) {
            Ok(())
        } else {
            Err(RateError::Syntax {
                pos: self.pos,
                msg: format!("expected '{token}'"),
            })
        }
    }

    fn number(&mut self) -> Result<f64, RateError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        if end < bytes.len() && (bytes[end] == b'+' || bytes[end] == b'-') {
            end += 1;
        }
        while end < bytes.len()
            && (bytes[end].is_ascii_digit()
                || bytes[end] == b'.'
                || bytes[end] == b'e'
                || bytes[end] == b'E'
                || ((bytes[end] == b'+' || bytes[end] == b'-')
                    && (bytes[end - 1] == b'e' || bytes[end - 1] == b'E')))
        {
            end += 1;
        }
        if end == start {
            return Err(RateError::Syntax {
                pos: start,
                msg: "expected a number".into(),
            });
        }
        let text = &self.src[start..end];
        let value: f64 = text.parse().map_err(|_| RateError::Syntax {
            pos: start,
            msg: format!("malformed number '{text}'"),
        })?;
        self.pos = end;
        if !(value > 0.0) || !value.is_finite() {
            return Err(RateError::Semantic {
                pos: start,
                msg: format!("parameter {text} must be a positive finite real"),
            });
        }
        Ok(value)
    }

    fn expr(&mut self) -> Result<Expr, RateError> {
        self.skip_ws();
        if self.take("sum(") {
            let a = self.expr()?;
            self.expect(",")?;
            let b = self.expr()?;
            self.expect(")")?;
            return Ok(Expr::Sum(Box::new(a), Box::new(b)));
        }
        if self.take("prod(") {
            let a = self.expr()?;
            self.expect(",")?;
            let b = self.expr()?;
            self.expect(")")?;
            return Ok(Expr::Prod(Box::new(a), Box::new(b)));
        }
        for (tag, build) in [
            ("const:", Expr::Const as fn(f64) -> Expr),
            ("poly:", Expr::Poly as fn(f64) -> Expr),
            ("logpow:", Expr::LogPow as fn(f64) -> Expr),
            ("exp:", Expr::Exp as fn(f64) -> Expr),
        ] {
            if self.take(tag) {
                return Ok(build(self.number()?));
            }
        }
        Err(RateError::Syntax {
            pos: self.pos,
            msg: "expected an atom (const:/poly:/logpow:/exp:) or sum(/prod(".into(),
        })
    }
}

pub(crate) fn parse(src: &str) -> Result<Expr, RateError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(RateError::Syntax {
            pos: p.pos,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(e)
}
