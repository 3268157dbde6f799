//! A small arithmetic expression language for fields and warp functions.
//!
//! Variables: `x1..xn` (coordinates), `r` (`|x|`, or the radial coordinate
//! of a radial expression), `theta` (polar angle in the `x1,x2` plane),
//! `t` (conformal radial coordinate). Constants: `pi`, `e`.
//! Functions: `sin cos tan cot sinh cosh tanh coth exp ln log sqrt atan abs`
//! and two-argument `atan2(y, x)`, `pow(a, b)`. Operators: `+ - * / ^`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::RadialField;
use crate::jets::{FieldFn, Jet1, Scalar, ScalarField};

#[derive(Clone, Debug, PartialEq)]
pub enum Var {
    X(usize),
    R,
    Theta,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Cosh,
    Tanh,
    Coth,
    Exp,
    Ln,
    Sqrt,
    Atan,
    Abs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Atan2(Box<Expr>, Box<Expr>),
}

/// `atan2(y, x)` with jet derivatives taken from whichever of `atan(y/x)`
/// or `-atan(x/y)` is well conditioned.
pub fn atan2<S: Scalar>(y: S, x: S) -> S {
    let v = y.value().atan2(x.value());
    let base = if x.value().abs() >= y.value().abs() {
        (y / x).atan()
    } else {
        -(x / y).atan()
    };
    base + (v - base.value())
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval<S: Scalar>(&self, var: &dyn Fn(&Var) -> S) -> S {
        match self {
            Expr::Num(v) => S::constant(*v),
            Expr::Var(v) => var(v),
            Expr::Neg(a) => -a.eval(var),
            Expr::Add(a, b) => a.eval(var) + b.eval(var),
            Expr::Sub(a, b) => a.eval(var) - b.eval(var),
            Expr::Mul(a, b) => a.eval(var) * b.eval(var),
            Expr::Div(a, b) => a.eval(var) / b.eval(var),
            Expr::Pow(a, b) => {
                let base = a.eval(var);
                match b.constant_value() {
                    Some(p) if p.fract() == 0.0 && p.abs() <= 64.0 => base.powi(p as i32),
                    Some(p) => base.powf(p),
                    None => (b.eval(var) * base.ln()).exp(),
                }
            }
            Expr::Call(f, a) => {
                let x = a.eval(var);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Cot => x.cos() / x.sin(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Coth => x.cosh() / x.sinh(),
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Atan => x.atan(),
                    Func::Abs => x.abs(),
                }
            }
            Expr::Atan2(y, x) => atan2(y.eval(var), x.eval(var)),
        }
    }

    /// Value of a variable-free subtree.
    pub fn constant_value(&self) -> Option<f64> {
        if self.uses(&|_| true) {
            None
        } else {
            Some(self.eval::<f64>(&|_| f64::NAN))
        }
    }

    fn uses(&self, pred: &dyn Fn(&Var) -> bool) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => pred(v),
            Expr::Neg(a) | Expr::Call(_, a) => a.uses(pred),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b)
            | Expr::Atan2(a, b) => a.uses(pred) || b.uses(pred),
        }
    }

    /// Largest coordinate index `i` appearing as `x{i}`.
    pub fn max_coordinate(&self) -> usize {
        let mut best = 0;
        self.visit_vars(&mut |v| {
            if let Var::X(i) = v {
                best = best.max(*i);
            }
        });
        best
    }

    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(v),
            Expr::Neg(a) | Expr::Call(_, a) => a.visit_vars(f),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b)
            | Expr::Atan2(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Interpret as a field on `R^dim`; `r = |x|`, `theta = atan2(x2, x1)`.
    pub fn to_field(&self, dim: usize) -> Result<ScalarField> {
        let mut bad = None;
        self.visit_vars(&mut |v| match v {
            Var::X(i) if *i == 0 || *i > dim => bad = Some(format!("x{i} out of range for R^{dim}")),
            Var::T => bad = Some("variable t is only valid in radial expressions".into()),
            Var::Theta if dim < 2 => bad = Some("theta needs dimension >= 2".into()),
            _ => {}
        });
        if let Some(msg) = bad {
            return Err(Error::InvalidArgument(msg));
        }
        Ok(ScalarField::new(dim, ExprField(Arc::new(self.clone()))).with_label(self.to_string()))
    }

    /// Interpret as a function of the single radial variable `r` (or `t`).
    pub fn to_radial(&self) -> Result<RadialField> {
        if self.uses(&|v| matches!(v, Var::X(_) | Var::Theta)) {
            return Err(Error::InvalidArgument(
                "radial expressions may only use r or t".into(),
            ));
        }
        let e = self.clone();
        Ok(RadialField::from_jet_fn(move |r: Jet1| e.eval(&|_| r)).with_label(self.to_string()))
    }
}

struct ExprField(Arc<Expr>);

impl FieldFn for ExprField {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let r = x.iter().fold(S::constant(0.0), |a, &v| a + v * v).sqrt();
        let lookup = |v: &Var| match v {
            Var::X(i) => x[i - 1],
            Var::R => r,
            Var::Theta => atan2(x[1], x[0]),
            Var::T => S::constant(f64::NAN),
        };
        self.0.eval(&lookup)
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(Var::X(i)) => write!(f, "x{i}"),
            Expr::Var(Var::R) => write!(f, "r"),
            Expr::Var(Var::Theta) => write!(f, "theta"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Pow(a, b) => write!(f, "({a})^({b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func_name(*func)),
            Expr::Atan2(y, x) => write!(f, "atan2({y}, {x})"),
        }
    }
}

fn func_name(f: Func) -> &'static str {
    match f {
        Func::Sin => "sin",
        Func::Cos => "cos",
        Func::Tan => "tan",
        Func::Cot => "cot",
        Func::Sinh => "sinh",
        Func::Cosh => "cosh",
        Func::Tanh => "tanh",
        Func::Coth => "coth",
        Func::Exp => "exp",
        Func::Ln => "ln",
        Func::Sqrt => "sqrt",
        Func::Atan => "atan",
        Func::Abs => "abs",
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| Error::Parse {
                pos: start,
                msg: format!("bad number '{text}'"),
            })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let first = self.expr()?;
            let second = if self.eat(b',') { Some(self.expr()?) } else { None };
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            let one = |f: Func, second: Option<Expr>| -> Result<Expr> {
                if second.is_some() {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("{name} takes one argument"),
                    });
                }
                Ok(Expr::Call(f, Box::new(first.clone())))
            };
            return match name {
                "sin" => one(Func::Sin, second),
                "cos" => one(Func::Cos, second),
                "tan" => one(Func::Tan, second),
                "cot" => one(Func::Cot, second),
                "sinh" => one(Func::Sinh, second),
                "cosh" => one(Func::Cosh, second),
                "tanh" => one(Func::Tanh, second),
                "coth" => one(Func::Coth, second),
                "exp" => one(Func::Exp, second),
                "ln" | "log" => one(Func::Ln, second),
                "sqrt" => one(Func::Sqrt, second),
                "atan" | "arctan" => one(Func::Atan, second),
                "abs" => one(Func::Abs, second),
                "atan2" | "pow" => match second {
                    Some(b) if name == "atan2" => Ok(Expr::Atan2(Box::new(first), Box::new(b))),
                    Some(b) => Ok(Expr::Pow(Box::new(first), Box::new(b))),
                    None => Err(Error::Parse {
                        pos: start,
                        msg: format!("{name} takes two arguments"),
                    }),
                },
                _ => Err(Error::Parse {
                    pos: start,
                    msg: format!("unknown function '{name}'"),
                }),
            };
        }
        match name {
            "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            "e" => Ok(Expr::Num(std::f64::consts::E)),
            "r" => Ok(Expr::Var(Var::R)),
            "t" => Ok(Expr::Var(Var::T)),
            "theta" => Ok(Expr::Var(Var::Theta)),
            _ => {
                if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if idx >= 1 {
                        return Ok(Expr::Var(Var::X(idx)));
                    }
                }
                Err(Error::Parse {
                    pos: start,
                    msg: format!("unknown identifier '{name}'"),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{euclidean_laplacian, finite_diff};
    use approx::assert_relative_eq;

    #[test]
    fn precedence_and_power() {
        let e = Expr::parse("1 + 2*3^2 - -4/2").unwrap();
        assert_eq!(e.constant_value(), Some(21.0));
        let e = Expr::parse("2^3^2").unwrap();
        assert_eq!(e.constant_value(), Some(512.0));
        let e = Expr::parse("-2^2").unwrap();
        assert_eq!(e.constant_value(), Some(-4.0));
        let e = Expr::parse("1.5e-1 * 2E1").unwrap();
        assert_relative_eq!(e.constant_value().unwrap(), 3.0);
    }

    #[test]
    fn field_evaluation() {
        let f = Expr::parse("ln(1-x3)").unwrap().to_field(3).unwrap();
        assert_relative_eq!(f.eval(&[0.0, 0.6, -0.8]), 1.8f64.ln());
        let g = Expr::parse("r^2 * cos(2*theta)").unwrap().to_field(2).unwrap();
        let x = [0.3, -1.1];
        assert_relative_eq!(g.eval(&x), x[0] * x[0] - x[1] * x[1], epsilon = 1e-14);
        assert!(euclidean_laplacian(&g, &x).unwrap().abs() < 1e-12);
    }

    #[test]
    fn errors_are_reported() {
        assert!(matches!(Expr::parse("sin(x1"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("foo(1)"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("1 +"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("x0"), Err(Error::Parse { .. })));
        assert!(Expr::parse("x4").unwrap().to_field(3).is_err());
        assert!(Expr::parse("x1 + r").unwrap().to_radial().is_err());
    }

    #[test]
    fn atan2_jets_match_finite_differences() {
        let f = Expr::parse("theta").unwrap().to_field(2).unwrap();
        for x in [[0.3, 1.7], [-1.2, 0.4], [-0.5, -0.6]] {
            let fd = finite_diff::laplacian(|y| y[1].atan2(y[0]), &x, 0.05);
            let lap = euclidean_laplacian(&f, &x).unwrap();
            assert!(lap.abs() < 1e-12 && fd.abs() < 1e-6);
            assert_relative_eq!(f.eval(&x), x[1].atan2(x[0]));
        }
    }
}
