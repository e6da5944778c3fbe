//! One-variable closed-form expressions in `s`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 'pi' | 's' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | sqrt | abs | exp | ln
//! ```

mod diff;
mod parser;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Sqrt,
    Abs,
    Exp,
    Ln,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "sqrt" => UnaryOp::Sqrt,
            "abs" => UnaryOp::Abs,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> Option<f64> {
        let y = match self {
            UnaryOp::Neg => -x,
            UnaryOp::Sin => x.sin(),
            UnaryOp::Cos => x.cos(),
            UnaryOp::Tan => x.tan(),
            UnaryOp::Sqrt if x < 0.0 => return None,
            UnaryOp::Sqrt => x.sqrt(),
            UnaryOp::Abs => x.abs(),
            UnaryOp::Exp => x.exp(),
            UnaryOp::Ln if x <= 0.0 => return None,
            UnaryOp::Ln => x.ln(),
        };
        y.is_finite().then_some(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }

    fn apply(self, a: f64, b: f64) -> Option<f64> {
        let y = match self {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Div if b == 0.0 => return None,
            BinaryOp::Div => a / b,
            BinaryOp::Pow => pow(a, b)?,
        };
        y.is_finite().then_some(y)
    }
}

/// Integer exponents accept any base (except 0 to a negative power);
/// other exponents need a positive base (or zero base with positive exponent).
fn pow(base: f64, exponent: f64) -> Option<f64> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return None;
        }
        return Some(base.powi(exponent as i32));
    }
    if base > 0.0 || (base == 0.0 && exponent > 0.0) {
        Some(base.powf(exponent))
    } else {
        None
    }
}

/// Expression tree. Subtrees are shared, so cloning and differentiating are cheap.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var,
    Unary(UnaryOp, Arc<Expr>),
    Binary(BinaryOp, Arc<Expr>, Arc<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    /// Evaluate at `s`. Any non-finite intermediate is a domain error.
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            Expr::Num(x) => Ok(*x),
            Expr::Pi => Ok(std::f64::consts::PI),
            Expr::Var => Ok(s),
            Expr::Unary(op, a) => {
                let x = a.eval(s)?;
                op.apply(x).ok_or_else(|| self.domain_error(s))
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval(s)?;
                let y = b.eval(s)?;
                op.apply(x, y).ok_or_else(|| self.domain_error(s))
            }
        }
    }

    fn domain_error(&self, s: f64) -> Error {
        Error::Domain {
            subterm: self.to_string(),
            s,
        }
    }

    /// True when the tree does not mention `s`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => true,
            Expr::Var => false,
            Expr::Unary(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Expr::Num(x) => Some(*x),
            _ => None,
        }
    }

    /// Exact symbolic derivative with respect to `s`.
    pub fn differentiate(&self) -> Expr {
        diff::differentiate(self)
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::Var => 1,
            Expr::Unary(_, a) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    // Builders with constant folding and zero/one elimination.

    pub fn unary(op: UnaryOp, a: Expr) -> Expr {
        if let Expr::Num(x) = a {
            if let Some(y) = op.apply(x) {
                return Expr::Num(y);
            }
        }
        if op == UnaryOp::Neg {
            if let Expr::Unary(UnaryOp::Neg, inner) = &a {
                return (**inner).clone();
            }
        }
        Expr::Unary(op, Arc::new(a))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
            if let Some(z) = op.apply(*x, *y) {
                return Expr::Num(z);
            }
        }
        let is = |e: &Expr, v: f64| e.as_number() == Some(v);
        match op {
            BinaryOp::Add if is(&a, 0.0) => return b,
            BinaryOp::Add | BinaryOp::Sub if is(&b, 0.0) => return a,
            BinaryOp::Sub if is(&a, 0.0) => return Expr::neg(b),
            BinaryOp::Mul if is(&a, 0.0) || is(&b, 0.0) => return Expr::Num(0.0),
            BinaryOp::Mul if is(&a, 1.0) => return b,
            BinaryOp::Mul | BinaryOp::Div if is(&b, 1.0) => return a,
            BinaryOp::Mul if is(&a, -1.0) => return Expr::neg(b),
            BinaryOp::Mul if is(&b, -1.0) => return Expr::neg(a),
            BinaryOp::Div if is(&a, 0.0) => return Expr::Num(0.0),
            BinaryOp::Pow if is(&b, 1.0) => return a,
            BinaryOp::Pow if is(&b, 0.0) => return Expr::Num(1.0),
            _ => {}
        }
        Expr::Binary(op, Arc::new(a), Arc::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::unary(UnaryOp::Neg, a)
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::unary(UnaryOp::Sqrt, a)
    }

    pub fn abs(a: Expr) -> Expr {
        Expr::unary(UnaryOp::Abs, a)
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        Expr::binary(BinaryOp::Pow, a, Expr::Num(n as f64))
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Add, self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Sub, self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Mul, self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Div, self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::str::FromStr for Expr {
    type Err = crate::error::ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse(s)
    }
}

/// Prints a fully parenthesized form that [`parse`] reads back.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x < 0.0 || (*x == 0.0 && x.is_sign_negative()) => {
                write!(f, "(-{:?})", -x)
            }
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Pi => f.write_str("pi"),
            Expr::Var => f.write_str("s"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}
