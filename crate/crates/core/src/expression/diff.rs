use super::{BinaryOp, Expr, UnaryOp};

/// Replace a constant subtree by its value when it evaluates cleanly.
fn fold(e: &Expr) -> Expr {
    if e.is_constant() {
        if let Ok(x) = e.eval(0.0) {
            return Expr::Num(x);
        }
    }
    e.clone()
}

pub(super) fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Pi => Expr::Num(0.0),
        Expr::Var => Expr::Num(1.0),
        Expr::Unary(op, a) => {
            let u = (**a).clone();
            let du = differentiate(a);
            if du.as_number() == Some(0.0) {
                return Expr::Num(0.0);
            }
            let outer = match op {
                UnaryOp::Neg => return Expr::neg(du),
                UnaryOp::Sin => Expr::unary(UnaryOp::Cos, u),
                UnaryOp::Cos => Expr::neg(Expr::unary(UnaryOp::Sin, u)),
                UnaryOp::Tan => Expr::Num(1.0) / Expr::powi(Expr::unary(UnaryOp::Cos, u), 2),
                UnaryOp::Sqrt => Expr::Num(1.0) / (Expr::Num(2.0) * Expr::sqrt(u)),
                // sign(u) = u / |u|, undefined where u = 0
                UnaryOp::Abs => u.clone() / Expr::abs(u),
                UnaryOp::Exp => e.clone(),
                UnaryOp::Ln => Expr::Num(1.0) / u,
            };
            outer * du
        }
        Expr::Binary(op, a, b) => {
            let (u, v) = ((**a).clone(), (**b).clone());
            match op {
                BinaryOp::Add => differentiate(a) + differentiate(b),
                BinaryOp::Sub => differentiate(a) - differentiate(b),
                BinaryOp::Mul => differentiate(a) * v + u * differentiate(b),
                BinaryOp::Div => {
                    let (du, dv) = (differentiate(a), differentiate(b));
                    if dv.as_number() == Some(0.0) {
                        du / v
                    } else {
                        (du * v.clone() - u * dv) / Expr::powi(v, 2)
                    }
                }
                BinaryOp::Pow => {
                    if v.is_constant() {
                        let exponent = fold(&v);
                        let reduced = exponent.clone() - Expr::Num(1.0);
                        exponent * Expr::binary(BinaryOp::Pow, u, reduced) * differentiate(a)
                    } else if u.is_constant() {
                        let log = fold(&Expr::unary(UnaryOp::Ln, u));
                        e.clone() * log * differentiate(b)
                    } else {
                        let du = differentiate(a);
                        let dv = differentiate(b);
                        e.clone() * (dv * Expr::unary(UnaryOp::Ln, u.clone()) + v * du / u)
                    }
                }
            }
        }
    }
}
