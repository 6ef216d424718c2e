//! Symbolic differentiation with light algebraic clean-up.

use super::{BinOp, Constant, Expr, Func, Mode, Node, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiffError {
    #[error("`{func}` is not differentiable in {mode} mode")]
    NotDifferentiable { func: &'static str, mode: Mode },
    #[error("cannot differentiate with respect to `{var}` in {mode} mode")]
    IllegalVariable { var: Var, mode: Mode },
}

pub(super) fn symbolic_diff(e: &Expr, var: Var) -> Result<Expr, DiffError> {
    if !e.mode.allows(var) {
        return Err(DiffError::IllegalVariable { var, mode: e.mode });
    }
    let root = d(&e.root, var, e.mode)?;
    Ok(Expr { mode: e.mode, root })
}

fn as_num(n: &Node) -> Option<f64> {
    match n {
        Node::Num(v) => Some(*v),
        Node::Neg(a) => match **a {
            Node::Num(v) => Some(-v),
            _ => None,
        },
        _ => None,
    }
}

fn is(n: &Node, v: f64) -> bool {
    as_num(n) == Some(v)
}

fn folded(v: f64) -> Option<Node> {
    v.is_finite().then(|| Node::num(v))
}

pub(crate) fn neg(a: Node) -> Node {
    if let Some(v) = as_num(&a) {
        return Node::num(-v);
    }
    match a {
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

pub(crate) fn add(a: Node, b: Node) -> Node {
    if is(&a, 0.0) {
        return b;
    }
    if is(&b, 0.0) {
        return a;
    }
    if let (Some(x), Some(y)) = (as_num(&a), as_num(&b)) {
        if let Some(n) = folded(x + y) {
            return n;
        }
    }
    if let Node::Neg(inner) = b {
        return Node::binary(BinOp::Sub, a, *inner);
    }
    Node::binary(BinOp::Add, a, b)
}

pub(crate) fn sub(a: Node, b: Node) -> Node {
    if is(&b, 0.0) {
        return a;
    }
    if is(&a, 0.0) {
        return neg(b);
    }
    if let (Some(x), Some(y)) = (as_num(&a), as_num(&b)) {
        if let Some(n) = folded(x - y) {
            return n;
        }
    }
    if let Node::Neg(inner) = b {
        return Node::binary(BinOp::Add, a, *inner);
    }
    Node::binary(BinOp::Sub, a, b)
}

pub(crate) fn mul(a: Node, b: Node) -> Node {
    if is(&a, 0.0) || is(&b, 0.0) {
        return Node::Num(0.0);
    }
    if is(&a, 1.0) {
        return b;
    }
    if is(&b, 1.0) {
        return a;
    }
    if is(&a, -1.0) {
        return neg(b);
    }
    if is(&b, -1.0) {
        return neg(a);
    }
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => {
            if let Some(n) = folded(x * y) {
                return n;
            }
        }
        // keep numeric factors in front
        (None, Some(_)) => return mul(b, a),
        _ => {}
    }
    if let (Node::Neg(x), _) = (&a, &b) {
        return neg(mul((**x).clone(), b));
    }
    if let (_, Node::Neg(y)) = (&a, &b) {
        return neg(mul(a, (**y).clone()));
    }
    Node::binary(BinOp::Mul, a, b)
}

pub(crate) fn div(a: Node, b: Node) -> Node {
    if is(&a, 0.0) {
        return Node::Num(0.0);
    }
    if is(&b, 1.0) {
        return a;
    }
    if let (Some(x), Some(y)) = (as_num(&a), as_num(&b)) {
        if y != 0.0 {
            if let Some(n) = folded(x / y) {
                return n;
            }
        }
    }
    Node::binary(BinOp::Div, a, b)
}

pub(crate) fn pow(a: Node, b: Node) -> Node {
    if is(&b, 0.0) {
        return Node::Num(1.0);
    }
    if is(&b, 1.0) {
        return a;
    }
    Node::binary(BinOp::Pow, a, b)
}

fn call(f: Func, a: Node) -> Node {
    if f == Func::Log && a == Node::Const(Constant::E) {
        return Node::Num(1.0);
    }
    Node::call(f, a)
}

fn d(node: &Node, var: Var, mode: Mode) -> Result<Node, DiffError> {
    Ok(match node {
        Node::Num(_) | Node::Const(_) => Node::Num(0.0),
        Node::Var(v) => Node::Num(if *v == var { 1.0 } else { 0.0 }),
        Node::Neg(a) => neg(d(a, var, mode)?),
        Node::Binary(op, a, b) => {
            let (a, b) = (&**a, &**b);
            match op {
                BinOp::Add => add(d(a, var, mode)?, d(b, var, mode)?),
                BinOp::Sub => sub(d(a, var, mode)?, d(b, var, mode)?),
                BinOp::Mul => add(
                    mul(d(a, var, mode)?, b.clone()),
                    mul(a.clone(), d(b, var, mode)?),
                ),
                BinOp::Div => div(
                    sub(
                        mul(d(a, var, mode)?, b.clone()),
                        mul(a.clone(), d(b, var, mode)?),
                    ),
                    pow(b.clone(), Node::Num(2.0)),
                ),
                BinOp::Pow => dpow(a, b, var, mode)?,
            }
        }
        Node::Call(func, a) => {
            let inner = &**a;
            match func {
                Func::Conj | Func::Re | Func::Im if mode.is_real() => {
                    let da = d(inner, var, mode)?;
                    if is(&da, 0.0) {
                        Node::Num(0.0)
                    } else {
                        Node::call(*func, da)
                    }
                }
                Func::Conj | Func::Re | Func::Im | Func::Abs => {
                    return Err(DiffError::NotDifferentiable {
                        func: func.name(),
                        mode,
                    })
                }
                Func::Exp => mul(d(inner, var, mode)?, call(Func::Exp, inner.clone())),
                Func::Log => div(d(inner, var, mode)?, inner.clone()),
                Func::Sin => mul(d(inner, var, mode)?, call(Func::Cos, inner.clone())),
                Func::Cos => neg(mul(d(inner, var, mode)?, call(Func::Sin, inner.clone()))),
                Func::Sqrt => div(
                    d(inner, var, mode)?,
                    mul(Node::Num(2.0), call(Func::Sqrt, inner.clone())),
                ),
            }
        }
    })
}

fn dpow(a: &Node, b: &Node, var: Var, mode: Mode) -> Result<Node, DiffError> {
    let da = d(a, var, mode)?;
    if !b.depends_on(var) {
        // b * a^(b-1) * a'
        let lowered = pow(a.clone(), sub(b.clone(), Node::Num(1.0)));
        return Ok(mul(mul(b.clone(), lowered), da));
    }
    let db = d(b, var, mode)?;
    let power = Node::binary(BinOp::Pow, a.clone(), b.clone());
    if !a.depends_on(var) {
        return Ok(mul(mul(db, power), call(Func::Log, a.clone())));
    }
    // a^b * (b' log a + b a' / a)
    let bracket = add(
        mul(db, call(Func::Log, a.clone())),
        div(mul(b.clone(), da), a.clone()),
    );
    Ok(mul(power, bracket))
}

#[cfg(test)]
mod tests {
    use super::super::{EvalEnv, Expr, Mode};
    use super::*;
    use num_complex::Complex64;

    fn diff_str(src: &str, mode: Mode, var: Var) -> String {
        Expr::parse(src, mode).unwrap().diff(var).unwrap().to_string()
    }

    #[test]
    fn textbook_rules() {
        assert_eq!(diff_str("z^3", Mode::Complex, Var::Z), "3*z^2");
        assert_eq!(diff_str("exp(2*z)", Mode::Complex, Var::Z), "2*exp(2*z)");
        assert_eq!(diff_str("x^2*y", Mode::Planar, Var::X), "2*x*y");
        assert_eq!(diff_str("x^2*y", Mode::Planar, Var::Y), "x^2");
        assert_eq!(diff_str("sin(z)", Mode::Complex, Var::Z), "cos(z)");
        assert_eq!(diff_str("cos(z)", Mode::Complex, Var::Z), "-sin(z)");
        assert_eq!(diff_str("log(z)", Mode::Complex, Var::Z), "1/z");
    }

    #[test]
    fn non_analytic_nodes_in_complex_mode() {
        for src in ["conj(z)", "re(z)*z", "im(z)", "abs(z)"] {
            let e = Expr::parse(src, Mode::Complex).unwrap();
            assert!(matches!(
                e.diff(Var::Z),
                Err(DiffError::NotDifferentiable { .. })
            ));
        }
    }

    #[test]
    fn conjugation_commutes_with_real_partials() {
        let e = Expr::parse("conj((x+i*y)^2)", Mode::Planar).unwrap();
        let dx = e.diff(Var::X).unwrap();
        // d/dx conj(w^2) = conj(2w) with w = x+iy
        let v = dx.eval(&EvalEnv::planar(0.5, 0.25)).unwrap();
        assert!((v - Complex64::new(1.0, -0.5)).norm() < 1e-15);
        let abs = Expr::parse("abs(x)", Mode::Planar).unwrap();
        assert!(abs.diff(Var::X).is_err());
    }

    #[test]
    fn variable_must_belong_to_mode() {
        let e = Expr::parse("x*y", Mode::Planar).unwrap();
        assert!(matches!(
            e.diff(Var::Z),
            Err(DiffError::IllegalVariable { .. })
        ));
    }

    #[test]
    fn variable_exponent() {
        let e = Expr::parse("z^z", Mode::Complex).unwrap();
        let de = e.diff(Var::Z).unwrap();
        let z = Complex64::new(1.3, 0.4);
        let want = z.powc(z) * (z.ln() + 1.0);
        let got = de.eval(&EvalEnv::complex(z)).unwrap();
        assert!((got - want).norm() < 1e-13);
        let e = Expr::parse("2^x", Mode::Planar).unwrap();
        let got = e.diff(Var::X).unwrap().eval(&EvalEnv::planar(1.0, 0.0)).unwrap();
        assert!((got.re - 2.0 * 2f64.ln()).abs() < 1e-14);
    }
}
