use std::fmt;

use super::{BinOp, Constant, Node};

// Binding strength, loosest first. Atoms are never parenthesized.
const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn prec(node: &Node) -> u8 {
    match node {
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => ADD,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => MUL,
        Node::Neg(_) => NEG,
        Node::Binary(BinOp::Pow, ..) => POW,
        Node::Num(_) | Node::Const(_) | Node::Var(_) | Node::Call(..) => ATOM,
    }
}

fn child(f: &mut fmt::Formatter<'_>, node: &Node, parens: bool) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_node(f, node)?;
        f.write_str(")")
    } else {
        write_node(f, node)
    }
}

/// Writes `node` with the minimal parentheses needed for the parser to
/// rebuild the same tree.
pub(super) fn write_node(f: &mut fmt::Formatter<'_>, node: &Node) -> fmt::Result {
    match node {
        Node::Num(v) => write!(f, "{v}"),
        Node::Const(Constant::I) => f.write_str("i"),
        Node::Const(Constant::Pi) => f.write_str("pi"),
        Node::Const(Constant::E) => f.write_str("e"),
        Node::Var(v) => f.write_str(v.name()),
        Node::Neg(a) => {
            f.write_str("-")?;
            child(f, a, prec(a) < NEG)
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a)?;
            f.write_str(")")
        }
        Node::Binary(op, a, b) => {
            let (sym, lhs_parens, rhs_parens) = match op {
                BinOp::Add => ("+", prec(a) < ADD, prec(b) <= ADD),
                BinOp::Sub => ("-", prec(a) < ADD, prec(b) <= ADD),
                BinOp::Mul => ("*", prec(a) < MUL, prec(b) <= MUL),
                BinOp::Div => ("/", prec(a) < MUL, prec(b) <= MUL),
                BinOp::Pow => ("^", prec(a) < ATOM, prec(b) < NEG),
            };
            child(f, a, lhs_parens)?;
            f.write_str(sym)?;
            child(f, b, rhs_parens)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Expr, Mode};

    #[test]
    fn prints_minimal_parentheses() {
        for (src, want) in [
            ("1+2*3", "1+2*3"),
            ("(1+2)*3", "(1+2)*3"),
            ("1-(2-3)", "1-(2-3)"),
            ("(1-2)-3", "1-2-3"),
            ("(-2)^2", "(-2)^2"),
            ("-2^2", "-2^2"),
            ("2^3^2", "2^3^2"),
            ("(2^3)^2", "(2^3)^2"),
            ("2^-z", "2^-z"),
            ("-(z*z)", "-(z*z)"),
            ("exp( 2 * z )", "exp(2*z)"),
        ] {
            let e = Expr::parse(src, Mode::Complex).unwrap();
            assert_eq!(e.to_string(), want);
        }
    }
}
