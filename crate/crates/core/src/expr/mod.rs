//! Expressions in one complex variable or in two/three real variables.
//!
//! An [`Expr`] is a syntax tree tagged with the [`Mode`] it was parsed in.
//! The mode fixes which identifiers are variables: in [`Mode::Complex`] the
//! only variable is the complex `z`, while in [`Mode::Spatial`] the identifier
//! `z` is the third real coordinate. The imaginary unit `i` is available in
//! every mode, so real-mode expressions may still be complex valued.

mod diff;
mod eval;
mod parse;
mod print;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use diff::DiffError;
pub use eval::{EvalEnv, EvalError};
pub use parse::ParseError;

/// A variable name understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Z,
    X,
    Y,
    T,
    S,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::Z, Var::X, Var::Y, Var::T, Var::S];

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
            Var::S => "s",
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which variables an expression may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One complex variable `z`.
    Complex,
    /// Real coordinates `x`, `y`.
    Planar,
    /// Real coordinates `x`, `y`, `z`.
    Spatial,
    /// Real coordinates `x`, `z` of a meridian half-plane (fluid problems).
    Meridional,
    /// A single real parameter.
    Param(Var),
    /// No variables at all.
    Constant,
}

impl Mode {
    pub fn vars(self) -> &'static [Var] {
        match self {
            Mode::Complex => &[Var::Z],
            Mode::Planar => &[Var::X, Var::Y],
            Mode::Spatial => &[Var::X, Var::Y, Var::Z],
            Mode::Meridional => &[Var::X, Var::Z],
            Mode::Param(Var::Z) => &[Var::Z],
            Mode::Param(Var::X) => &[Var::X],
            Mode::Param(Var::Y) => &[Var::Y],
            Mode::Param(Var::T) => &[Var::T],
            Mode::Param(Var::S) => &[Var::S],
            Mode::Constant => &[],
        }
    }

    pub fn allows(self, v: Var) -> bool {
        self.vars().contains(&v)
    }

    /// True when every variable of the mode is real.
    pub fn is_real(self) -> bool {
        !matches!(self, Mode::Complex)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Complex => f.write_str("complex"),
            Mode::Planar => f.write_str("planar"),
            Mode::Spatial => f.write_str("spatial"),
            Mode::Meridional => f.write_str("meridional"),
            Mode::Param(v) => write!(f, "parameter {v}"),
            Mode::Constant => f.write_str("constant"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    I,
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Conj,
    Re,
    Im,
    Abs,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Sqrt,
        Func::Conj,
        Func::Re,
        Func::Im,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Conj => "conj",
            Func::Re => "re",
            Func::Im => "im",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Functions whose presence rules out complex differentiability.
    pub fn is_non_analytic(self) -> bool {
        matches!(self, Func::Conj | Func::Re | Func::Im | Func::Abs)
    }
}

/// A node of the syntax tree.
///
/// Numeric literals produced by the parser are never negative; negation is
/// always an explicit [`Node::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var(Var),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn num(v: f64) -> Node {
        if v < 0.0 {
            Node::Neg(Box::new(Node::Num(-v)))
        } else {
            Node::Num(v)
        }
    }

    pub fn binary(op: BinOp, l: Node, r: Node) -> Node {
        Node::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(func: Func, arg: Node) -> Node {
        Node::Call(func, Box::new(arg))
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Node::Num(_) | Node::Const(_) => false,
            Node::Var(v) => *v == var,
            Node::Neg(a) | Node::Call(_, a) => a.depends_on(var),
            Node::Binary(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    fn any(&self, pred: &impl Fn(&Node) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Node::Num(_) | Node::Const(_) | Node::Var(_) => false,
            Node::Neg(a) | Node::Call(_, a) => a.any(pred),
            Node::Binary(_, a, b) => a.any(pred) || b.any(pred),
        }
    }

    fn substitute(&self, var: Var, with: &Node) -> Node {
        match self {
            Node::Var(v) if *v == var => with.clone(),
            Node::Num(_) | Node::Const(_) | Node::Var(_) => self.clone(),
            Node::Neg(a) => Node::Neg(Box::new(a.substitute(var, with))),
            Node::Call(f, a) => Node::Call(*f, Box::new(a.substitute(var, with))),
            Node::Binary(op, a, b) => Node::Binary(
                *op,
                Box::new(a.substitute(var, with)),
                Box::new(b.substitute(var, with)),
            ),
        }
    }

    fn first_illegal_var(&self, mode: Mode) -> Option<Var> {
        match self {
            Node::Var(v) if !mode.allows(*v) => Some(*v),
            Node::Num(_) | Node::Const(_) | Node::Var(_) => None,
            Node::Neg(a) | Node::Call(_, a) => a.first_illegal_var(mode),
            Node::Binary(_, a, b) => a
                .first_illegal_var(mode)
                .or_else(|| b.first_illegal_var(mode)),
        }
    }
}

/// A parsed expression together with its variable mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    mode: Mode,
    root: Node,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("variable `{var}` is not allowed in {mode} mode")]
pub struct IllegalVariable {
    pub var: Var,
    pub mode: Mode,
}

impl Expr {
    pub fn parse(text: &str, mode: Mode) -> Result<Expr, ParseError> {
        parse::parse(text, mode).map(|root| Expr { mode, root })
    }

    /// Wraps a node, checking that it only mentions variables of `mode`.
    pub fn new(mode: Mode, root: Node) -> Result<Expr, IllegalVariable> {
        match root.first_illegal_var(mode) {
            Some(var) => Err(IllegalVariable { var, mode }),
            None => Ok(Expr { mode, root }),
        }
    }

    pub fn constant(v: f64, mode: Mode) -> Expr {
        Expr {
            mode,
            root: Node::num(v),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, env: &EvalEnv) -> Result<num_complex::Complex64, EvalError> {
        eval::eval(self, env)
    }

    /// Derivative with respect to `var`.
    pub fn diff(&self, var: Var) -> Result<Expr, DiffError> {
        diff::symbolic_diff(self, var)
    }

    /// True iff no `conj`, `re`, `im` or `abs` node occurs. This does not
    /// rule out poles.
    pub fn is_analytic_syntax(&self) -> bool {
        !self
            .root
            .any(&|n| matches!(n, Node::Call(f, _) if f.is_non_analytic()))
    }

    pub fn depends_on(&self, var: Var) -> bool {
        self.root.depends_on(var)
    }

    /// Rewrites a complex-mode expression in real coordinates by substituting
    /// `z = x + i*y`.
    pub fn to_planar(&self) -> Expr {
        self.complex_to(Mode::Planar, Var::Y)
    }

    /// Rewrites a complex-mode expression on the meridian plane by
    /// substituting `z = x + i*z`, the right-hand `z` being the real height.
    pub fn to_meridional(&self) -> Expr {
        self.complex_to(Mode::Meridional, Var::Z)
    }

    fn complex_to(&self, mode: Mode, second: Var) -> Expr {
        assert_eq!(self.mode, Mode::Complex, "expected a complex-mode expression");
        let w = Node::binary(
            BinOp::Add,
            Node::Var(Var::X),
            Node::binary(BinOp::Mul, Node::Const(Constant::I), Node::Var(second)),
        );
        Expr {
            mode,
            root: self.root.substitute(Var::Z, &w),
        }
    }

    /// Substitutes `var := with` and re-tags the result with `mode`.
    pub fn substitute(&self, var: Var, with: &Node, mode: Mode) -> Result<Expr, IllegalVariable> {
        Expr::new(mode, self.root.substitute(var, with))
    }

    /// Renames a variable and re-tags the result with `mode`.
    pub fn rename(&self, from: Var, to: Var, mode: Mode) -> Result<Expr, IllegalVariable> {
        self.substitute(from, &Node::Var(to), mode)
    }

    /// Re-tags the same tree with another mode.
    pub fn with_mode(&self, mode: Mode) -> Result<Expr, IllegalVariable> {
        Expr::new(mode, self.root.clone())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_node(f, &self.root)
    }
}

/// Parses `text` in `mode`.
pub fn parse(text: &str, mode: Mode) -> Result<Expr, ParseError> {
    Expr::parse(text, mode)
}

/// Derivative of `e` with respect to `var`.
pub fn symbolic_diff(e: &Expr, var: Var) -> Result<Expr, DiffError> {
    e.diff(var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_syntax_flags() {
        let p = |s| Expr::parse(s, Mode::Complex).unwrap();
        assert!(p("exp(z)/(z-1)").is_analytic_syntax());
        assert!(!p("conj(z)").is_analytic_syntax());
        assert!(!p("abs(z)^2").is_analytic_syntax());
        assert!(!p("conj(z)*z").is_analytic_syntax());
        assert!(p("1/z").is_analytic_syntax());
    }

    #[test]
    fn planar_substitution_matches_complex_eval() {
        let e = Expr::parse("exp(z)*z^2 - 1/(z-3)", Mode::Complex).unwrap();
        let p = e.to_planar();
        assert_eq!(p.mode(), Mode::Planar);
        let z = num_complex::Complex64::new(0.3, -0.7);
        let a = e.eval(&EvalEnv::complex(z)).unwrap();
        let b = p.eval(&EvalEnv::planar(z.re, z.im)).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn new_rejects_foreign_variables() {
        let e = Expr::parse("x*y", Mode::Planar).unwrap();
        assert!(e.with_mode(Mode::Complex).is_err());
        assert!(e.with_mode(Mode::Spatial).is_ok());
    }
}
