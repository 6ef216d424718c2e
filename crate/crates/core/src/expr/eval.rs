use num_complex::Complex64;

use super::{BinOp, Constant, Expr, Func, Node, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("variable `{0}` is not bound")]
    Unbound(Var),
    #[error("non-finite result")]
    NonFinite,
}

/// Variable bindings. Real coordinates are bound as complex numbers with a
/// zero imaginary part.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalEnv {
    values: [Option<Complex64>; 5],
}

impl EvalEnv {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: Complex64) -> Self {
        self.values[var.index()] = Some(value);
        self
    }

    pub fn with_real(self, var: Var, value: f64) -> Self {
        self.with(var, Complex64::new(value, 0.0))
    }

    pub fn complex(z: Complex64) -> Self {
        Self::empty().with(Var::Z, z)
    }

    pub fn planar(x: f64, y: f64) -> Self {
        Self::empty().with_real(Var::X, x).with_real(Var::Y, y)
    }

    pub fn spatial(x: f64, y: f64, z: f64) -> Self {
        Self::planar(x, y).with_real(Var::Z, z)
    }

    pub fn meridional(x: f64, z: f64) -> Self {
        Self::empty().with_real(Var::X, x).with_real(Var::Z, z)
    }

    pub fn param(var: Var, t: f64) -> Self {
        Self::empty().with_real(var, t)
    }

    pub fn get(&self, var: Var) -> Option<Complex64> {
        self.values[var.index()]
    }
}

pub(super) fn eval(e: &Expr, env: &EvalEnv) -> Result<Complex64, EvalError> {
    let v = eval_node(&e.root, env)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

// Points on the negative real axis with a negative-zero imaginary part are
// moved to the upper side of the cut.
fn above_cut(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn ln(z: Complex64) -> Result<Complex64, EvalError> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(EvalError::LogOfZero);
    }
    Ok(above_cut(z).ln())
}

fn pow(base: Complex64, exp: Complex64) -> Result<Complex64, EvalError> {
    let zero = base.re == 0.0 && base.im == 0.0;
    if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= 1024.0 {
        let n = exp.re as i32;
        if n < 0 && zero {
            return Err(EvalError::DivisionByZero);
        }
        return Ok(base.powi(n));
    }
    if zero {
        return if exp.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(EvalError::DivisionByZero)
        };
    }
    Ok((exp * ln(base)?).exp())
}

fn eval_node(node: &Node, env: &EvalEnv) -> Result<Complex64, EvalError> {
    Ok(match node {
        Node::Num(v) => Complex64::new(*v, 0.0),
        Node::Const(Constant::I) => Complex64::new(0.0, 1.0),
        Node::Const(Constant::Pi) => Complex64::new(std::f64::consts::PI, 0.0),
        Node::Const(Constant::E) => Complex64::new(std::f64::consts::E, 0.0),
        Node::Var(v) => env.get(*v).ok_or(EvalError::Unbound(*v))?,
        Node::Neg(a) => -eval_node(a, env)?,
        Node::Binary(op, a, b) => {
            let a = eval_node(a, env)?;
            let b = eval_node(b, env)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.re == 0.0 && b.im == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    a / b
                }
                BinOp::Pow => pow(a, b)?,
            }
        }
        Node::Call(func, a) => {
            let a = eval_node(a, env)?;
            match func {
                Func::Exp => a.exp(),
                Func::Log => ln(a)?,
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Sqrt => above_cut(a).sqrt(),
                Func::Conj => a.conj(),
                Func::Re => Complex64::new(a.re, 0.0),
                Func::Im => Complex64::new(a.im, 0.0),
                Func::Abs => Complex64::new(a.norm(), 0.0),
            }
        }
    })
}
