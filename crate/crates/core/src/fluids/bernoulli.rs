use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};
use crate::quad::{composite, QuadSpec};
use crate::theorems::{run, VerificationReport};

const SCAN: usize = 1024;

fn speed_expr(v: &Expr) -> Result<Expr> {
    match v.mode() {
        Mode::Param(Var::S) => Ok(v.clone()),
        Mode::Constant => Ok(v.with_mode(Mode::Param(Var::S))?),
        m => Err(Error::Invalid(format!("speed must be a function of s, got {m}"))),
    }
}

fn eval_s(e: &Expr, s: f64) -> Result<f64> {
    let v = e
        .eval(&EvalEnv::param(Var::S, s))
        .map_err(Error::eval(Complex64::new(s, 0.0)))?;
    if !v.re.is_finite() {
        return Err(Error::Singular(format!("non-finite speed at s = {s}")));
    }
    Ok(v.re)
}

/// First sampled `s` in `[0, s_max]` where the speed is not positive.
pub fn stagnation_point(v: &Expr, s_max: f64) -> Result<Option<f64>> {
    let v = speed_expr(v)?;
    for k in 0..=SCAN {
        let s = s_max * k as f64 / SCAN as f64;
        if eval_s(&v, s)? <= 0.0 {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Pressure drop along a streamline: `int_0^s -v v' ds` by quadrature
/// against `(v(0)^2 - v(s)^2) / 2` at `s = s_max`.
pub fn bernoulli_check(v: &Expr, s_max: f64, q: &QuadSpec, tol: f64) -> VerificationReport {
    let inputs = json!({"v": v.to_string(), "s_max": s_max, "quad": q});
    run("bernoulli_check", inputs, tol, |b| {
        q.validate()?;
        if !(s_max > 0.0 && s_max.is_finite()) {
            return Err(Error::Invalid(format!("s_max must be positive, got {s_max}")));
        }
        let v = speed_expr(v)?;
        if let Some(s) = stagnation_point(&v, s_max)? {
            return Err(Error::Singular(format!("stagnation: speed is not positive at s = {s}")));
        }
        let dv = v.diff(Var::S)?;
        let rule = q.line_rule();
        let work = composite::<Error>(&rule, q.panels, 0.0, s_max, |s| {
            let speed = eval_s(&v, s)?;
            if speed <= 0.0 {
                return Err(Error::Singular(format!("stagnation: speed is not positive at s = {s}")));
            }
            Ok(Complex64::new(-speed * eval_s(&dv, s)?, 0.0))
        })?
        .re;
        let (v0, v1) = (eval_s(&v, 0.0)?, eval_s(&v, s_max)?);
        let drop = (v0 * v0 - v1 * v1) / 2.0;
        b.sides(vec![work], vec![drop])
            .check("pressure drop", (work - drop).abs(), tol)
            .diag("speed_at_ends", [v0, v1]);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::Status;

    fn speed(s: &str) -> Expr {
        Expr::parse(s, Mode::Param(Var::S)).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let q = QuadSpec::default();
        let r = bernoulli_check(&speed("2.5"), 3.0, &q, 1e-12);
        assert!(r.is_pass() && r.left[0] == 0.0 && r.right[0] == 0.0);
        let r = bernoulli_check(&speed("1/(1+s)"), 1.0, &q, 1e-12);
        assert!(r.is_pass());
        assert!((r.left[0] - 0.375).abs() <= 1e-12 && (r.right[0] - 0.375).abs() <= 1e-12);
        // speed inversely proportional to the channel width 1 + s
        let r = bernoulli_check(&speed("2*1/(1+s)"), 1.0, &q, 1e-12);
        assert!((r.left[0] - 1.5).abs() <= 1e-12 && (r.right[0] - 1.5).abs() <= 1e-12);
    }

    #[test]
    fn smooth_speeds_are_exact_up_to_quadrature() {
        let q = QuadSpec::default();
        for v in ["exp(-s)", "2+sin(3*s)", "sqrt(1+s^2)", "1/(1+s^2)^2"] {
            let r = bernoulli_check(&speed(v), 2.0, &q, 1e-10);
            assert!(r.is_pass(), "{v}: {r:?}");
        }
    }

    #[test]
    fn stagnation_is_an_error() {
        let q = QuadSpec::default();
        let r = bernoulli_check(&speed("1-s"), 2.0, &q, 1e-10);
        assert_eq!(r.status, Status::Error);
        assert!(r.diagnostic("error").unwrap().as_str().unwrap().contains("stagnation"));
        assert_eq!(stagnation_point(&speed("1-s"), 2.0).unwrap(), Some(1.0));
    }
}
