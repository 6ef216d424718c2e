use num_complex::Complex64;

use super::{composite, finite, GaussRule, QuadSpec};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode};
use crate::geometry::{Path, Segment};

fn check_complex(f: &Expr) -> Result<()> {
    match f.mode() {
        Mode::Complex | Mode::Constant => Ok(()),
        m => Err(Error::Invalid(format!(
            "contour integrands are complex expressions, got {m}"
        ))),
    }
}

fn eval_at(f: &Expr, z: Complex64) -> Result<Complex64> {
    f.eval(&EvalEnv::complex(z)).map_err(Error::eval(z))
}

/// Left-endpoint sum `sum f(z_k) (z_{k+1} - z_k)` with `z_k = path(k/n)`.
pub fn riemann_sum_integral(f: &Expr, path: &Path, n: usize) -> Result<Complex64> {
    check_complex(f)?;
    if n == 0 {
        return Err(Error::Invalid("a Riemann sum needs n >= 1".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut z = path.point_at(0.0)?;
    for k in 0..n {
        let next = path.point_at((k + 1) as f64 / n as f64)?;
        acc += eval_at(f, z)? * (next - z);
        z = next;
    }
    Ok(acc)
}

/// `int f(seg(s)) seg'(s) ds` over one segment by the composite rule.
pub fn segment_integral_with(
    seg: &Segment,
    rule: &GaussRule,
    panels: usize,
    f: &mut impl FnMut(Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    composite(rule, panels, 0.0, 1.0, |s| {
        let z = seg.point(s)?;
        let v = finite(f(z)?, || z.to_string())?;
        Ok(v * seg.derivative(s)?)
    })
}

/// Contour integral of a closure, segment by segment.
pub fn contour_integral_with(
    path: &Path,
    q: &QuadSpec,
    mut f: impl FnMut(Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    q.validate()?;
    let rule = q.line_rule();
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in path.segments() {
        acc += segment_integral_with(seg, &rule, q.panels, &mut f)?;
    }
    Ok(acc)
}

/// `int_path f(z) dz` by composite Gauss-Legendre on every segment.
pub fn contour_integral(f: &Expr, path: &Path, q: &QuadSpec) -> Result<Complex64> {
    check_complex(f)?;
    contour_integral_with(path, q, |z| eval_at(f, z))
}

/// `int_path p dx + q dy` for planar `p`, `q`.
pub fn line_integral(p: &Expr, qf: &Expr, path: &Path, q: &QuadSpec) -> Result<Complex64> {
    for e in [p, qf] {
        if !matches!(e.mode(), Mode::Planar | Mode::Constant) {
            return Err(Error::Invalid(format!(
                "line-integral components are planar expressions, got {}",
                e.mode()
            )));
        }
    }
    q.validate()?;
    let rule = q.line_rule();
    let mut acc = Complex64::new(0.0, 0.0);
    for seg in path.segments() {
        acc += composite::<Error>(&rule, q.panels, 0.0, 1.0, |s| {
            let z = seg.point(s)?;
            let d = seg.derivative(s)?;
            let env = EvalEnv::planar(z.re, z.im);
            let a = p.eval(&env).map_err(Error::eval(z))?;
            let b = qf.eval(&env).map_err(Error::eval(z))?;
            Ok(a * d.re + b * d.im)
        })?;
    }
    Ok(acc)
}
