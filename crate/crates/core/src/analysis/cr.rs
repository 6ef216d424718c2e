use serde::{Deserialize, Serialize};

use super::{GridSampling, Partials, ResidualField};
use crate::error::{Error, Result};
use crate::expr::{Expr, Mode, Var};
use crate::geometry::Path;
use crate::quad::{line_integral, QuadSpec};

/// `f(z)` rewritten in the real coordinates `x`, `y`.
pub(crate) fn planar_of(f: &Expr) -> Result<Expr> {
    match f.mode() {
        Mode::Complex => Ok(f.to_planar()),
        Mode::Constant => Ok(f.with_mode(Mode::Planar)?),
        m => Err(Error::Invalid(format!(
            "expected a complex expression, got {m}"
        ))),
    }
}

fn planar_only(e: &Expr, role: &str) -> Result<()> {
    match e.mode() {
        Mode::Planar | Mode::Constant => Ok(()),
        m => Err(Error::Invalid(format!("{role} must be planar, got {m}"))),
    }
}

fn as_planar(e: &Expr) -> Result<Expr> {
    Ok(e.with_mode(Mode::Planar)?)
}

/// `(u_x - v_y, u_y + v_x)` for `f = u + i v` over the grid. `u` and `v` are
/// the real and imaginary parts of `f(x + i y)`.
pub fn cr_residual(f: &Expr, grid: &GridSampling) -> Result<(ResidualField, ResidualField)> {
    let fp = Partials::new(&planar_of(f)?, Var::X, Var::Y);
    let points = grid.points()?;
    let (mut r1, mut r2) = (Vec::with_capacity(points.len()), Vec::with_capacity(points.len()));
    for p in &points {
        let [fx, fy] = fp.grad(*p)?;
        r1.push(fx.re - fy.im);
        r2.push(fy.re + fx.im);
    }
    Ok((
        ResidualField::new(points.clone(), r1),
        ResidualField::new(points, r2),
    ))
}

/// Cauchy-Riemann residuals for an explicit pair of planar components.
pub fn cr_residual_pair(
    u: &Expr,
    v: &Expr,
    grid: &GridSampling,
) -> Result<(ResidualField, ResidualField)> {
    planar_only(u, "u")?;
    planar_only(v, "v")?;
    let du = Partials::new(&as_planar(u)?, Var::X, Var::Y);
    let dv = Partials::new(&as_planar(v)?, Var::X, Var::Y);
    let points = grid.points()?;
    let (mut r1, mut r2) = (Vec::with_capacity(points.len()), Vec::with_capacity(points.len()));
    for p in &points {
        let [ux, uy] = du.grad(*p)?;
        let [vx, vy] = dv.grad(*p)?;
        r1.push(ux.re - vy.re);
        r2.push(uy.re + vx.re);
    }
    Ok((
        ResidualField::new(points.clone(), r1),
        ResidualField::new(points, r2),
    ))
}

/// `P_y - Q_x` over the grid: zero wherever `P dx + Q dy` is closed.
pub fn exactness_residual(p: &Expr, q: &Expr, grid: &GridSampling) -> Result<ResidualField> {
    planar_only(p, "P")?;
    planar_only(q, "Q")?;
    let dp = Partials::new(&as_planar(p)?, Var::X, Var::Y);
    let dq = Partials::new(&as_planar(q)?, Var::X, Var::Y);
    let points = grid.points()?;
    let mut r = Vec::with_capacity(points.len());
    for pt in &points {
        r.push((dp.grad(*pt)?[1] - dq.grad(*pt)?[0]).re);
    }
    Ok(ResidualField::new(points, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactnessVerdict {
    /// Closed along the loop yet with a nonzero circulation.
    NonExactDespiteClosedness,
    /// Closed and circulation-free.
    ExactConsistent,
    /// The cross-derivative condition itself fails.
    NotClosed,
}

impl std::fmt::Display for ExactnessVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExactnessVerdict::NonExactDespiteClosedness => "non-exact despite closedness",
            ExactnessVerdict::ExactConsistent => "exact-consistent",
            ExactnessVerdict::NotClosed => "not closed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopExactness {
    /// Largest `|P_y - Q_x|` sampled along the loop.
    pub clairaut_max: f64,
    /// `[re, im]` of the loop integral of `P dx + Q dy`.
    pub loop_integral: [f64; 2],
    pub verdict: ExactnessVerdict,
}

/// Compares the cross-derivative condition along `lp` with the circulation
/// of `P dx + Q dy` around it.
pub fn loop_exactness_test(
    p: &Expr,
    q: &Expr,
    lp: &Path,
    quad: &QuadSpec,
    tol: f64,
) -> Result<LoopExactness> {
    planar_only(p, "P")?;
    planar_only(q, "Q")?;
    if !lp.is_closed() {
        return Err(Error::Geometry("exactness loop is not closed".into()));
    }
    let (pp, qp) = (as_planar(p)?, as_planar(q)?);
    let dp = Partials::new(&pp, Var::X, Var::Y);
    let dq = Partials::new(&qp, Var::X, Var::Y);
    const SAMPLES: usize = 720;
    let mut clairaut_max = 0.0f64;
    for k in 0..SAMPLES {
        let z = lp.point_at(k as f64 / SAMPLES as f64)?;
        let pt = [z.re, z.im];
        clairaut_max = clairaut_max.max((dp.grad(pt)?[1] - dq.grad(pt)?[0]).norm());
    }
    let circulation = line_integral(&pp, &qp, lp, quad)?;
    let verdict = if clairaut_max > tol {
        ExactnessVerdict::NotClosed
    } else if circulation.norm() > tol {
        ExactnessVerdict::NonExactDespiteClosedness
    } else {
        ExactnessVerdict::ExactConsistent
    };
    Ok(LoopExactness {
        clairaut_max,
        loop_integral: [circulation.re, circulation.im],
        verdict,
    })
}

/// Cauchy-Riemann residuals of `f = dF/dz`: the two closedness conditions
/// that make `F` a primitive.
pub fn primitive_cr_check(
    primitive: &Expr,
    grid: &GridSampling,
) -> Result<(ResidualField, ResidualField)> {
    if primitive.mode() != Mode::Complex {
        return Err(Error::Invalid("the primitive must be a complex expression".into()));
    }
    let f = primitive.diff(Var::Z)?;
    cr_residual(&f, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region2D;
    use crate::quad::riemann_sum_integral;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn zexpr(s: &str) -> Expr {
        Expr::parse(s, Mode::Complex).unwrap()
    }

    fn planar(s: &str) -> Expr {
        Expr::parse(s, Mode::Planar).unwrap()
    }

    fn square_grid() -> GridSampling {
        GridSampling::new(Region2D::unit_square(), 11).unwrap()
    }

    fn annulus_grid(inner: f64) -> GridSampling {
        let origin = Complex64::new(0.0, 0.0);
        GridSampling::new(Region2D::disk(origin, 2.0).unwrap(), 41)
            .unwrap()
            .exclude(origin, inner)
    }

    #[test]
    fn holomorphic_functions_have_zero_residual() {
        for f in ["z^2", "exp(z)", "sin(z)*z"] {
            let (a, b) = cr_residual(&zexpr(f), &square_grid()).unwrap();
            assert!(a.max_abs <= 1e-12 && b.max_abs <= 1e-12, "{f}");
        }
    }

    #[test]
    fn conjugate_has_constant_residual() {
        let (a, b) = cr_residual(&zexpr("conj(z)"), &square_grid()).unwrap();
        assert!(a.values.iter().all(|v| (v - 2.0).abs() < 1e-15));
        assert!(b.max_abs == 0.0);
        let (a, b) = cr_residual_pair(&planar("x"), &planar("-y"), &square_grid()).unwrap();
        assert!(a.values.iter().all(|v| (v - 2.0).abs() < 1e-15) && b.max_abs == 0.0);
    }

    #[test]
    fn exactness_cases() {
        let r = exactness_residual(&planar("2*x*y"), &planar("x^2"), &square_grid()).unwrap();
        assert!(r.max_abs <= 1e-12);
        let r = exactness_residual(
            &planar("y/(x^2+y^2)"),
            &planar("-x/(x^2+y^2)"),
            &annulus_grid(0.1),
        )
        .unwrap();
        assert!(r.max_abs <= 1e-10);
        let r = exactness_residual(&planar("y"), &planar("0"), &square_grid()).unwrap();
        assert!(r.values.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn closed_but_not_exact_on_the_unit_circle() {
        let (p, q) = (planar("y/(x^2+y^2)"), planar("-x/(x^2+y^2)"));
        let circle = Path::circle(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let out = loop_exactness_test(&p, &q, &circle, &QuadSpec::default(), 1e-8).unwrap();
        assert!(out.clairaut_max <= 1e-10);
        assert!((out.loop_integral[0] + 2.0 * PI).abs() <= 1e-10);
        assert_eq!(out.verdict, ExactnessVerdict::NonExactDespiteClosedness);
        assert_eq!(out.verdict.to_string(), "non-exact despite closedness");

        let shifted = Path::circle(Complex64::new(3.0, 0.0), 1.0).unwrap();
        let out = loop_exactness_test(&p, &q, &shifted, &QuadSpec::default(), 1e-8).unwrap();
        assert!(out.loop_integral[0].abs() <= 1e-10);
        assert_eq!(out.verdict, ExactnessVerdict::ExactConsistent);
        // P dx + Q dy = -im(dz / z): a fine Riemann sum of 1/z is an independent oracle
        let oracle = riemann_sum_integral(&zexpr("1/z"), &shifted, 200_000).unwrap();
        assert!((out.loop_integral[0] + oracle.im).abs() < 1e-4);
    }

    #[test]
    fn exact_form_on_circle() {
        let circle = Path::circle(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let out = loop_exactness_test(&planar("2*x*y"), &planar("x^2"), &circle, &QuadSpec::default(), 1e-8)
            .unwrap();
        assert!(out.loop_integral[0].abs() <= 1e-12);
        assert_eq!(out.verdict, ExactnessVerdict::ExactConsistent);
        assert!(loop_exactness_test(
            &planar("y"),
            &planar("0"),
            &Path::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            &QuadSpec::default(),
            1e-8
        )
        .is_err());
    }

    #[test]
    fn primitive_residuals() {
        for f in ["z^2", "exp(z)"] {
            let (a, b) = primitive_cr_check(&zexpr(f), &square_grid()).unwrap();
            assert!(a.max_abs <= 1e-12 && b.max_abs <= 1e-12);
        }
        let (a, b) = primitive_cr_check(&zexpr("1/z"), &annulus_grid(0.2)).unwrap();
        assert!(a.max_abs <= 1e-10 && b.max_abs <= 1e-10);
    }
}
