//! Report forms of the pointwise analysis checks.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::report::{run, VerificationReport};
use super::{path_json, region_json};
use crate::analysis::{
    conformality_check, cr_residual, cr_residual_pair, exactness_residual, loop_exactness_test,
    primitive_cr_check, winding_number, ExactnessVerdict, GridSampling, ResidualField,
};
use crate::error::Error;
use crate::expr::Expr;
use crate::geometry::Path;
use crate::quad::{contour_integral, QuadSpec};

fn grid_json(g: &GridSampling) -> Value {
    json!({
        "region": region_json(&g.region),
        "resolution": g.resolution,
        "exclusions": g.exclusions.iter().map(|(c, r)| json!({"center": [c.re, c.im], "radius": r})).collect::<Vec<_>>(),
    })
}

fn summary(r: &ResidualField) -> Value {
    json!({
        "samples": r.points.len(),
        "max_abs": r.max_abs,
        "mean_abs": r.mean_abs,
        "worst_point": r.worst().map(|k| r.points[k]),
    })
}

fn pair_report(
    kind: &'static str,
    inputs: Value,
    tol: f64,
    fields: impl FnOnce() -> crate::error::Result<(ResidualField, ResidualField)>,
) -> VerificationReport {
    run(kind, inputs, tol, |b| {
        let (r1, r2) = fields()?;
        b.sides(vec![r1.max_abs, r2.max_abs], vec![0.0, 0.0])
            .check("u_x - v_y", r1.max_abs, tol)
            .check("u_y + v_x", r2.max_abs, tol)
            .diag("r1", summary(&r1))
            .diag("r2", summary(&r2));
        Ok(())
    })
}

/// Cauchy-Riemann residuals of a complex `f`.
pub fn cr_report(f: &Expr, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"f": f.to_string(), "grid": grid_json(grid)});
    pair_report("cr_residual", inputs, tol, || cr_residual(f, grid))
}

/// Cauchy-Riemann residuals of an explicit planar pair.
pub fn cr_pair_report(u: &Expr, v: &Expr, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"u": u.to_string(), "v": v.to_string(), "grid": grid_json(grid)});
    pair_report("cr_residual", inputs, tol, || cr_residual_pair(u, v, grid))
}

/// Cauchy-Riemann residuals of the derivative of a primitive `F`.
pub fn primitive_cr_report(primitive: &Expr, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"F": primitive.to_string(), "grid": grid_json(grid)});
    pair_report("primitive_cr_check", inputs, tol, || primitive_cr_check(primitive, grid))
}

pub fn exactness_report(p: &Expr, q: &Expr, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"P": p.to_string(), "Q": q.to_string(), "grid": grid_json(grid)});
    run("exactness_residual", inputs, tol, |b| {
        let r = exactness_residual(p, q, grid)?;
        b.sides(vec![r.max_abs], vec![0.0])
            .check("P_y - Q_x", r.max_abs, tol)
            .diag("field", summary(&r));
        Ok(())
    })
}

/// Passes when the verdict is `expected` (defaulting to exact-consistent).
pub fn loop_exactness_report(
    p: &Expr,
    q: &Expr,
    lp: &Path,
    quad: &QuadSpec,
    tol: f64,
    expected: Option<ExactnessVerdict>,
) -> VerificationReport {
    let inputs = json!({"P": p.to_string(), "Q": q.to_string(), "loop": path_json(lp), "quad": quad});
    run("loop_exactness_test", inputs, tol, |b| {
        let t = loop_exactness_test(p, q, lp, quad, tol)?;
        let expected = expected.unwrap_or(ExactnessVerdict::ExactConsistent);
        let circulation = Complex64::new(t.loop_integral[0], t.loop_integral[1]).norm();
        b.sides(t.loop_integral.to_vec(), vec![0.0, 0.0])
            .check("clairaut", t.clairaut_max, tol)
            .check(
                &format!("verdict is {expected}"),
                if t.verdict == expected { 0.0 } else { 1.0 },
                0.0,
            )
            .diag("circulation_abs", circulation)
            .diag("clairaut_max", t.clairaut_max)
            .diag("verdict", t.verdict.to_string());
        Ok(())
    })
}

/// Winding number of `path` about `a`; the primary residual is the distance
/// of the raw value from the nearest integer (or from `expected`).
pub fn winding_report(path: &Path, a: Complex64, q: &QuadSpec, expected: Option<i64>, tol: f64) -> VerificationReport {
    let inputs = json!({"path": path_json(path), "point": [a.re, a.im], "quad": q});
    run("winding_number", inputs, tol, |b| {
        let w = winding_number(path, a, q)?;
        let target = expected.unwrap_or(w.raw.re.round() as i64);
        b.sides(vec![w.raw.re, w.raw.im], vec![target as f64, 0.0])
            .check("integer winding", (w.raw - target as f64).norm(), tol)
            .diag("winding", w.value)
            .diag("distance_ok", w.distance_ok);
        Ok(())
    })
}

pub fn conformality_report(
    f: &Expr,
    a: Complex64,
    dir1: Complex64,
    dir2: Complex64,
    tol: f64,
) -> VerificationReport {
    let inputs = json!({
        "f": f.to_string(),
        "point": [a.re, a.im],
        "directions": [[dir1.re, dir1.im], [dir2.re, dir2.im]],
    });
    run("conformality_check", inputs, tol, |b| {
        let c = conformality_check(f, a, dir1, dir2)?;
        b.sides(vec![c.angle_in], vec![c.angle_out])
            .check("angle preserved", c.residual, tol)
            .diag("orientation_preserved", c.orientation_preserved);
        Ok(())
    })
}

/// Contour integral of `f` along `path`, compared with `expected` when one
/// is given.
pub fn contour_report(
    f: &Expr,
    path: &Path,
    q: &QuadSpec,
    expected: Option<Complex64>,
    tol: f64,
) -> VerificationReport {
    let inputs = json!({"f": f.to_string(), "path": path_json(path), "quad": q});
    run("contour_integral", inputs, tol, |b| {
        let v = contour_integral(f, path, q)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Singular("integral is not finite".into()));
        }
        let target = expected.unwrap_or(v);
        b.sides(vec![v.re, v.im], vec![target.re, target.im])
            .check("integral vs expected", (v - target).norm(), tol)
            .diag("expected_given", expected.is_some());
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Mode;
    use crate::geometry::Region2D;
    use crate::theorems::Status;

    fn cx(s: &str) -> Expr {
        Expr::parse(s, Mode::Complex).unwrap()
    }

    #[test]
    fn cr_reports() {
        let g = GridSampling::new(Region2D::unit_square(), 11).unwrap();
        assert!(cr_report(&cx("exp(z)"), &g, 1e-12).is_pass());
        let r = cr_report(&cx("conj(z)"), &g, 1e-12);
        assert_eq!(r.status, Status::Violation);
        assert_eq!(r.residual, 2.0);
        let g0 = GridSampling::new(Region2D::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap(), 11)
            .unwrap()
            .exclude(Complex64::new(0.0, 0.0), 0.2);
        assert!(primitive_cr_report(&cx("1/z"), &g0, 1e-10).is_pass());
    }

    #[test]
    fn loop_and_winding_reports() {
        let circle = Path::circle(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let q = QuadSpec::default();
        let p = Expr::parse("y/(x^2+y^2)", Mode::Planar).unwrap();
        let qq = Expr::parse("-x/(x^2+y^2)", Mode::Planar).unwrap();
        let r = loop_exactness_report(&p, &qq, &circle, &q, 1e-10, Some(ExactnessVerdict::NonExactDespiteClosedness));
        assert!(r.is_pass(), "{r:?}");
        let r = loop_exactness_report(&p, &qq, &circle, &q, 1e-10, None);
        assert_eq!(r.status, Status::Violation);

        let r = winding_report(&circle, Complex64::new(0.0, 0.0), &q, Some(1), 1e-10);
        assert!(r.is_pass());
        assert_eq!(r.diagnostic("winding").unwrap(), 1);
        let r = winding_report(&circle, Complex64::new(1.0, 0.0), &q, None, 1e-10);
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn contour_and_conformality_reports() {
        let q = QuadSpec::default();
        let seg = Path::polyline(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)]).unwrap();
        let exact = Complex64::new(1.0, 1.0).exp() - 1.0;
        assert!(contour_report(&cx("exp(z)"), &seg, &q, Some(exact), 1e-12).is_pass());
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        assert!(conformality_report(&cx("z^2"), one + i, one, i, 1e-12).is_pass());
        let r = conformality_report(&cx("z^2"), Complex64::new(0.0, 0.0), one, i, 1e-12);
        assert_eq!(r.status, Status::Error);
    }
}
