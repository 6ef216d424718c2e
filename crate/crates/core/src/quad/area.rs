use num_complex::Complex64;

use super::{finite, require_mode, QuadSpec};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode};
use crate::geometry::Region2D;

/// `int int g(x, y) dx dy` over `region` for a closure `g`.
///
/// Rectangles use a tensor rule, disks a polar-mapped tensor rule, polygons
/// a fan of triangles each mapped from the unit square, and x-convex
/// regions an iterated rule between the boundary graphs.
pub fn area_integral_with(
    region: &Region2D,
    q: &QuadSpec,
    mut g: impl FnMut(f64, f64) -> Result<Complex64>,
) -> Result<Complex64> {
    q.validate()?;
    let rule = q.grid_rule();
    let mut sample = |x: f64, y: f64| -> Result<Complex64> {
        finite(g(x, y)?, || format!("({x}, {y})"))
    };
    let mut acc = Complex64::new(0.0, 0.0);
    match region {
        Region2D::Rectangle { x0, x1, y0, y1 } => {
            for (y, wy) in rule.mapped(*y0, *y1) {
                let mut line = Complex64::new(0.0, 0.0);
                for (x, wx) in rule.mapped(*x0, *x1) {
                    line += sample(x, y)? * wx;
                }
                acc += line * wy;
            }
        }
        Region2D::Disk { center, radius } => {
            for (theta, wt) in rule.mapped(0.0, std::f64::consts::TAU) {
                let dir = Complex64::from_polar(1.0, theta);
                let mut ray = Complex64::new(0.0, 0.0);
                for (r, wr) in rule.mapped(0.0, *radius) {
                    let p = center + dir * r;
                    ray += sample(p.re, p.im)? * (wr * r);
                }
                acc += ray * wt;
            }
        }
        Region2D::Polygon { vertices } => {
            let v0 = vertices[0];
            for w in vertices[1..].windows(2) {
                let (e1, e2) = (w[0] - v0, w[1] - w[0]);
                let twice_area = e1.re * e2.im - e1.im * e2.re;
                for (u, wu) in rule.mapped(0.0, 1.0) {
                    let mut line = Complex64::new(0.0, 0.0);
                    for (v, wv) in rule.mapped(0.0, 1.0) {
                        let p = v0 + e1 * u + e2 * (u * v);
                        line += sample(p.re, p.im)? * wv;
                    }
                    acc += line * (wu * u * twice_area);
                }
            }
        }
        Region2D::XConvex {
            y0,
            y1,
            left,
            right,
        } => {
            for (y, wy) in rule.mapped_clustered(*y0, *y1) {
                let (l, r) = Region2D::x_bounds(left, right, y)?;
                let mut line = Complex64::new(0.0, 0.0);
                for (x, wx) in rule.mapped(l, r) {
                    line += sample(x, y)? * wx;
                }
                acc += line * wy;
            }
        }
    }
    Ok(acc)
}

/// Area integral of a planar expression.
pub fn area_integral(g: &Expr, region: &Region2D, q: &QuadSpec) -> Result<Complex64> {
    if g.mode() != Mode::Constant {
        require_mode(g, Mode::Planar, "area integrand")?;
    }
    area_integral_with(region, q, |x, y| {
        g.eval(&EvalEnv::planar(x, y))
            .map_err(Error::eval(Complex64::new(x, y)))
    })
}

/// `int [X(right(y), y) - X(left(y), y)] dy` over an x-convex region: the
/// area integral of `dX/dx` reduced to a boundary difference on each
/// horizontal strip.
pub fn strip_area_integral(x_field: &Expr, region: &Region2D, q: &QuadSpec) -> Result<f64> {
    require_mode(x_field, Mode::Planar, "strip integrand")?;
    let Region2D::XConvex {
        y0,
        y1,
        left,
        right,
    } = region
    else {
        return Err(Error::Invalid(
            "the strip method needs an x-convex region".into(),
        ));
    };
    q.validate()?;
    let rule = q.line_rule();
    let mut total = 0.0;
    let at = |x: f64, y: f64| -> Result<f64> {
        let z = Complex64::new(x, y);
        let v = x_field.eval(&EvalEnv::planar(x, y)).map_err(Error::eval(z))?;
        Ok(v.re)
    };
    // panels in the clustered variable, so endpoint square-root behaviour of
    // the boundary graphs does not limit the convergence rate
    let (a, b) = (*y0, *y1);
    let to_y = |u: f64| a + (b - a) * 0.5 * (1.0 - (std::f64::consts::PI * u).cos());
    let dy = |u: f64| (b - a) * 0.5 * std::f64::consts::PI * (std::f64::consts::PI * u).sin();
    let step = 1.0 / q.panels as f64;
    for k in 0..q.panels {
        let (lo, hi) = (k as f64 * step, ((k + 1) as f64 * step).min(1.0));
        for (u, w) in rule.mapped(lo, hi) {
            let y = to_y(u);
            let (l, r) = Region2D::x_bounds(left, right, y)?;
            total += (at(r, y)? - at(l, y)?) * dy(u) * w;
        }
    }
    Ok(total)
}
