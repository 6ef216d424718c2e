use num_complex::Complex64;

use super::{area_integral_with, composite, finite, require_mode, QuadSpec};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode};
use crate::geometry::{eval_planar, Face, Region2D, Solid3D};

fn real(v: Complex64) -> Complex64 {
    Complex64::new(v.re, 0.0)
}

/// `int_face g(point, outward unit normal) dS`.
pub fn surface_integral_with(
    face: &Face,
    q: &QuadSpec,
    mut g: impl FnMut([f64; 3], [f64; 3]) -> Result<f64>,
) -> Result<f64> {
    q.validate()?;
    match face {
        Face::Plane {
            axis,
            coord,
            outward,
            lo,
            hi,
        } => {
            let k = axis.index();
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            let (u_axis, v_axis) = if a < b { (a, b) } else { (b, a) };
            let mut normal = [0.0; 3];
            normal[k] = *outward;
            let rect = Region2D::Rectangle {
                x0: lo[0],
                x1: hi[0],
                y0: lo[1],
                y1: hi[1],
            };
            let total = area_integral_with(&rect, q, |u, v| {
                let mut p = [0.0; 3];
                p[k] = *coord;
                p[u_axis] = u;
                p[v_axis] = v;
                Ok(Complex64::new(g(p, normal)?, 0.0))
            })?;
            Ok(total.re)
        }
        Face::Graph {
            base,
            height,
            dx,
            dy,
            top,
        } => {
            let total = area_integral_with(base, q, |x, y| {
                let h = eval_planar(height, x, y)?;
                let hx = eval_planar(dx, x, y)?;
                let hy = eval_planar(dy, x, y)?;
                let stretch = (1.0 + hx * hx + hy * hy).sqrt();
                if !stretch.is_finite() {
                    return Err(Error::Singular(format!(
                        "unbounded area element at ({x}, {y})"
                    )));
                }
                let n = if *top {
                    [-hx / stretch, -hy / stretch, 1.0 / stretch]
                } else {
                    [hx / stretch, hy / stretch, -1.0 / stretch]
                };
                Ok(Complex64::new(g([x, y, h], n)? * stretch, 0.0))
            })?;
            Ok(total.re)
        }
        Face::Wall { base, lower, upper } => {
            let line = q.line_rule();
            let inner = q.grid_rule();
            let mut acc = 0.0;
            for seg in base.segments() {
                let part = composite::<Error>(&line, q.panels, 0.0, 1.0, |s| {
                    let b = seg.point(s)?;
                    let d = seg.derivative(s)?;
                    let speed = d.norm();
                    if speed == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let n = [d.im / speed, -d.re / speed, 0.0];
                    let z0 = eval_planar(lower, b.re, b.im)?;
                    let z1 = eval_planar(upper, b.re, b.im)?;
                    if z1 <= z0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    let mut column = 0.0;
                    for (z, w) in inner.mapped(z0, z1) {
                        column += g([b.re, b.im, z], n)? * w;
                    }
                    Ok(Complex64::new(column * speed, 0.0))
                })?;
                acc += part.re;
            }
            Ok(acc)
        }
    }
}

fn eval_spatial(e: &Expr, p: [f64; 3]) -> Result<f64> {
    let v = e
        .eval(&EvalEnv::spatial(p[0], p[1], p[2]))
        .map_err(Error::eval(Complex64::new(p[0], p[1])))?;
    Ok(v.re)
}

fn check_spatial(e: &Expr, role: &str) -> Result<()> {
    if e.mode() == Mode::Constant {
        Ok(())
    } else {
        require_mode(e, Mode::Spatial, role)
    }
}

/// `int_face g dS` for a spatial expression `g`.
pub fn surface_integral(g: &Expr, face: &Face, q: &QuadSpec) -> Result<f64> {
    check_spatial(g, "surface integrand")?;
    surface_integral_with(face, q, |p, _| eval_spatial(g, p))
}

/// Outward flux `int_face <field, N> dS`.
pub fn flux(field: &[Expr; 3], face: &Face, q: &QuadSpec) -> Result<f64> {
    for c in field {
        check_spatial(c, "field component")?;
    }
    surface_integral_with(face, q, |p, n| {
        let mut acc = 0.0;
        for k in 0..3 {
            if n[k] != 0.0 {
                acc += eval_spatial(&field[k], p)? * n[k];
            }
        }
        Ok(acc)
    })
}

/// `int int int g dV` for a closure `g(x, y, z)`. Graph solids integrate
/// each vertical column between the two graphs, then over the base.
pub fn volume_integral_with(
    solid: &Solid3D,
    q: &QuadSpec,
    mut g: impl FnMut([f64; 3]) -> Result<f64>,
) -> Result<f64> {
    q.validate()?;
    let rule = q.grid_rule();
    match solid {
        Solid3D::Box { lo, hi } => {
            // nested partial sums keep the rounding error at the level of a
            // single 1D rule
            let mut acc = 0.0;
            for (z, wz) in rule.mapped(lo[2], hi[2]) {
                let mut plane = 0.0;
                for (y, wy) in rule.mapped(lo[1], hi[1]) {
                    let mut line = 0.0;
                    for (x, wx) in rule.mapped(lo[0], hi[0]) {
                        let v = g([x, y, z])?;
                        if !v.is_finite() {
                            return Err(Error::Singular(format!(
                                "non-finite sample at ({x}, {y}, {z})"
                            )));
                        }
                        line += v * wx;
                    }
                    plane += line * wy;
                }
                acc += plane * wz;
            }
            Ok(acc)
        }
        Solid3D::Graph { base, lower, upper } => {
            let total = area_integral_with(base, q, |x, y| {
                let z0 = eval_planar(lower, x, y)?;
                let z1 = eval_planar(upper, x, y)?;
                let mut column = 0.0;
                for (z, w) in rule.mapped(z0, z1) {
                    column += g([x, y, z])? * w;
                }
                finite(Complex64::new(column, 0.0), || format!("({x}, {y})"))
            })?;
            Ok(real(total).re)
        }
    }
}

/// Volume integral of a spatial expression.
pub fn volume_integral(g: &Expr, solid: &Solid3D, q: &QuadSpec) -> Result<f64> {
    check_spatial(g, "volume integrand")?;
    volume_integral_with(solid, q, |p| eval_spatial(g, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spatial(s: &str) -> Expr {
        Expr::parse(s, Mode::Spatial).unwrap()
    }

    fn planar(s: &str) -> Expr {
        Expr::parse(s, Mode::Planar).unwrap()
    }

    fn cap() -> Solid3D {
        let disk = Region2D::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        Solid3D::graph(disk, planar("0"), planar("1-x^2-y^2")).unwrap()
    }

    #[test]
    fn box_volume_and_faces() {
        let q = QuadSpec::default();
        let b = Solid3D::unit_box();
        assert!((volume_integral(&spatial("1"), &b, &q).unwrap() - 1.0).abs() < 1e-13);
        let faces = b.faces().unwrap();
        for f in &faces {
            assert!((surface_integral(&spatial("1"), f, &q).unwrap() - 1.0).abs() < 1e-13);
        }
        // z cos(theta) summed over faces recovers the volume
        let total: f64 = faces
            .iter()
            .map(|f| surface_integral_with(f, &q, |p, n| Ok(p[2] * n[2])).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn slanted_graph_area() {
        let q = QuadSpec::default();
        let s = Solid3D::graph(Region2D::unit_square(), planar("x-1"), planar("x")).unwrap();
        let top = &s.faces().unwrap()[0];
        let got = surface_integral(&spatial("1"), top, &q).unwrap();
        assert!((got - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn paraboloid_cap_volume() {
        let q = QuadSpec::default();
        let v = volume_integral(&spatial("1"), &cap(), &q).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn wall_area_of_cylinder() {
        let q = QuadSpec::default();
        let disk = Region2D::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let s = Solid3D::graph(disk, planar("0"), planar("2")).unwrap();
        let wall = &s.faces().unwrap()[2];
        let got = surface_integral(&spatial("1"), wall, &q).unwrap();
        assert!((got - 4.0 * PI).abs() < 1e-12);
    }
}
