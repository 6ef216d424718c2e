use num_complex::Complex64;

use super::path::{CurveSegment, Path, Segment};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Node, Var};

/// A bounded plane region whose boundary is traversed counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Region2D {
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// Simple polygon, vertices in counterclockwise order, not repeated.
    Polygon { vertices: Vec<Complex64> },
    /// `{ (x, y) : y0 <= y <= y1, left(y) <= x <= right(y) }` with `left`
    /// and `right` in `Mode::Param(Var::Y)`.
    XConvex {
        y0: f64,
        y1: f64,
        left: Expr,
        right: Expr,
    },
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

fn shoelace(v: &[Complex64]) -> f64 {
    let n = v.len();
    (0..n).map(|k| cross(v[k], v[(k + 1) % n])).sum::<f64>() / 2.0
}

impl Region2D {
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Geometry(format!(
                "rectangle [{x0}, {x1}] x [{y0}, {y1}] has no area"
            )));
        }
        Ok(Region2D::Rectangle { x0, x1, y0, y1 })
    }

    pub fn unit_square() -> Self {
        Region2D::Rectangle {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Region2D::Disk { center, radius })
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Geometry("a polygon needs three vertices".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                    return Err(Error::Geometry(format!(
                        "polygon edges {i} and {j} intersect"
                    )));
                }
            }
        }
        let area = shoelace(&vertices);
        if area <= 0.0 {
            return Err(Error::Geometry(
                "polygon vertices must be counterclockwise with positive area".into(),
            ));
        }
        Ok(Region2D::Polygon { vertices })
    }

    pub fn x_convex(y0: f64, y1: f64, left: Expr, right: Expr) -> Result<Self> {
        let mode = Mode::Param(Var::Y);
        if left.mode() != mode || right.mode() != mode {
            return Err(Error::Geometry(
                "x-convex boundaries must be expressions of y alone".into(),
            ));
        }
        if !(y1 > y0) {
            return Err(Error::Geometry(format!("empty y-range [{y0}, {y1}]")));
        }
        const SAMPLES: usize = 64;
        let mut width = 0.0;
        for k in 0..=SAMPLES {
            let y = y0 + (y1 - y0) * k as f64 / SAMPLES as f64;
            let env = EvalEnv::param(Var::Y, y);
            let at = Complex64::new(0.0, y);
            let l = left.eval(&env).map_err(Error::eval(at))?.re;
            let r = right.eval(&env).map_err(Error::eval(at))?.re;
            if l > r + 1e-12 {
                return Err(Error::Geometry(format!(
                    "left boundary exceeds right boundary at y = {y}"
                )));
            }
            width += r - l;
        }
        if width <= 0.0 {
            return Err(Error::Geometry("x-convex region has no area".into()));
        }
        Ok(Region2D::XConvex {
            y0,
            y1,
            left,
            right,
        })
    }

    /// Boundary bounds `(left(y), right(y))` of an x-convex region.
    pub(crate) fn x_bounds(left: &Expr, right: &Expr, y: f64) -> Result<(f64, f64)> {
        let env = EvalEnv::param(Var::Y, y);
        let at = Complex64::new(0.0, y);
        Ok((
            left.eval(&env).map_err(Error::eval(at))?.re,
            right.eval(&env).map_err(Error::eval(at))?.re,
        ))
    }

    /// Closed counterclockwise boundary path.
    pub fn boundary(&self) -> Path {
        match self {
            Region2D::Rectangle { x0, x1, y0, y1 } => Path::polyline(&[
                Complex64::new(*x0, *y0),
                Complex64::new(*x1, *y0),
                Complex64::new(*x1, *y1),
                Complex64::new(*x0, *y1),
                Complex64::new(*x0, *y0),
            ])
            .expect("rectangle boundary"),
            Region2D::Disk { center, radius } => {
                Path::circle(*center, *radius).expect("disk boundary")
            }
            Region2D::Polygon { vertices } => {
                let mut pts = vertices.clone();
                pts.push(vertices[0]);
                Path::polyline(&pts).expect("polygon boundary")
            }
            Region2D::XConvex {
                y0,
                y1,
                left,
                right,
            } => {
                let (l0, r0) = Self::x_bounds(left, right, *y0).expect("validated at construction");
                let (l1, r1) = Self::x_bounds(left, right, *y1).expect("validated at construction");
                let y = Expr::new(Mode::Param(Var::Y), Node::Var(Var::Y)).unwrap();
                let right_side = CurveSegment::new(right.clone(), y.clone(), *y0, *y1)
                    .expect("boundary derivative");
                let left_side =
                    CurveSegment::new(left.clone(), y, *y1, *y0).expect("boundary derivative");
                Path::new(vec![
                    Segment::line(Complex64::new(l0, *y0), Complex64::new(r0, *y0)),
                    Segment::Curve(right_side),
                    Segment::line(Complex64::new(r1, *y1), Complex64::new(l1, *y1)),
                    Segment::Curve(left_side),
                ])
                .expect("x-convex boundary joins")
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region2D::Rectangle { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
            Region2D::Disk { radius, .. } => std::f64::consts::PI * radius * radius,
            Region2D::Polygon { vertices } => shoelace(vertices),
            Region2D::XConvex {
                y0,
                y1,
                left,
                right,
            } => {
                let rule = crate::quad::GaussRule::new(64);
                rule.integrate_real_clustered(*y0, *y1, |y| {
                    Self::x_bounds(left, right, y)
                        .map(|(l, r)| r - l)
                        .unwrap_or(f64::NAN)
                })
            }
        }
    }

    pub fn contains(&self, p: Complex64) -> bool {
        match self {
            Region2D::Rectangle { x0, x1, y0, y1 } => {
                (*x0..=*x1).contains(&p.re) && (*y0..=*y1).contains(&p.im)
            }
            Region2D::Disk { center, radius } => (p - center).norm() <= *radius,
            Region2D::Polygon { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for k in 0..n {
                    let (a, b) = (vertices[k], vertices[(k + 1) % n]);
                    if (a.im > p.im) != (b.im > p.im) {
                        let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
                        if p.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            Region2D::XConvex {
                y0,
                y1,
                left,
                right,
            } => {
                (*y0..=*y1).contains(&p.im)
                    && Self::x_bounds(left, right, p.im)
                        .map(|(l, r)| l <= p.re && p.re <= r)
                        .unwrap_or(false)
            }
        }
    }

    /// `(xmin, xmax, ymin, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match self {
            Region2D::Rectangle { x0, x1, y0, y1 } => (*x0, *x1, *y0, *y1),
            Region2D::Disk { center, radius } => (
                center.re - radius,
                center.re + radius,
                center.im - radius,
                center.im + radius,
            ),
            Region2D::Polygon { vertices } => vertices.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
                |(a, b, c, d), v| (a.min(v.re), b.max(v.re), c.min(v.im), d.max(v.im)),
            ),
            Region2D::XConvex {
                y0,
                y1,
                left,
                right,
            } => {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for k in 0..=256 {
                    let y = y0 + (y1 - y0) * k as f64 / 256.0;
                    if let Ok((l, r)) = Self::x_bounds(left, right, y) {
                        lo = lo.min(l);
                        hi = hi.max(r);
                    }
                }
                (lo, hi, *y0, *y1)
            }
        }
    }
}

/// Free-function form of [`Region2D::boundary`].
pub fn boundary_of(r: &Region2D) -> Path {
    r.boundary()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn signed_area(p: &Path) -> f64 {
        // (1/2) * closed integral of x dy - y dx, by dense Gauss sampling
        let rule = crate::quad::GaussRule::new(32);
        // divisible by every segment count used below, so no panel straddles a joint
        let n = 240;
        let mut total = 0.0;
        for k in 0..n {
            let (a, b) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
            total += rule.integrate_real(a, b, |t| {
                let z = p.point_at(t).unwrap();
                let dz = p.tangent_at(t).unwrap();
                0.5 * (z.re * dz.im - z.im * dz.re)
            });
        }
        total
    }

    fn half_disk_x_convex() -> Region2D {
        let m = Mode::Param(Var::Y);
        Region2D::x_convex(
            -1.0,
            1.0,
            Expr::parse("-sqrt(1-y^2)", m).unwrap(),
            Expr::parse("sqrt(1-y^2)", m).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rectangle_boundary_vertices() {
        let p = Region2D::unit_square().boundary();
        let want = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(p.point_at(k as f64 / 4.0).unwrap(), *w);
        }
        assert!(p.is_closed());
    }

    #[test]
    fn boundaries_are_counterclockwise() {
        let trapezoid = Region2D::x_convex(
            0.0,
            1.0,
            Expr::parse("0.5*y", Mode::Param(Var::Y)).unwrap(),
            Expr::parse("2-y^2", Mode::Param(Var::Y)).unwrap(),
        )
        .unwrap();
        for r in [
            Region2D::unit_square(),
            Region2D::rectangle(-1.0, 2.0, 0.5, 1.5).unwrap(),
            Region2D::disk(c(0.3, -0.2), 1.5).unwrap(),
            Region2D::polygon(vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.5), c(2.0, 1.0), c(0.0, 1.0)]).unwrap(),
            trapezoid,
        ] {
            let b = r.boundary();
            assert!(b.is_closed());
            assert!((signed_area(&b) - r.area()).abs() <= 1e-9, "{r:?}");
        }
    }

    #[test]
    fn x_convex_disk_has_four_pieces() {
        let r = half_disk_x_convex();
        let b = r.boundary();
        assert_eq!(b.segments().len(), 4);
        assert!(b.is_closed());
        assert!((r.area() - std::f64::consts::PI).abs() < 1e-4);
        assert!(r.contains(c(0.0, 0.0)));
        assert!(!r.contains(c(0.9, 0.9)));
    }

    #[test]
    fn polygon_validation() {
        assert!(Region2D::polygon(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).is_err());
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(Region2D::polygon(bowtie).is_err());
        let tri = Region2D::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(tri.area(), 0.5);
        assert!(tri.contains(c(0.2, 0.2)));
        assert!(!tri.contains(c(0.6, 0.6)));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(Region2D::rectangle(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(Region2D::disk(c(0.0, 0.0), -1.0).is_err());
        let m = Mode::Param(Var::Y);
        assert!(Region2D::x_convex(0.0, 1.0, Expr::parse("1", m).unwrap(), Expr::parse("0", m).unwrap()).is_err());
    }
}
