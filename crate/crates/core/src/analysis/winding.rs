use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::cr::planar_of;
use super::{Partials, SNAP_TOL};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};
use crate::geometry::Path;
use crate::quad::{contour_integral_with, QuadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    /// Nearest integer, claimed only when `raw` is within the snapping
    /// tolerance of it.
    pub value: Option<i64>,
    pub raw: Complex64,
    pub distance_ok: bool,
}

/// `(1 / 2 pi i) closed-integral dz / (z - a)`.
pub fn winding_number(path: &Path, a: Complex64, q: &QuadSpec) -> Result<Winding> {
    if !path.is_closed() {
        return Err(Error::Geometry("winding numbers need a closed path".into()));
    }
    let d = path.distance_to(a);
    if d < 1e-9 {
        return Err(Error::Singular(format!(
            "point {a} lies on the path (distance {d:e})"
        )));
    }
    let total = contour_integral_with(path, q, |z| Ok(1.0 / (z - a)))?;
    let raw = total / Complex64::new(0.0, TAU);
    let nearest = raw.re.round();
    let distance_ok = (raw - nearest).norm() <= SNAP_TOL;
    Ok(Winding {
        value: distance_ok.then_some(nearest as i64),
        raw,
        distance_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conformality {
    pub angle_in: f64,
    pub angle_out: f64,
    pub residual: f64,
    pub orientation_preserved: bool,
}

fn signed_angle(from: Complex64, to: Complex64) -> f64 {
    (to / from).arg()
}

/// Angle between two directions at `a` before and after the derivative map
/// of `f`. Analytic-syntax `f` is differentiated symbolically; otherwise
/// the real Jacobian is taken by central differences.
pub fn conformality_check(
    f: &Expr,
    a: Complex64,
    dir1: Complex64,
    dir2: Complex64,
) -> Result<Conformality> {
    if f.mode() != Mode::Complex && f.mode() != Mode::Constant {
        return Err(Error::Invalid("conformality needs a complex expression".into()));
    }
    if dir1.norm() == 0.0 || dir2.norm() == 0.0 {
        return Err(Error::Invalid("directions must be nonzero".into()));
    }
    let (d1, d2) = (dir1 / dir1.norm(), dir2 / dir2.norm());
    let (img1, img2) = if f.is_analytic_syntax() {
        let df = f.diff(Var::Z)?;
        let slope = df.eval(&EvalEnv::complex(a)).map_err(Error::eval(a))?;
        if slope.norm() < 1e-9 {
            return Err(Error::Singular(format!("derivative vanishes at {a}")));
        }
        (slope * d1, slope * d2)
    } else {
        let fp = Partials::new(&planar_of(f)?, Var::X, Var::Y);
        let [fx, fy] = fp.grad([a.re, a.im])?;
        // directional derivative d.re * f_x + d.im * f_y
        let push = |d: Complex64| fx * d.re + fy * d.im;
        (push(d1), push(d2))
    };
    if img1.norm() < 1e-9 || img2.norm() < 1e-9 {
        return Err(Error::Singular(format!("derivative map degenerates at {a}")));
    }
    let angle_in = signed_angle(d1, d2);
    let angle_out = signed_angle(img1, img2);
    let mut residual = (angle_out - angle_in).rem_euclid(TAU);
    if residual > PI {
        residual = TAU - residual;
    }
    Ok(Conformality {
        angle_in,
        angle_out,
        residual,
        orientation_preserved: angle_in.signum() == angle_out.signum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Segment;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zexpr(s: &str) -> Expr {
        Expr::parse(s, Mode::Complex).unwrap()
    }

    #[test]
    fn unit_circle_windings() {
        let q = QuadSpec::default();
        let circle = Path::circle(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(winding_number(&circle, c(0.0, 0.0), &q).unwrap().value, Some(1));
        assert_eq!(winding_number(&circle, c(2.0, 0.0), &q).unwrap().value, Some(0));
        assert_eq!(winding_number(&circle.reversed(), c(0.1, 0.2), &q).unwrap().value, Some(-1));
        let twice = Path::new(vec![
            Segment::arc(c(0.0, 0.0), 1.0, 0.0, TAU).unwrap(),
            Segment::arc(c(0.0, 0.0), 1.0, TAU, 2.0 * TAU).unwrap(),
        ])
        .unwrap();
        assert_eq!(winding_number(&twice, c(0.0, 0.0), &q).unwrap().value, Some(2));
        assert!(winding_number(&circle, c(1.0, 0.0), &q).is_err());
    }

    #[test]
    fn near_path_point_is_not_snapped() {
        let square = Path::polyline(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let q = QuadSpec { nodes_per_panel: 4, panels: 1, grid: 4 };
        let w = winding_number(&square, c(0.5, 1e-4), &q).unwrap();
        assert!(!w.distance_ok && w.value.is_none());
    }

    #[test]
    fn square_map_is_conformal_away_from_zero() {
        let out = conformality_check(&zexpr("z^2"), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(out.residual <= 1e-12);
        assert!(out.orientation_preserved);
        assert!(conformality_check(&zexpr("z^2"), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)).is_err());
    }

    #[test]
    fn reflection_reverses_orientation() {
        let out = conformality_check(&zexpr("conj(z)"), c(0.3, 0.4), c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!((out.angle_in - PI / 2.0).abs() < 1e-12);
        assert!((out.angle_out + PI / 2.0).abs() < 1e-6);
        assert!(!out.orientation_preserved);
    }
}
