//! Shared inputs for the criterion benchmarks.

use cauchy_core::geometry::{Homotopy, Path, Region2D, Solid3D};
use cauchy_core::{Complex64, Expr, Mode};

pub fn complex(text: &str) -> Expr {
    Expr::parse(text, Mode::Complex).expect("benchmark expression parses")
}

pub fn spatial(text: &str) -> Expr {
    Expr::parse(text, Mode::Spatial).expect("benchmark expression parses")
}

pub fn unit_square() -> Region2D {
    Region2D::unit_square()
}

pub fn unit_disk() -> Region2D {
    Region2D::disk(Complex64::new(0.0, 0.0), 1.0).expect("valid disk")
}

pub fn paraboloid_cap() -> Solid3D {
    let lower = Expr::parse("0", Mode::Planar).expect("parses");
    let upper = Expr::parse("1-x^2-y^2", Mode::Planar).expect("parses");
    Solid3D::graph(unit_disk(), lower, upper).expect("valid graph solid")
}

/// Segment `0 -> 1` against the polyline `0 -> i -> 1`.
pub fn triangle_homotopy() -> Homotopy {
    let c = Complex64::new;
    Homotopy::new(
        Path::line(c(0.0, 0.0), c(1.0, 0.0)),
        Path::polyline(&[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).expect("valid polyline"),
    )
    .expect("shared endpoints")
}
