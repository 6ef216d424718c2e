use num_complex::Complex64;

use super::path::Path;
use super::region::Region2D;
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// A bounded solid.
#[derive(Debug, Clone, PartialEq)]
pub enum Solid3D {
    Box {
        lo: [f64; 3],
        hi: [f64; 3],
    },
    /// `{ (x, y, z) : (x, y) in base, lower(x, y) <= z <= upper(x, y) }`.
    /// The base is a rectangle or a disk; `lower` and `upper` are planar.
    Graph {
        base: Region2D,
        lower: Expr,
        upper: Expr,
    },
}

pub(crate) fn eval_planar(e: &Expr, x: f64, y: f64) -> Result<f64> {
    e.eval(&EvalEnv::planar(x, y))
        .map(|v| v.re)
        .map_err(Error::eval(Complex64::new(x, y)))
}

impl Solid3D {
    pub fn cuboid(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        if (0..3).any(|k| !(hi[k] > lo[k]) || !lo[k].is_finite() || !hi[k].is_finite()) {
            return Err(Error::Geometry(format!("box {lo:?} - {hi:?} has no volume")));
        }
        Ok(Solid3D::Box { lo, hi })
    }

    pub fn unit_box() -> Self {
        Solid3D::Box {
            lo: [0.0; 3],
            hi: [1.0; 3],
        }
    }

    pub fn graph(base: Region2D, lower: Expr, upper: Expr) -> Result<Self> {
        if !matches!(base, Region2D::Rectangle { .. } | Region2D::Disk { .. }) {
            return Err(Error::Geometry(
                "graph solids need a rectangular or circular base".into(),
            ));
        }
        if lower.mode() != Mode::Planar || upper.mode() != Mode::Planar {
            return Err(Error::Geometry("graph bounds must be planar expressions".into()));
        }
        // z1 >= z2 on a sample grid
        let (x0, x1, y0, y1) = base.bounding_box();
        const N: usize = 16;
        let mut thick = false;
        for i in 0..=N {
            for j in 0..=N {
                let x = x0 + (x1 - x0) * i as f64 / N as f64;
                let y = y0 + (y1 - y0) * j as f64 / N as f64;
                if !base.contains(Complex64::new(x, y)) {
                    continue;
                }
                let (lo, hi) = (eval_planar(&lower, x, y)?, eval_planar(&upper, x, y)?);
                if lo > hi + 1e-12 {
                    return Err(Error::Geometry(format!(
                        "lower graph above upper graph at ({x}, {y})"
                    )));
                }
                thick |= hi > lo;
            }
        }
        if !thick {
            return Err(Error::Geometry("graph solid has no volume".into()));
        }
        Ok(Solid3D::Graph { base, lower, upper })
    }

    pub fn faces(&self) -> Result<Vec<Face>> {
        match self {
            Solid3D::Box { lo, hi } => {
                let mut faces = Vec::with_capacity(6);
                for axis in [Axis::X, Axis::Y, Axis::Z] {
                    let k = axis.index();
                    let (a, b) = ((k + 1) % 3, (k + 2) % 3);
                    let (u, v) = if a < b { (a, b) } else { (b, a) };
                    for (coord, outward) in [(lo[k], -1.0), (hi[k], 1.0)] {
                        faces.push(Face::Plane {
                            axis,
                            coord,
                            outward,
                            lo: [lo[u], lo[v]],
                            hi: [hi[u], hi[v]],
                        });
                    }
                }
                Ok(faces)
            }
            Solid3D::Graph { base, lower, upper } => {
                let graph = |height: &Expr, top: bool| -> Result<Face> {
                    Ok(Face::Graph {
                        base: base.clone(),
                        height: height.clone(),
                        dx: height.diff(Var::X)?,
                        dy: height.diff(Var::Y)?,
                        top,
                    })
                };
                Ok(vec![
                    graph(upper, true)?,
                    graph(lower, false)?,
                    Face::Wall {
                        base: base.boundary(),
                        lower: lower.clone(),
                        upper: upper.clone(),
                    },
                ])
            }
        }
    }
}

/// An oriented piece of a solid's boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Face {
    /// Axis-aligned rectangle `{axis = coord}`; `lo`/`hi` bound the other two
    /// coordinates in increasing axis order. `outward` is the sign of the
    /// normal along `axis`.
    Plane {
        axis: Axis,
        coord: f64,
        outward: f64,
        lo: [f64; 2],
        hi: [f64; 2],
    },
    /// The graph `z = height(x, y)` over `base`; `top` faces have an outward
    /// normal with positive z-component.
    Graph {
        base: Region2D,
        height: Expr,
        dx: Expr,
        dy: Expr,
        top: bool,
    },
    /// Vertical wall above the base boundary between the two graphs.
    Wall {
        base: Path,
        lower: Expr,
        upper: Expr,
    },
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

impl Face {
    /// Outward unit normal. For plane faces the arguments are ignored, for
    /// graph faces they are `(x, y)`, for walls `u` is the global parameter
    /// of the base boundary.
    pub fn unit_normal(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        match self {
            Face::Plane { axis, outward, .. } => {
                let mut n = [0.0; 3];
                n[axis.index()] = *outward;
                Ok(n)
            }
            Face::Graph { dx, dy, top, .. } => {
                let hx = eval_planar(dx, u, v)?;
                let hy = eval_planar(dy, u, v)?;
                let n = if *top { [-hx, -hy, 1.0] } else { [hx, hy, -1.0] };
                Ok(unit(n))
            }
            Face::Wall { base, .. } => {
                let d = base.tangent_at(u)?;
                // right-hand normal of a counterclockwise boundary points out
                Ok(unit([d.im, -d.re, 0.0]))
            }
        }
    }
}

/// Free-function form of [`Solid3D::faces`].
pub fn faces_of(s: &Solid3D) -> Result<Vec<Face>> {
    s.faces()
}
