//! Pointwise differential checks sampled over plane grids: Cauchy-Riemann
//! and exactness residuals, loop integrals of closed forms, winding numbers
//! and conformality.

mod cr;
mod winding;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Var};
use crate::geometry::Region2D;

pub use cr::{
    cr_residual, cr_residual_pair, exactness_residual, loop_exactness_test, primitive_cr_check,
    ExactnessVerdict, LoopExactness,
};
pub(crate) use cr::planar_of;
pub use winding::{conformality_check, winding_number, Conformality, Winding};

/// Snapping tolerance for integer-valued diagnostics.
pub const SNAP_TOL: f64 = 1e-6;

/// A uniform grid over a region's bounding box, restricted to the region
/// and with guard disks removed.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSampling {
    pub region: Region2D,
    pub resolution: usize,
    pub exclusions: Vec<(Complex64, f64)>,
}

impl GridSampling {
    pub fn new(region: Region2D, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Invalid(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        Ok(Self {
            region,
            resolution,
            exclusions: Vec::new(),
        })
    }

    /// Skips points strictly closer than `radius` to `center`.
    pub fn exclude(mut self, center: Complex64, radius: f64) -> Self {
        self.exclusions.push((center, radius));
        self
    }

    pub fn points(&self) -> Result<Vec<[f64; 2]>> {
        let (x0, x1, y0, y1) = self.region.bounding_box();
        let n = self.resolution - 1;
        let mut out = Vec::with_capacity(self.resolution * self.resolution);
        for j in 0..=n {
            let y = y0 + (y1 - y0) * j as f64 / n as f64;
            for i in 0..=n {
                let x = x0 + (x1 - x0) * i as f64 / n as f64;
                let p = Complex64::new(x, y);
                if self.region.contains(p)
                    && self.exclusions.iter().all(|(c, r)| (p - c).norm() >= *r)
                {
                    out.push([x, y]);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Invalid("grid retains no sample points".into()));
        }
        Ok(out)
    }
}

/// Residual values over a set of sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualField {
    pub points: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    pub max_abs: f64,
    pub mean_abs: f64,
}

impl ResidualField {
    pub fn new(points: Vec<[f64; 2]>, values: Vec<f64>) -> Self {
        assert_eq!(points.len(), values.len());
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mean_abs = if values.is_empty() {
            0.0
        } else {
            values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64
        };
        Self {
            points,
            values,
            max_abs,
            mean_abs,
        }
    }

    /// Index of the largest residual.
    pub fn worst(&self) -> Option<usize> {
        (0..self.values.len()).max_by(|&a, &b| self.values[a].abs().total_cmp(&self.values[b].abs()))
    }
}

/// Full-precision decimal rendering used for every CSV cell.
pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with header `x,y,r1,r2` for a residual pair on common points.
pub fn residual_pair_csv(r1: &ResidualField, r2: &ResidualField) -> String {
    let mut out = String::from("x,y,r1,r2\n");
    for (k, p) in r1.points.iter().enumerate() {
        let cells = [p[0], p[1], r1.values[k], r2.values[k]].map(csv_number);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// An expression in two real variables together with its first partials,
/// symbolic when possible and by central differences otherwise.
#[derive(Debug, Clone)]
pub(crate) struct Partials {
    expr: Expr,
    vars: [Var; 2],
    symbolic: Option<[Expr; 2]>,
}

impl Partials {
    pub(crate) fn new(expr: &Expr, a: Var, b: Var) -> Self {
        let symbolic = match (expr.diff(a), expr.diff(b)) {
            (Ok(da), Ok(db)) => Some([da, db]),
            _ => None,
        };
        Self {
            expr: expr.clone(),
            vars: [a, b],
            symbolic,
        }
    }

    pub(crate) fn is_symbolic(&self) -> bool {
        self.symbolic.is_some()
    }

    fn env(&self, p: [f64; 2]) -> EvalEnv {
        EvalEnv::empty()
            .with_real(self.vars[0], p[0])
            .with_real(self.vars[1], p[1])
    }

    pub(crate) fn value(&self, p: [f64; 2]) -> Result<Complex64> {
        eval_expr(&self.expr, self.env(p), p)
    }

    pub(crate) fn grad(&self, p: [f64; 2]) -> Result<[Complex64; 2]> {
        match &self.symbolic {
            Some([da, db]) => Ok([
                eval_expr(da, self.env(p), p)?,
                eval_expr(db, self.env(p), p)?,
            ]),
            None => {
                let mut g = [Complex64::new(0.0, 0.0); 2];
                for k in 0..2 {
                    let h = 1e-6 * (1.0 + p[k].abs());
                    let (mut lo, mut hi) = (p, p);
                    lo[k] -= h;
                    hi[k] += h;
                    g[k] = (self.value(hi)? - self.value(lo)?) / (2.0 * h);
                }
                Ok(g)
            }
        }
    }
}

fn eval_expr(e: &Expr, env: EvalEnv, p: [f64; 2]) -> Result<Complex64> {
    e.eval(&env).map_err(Error::eval(Complex64::new(p[0], p[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Mode;

    #[test]
    fn grid_respects_region_and_exclusions() {
        let disk = Region2D::disk(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let g = GridSampling::new(disk, 21).unwrap().exclude(Complex64::new(0.0, 0.0), 0.3);
        let pts = g.points().unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((0.3..=1.0).contains(&r));
        }
        let all = GridSampling::new(Region2D::unit_square(), 5).unwrap();
        assert_eq!(all.points().unwrap().len(), 25);
        assert!(GridSampling::new(Region2D::unit_square(), 1).is_err());
    }

    #[test]
    fn finite_difference_fallback_for_abs() {
        let e = Expr::parse("abs(x+i*y)", Mode::Planar).unwrap();
        let p = Partials::new(&e, Var::X, Var::Y);
        assert!(!p.is_symbolic());
        let g = p.grad([0.6, 0.8]).unwrap();
        assert!((g[0].re - 0.6).abs() < 1e-9 && (g[1].re - 0.8).abs() < 1e-9);
    }

    #[test]
    fn residual_statistics() {
        let r = ResidualField::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![-3.0, 1.0]);
        assert_eq!(r.max_abs, 3.0);
        assert_eq!(r.mean_abs, 2.0);
        assert_eq!(r.worst(), Some(0));
        let csv = residual_pair_csv(&r, &r);
        assert!(csv.starts_with("x,y,r1,r2\n"));
        let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(row, vec![0.0, 0.0, -3.0, -3.0]);
    }
}
