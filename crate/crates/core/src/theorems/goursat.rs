use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::HashMap;

use super::planar::rect_bounds;
use super::region_json;
use super::report::{run, ReportBuilder, VerificationReport};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode};
use crate::geometry::{Region2D, Segment};
use crate::quad::{segment_integral_with, GaussRule, QuadSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GoursatOutcome {
    /// Every square met its share of the tolerance.
    Certified,
    /// The failing area stopped shrinking under refinement: the integrand
    /// is not holomorphic on a set of positive area.
    Violation { magnitude: f64 },
    /// Squares still failing at the depth limit; `center` is the worst one.
    DepthExceeded { center: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoursatCertificate {
    /// `[x0, x1, y0, y1]`.
    pub rect: [f64; 4],
    /// Sum of the boundary integrals of the final partition, `[re, im]`.
    pub estimate: [f64; 2],
    /// Sum of `|boundary integral|` over accepted squares.
    pub certified_bound: f64,
    pub max_depth_reached: usize,
    pub squares_examined: usize,
    /// Largest `|sum of children - parent|` where the parent's boundary is
    /// assembled from the children's outer edges.
    pub telescoping_defect: f64,
    /// Largest `|sum of children - parent|` with the parent's own edge
    /// quadrature: a measure of quadrature error, not of cancellation.
    pub refinement_discrepancy: f64,
    /// Center of the square with the largest boundary integral at the last
    /// level that had failures.
    pub worst_center: Option<[f64; 2]>,
    pub outcome: GoursatOutcome,
}

/// Edge key: `(horizontal, i, j)` on the `2^level` lattice. A horizontal
/// edge runs from node `(i, j)` to `(i + 1, j)`, a vertical one from
/// `(i, j)` to `(i, j + 1)`.
type EdgeKey = (bool, u64, u64);

struct Lattice<'a> {
    f: &'a Expr,
    bounds: (f64, f64, f64, f64),
    rule: GaussRule,
    panels: usize,
}

impl Lattice<'_> {
    fn node(&self, n: u64, i: u64, j: u64) -> Complex64 {
        let (x0, x1, y0, y1) = self.bounds;
        let (s, t) = (i as f64 / n as f64, j as f64 / n as f64);
        Complex64::new((1.0 - s) * x0 + s * x1, (1.0 - t) * y0 + t * y1)
    }

    fn edge(
        &self,
        cache: &mut HashMap<EdgeKey, Complex64>,
        n: u64,
        key: EdgeKey,
    ) -> Result<Complex64> {
        if let Some(v) = cache.get(&key) {
            return Ok(*v);
        }
        let (horizontal, i, j) = key;
        let a = self.node(n, i, j);
        let b = if horizontal { self.node(n, i + 1, j) } else { self.node(n, i, j + 1) };
        let f = self.f;
        let v = segment_integral_with(&Segment::line(a, b), &self.rule, self.panels, &mut |z| {
            f.eval(&EvalEnv::complex(z)).map_err(Error::eval(z))
        })?;
        cache.insert(key, v);
        Ok(v)
    }

    /// Counterclockwise boundary integral of square `(i, j)`.
    fn square(&self, cache: &mut HashMap<EdgeKey, Complex64>, n: u64, i: u64, j: u64) -> Result<Complex64> {
        let bottom = self.edge(cache, n, (true, i, j))?;
        let right = self.edge(cache, n, (false, i + 1, j))?;
        let top = self.edge(cache, n, (true, i, j + 1))?;
        let left = self.edge(cache, n, (false, i, j))?;
        Ok(bottom + right - top - left)
    }

    /// Boundary of square `(i, j)` at lattice size `n` assembled from the
    /// eight half-edges of the next level.
    fn outer_from_children(
        &self,
        cache: &mut HashMap<EdgeKey, Complex64>,
        n: u64,
        i: u64,
        j: u64,
    ) -> Result<Complex64> {
        let (m, a, b) = (2 * n, 2 * i, 2 * j);
        let mut e = |k: EdgeKey| self.edge(cache, m, k);
        Ok(e((true, a, b))? + e((true, a + 1, b))? + e((false, a + 2, b))? + e((false, a + 2, b + 1))?
            - e((true, a + 1, b + 2))?
            - e((true, a, b + 2))?
            - e((false, a, b + 1))?
            - e((false, a, b))?)
    }
}

/// Certifies `|closed-integral f dz| <= tol` over a rectangle by recursive
/// quadrisection. A square is accepted once its boundary integral is at most
/// `tol * (its area / total area)`, so accepted contributions add up to at
/// most `tol`. Edges shared by neighbouring squares are integrated once and
/// reused with opposite orientation.
pub fn goursat_certify(
    f: &Expr,
    rect: &Region2D,
    tol: f64,
    max_depth: usize,
    q: &QuadSpec,
) -> Result<GoursatCertificate> {
    if !matches!(f.mode(), Mode::Complex | Mode::Constant) {
        return Err(Error::Invalid("f must be a complex expression".into()));
    }
    if max_depth > 30 {
        return Err(Error::Invalid(format!("max_depth {max_depth} exceeds 30")));
    }
    let bounds = rect_bounds(rect)?;
    q.validate()?;
    let lat = Lattice {
        f,
        bounds,
        rule: q.line_rule(),
        panels: q.panels,
    };
    let total_area = rect.area();
    let square_area = |n: u64| total_area / (n * n) as f64;
    let center = |n: u64, i: u64, j: u64| {
        let c = (lat.node(n, i, j) + lat.node(n, i + 1, j + 1)) / 2.0;
        [c.re, c.im]
    };

    let mut caches: Vec<HashMap<EdgeKey, Complex64>> = vec![HashMap::new()];
    let mut active: Vec<(u64, u64, Complex64)> = Vec::new();
    let v = lat.square(&mut caches[0], 1, 0, 0)?;
    active.push((0, 0, v));
    let mut examined = 1usize;
    let mut accepted_sum = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut defect = 0.0f64;
    let mut discrepancy = 0.0f64;
    let mut failing_history: Vec<f64> = Vec::new();
    let mut level = 0usize;

    loop {
        let n = 1u64 << level;
        let threshold = tol * square_area(n) / total_area;
        // relative floor so cancellation noise in large edge integrals is
        // not mistaken for a nonzero boundary integral
        let mut failing = Vec::new();
        for &(i, j, v) in &active {
            let scale = [(true, i, j), (false, i + 1, j), (true, i, j + 1), (false, i, j)]
                .iter()
                .map(|k| caches[level][k].norm())
                .sum::<f64>();
            if v.norm() <= threshold + 64.0 * f64::EPSILON * scale {
                accepted_sum += v;
                bound += v.norm();
            } else {
                failing.push((i, j, v));
            }
        }
        let failing_sum: Complex64 = failing.iter().map(|s| s.2).sum();
        let estimate = accepted_sum + failing_sum;
        let worst = failing
            .iter()
            .max_by(|a, b| a.2.norm().total_cmp(&b.2.norm()))
            .map(|&(i, j, _)| center(n, i, j));
        let finish = |outcome| GoursatCertificate {
            rect: [bounds.0, bounds.1, bounds.2, bounds.3],
            estimate: [estimate.re, estimate.im],
            certified_bound: bound,
            max_depth_reached: level,
            squares_examined: examined,
            telescoping_defect: defect,
            refinement_discrepancy: discrepancy,
            worst_center: worst,
            outcome,
        };
        if failing.is_empty() {
            return Ok(finish(GoursatOutcome::Certified));
        }
        let failing_area = failing.len() as f64 * square_area(n);
        failing_history.push(failing_area);
        let h = &failing_history;
        if h.len() >= 3 && h[h.len() - 1] >= h[h.len() - 2] * 0.999 && h[h.len() - 2] >= h[h.len() - 3] * 0.999 {
            return Ok(finish(GoursatOutcome::Violation {
                magnitude: estimate.norm(),
            }));
        }
        if level >= max_depth {
            let c = worst.expect("failing squares exist");
            return Ok(finish(GoursatOutcome::DepthExceeded { center: c }));
        }

        // refine every failing square
        caches.push(HashMap::new());
        let (m, next) = (2 * n, level + 1);
        let mut children = Vec::with_capacity(4 * failing.len());
        for &(i, j, parent) in &failing {
            let mut sum = Complex64::new(0.0, 0.0);
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let (ci, cj) = (2 * i + di, 2 * j + dj);
                let v = lat.square(&mut caches[next], m, ci, cj)?;
                sum += v;
                children.push((ci, cj, v));
            }
            examined += 4;
            let outer = lat.outer_from_children(&mut caches[next], n, i, j)?;
            defect = defect.max((sum - outer).norm());
            discrepancy = discrepancy.max((sum - parent).norm());
        }
        caches[level].clear();
        active = children;
        level = next;
    }
}

/// [`goursat_certify`] wrapped as a report.
pub fn goursat_report(f: &Expr, rect: &Region2D, tol: f64, max_depth: usize, q: &QuadSpec) -> VerificationReport {
    let inputs = json!({
        "f": f.to_string(),
        "rect": region_json(rect),
        "tol": tol,
        "max_depth": max_depth,
        "quad": q,
    });
    run("goursat_certify", inputs, tol, |b: &mut ReportBuilder| {
        let cert = goursat_certify(f, rect, tol, max_depth, q)?;
        let defect_allowance = 1e-12 * cert.squares_examined as f64;
        let primary = match &cert.outcome {
            GoursatOutcome::Certified => cert.certified_bound,
            GoursatOutcome::Violation { magnitude } => *magnitude,
            GoursatOutcome::DepthExceeded { center } => {
                b.fail(format!(
                    "max depth {} exceeded; worst square centered at ({}, {})",
                    cert.max_depth_reached, center[0], center[1]
                ));
                cert.certified_bound
            }
        };
        b.sides(cert.estimate.to_vec(), vec![0.0, 0.0])
            .check("certified bound", primary, tol)
            .check("telescoping defect", cert.telescoping_defect, defect_allowance)
            .diag("depth", cert.max_depth_reached)
            .diag("squares_examined", cert.squares_examined);
        if let Some(c) = cert.worst_center {
            b.diag("worst_square_center", c);
        }
        b.diag("certificate", &cert);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::Status;

    fn zexpr(s: &str) -> Expr {
        Expr::parse(s, Mode::Complex).unwrap()
    }

    #[test]
    fn exp_is_certified_quickly() {
        let q = QuadSpec::default();
        let cert = goursat_certify(&zexpr("exp(z)"), &Region2D::unit_square(), 1e-10, 12, &q).unwrap();
        assert_eq!(cert.outcome, GoursatOutcome::Certified);
        assert!(cert.certified_bound <= 1e-10);
        assert!(cert.max_depth_reached <= 4);
        assert!(cert.telescoping_defect <= 1e-13);
    }

    #[test]
    fn conjugate_is_a_violation_of_magnitude_two() {
        let q = QuadSpec::default();
        let cert = goursat_certify(&zexpr("conj(z)"), &Region2D::unit_square(), 1e-8, 12, &q).unwrap();
        match cert.outcome {
            GoursatOutcome::Violation { magnitude } => assert!((magnitude - 2.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(cert.telescoping_defect <= 1e-12 * cert.squares_examined as f64);
        let r = goursat_report(&zexpr("conj(z)"), &Region2D::unit_square(), 1e-8, 12, &q);
        assert_eq!(r.status, Status::Violation);
    }

    #[test]
    fn pole_is_localized() {
        let q = QuadSpec::default();
        let f = zexpr("1/(z-(0.5+0.5*i))");
        let cert = goursat_certify(&f, &Region2D::unit_square(), 1e-10, 12, &q).unwrap();
        let GoursatOutcome::DepthExceeded { center } = cert.outcome else {
            panic!("{:?}", cert.outcome);
        };
        assert_eq!(cert.max_depth_reached, 12);
        let dist = ((center[0] - 0.5).powi(2) + (center[1] - 0.5).powi(2)).sqrt();
        assert!(dist <= 2f64.powi(-12) * 2f64.sqrt());
        assert!(cert.telescoping_defect <= 1e-12 * cert.squares_examined as f64);
        let r = goursat_report(&f, &Region2D::unit_square(), 1e-10, 12, &q);
        assert_eq!(r.status, Status::Error);
    }
}
