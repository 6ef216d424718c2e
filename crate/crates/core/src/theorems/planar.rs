use num_complex::Complex64;
use serde_json::json;
use std::f64::consts::TAU;

use super::report::{run, VerificationReport};
use super::{path_json, region_json};
use crate::analysis::{Partials, SNAP_TOL};
use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};
use crate::geometry::{Homotopy, Region2D};
use crate::quad::{
    area_integral_with, composite, contour_integral, line_integral, QuadSpec,
};

fn complex_only(f: &Expr) -> Result<()> {
    match f.mode() {
        Mode::Complex | Mode::Constant => Ok(()),
        m => Err(Error::Invalid(format!("f must be a complex expression, got {m}"))),
    }
}

fn planar_only(e: &Expr, role: &str) -> Result<()> {
    match e.mode() {
        Mode::Planar | Mode::Constant => Ok(()),
        m => Err(Error::Invalid(format!("{role} must be planar, got {m}"))),
    }
}

pub(crate) fn rect_bounds(r: &Region2D) -> Result<(f64, f64, f64, f64)> {
    match r {
        Region2D::Rectangle { x0, x1, y0, y1 } => Ok((*x0, *x1, *y0, *y1)),
        _ => Err(Error::Invalid("this check needs a rectangle".into())),
    }
}

fn eval_z(f: &Expr, z: Complex64) -> Result<Complex64> {
    f.eval(&EvalEnv::complex(z)).map_err(Error::eval(z))
}

/// Integer nearest to `w` when within the snapping tolerance.
fn snap(w: Complex64) -> Option<i64> {
    let n = w.re.round();
    ((w - n).norm() <= SNAP_TOL).then_some(n as i64)
}

/// Compares `int [f(x+iY) - f(x+iy0)] dx` (left) with
/// `i int [f(X+iy) - f(x0+iy)] dy` (right) over a rectangle. Their
/// difference right - left is the boundary integral of `f dz`.
pub fn rectangle_identity(f: &Expr, rect: &Region2D, q: &QuadSpec, tol: f64) -> VerificationReport {
    let inputs = json!({"f": f.to_string(), "rect": region_json(rect), "quad": q});
    run("rectangle_identity", inputs, tol, |b| {
        complex_only(f)?;
        let (x0, x1, y0, y1) = rect_bounds(rect)?;
        q.validate()?;
        let rule = q.line_rule();
        let i = Complex64::i();
        let horizontal = composite(&rule, q.panels, x0, x1, |x| {
            Ok::<_, Error>(eval_z(f, Complex64::new(x, y1))? - eval_z(f, Complex64::new(x, y0))?)
        })?;
        let vertical = composite(&rule, q.panels, y0, y1, |y| {
            Ok::<_, Error>(eval_z(f, Complex64::new(x1, y))? - eval_z(f, Complex64::new(x0, y))?)
        })?;
        let left = horizontal;
        let right = i * vertical;
        let boundary = right - left;
        // real components: with S = re f, T = im f,
        // int dS dx = -int dT dy and int dT dx = int dS dy
        let comp_s = (left.re - right.re).abs();
        let comp_t = (left.im - right.im).abs();
        b.sides(vec![left.re, left.im], vec![right.re, right.im])
            .check("rectangle identity", (left - right).norm(), tol)
            .check("real-part component identity", comp_s, tol)
            .check("imaginary-part component identity", comp_t, tol)
            .diag("boundary_integral", [boundary.re, boundary.im])
            .diag("analytic_syntax", f.is_analytic_syntax());
        if boundary.norm() > tol {
            let w = boundary / Complex64::new(0.0, TAU);
            b.diag("winding_raw", [w.re, w.im]);
            if let Some(n) = snap(w).filter(|n| *n != 0) {
                b.diag("winding", n);
            }
        }
        Ok(())
    })
}

/// Sweeps the blended curves `gamma + eps * W` and compares each integral
/// with the one along `gamma`; also evaluates the derivative identity
/// `int [f'(g) W g' + f(g) W'] dt`, which vanishes because `W` is pinned at
/// both ends.
pub fn homotopy_invariance(
    f: &Expr,
    h: &Homotopy,
    epsilons: &[f64],
    q: &QuadSpec,
    tol: f64,
) -> VerificationReport {
    let inputs = json!({
        "f": f.to_string(),
        "base": path_json(h.base()),
        "target": path_json(h.target()),
        "epsilons": epsilons,
        "quad": q,
    });
    run("homotopy_invariance", inputs, tol, |b| {
        complex_only(f)?;
        q.validate()?;
        if epsilons.is_empty() {
            return Err(Error::Invalid("at least one eps value is required".into()));
        }
        if let Some(&bad) = epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::OutOfRange { value: bad, lo: 0.0, hi: 1.0 });
        }
        let breaks = h.breakpoints();
        let rule = q.line_rule();
        if let Some((t, eps, z)) = find_crossing(f, h, epsilons, &breaks, &rule, q.panels)? {
            b.diag("t", t).diag("eps", eps).diag("point", [z.re, z.im]);
            b.fail(format!("homotopy crosses singularity at t = {t}, eps = {eps}"));
            b.sides(Vec::new(), Vec::new()).check("max |I_eps - I_0|", 0.0, tol);
            return Ok(());
        }

        let derivative = f.diff(Var::Z).ok();
        let mut integrals = Vec::with_capacity(epsilons.len());
        let mut identities = Vec::new();
        let base_integral = sweep_integral(f, h, 0.0, &breaks, &rule, q.panels)?;
        for &eps in epsilons {
            integrals.push(sweep_integral(f, h, eps, &breaks, &rule, q.panels)?);
            if let Some(df) = &derivative {
                let mut acc = Complex64::new(0.0, 0.0);
                for w in breaks.windows(2) {
                    acc += composite(&rule, q.panels, w[0], w[1], |t| {
                        let g = h.at(t, eps)?;
                        let dg = h.tangent(t, eps)?;
                        let disp = h.displacement(t)?;
                        let ddisp = h.displacement_tangent(t)?;
                        Ok::<_, Error>(eval_z(df, g)? * disp * dg + eval_z(f, g)? * ddisp)
                    })?;
                }
                identities.push(acc);
            }
        }
        let spread = integrals
            .iter()
            .map(|v| (v - base_integral).norm())
            .fold(0.0, f64::max);
        b.sides(
            vec![base_integral.re, base_integral.im],
            integrals.iter().flat_map(|v| [v.re, v.im]).collect(),
        )
        .check("max |I_eps - I_0|", spread, tol)
        .diag("epsilons", epsilons)
        .diag("integrals", integrals.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>());
        if derivative.is_some() {
            let worst = identities.iter().map(|v| v.norm()).fold(0.0, f64::max);
            b.check("derivative identity", worst, tol).diag(
                "derivative_identity",
                identities.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>(),
            );
        } else {
            b.diag("derivative_identity", "skipped: f is not differentiable in z");
        }
        Ok(())
    })
}

/// Samples with a larger magnitude count as hitting a singularity.
pub const SINGULAR_MAGNITUDE: f64 = 1e12;

const SCAN_LEVELS: usize = 64;

/// Looks for a singularity swept over by the family: first a `(t, eps)`
/// lattice of samples, then, wherever neighbouring blends disagree, a local
/// maximisation of `|f|` over the strip between them. Returns the offending
/// `(t, eps, point)`.
fn find_crossing(
    f: &Expr,
    h: &Homotopy,
    epsilons: &[f64],
    breaks: &[f64],
    rule: &crate::quad::GaussRule,
    panels: usize,
) -> Result<Option<(f64, f64, Complex64)>> {
    let mut levels: Vec<f64> = (0..=SCAN_LEVELS).map(|j| j as f64 / SCAN_LEVELS as f64).collect();
    levels.extend_from_slice(epsilons);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    for &eps in &levels {
        for k in 0..=SCAN_LEVELS {
            let t = k as f64 / SCAN_LEVELS as f64;
            let z = h.at(t, eps)?;
            if !matches!(eval_z(f, z), Ok(v) if v.norm() <= SINGULAR_MAGNITUDE) {
                return Ok(Some((t, eps, z)));
            }
        }
    }
    let values = levels
        .iter()
        .map(|&e| sweep_integral(f, h, e, breaks, rule, panels))
        .collect::<Result<Vec<_>>>()?;
    for k in 1..levels.len() {
        let jump = (values[k] - values[k - 1]).norm();
        if jump > 1e-6 * (1.0 + values[k - 1].norm()) {
            if let Some(hit) = peak_in_strip(f, h, levels[k - 1], levels[k])? {
                return Ok(Some(hit));
            }
        }
    }
    Ok(None)
}

/// Compass search for the largest `|f|` over `[0, 1] x [lo, hi]`, started
/// from the best sample of a coarse grid. Reports the point only when `|f|`
/// exceeds [`SINGULAR_MAGNITUDE`] or evaluation fails there.
fn peak_in_strip(f: &Expr, h: &Homotopy, lo: f64, hi: f64) -> Result<Option<(f64, f64, Complex64)>> {
    let magnitude = |t: f64, eps: f64| -> Result<f64> {
        let z = h.at(t, eps)?;
        Ok(eval_z(f, z).map(|v| v.norm()).unwrap_or(f64::INFINITY))
    };
    const COARSE_T: usize = 512;
    const COARSE_EPS: usize = 16;
    let mut best = (0.0, lo, -1.0);
    for i in 0..=COARSE_T {
        for j in 0..=COARSE_EPS {
            let t = i as f64 / COARSE_T as f64;
            let eps = lo + (hi - lo) * j as f64 / COARSE_EPS as f64;
            let m = magnitude(t, eps)?;
            if !(m <= best.2) {
                best = (t, eps, m);
            }
        }
    }
    let (mut t, mut eps, mut m) = best;
    let (mut dt, mut de) = (1.0 / COARSE_T as f64, (hi - lo) / COARSE_EPS as f64);
    while m.is_finite() && m <= SINGULAR_MAGNITUDE && (dt > 1e-17 || de > 1e-17) {
        let mut moved = false;
        for (st, se) in [(dt, 0.0), (-dt, 0.0), (0.0, de), (0.0, -de), (dt, de), (-dt, -de), (dt, -de), (-dt, de)] {
            let (nt, ne) = ((t + st).clamp(0.0, 1.0), (eps + se).clamp(lo, hi));
            let nm = magnitude(nt, ne)?;
            if !(nm <= m) {
                (t, eps, m, moved) = (nt, ne, nm, true);
                break;
            }
        }
        if !moved {
            dt *= 0.5;
            de *= 0.5;
        }
    }
    Ok((m > SINGULAR_MAGNITUDE || !m.is_finite()).then(|| (t, eps, h.at(t, eps).expect("inside the family"))))
}

fn sweep_integral(
    f: &Expr,
    h: &Homotopy,
    eps: f64,
    breaks: &[f64],
    rule: &crate::quad::GaussRule,
    panels: usize,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        acc += composite(rule, panels, w[0], w[1], |t| {
            Ok::<_, Error>(eval_z(f, h.at(t, eps)?)? * h.tangent(t, eps)?)
        })?;
    }
    Ok(acc)
}

/// Boundary side `closed-integral P dx + Q dy` against area side
/// `int int (Q_x - P_y)`.
pub fn green_check(p: &Expr, qf: &Expr, r: &Region2D, q: &QuadSpec, tol: f64) -> VerificationReport {
    let inputs = json!({"P": p.to_string(), "Q": qf.to_string(), "region": region_json(r), "quad": q});
    run("green_check", inputs, tol, |b| {
        planar_only(p, "P")?;
        planar_only(qf, "Q")?;
        let (pp, qp) = (p.with_mode(Mode::Planar)?, qf.with_mode(Mode::Planar)?);
        let boundary = line_integral(&pp, &qp, &r.boundary(), q)?;
        let dp = Partials::new(&pp, Var::X, Var::Y);
        let dq = Partials::new(&qp, Var::X, Var::Y);
        let area = area_integral_with(r, q, |x, y| Ok(dq.grad([x, y])?[0] - dp.grad([x, y])?[1]))?;
        b.sides(vec![boundary.re, boundary.im], vec![area.re, area.im])
            .check("green", (boundary - area).norm(), tol)
            .diag("symbolic_partials", dp.is_symbolic() && dq.is_symbolic());
        Ok(())
    })
}

/// `closed-integral f dz` against `-A1 + i A2` with
/// `A1 = int int (v_x + u_y)` and `A2 = int int (u_x - v_y)`.
pub fn cauchy_via_green(f: &Expr, r: &Region2D, q: &QuadSpec, tol: f64) -> VerificationReport {
    let inputs = json!({"f": f.to_string(), "region": region_json(r), "quad": q});
    run("cauchy_via_green", inputs, tol, |b| {
        complex_only(f)?;
        let contour = contour_integral(f, &r.boundary(), q)?;
        let fp = Partials::new(&crate::analysis::planar_of(f)?, Var::X, Var::Y);
        // accumulate A1 in the real part and A2 in the imaginary part
        let areas = area_integral_with(r, q, |x, y| {
            let [fx, fy] = fp.grad([x, y])?;
            Ok(Complex64::new(fx.im + fy.re, fx.re - fy.im))
        })?;
        let (a1, a2) = (areas.re, areas.im);
        let predicted = Complex64::new(-a1, a2);
        b.sides(vec![contour.re, contour.im], vec![predicted.re, predicted.im])
            .check("boundary vs area", (contour - predicted).norm(), tol)
            .diag("contour_integral", [contour.re, contour.im])
            .diag("A1", a1)
            .diag("A2", a2)
            .diag("symbolic_partials", fp.is_symbolic())
            .diag("analytic_syntax", f.is_analytic_syntax());
        if f.is_analytic_syntax() {
            b.check("A1 vanishes", a1.abs(), tol).check("A2 vanishes", a2.abs(), tol);
        }
        Ok(())
    })
}
