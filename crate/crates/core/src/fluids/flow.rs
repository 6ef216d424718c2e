use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};
use crate::theorems::{run, VerificationReport};

/// Edge of the cube of particles whose deformation estimates the Jacobian.
pub const CUBE_EDGE: f64 = 1e-3;

/// The forward-difference estimate of `dJ/dt` is off by `O(dt)`; `1e-5`
/// keeps that below `1e-4` for unit-size divergences.
pub const DEFAULT_DT: f64 = 1e-5;

pub const DEFAULT_STEPS: usize = 4;

type P3 = [f64; 3];

struct Field<'a>(&'a [Expr; 3]);

impl Field<'_> {
    fn at(&self, p: P3) -> Result<P3> {
        let env = EvalEnv::spatial(p[0], p[1], p[2]);
        let mut out = [0.0; 3];
        for (k, e) in self.0.iter().enumerate() {
            let v = e.eval(&env).map_err(|err| {
                Error::Singular(format!("orbit leaves the domain at ({}, {}, {}): {err}", p[0], p[1], p[2]))
            })?;
            if !v.re.is_finite() {
                return Err(Error::Singular(format!(
                    "orbit leaves the domain at ({}, {}, {})",
                    p[0], p[1], p[2]
                )));
            }
            out[k] = v.re;
        }
        Ok(out)
    }
}

fn axpy(a: f64, x: P3, y: P3) -> P3 {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

/// Position after time `t` in `steps` classic Runge-Kutta steps.
fn orbit(f: &Field, start: P3, t: f64, steps: usize) -> Result<P3> {
    let h = t / steps as f64;
    let mut p = start;
    for _ in 0..steps {
        let k1 = f.at(p)?;
        let k2 = f.at(axpy(h / 2.0, k1, p))?;
        let k3 = f.at(axpy(h / 2.0, k2, p))?;
        let k4 = f.at(axpy(h, k3, p))?;
        for i in 0..3 {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(p)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Volume ratio of the cube around `center` after time `t`, from the
/// finite-difference deformation gradient of its eight corners.
fn cube_jacobian(f: &Field, center: P3, t: f64, steps: usize) -> Result<f64> {
    let mut corners = [[0.0; 3]; 8];
    for (k, c) in corners.iter_mut().enumerate() {
        let mut start = center;
        for a in 0..3 {
            let sign = if k >> a & 1 == 1 { 0.5 } else { -0.5 };
            start[a] += sign * CUBE_EDGE;
        }
        *c = orbit(f, start, t, steps)?;
    }
    // grad[i][a] = d(position_i)/d(start_a), averaged over the four edges
    // parallel to axis a
    let mut grad = [[0.0; 3]; 3];
    for a in 0..3 {
        for k in (0..8).filter(|k| k >> a & 1 == 0) {
            let (lo, hi) = (corners[k], corners[k | 1 << a]);
            for i in 0..3 {
                grad[i][a] += (hi[i] - lo[i]) / (4.0 * CUBE_EDGE);
            }
        }
    }
    Ok(det3(grad))
}

fn spatial(e: &Expr) -> Result<Expr> {
    match e.mode() {
        Mode::Spatial | Mode::Constant => Ok(e.with_mode(Mode::Spatial)?),
        m => Err(Error::Invalid(format!("velocity components must be spatial, got {m}"))),
    }
}

fn validate(dt: f64, steps: usize) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) || steps == 0 {
        return Err(Error::Invalid(format!(
            "need dt > 0 and at least one step, got dt = {dt}, steps = {steps}"
        )));
    }
    Ok(())
}

/// `(J(dt) - 1) / dt` at `point` for the flow of `field`.
pub fn jacobian_rate(field: &[Expr; 3], point: [f64; 3], dt: f64, steps: usize) -> Result<f64> {
    validate(dt, steps)?;
    let field = [spatial(&field[0])?, spatial(&field[1])?, spatial(&field[2])?];
    Ok((cube_jacobian(&Field(&field), point, dt, steps)? - 1.0) / dt)
}

fn divergence_at(field: &[Expr; 3], p: P3) -> Result<f64> {
    let env = EvalEnv::spatial(p[0], p[1], p[2]);
    let mut acc = 0.0;
    for (e, v) in field.iter().zip([Var::X, Var::Y, Var::Z]) {
        acc += e.diff(v)?.eval(&env).map_err(Error::eval(Complex64::new(p[0], p[1])))?.re;
    }
    Ok(acc)
}

/// Compares the rate of change of the flow-map Jacobian at `t = 0` with the
/// divergence of the field at each point. The run is repeated at `dt/2`;
/// when the discretization error dominates rounding, the ratio of the two
/// worst residuals is reported as `halving_ratio` (close to 2).
pub fn flow_jacobian_check(
    field: &[Expr; 3],
    points: &[[f64; 3]],
    dt: f64,
    steps: usize,
    tol: f64,
) -> VerificationReport {
    let inputs = json!({
        "field": field.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "points": points,
        "dt": dt,
        "steps": steps,
    });
    run("flow_jacobian_check", inputs, tol, |b| {
        validate(dt, steps)?;
        if points.is_empty() {
            return Err(Error::Invalid("no sample points".into()));
        }
        let field = [spatial(&field[0])?, spatial(&field[1])?, spatial(&field[2])?];
        let f = Field(&field);
        let (mut rates, mut divs) = (Vec::new(), Vec::new());
        let (mut worst, mut worst_half) = (0.0f64, 0.0f64);
        for p in points {
            let rate = (cube_jacobian(&f, *p, dt, steps)? - 1.0) / dt;
            let half = (cube_jacobian(&f, *p, dt / 2.0, steps)? - 1.0) / (dt / 2.0);
            let div = divergence_at(&field, *p)?;
            worst = worst.max((rate - div).abs());
            worst_half = worst_half.max((half - div).abs());
            rates.push(rate);
            divs.push(div);
        }
        // rounding in the corner differences is about eps / (edge * dt)
        let noise = 100.0 * f64::EPSILON / (CUBE_EDGE * dt);
        let ratio = (worst_half > noise).then(|| worst / worst_half);
        b.sides(rates, divs)
            .check("dJ/dt vs divergence", worst, tol)
            .diag("residual_half_dt", worst_half)
            .diag("halving_ratio", ratio);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(c: [&str; 3]) -> [Expr; 3] {
        c.map(|s| Expr::parse(s, Mode::Spatial).unwrap())
    }

    const POINTS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [0.5, -0.2, 1.0], [1.0, 1.0, 1.0]];

    #[test]
    fn dilation_rate_is_three() {
        let x = field(["x", "y", "z"]);
        let r = flow_jacobian_check(&x, &POINTS, DEFAULT_DT, DEFAULT_STEPS, 1e-4);
        assert!(r.is_pass(), "{r:?}");
        for v in &r.left {
            assert!((v - 3.0).abs() <= 1e-4);
        }
        let ratio = r.diagnostic("halving_ratio").unwrap().as_f64().unwrap();
        assert!((1.7..=2.3).contains(&ratio), "{ratio}");
        // the flow is exactly e^t, so (e^(3 dt) - 1)/dt - 3 = 4.5 dt + ...
        let rate = jacobian_rate(&x, [0.2, 0.3, 0.4], 1e-3, 8).unwrap();
        assert!((rate - ((3e-3f64).exp_m1() / 1e-3)).abs() < 1e-8);
    }

    #[test]
    fn volume_preserving_flows() {
        for c in [["-y", "x", "0"], ["y", "0", "0"]] {
            let r = flow_jacobian_check(&field(c), &POINTS, DEFAULT_DT, DEFAULT_STEPS, 1e-6);
            assert!(r.is_pass(), "{r:?}");
            assert!(r.left.iter().all(|v| v.abs() <= 1e-6));
        }
    }

    #[test]
    fn residual_is_first_order_in_dt() {
        let x = field(["x", "-2*y", "z^2"]);
        let p = [0.3, 0.1, 0.4];
        let div = -1.0 + 0.8;
        let e1 = (jacobian_rate(&x, p, 1e-3, 4).unwrap() - div).abs();
        let e2 = (jacobian_rate(&x, p, 5e-4, 4).unwrap() - div).abs();
        assert!((1.7..=2.3).contains(&(e1 / e2)), "{}", e1 / e2);
    }

    #[test]
    fn escaping_orbit_is_an_error() {
        let x = field(["1/x", "0", "0"]);
        let r = flow_jacobian_check(&x, &[[0.0, 0.0, 0.0]], DEFAULT_DT, DEFAULT_STEPS, 1e-4);
        assert_eq!(r.status, crate::theorems::Status::Error);
        assert!(jacobian_rate(&x, [1.0, 0.0, 0.0], 0.0, 4).is_err());
    }
}
