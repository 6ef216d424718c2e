//! Steady fluid flows in a meridian half-plane with coordinates `(x, z)`:
//! velocities from a complex potential, incompressibility residuals (planar
//! and axisymmetric), material acceleration, flow-map Jacobians and the
//! streamline Bernoulli relation. Density is taken to be 1 throughout.

mod bernoulli;
mod flow;

use num_complex::Complex64;
use serde_json::json;

use crate::analysis::{csv_number, GridSampling, Partials, ResidualField};
use crate::error::{Error, Result};
use crate::expr::{BinOp, EvalEnv, Expr, Func, Mode, Node, Var};
use crate::theorems::{run, VerificationReport};

pub use bernoulli::{bernoulli_check, stagnation_point};
pub use flow::{flow_jacobian_check, jacobian_rate, CUBE_EDGE, DEFAULT_DT, DEFAULT_STEPS};

/// Default half-width of the band around the symmetry axis `z = 0` that
/// axisymmetric residuals never sample.
pub const AXIS_GUARD: f64 = 0.05;

/// Relative tolerance of the check that the meridional divergence is the
/// divergence of the rotated 3D field.
pub const REDUCTION_TOL: f64 = 1e-10;

/// Velocity `(q, p)` in the meridian plane; `q` along `x`, `p` along `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarVelocity {
    pub q: Expr,
    pub p: Expr,
}

fn meridional(e: &Expr, role: &str) -> Result<Expr> {
    match e.mode() {
        Mode::Meridional | Mode::Constant => Ok(e.with_mode(Mode::Meridional)?),
        m => Err(Error::Invalid(format!("{role} must be a function of x and z, got {m}"))),
    }
}

impl PlanarVelocity {
    pub fn new(q: &Expr, p: &Expr) -> Result<Self> {
        Ok(Self {
            q: meridional(q, "q")?,
            p: meridional(p, "p")?,
        })
    }

    pub fn parse(q: &str, p: &str) -> Result<Self> {
        Ok(Self {
            q: Expr::parse(q, Mode::Meridional)?,
            p: Expr::parse(p, Mode::Meridional)?,
        })
    }

    /// The velocity with `q - i p = w(x + i z)`.
    pub fn from_complex(w: &Expr) -> Result<Self> {
        let w = match w.mode() {
            Mode::Complex => w.to_meridional(),
            Mode::Constant => w.with_mode(Mode::Meridional)?,
            m => return Err(Error::Invalid(format!("expected a complex expression, got {m}"))),
        };
        let re = Node::call(Func::Re, w.root().clone());
        let im = Node::call(Func::Im, w.root().clone());
        Ok(Self {
            q: Expr::new(Mode::Meridional, re)?,
            p: Expr::new(Mode::Meridional, Node::Neg(Box::new(im)))?,
        })
    }

    pub fn at(&self, x: f64, z: f64) -> Result<[f64; 2]> {
        let env = EvalEnv::meridional(x, z);
        let mut out = [0.0; 2];
        for (k, e) in [&self.q, &self.p].into_iter().enumerate() {
            out[k] = e.eval(&env).map_err(Error::eval(Complex64::new(x, z)))?.re;
        }
        Ok(out)
    }

    fn partials(&self) -> (Partials, Partials) {
        (
            Partials::new(&self.q, Var::X, Var::Z),
            Partials::new(&self.p, Var::X, Var::Z),
        )
    }
}

/// Velocity from a complex potential together with the closedness residuals
/// of `M dx + N dz` (`M_z - N_x`) and `N dx - M dz` (`N_z + M_x`).
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFlow {
    pub velocity: PlanarVelocity,
    pub closedness: (ResidualField, ResidualField),
}

/// `M = re psi(x + i z)`, `N = -im psi(x + i z)`.
///
/// A general pair of functions of `z` and of its conjugate gives complex
/// components; taking the second to be the reflection of the first is what
/// makes the velocity real, so only `psi` is accepted.
pub fn potential_velocity(psi: &Expr, grid: &GridSampling) -> Result<PotentialFlow> {
    if psi.mode() == Mode::Complex && !psi.is_analytic_syntax() {
        return Err(Error::Invalid(format!("potential `{psi}` is not analytic")));
    }
    let velocity = PlanarVelocity::from_complex(psi)?;
    let (dm, dn) = velocity.partials();
    let points = grid.points()?;
    let (mut r1, mut r2) = (Vec::with_capacity(points.len()), Vec::with_capacity(points.len()));
    for pt in &points {
        let [mx, mz] = dm.grad(*pt)?;
        let [nx, nz] = dn.grad(*pt)?;
        r1.push(mz.re - nx.re);
        r2.push(nz.re + mx.re);
    }
    Ok(PotentialFlow {
        velocity,
        closedness: (
            ResidualField::new(points.clone(), r1),
            ResidualField::new(points, r2),
        ),
    })
}

/// `q_x + p_z` over the grid (second grid coordinate read as `z`).
pub fn planar_incompressibility(v: &PlanarVelocity, grid: &GridSampling) -> Result<ResidualField> {
    let (dq, dp) = v.partials();
    let points = grid.points()?;
    let mut values = Vec::with_capacity(points.len());
    for pt in &points {
        values.push(dq.grad(*pt)?[0].re + dp.grad(*pt)?[1].re);
    }
    Ok(ResidualField::new(points, values))
}

/// Meridional divergence `q_x + p_z + p/z` and the accompanying check
/// against the divergence of the rotated 3D field.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymDivergence {
    pub residual: ResidualField,
    /// Largest scaled disagreement between the 3D divergence and the
    /// meridional formula at rotated sample points.
    pub reduction_residual: f64,
}

fn sq(n: Node) -> Node {
    Node::binary(BinOp::Pow, n, Node::num(2.0))
}

/// Rotates `(q, p)` about the `x` axis: with `r = sqrt(y^2 + z^2)` the 3D
/// field is `(q(x, r), p(x, r) y/r, p(x, r) z/r)`.
pub fn rotate_to_spatial(v: &PlanarVelocity) -> Result<[Expr; 3]> {
    let r = Node::call(
        Func::Sqrt,
        Node::binary(BinOp::Add, sq(Node::Var(Var::Y)), sq(Node::Var(Var::Z))),
    );
    let q = v.q.substitute(Var::Z, &r, Mode::Spatial)?;
    let p = v.p.substitute(Var::Z, &r, Mode::Spatial)?;
    let along = |axis: Var| {
        Node::binary(
            BinOp::Div,
            Node::binary(BinOp::Mul, p.root().clone(), Node::Var(axis)),
            r.clone(),
        )
    };
    Ok([q, Expr::new(Mode::Spatial, along(Var::Y))?, Expr::new(Mode::Spatial, along(Var::Z))?])
}

/// Residual `q_x + p_z + p/z` on the grid points with `z > guard`.
pub fn axisym_divergence(v: &PlanarVelocity, grid: &GridSampling, guard: f64) -> Result<AxisymDivergence> {
    if !(guard > 0.0 && guard.is_finite()) {
        return Err(Error::Invalid(format!("axis guard must be positive, got {guard}")));
    }
    let points: Vec<[f64; 2]> = grid.points()?.into_iter().filter(|pt| pt[1] > guard).collect();
    if points.is_empty() {
        return Err(Error::Singular(format!(
            "every sample lies within {guard} of the axis"
        )));
    }
    let (dq, dp) = v.partials();
    let field = rotate_to_spatial(v)?;
    let div3 = [field[0].diff(Var::X)?, field[1].diff(Var::Y)?, field[2].diff(Var::Z)?];

    let mut values = Vec::with_capacity(points.len());
    let mut reduction = 0.0f64;
    for (k, pt) in points.iter().enumerate() {
        let qx = dq.grad(*pt)?[0].re;
        let pz = dp.grad(*pt)?[1].re;
        let hoop = v.at(pt[0], pt[1])?[1] / pt[1];
        let meridional = qx + pz + hoop;
        values.push(meridional);

        // rotate the sample off the y = 0 plane
        let angle = 0.3 + 0.7 * (k % 4) as f64;
        let (y, z) = (pt[1] * angle.sin(), pt[1] * angle.cos());
        let env = EvalEnv::spatial(pt[0], y, z);
        let mut spatial = 0.0;
        for d in &div3 {
            spatial += d.eval(&env).map_err(Error::eval(Complex64::new(pt[0], pt[1])))?.re;
        }
        let scale = 1.0 + qx.abs() + pz.abs() + hoop.abs();
        reduction = reduction.max((spatial - meridional).abs() / scale);
    }
    Ok(AxisymDivergence {
        residual: ResidualField::new(points, values),
        reduction_residual: reduction,
    })
}

/// `a^2 (q q_x + p q_z, q p_x + p p_z)`, the acceleration of a fluid particle
/// in the steady flow `(q, p)` with velocity scale `a`.
pub fn material_acceleration(v: &PlanarVelocity, a_scale: f64) -> Result<(Expr, Expr)> {
    let scale = Node::num(a_scale * a_scale);
    let (q, p) = (v.q.root().clone(), v.p.root().clone());
    let convect = |e: &Expr| -> Result<Expr> {
        let (ex, ez) = (e.diff(Var::X)?, e.diff(Var::Z)?);
        let sum = Node::binary(
            BinOp::Add,
            Node::binary(BinOp::Mul, q.clone(), ex.root().clone()),
            Node::binary(BinOp::Mul, p.clone(), ez.root().clone()),
        );
        Ok(Expr::new(Mode::Meridional, Node::binary(BinOp::Mul, scale.clone(), sum))?)
    };
    Ok((convect(&v.q)?, convect(&v.p)?))
}

/// CSV with header `x,z,q,p,residual`.
pub fn velocity_csv(v: &PlanarVelocity, residual: &ResidualField) -> Result<String> {
    let mut out = String::from("x,z,q,p,residual\n");
    for (pt, r) in residual.points.iter().zip(&residual.values) {
        let [q, p] = v.at(pt[0], pt[1])?;
        out.push_str(&[pt[0], pt[1], q, p, *r].map(csv_number).join(","));
        out.push('\n');
    }
    Ok(out)
}

fn velocity_json(v: &PlanarVelocity) -> serde_json::Value {
    json!({"q": v.q.to_string(), "p": v.p.to_string()})
}

fn field_summary(r: &ResidualField) -> serde_json::Value {
    let worst = r.worst().map(|k| r.points[k]);
    json!({"samples": r.points.len(), "max_abs": r.max_abs, "mean_abs": r.mean_abs, "worst_point": worst})
}

/// Report form of [`potential_velocity`]; both closedness residuals and the
/// incompressibility of the resulting velocity must vanish.
pub fn potential_report(psi: &Expr, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"psi": psi.to_string(), "resolution": grid.resolution});
    run("potential_velocity", inputs, tol, |b| {
        let flow = potential_velocity(psi, grid)?;
        let div = planar_incompressibility(&flow.velocity, grid)?;
        let (c1, c2) = &flow.closedness;
        b.sides(vec![c1.max_abs, c2.max_abs], vec![0.0, 0.0])
            .check("closedness of M dx + N dz", c1.max_abs, tol)
            .check("closedness of N dx - M dz", c2.max_abs, tol)
            .check("incompressibility", div.max_abs, tol)
            .diag("velocity", velocity_json(&flow.velocity))
            .diag("closedness", [field_summary(c1), field_summary(c2)]);
        Ok(())
    })
}

pub fn incompressibility_report(v: &PlanarVelocity, grid: &GridSampling, tol: f64) -> VerificationReport {
    let inputs = json!({"velocity": velocity_json(v), "resolution": grid.resolution});
    run("planar_incompressibility", inputs, tol, |b| {
        let r = planar_incompressibility(v, grid)?;
        b.sides(vec![r.max_abs], vec![0.0])
            .check("q_x + p_z", r.max_abs, tol)
            .diag("field", field_summary(&r));
        Ok(())
    })
}

pub fn axisym_report(v: &PlanarVelocity, grid: &GridSampling, guard: f64, tol: f64) -> VerificationReport {
    let inputs = json!({"velocity": velocity_json(v), "resolution": grid.resolution, "axis_guard": guard});
    run("axisym_divergence", inputs, tol, |b| {
        let r = axisym_divergence(v, grid, guard)?;
        b.sides(vec![r.residual.max_abs], vec![0.0])
            .check("q_x + p_z + p/z", r.residual.max_abs, tol)
            .check("3D reduction", r.reduction_residual, REDUCTION_TOL)
            .diag("field", field_summary(&r.residual));
        Ok(())
    })
}

/// Report form of [`material_acceleration`]. With `expected` components
/// the residual is their largest deviation over the grid; without, the
/// report only carries the symbolic result.
pub fn acceleration_report(
    v: &PlanarVelocity,
    a_scale: f64,
    expected: Option<&[Expr; 2]>,
    grid: &GridSampling,
    tol: f64,
) -> VerificationReport {
    let inputs = json!({"velocity": velocity_json(v), "a_scale": a_scale});
    run("material_acceleration", inputs, tol, |b| {
        let (ax, az) = material_acceleration(v, a_scale)?;
        let mut worst = [0.0f64; 2];
        if let Some(want) = expected {
            for pt in grid.points()? {
                let env = EvalEnv::meridional(pt[0], pt[1]);
                let at = Complex64::new(pt[0], pt[1]);
                for (k, (got, want)) in [(&ax, &want[0]), (&az, &want[1])].into_iter().enumerate() {
                    let g = got.eval(&env).map_err(Error::eval(at))?;
                    let w = want.eval(&env).map_err(Error::eval(at))?;
                    worst[k] = worst[k].max((g - w).norm());
                }
            }
        }
        b.sides(worst.to_vec(), vec![0.0, 0.0])
            .check("acceleration vs expected", worst[0].max(worst[1]), tol)
            .diag("acceleration", [ax.to_string(), az.to_string()])
            .diag("expected_given", expected.is_some());
        Ok(())
    })
}
