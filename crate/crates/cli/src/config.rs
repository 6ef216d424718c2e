//! Job configuration: a JSON document listing checks. Every expression and
//! geometry literal is parsed up front so a bad config fails before any
//! job runs.

use std::path::PathBuf;

use cauchy_core::analysis::{ExactnessVerdict, GridSampling};
use cauchy_core::fluids::PlanarVelocity;
use cauchy_core::geometry::{CurveSegment, Homotopy, Path, Region2D, Segment, Solid3D};
use cauchy_core::theorems::DEFAULT_TOL;
use cauchy_core::{Complex64, Expr, Mode, QuadSpec, Var};
use serde::Deserialize;
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("job {job}: {message}")]
    Job { job: String, message: String },
}

/// Partial quadrature settings; unset fields fall back to the defaults.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadOverride {
    pub nodes_per_panel: Option<usize>,
    pub panels: Option<usize>,
    pub grid: Option<usize>,
}

impl QuadOverride {
    fn over(self, base: QuadSpec) -> QuadSpec {
        QuadSpec {
            nodes_per_panel: self.nodes_per_panel.unwrap_or(base.nodes_per_panel),
            panels: self.panels.unwrap_or(base.panels),
            grid: self.grid.unwrap_or(base.grid),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub tol: Option<f64>,
    #[serde(default)]
    pub quad: QuadOverride,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub csv: Option<PathBuf>,
}

/// One entry of the `jobs` list as written in the file. Parameters other
/// than the common ones are interpreted according to `kind`.
#[derive(Debug, Clone, Deserialize)]
pub struct JobSpec {
    pub name: Option<String>,
    pub kind: String,
    pub tol: Option<f64>,
    #[serde(default)]
    pub quad: QuadOverride,
    #[serde(default)]
    pub output: Output,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub defaults: Defaults,
    pub jobs: Vec<JobSpec>,
}

pub const KINDS: &[&str] = &[
    "rectangle_identity",
    "homotopy_invariance",
    "green_check",
    "cauchy_via_green",
    "goursat_certify",
    "divergence_check",
    "gauss_volume",
    "green_identity_check",
    "contour_integral",
    "cr_residual",
    "primitive_cr_check",
    "exactness_residual",
    "loop_exactness_test",
    "winding_number",
    "conformality_check",
    "potential_velocity",
    "planar_incompressibility",
    "axisym_divergence",
    "material_acceleration",
    "flow_jacobian_check",
    "bernoulli_check",
];

pub const DEFAULT_GOURSAT_DEPTH: usize = 12;
pub const DEFAULT_RESOLUTION: usize = 33;

/// A fully parsed check.
#[derive(Debug, Clone)]
pub enum Task {
    RectangleIdentity { f: Expr, rect: Region2D },
    Homotopy { f: Expr, homotopy: Homotopy, epsilons: Vec<f64> },
    Green { p: Expr, q: Expr, region: Region2D },
    CauchyViaGreen { f: Expr, region: Region2D },
    Goursat { f: Expr, rect: Region2D, max_depth: usize },
    Divergence { field: [Expr; 3], solid: Solid3D },
    GaussVolume { solid: Solid3D },
    GreenIdentity { u: Expr, v: Expr, solid: Solid3D },
    Contour { f: Expr, path: Path, expected: Option<Complex64> },
    CauchyRiemann { f: Option<Expr>, pair: Option<(Expr, Expr)>, grid: GridSampling },
    PrimitiveCr { primitive: Expr, grid: GridSampling },
    Exactness { p: Expr, q: Expr, grid: GridSampling },
    LoopExactness { p: Expr, q: Expr, path: Path, expect: Option<ExactnessVerdict> },
    Winding { path: Path, point: Complex64, expected: Option<i64> },
    Conformality { f: Expr, point: Complex64, dirs: [Complex64; 2] },
    Potential { psi: Expr, grid: GridSampling },
    Incompressibility { velocity: PlanarVelocity, grid: GridSampling },
    Axisym { velocity: PlanarVelocity, grid: GridSampling, guard: f64 },
    Acceleration { velocity: PlanarVelocity, scale: f64, expected: Option<[Expr; 2]>, grid: GridSampling },
    FlowJacobian { field: [Expr; 3], points: Vec<[f64; 3]>, dt: f64, steps: usize },
    Bernoulli { v: Expr, s_max: f64 },
}

#[derive(Debug, Clone)]
pub struct Job {
    pub name: String,
    pub kind: String,
    pub tol: f64,
    pub quad: QuadSpec,
    pub csv: Option<PathBuf>,
    pub task: Task,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parses every job; the first failure aborts.
    pub fn prepare(&self) -> Result<Vec<Job>, ConfigError> {
        let base = self.defaults.quad.over(QuadSpec::default());
        let base_tol = self.defaults.tol.unwrap_or(DEFAULT_TOL);
        self.jobs
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                let name = spec.name.clone().unwrap_or_else(|| format!("{}#{}", spec.kind, k + 1));
                prepare_job(spec, name.clone(), base, base_tol)
                    .map_err(|message| ConfigError::Job { job: name, message })
            })
            .collect()
    }
}

type Parsed<T> = Result<T, String>;

fn prepare_job(spec: &JobSpec, name: String, base: QuadSpec, base_tol: f64) -> Parsed<Job> {
    let quad = spec.quad.over(base);
    quad.validate().map_err(|e| e.to_string())?;
    let tol = spec.tol.unwrap_or(base_tol);
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(format!("tolerance must be finite and non-negative, got {tol}"));
    }
    let mut p = Params::new(&spec.params);
    let task = task(&spec.kind, &mut p)?;
    p.finish()?;
    if spec.output.csv.is_some() && !csv_capable(&task) {
        return Err(format!("kind `{}` has no CSV output", spec.kind));
    }
    Ok(Job {
        name,
        kind: spec.kind.clone(),
        tol,
        quad,
        csv: spec.output.csv.clone(),
        task,
    })
}

fn csv_capable(t: &Task) -> bool {
    matches!(
        t,
        Task::CauchyRiemann { .. }
            | Task::PrimitiveCr { .. }
            | Task::Exactness { .. }
            | Task::Potential { .. }
            | Task::Incompressibility { .. }
            | Task::Axisym { .. }
    )
}

fn task(kind: &str, p: &mut Params) -> Parsed<Task> {
    use Mode::*;
    Ok(match kind {
        "rectangle_identity" => Task::RectangleIdentity { f: p.expr("f", Complex)?, rect: p.rectangle("region")? },
        "homotopy_invariance" => {
            let f = p.expr("f", Complex)?;
            let homotopy = Homotopy::new(p.path("base")?, p.path("target")?).map_err(|e| e.to_string())?;
            let epsilons = match p.opt("epsilons") {
                Some(v) => floats(&v, "epsilons")?,
                None => (0..=10).map(|k| k as f64 / 10.0).collect(),
            };
            Task::Homotopy { f, homotopy, epsilons }
        }
        "green_check" => Task::Green { p: p.expr("P", Planar)?, q: p.expr("Q", Planar)?, region: p.region("region")? },
        "cauchy_via_green" => Task::CauchyViaGreen { f: p.expr("f", Complex)?, region: p.region("region")? },
        "goursat_certify" => Task::Goursat {
            f: p.expr("f", Complex)?,
            rect: p.rectangle("region")?,
            max_depth: p.opt_usize("max_depth")?.unwrap_or(DEFAULT_GOURSAT_DEPTH),
        },
        "divergence_check" => Task::Divergence { field: p.field("field")?, solid: p.solid("solid")? },
        "gauss_volume" => Task::GaussVolume { solid: p.solid("solid")? },
        "green_identity_check" => Task::GreenIdentity {
            u: p.expr("U", Spatial)?,
            v: p.expr("V", Spatial)?,
            solid: p.solid("solid")?,
        },
        "contour_integral" => Task::Contour {
            f: p.expr("f", Complex)?,
            path: p.path("path")?,
            expected: p.opt("expected").map(|v| complex(&v, "expected")).transpose()?,
        },
        "cr_residual" => {
            let f = p.opt("f").map(|v| expr_value(&v, "f", Complex)).transpose()?;
            let u = p.opt("u").map(|v| expr_value(&v, "u", Planar)).transpose()?;
            let v = p.opt("v").map(|v| expr_value(&v, "v", Planar)).transpose()?;
            let pair = match (u, v) {
                (Some(u), Some(v)) => Some((u, v)),
                (None, None) => None,
                _ => return Err("`u` and `v` must be given together".into()),
            };
            if f.is_some() == pair.is_some() {
                return Err("give either `f` or the pair `u`, `v`".into());
            }
            Task::CauchyRiemann { f, pair, grid: p.grid("grid")? }
        }
        "primitive_cr_check" => Task::PrimitiveCr { primitive: p.expr("F", Complex)?, grid: p.grid("grid")? },
        "exactness_residual" => Task::Exactness { p: p.expr("P", Planar)?, q: p.expr("Q", Planar)?, grid: p.grid("grid")? },
        "loop_exactness_test" => Task::LoopExactness {
            p: p.expr("P", Planar)?,
            q: p.expr("Q", Planar)?,
            path: p.path("path")?,
            expect: p.opt("expect").map(|v| verdict(&v)).transpose()?,
        },
        "winding_number" => Task::Winding {
            path: p.path("path")?,
            point: complex(&p.req("point")?, "point")?,
            expected: p.opt("expected").map(|v| v.as_i64().ok_or("`expected` must be an integer")).transpose()?,
        },
        "conformality_check" => {
            let f = p.expr("f", Complex)?;
            let point = complex(&p.req("point")?, "point")?;
            let dirs = match p.req("directions")? {
                Value::Array(d) if d.len() == 2 => [complex(&d[0], "directions")?, complex(&d[1], "directions")?],
                _ => return Err("`directions` must list two complex numbers".into()),
            };
            Task::Conformality { f, point, dirs }
        }
        "potential_velocity" => Task::Potential { psi: p.expr("psi", Complex)?, grid: p.grid("grid")? },
        "planar_incompressibility" => Task::Incompressibility { velocity: p.velocity()?, grid: p.grid("grid")? },
        "axisym_divergence" => Task::Axisym {
            velocity: p.velocity()?,
            grid: p.grid("grid")?,
            guard: p.opt_f64("axis_guard")?.unwrap_or(cauchy_core::fluids::AXIS_GUARD),
        },
        "material_acceleration" => {
            let velocity = p.velocity()?;
            let scale = p.opt_f64("a_scale")?.unwrap_or(1.0);
            let expected = match p.opt("expected") {
                Some(Value::Array(e)) if e.len() == 2 => {
                    Some([expr_value(&e[0], "expected", Meridional)?, expr_value(&e[1], "expected", Meridional)?])
                }
                Some(_) => return Err("`expected` must list two expressions".into()),
                None => None,
            };
            let grid = match p.opt("grid") {
                Some(g) => grid(&g)?,
                None => GridSampling::new(Region2D::unit_square(), 11).map_err(|e| e.to_string())?,
            };
            Task::Acceleration { velocity, scale, expected, grid }
        }
        "flow_jacobian_check" => Task::FlowJacobian {
            field: p.field("field")?,
            points: match p.req("points")? {
                Value::Array(pts) => pts.iter().map(|v| triple(v, "points")).collect::<Parsed<_>>()?,
                _ => return Err("`points` must be a list of [x, y, z]".into()),
            },
            dt: p.opt_f64("dt")?.unwrap_or(cauchy_core::fluids::DEFAULT_DT),
            steps: p.opt_usize("steps")?.unwrap_or(cauchy_core::fluids::DEFAULT_STEPS),
        },
        "bernoulli_check" => Task::Bernoulli {
            v: p.expr("v", Param(Var::S))?,
            s_max: p.f64("s_max")?,
        },
        other => return Err(format!("unknown kind `{other}`; expected one of {}", KINDS.join(", "))),
    })
}

/// Parameter map with use tracking, so misspelled keys are reported.
struct Params<'a> {
    map: &'a Map<String, Value>,
    used: Vec<&'a str>,
}

impl<'a> Params<'a> {
    fn new(map: &'a Map<String, Value>) -> Self {
        Self { map, used: Vec::new() }
    }

    fn opt(&mut self, key: &str) -> Option<Value> {
        let (k, v) = self.map.get_key_value(key)?;
        self.used.push(k);
        Some(v.clone())
    }

    fn req(&mut self, key: &str) -> Parsed<Value> {
        self.opt(key).ok_or_else(|| format!("missing `{key}`"))
    }

    fn expr(&mut self, key: &str, mode: Mode) -> Parsed<Expr> {
        expr_value(&self.req(key)?, key, mode)
    }

    fn f64(&mut self, key: &str) -> Parsed<f64> {
        number(&self.req(key)?, key)
    }

    fn opt_f64(&mut self, key: &str) -> Parsed<Option<f64>> {
        self.opt(key).map(|v| number(&v, key)).transpose()
    }

    fn opt_usize(&mut self, key: &str) -> Parsed<Option<usize>> {
        self.opt(key)
            .map(|v| v.as_u64().map(|n| n as usize).ok_or(format!("`{key}` must be a non-negative integer")))
            .transpose()
    }

    fn region(&mut self, key: &str) -> Parsed<Region2D> {
        region(&self.req(key)?)
    }

    fn rectangle(&mut self, key: &str) -> Parsed<Region2D> {
        match self.region(key)? {
            r @ Region2D::Rectangle { .. } => Ok(r),
            _ => Err(format!("`{key}` must be a rectangle")),
        }
    }

    fn path(&mut self, key: &str) -> Parsed<Path> {
        path(&self.req(key)?)
    }

    fn solid(&mut self, key: &str) -> Parsed<Solid3D> {
        solid(&self.req(key)?)
    }

    fn grid(&mut self, key: &str) -> Parsed<GridSampling> {
        grid(&self.req(key)?)
    }

    fn field(&mut self, key: &str) -> Parsed<[Expr; 3]> {
        match self.req(key)? {
            Value::Array(c) if c.len() == 3 => Ok([
                expr_value(&c[0], key, Mode::Spatial)?,
                expr_value(&c[1], key, Mode::Spatial)?,
                expr_value(&c[2], key, Mode::Spatial)?,
            ]),
            _ => Err(format!("`{key}` must list three expressions")),
        }
    }

    fn velocity(&mut self) -> Parsed<PlanarVelocity> {
        let q = self.expr("q", Mode::Meridional)?;
        let p = self.expr("p", Mode::Meridional)?;
        PlanarVelocity::new(&q, &p).map_err(|e| e.to_string())
    }

    fn finish(self) -> Parsed<()> {
        let mut extra: Vec<&str> = self
            .map
            .keys()
            .map(String::as_str)
            .filter(|k| !self.used.contains(k))
            .collect();
        extra.sort_unstable();
        if extra.is_empty() {
            Ok(())
        } else {
            Err(format!("unexpected parameter(s): {}", extra.join(", ")))
        }
    }
}

fn expr_value(v: &Value, key: &str, mode: Mode) -> Parsed<Expr> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format!("`{key}` must be an expression string")),
    };
    Expr::parse(&text, mode).map_err(|e| format!("`{key}` = {text:?}: {e}"))
}

fn number(v: &Value, key: &str) -> Parsed<f64> {
    v.as_f64().ok_or_else(|| format!("`{key}` must be a number"))
}

fn floats(v: &Value, key: &str) -> Parsed<Vec<f64>> {
    match v {
        Value::Array(a) => a.iter().map(|x| number(x, key)).collect(),
        _ => Err(format!("`{key}` must be a list of numbers")),
    }
}

fn fixed<const N: usize>(v: &Value, key: &str) -> Parsed<[f64; N]> {
    let xs = floats(v, key)?;
    xs.try_into().map_err(|_| format!("`{key}` must have {N} numbers"))
}

fn triple(v: &Value, key: &str) -> Parsed<[f64; 3]> {
    fixed::<3>(v, key)
}

/// `[re, im]` or a plain real number.
pub fn complex(v: &Value, key: &str) -> Parsed<Complex64> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        _ => fixed::<2>(v, key).map(|[re, im]| Complex64::new(re, im)),
    }
}

fn single_key<'v>(v: &'v Value, what: &str) -> Parsed<(&'v str, &'v Value)> {
    match v {
        Value::Object(m) if m.len() == 1 => {
            let (k, inner) = m.iter().next().unwrap_or_else(|| unreachable!());
            Ok((k.as_str(), inner))
        }
        _ => Err(format!("{what} must be an object with a single key")),
    }
}

fn field_of<'v>(v: &'v Value, key: &str, ctx: &str) -> Parsed<&'v Value> {
    v.get(key).ok_or_else(|| format!("{ctx}: missing `{key}`"))
}

fn geometry<T>(r: cauchy_core::Result<T>) -> Parsed<T> {
    r.map_err(|e| e.to_string())
}

/// `{"rectangle": [x0, x1, y0, y1]}`, `{"disk": {"center": [x, y], "radius": r}}`,
/// `{"polygon": [[x, y], ...]}` or
/// `{"x_convex": {"y": [a, b], "left": "x1(y)", "right": "x2(y)"}}`.
pub fn region(v: &Value) -> Parsed<Region2D> {
    let (tag, body) = single_key(v, "region")?;
    match tag {
        "rectangle" => {
            let [x0, x1, y0, y1] = fixed::<4>(body, "rectangle")?;
            geometry(Region2D::rectangle(x0, x1, y0, y1))
        }
        "disk" => geometry(Region2D::disk(
            complex(field_of(body, "center", "disk")?, "center")?,
            number(field_of(body, "radius", "disk")?, "radius")?,
        )),
        "polygon" => match body {
            Value::Array(vs) => geometry(Region2D::polygon(
                vs.iter().map(|p| complex(p, "polygon")).collect::<Parsed<_>>()?,
            )),
            _ => Err("polygon must list vertices".into()),
        },
        "x_convex" => {
            let [y0, y1] = fixed::<2>(field_of(body, "y", "x_convex")?, "y")?;
            let side = |k| expr_value(field_of(body, k, "x_convex")?, k, Mode::Param(Var::Y));
            geometry(Region2D::x_convex(y0, y1, side("left")?, side("right")?))
        }
        other => Err(format!("unknown region `{other}`")),
    }
}

fn segment(v: &Value) -> Parsed<Path> {
    let (tag, body) = single_key(v, "path segment")?;
    match tag {
        "line" => match body {
            Value::Array(e) if e.len() == 2 => Ok(Path::line(complex(&e[0], "line")?, complex(&e[1], "line")?)),
            _ => Err("line must give two endpoints".into()),
        },
        "polyline" => match body {
            Value::Array(vs) => geometry(Path::polyline(
                &vs.iter().map(|p| complex(p, "polyline")).collect::<Parsed<Vec<_>>>()?,
            )),
            _ => Err("polyline must list points".into()),
        },
        "arc" => {
            let [a, b] = fixed::<2>(field_of(body, "angles", "arc")?, "angles")?;
            geometry(Path::arc(
                complex(field_of(body, "center", "arc")?, "center")?,
                number(field_of(body, "radius", "arc")?, "radius")?,
                a,
                b,
            ))
        }
        "circle" => geometry(Path::circle(
            complex(field_of(body, "center", "circle")?, "center")?,
            number(field_of(body, "radius", "circle")?, "radius")?,
        )),
        "curve" => {
            let [t0, t1] = fixed::<2>(field_of(body, "t", "curve")?, "t")?;
            let comp = |k| expr_value(field_of(body, k, "curve")?, k, Mode::Param(Var::T));
            let seg = geometry(CurveSegment::new(comp("x")?, comp("y")?, t0, t1))?;
            geometry(Path::new(vec![Segment::Curve(seg)]))
        }
        "boundary" => Ok(region(body)?.boundary()),
        other => Err(format!("unknown path segment `{other}`")),
    }
}

/// A single segment literal or a list of them joined end to end.
pub fn path(v: &Value) -> Parsed<Path> {
    match v {
        Value::Array(parts) => {
            let mut it = parts.iter();
            let first = it.next().ok_or("path must have at least one segment")?;
            let mut acc = segment(first)?;
            for part in it {
                acc = geometry(acc.concat(&segment(part)?))?;
            }
            Ok(acc)
        }
        _ => segment(v),
    }
}

/// `{"box": {"lo": [..], "hi": [..]}}` or
/// `{"graph": {"base": region, "lower": "z2(x,y)", "upper": "z1(x,y)"}}`.
pub fn solid(v: &Value) -> Parsed<Solid3D> {
    let (tag, body) = single_key(v, "solid")?;
    match tag {
        "box" => geometry(Solid3D::cuboid(
            triple(field_of(body, "lo", "box")?, "lo")?,
            triple(field_of(body, "hi", "box")?, "hi")?,
        )),
        "graph" => {
            let bound = |k| expr_value(field_of(body, k, "graph")?, k, Mode::Planar);
            geometry(Solid3D::graph(region(field_of(body, "base", "graph")?)?, bound("lower")?, bound("upper")?))
        }
        other => Err(format!("unknown solid `{other}`")),
    }
}

/// `{"region": .., "resolution": n, "exclude": [{"center": [x, y], "radius": r}]}`.
pub fn grid(v: &Value) -> Parsed<GridSampling> {
    let r = region(field_of(v, "region", "grid")?)?;
    let n = match v.get("resolution") {
        Some(n) => n.as_u64().ok_or("grid resolution must be an integer")? as usize,
        None => DEFAULT_RESOLUTION,
    };
    let mut g = geometry(GridSampling::new(r, n))?;
    if let Some(ex) = v.get("exclude") {
        let Value::Array(ex) = ex else {
            return Err("grid `exclude` must be a list".into());
        };
        for e in ex {
            g = g.exclude(
                complex(field_of(e, "center", "exclusion")?, "center")?,
                number(field_of(e, "radius", "exclusion")?, "radius")?,
            );
        }
    }
    if let Value::Object(m) = v {
        if let Some(k) = m.keys().find(|k| !["region", "resolution", "exclude"].contains(&k.as_str())) {
            return Err(format!("grid: unexpected key `{k}`"));
        }
    }
    Ok(g)
}

fn verdict(v: &Value) -> Parsed<ExactnessVerdict> {
    match v.as_str() {
        Some("non-exact despite closedness") => Ok(ExactnessVerdict::NonExactDespiteClosedness),
        Some("exact-consistent") => Ok(ExactnessVerdict::ExactConsistent),
        Some("not closed") => Ok(ExactnessVerdict::NotClosed),
        _ => Err(format!("unknown verdict {v}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn geometry_literals() {
        assert_eq!(region(&json!({"rectangle": [0, 1, 0, 2]})).unwrap().area(), 2.0);
        let d = region(&json!({"disk": {"center": [1, 0], "radius": 2}})).unwrap();
        assert!((d.area() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        let p = path(&json!([{"line": [[0, 0], [1, 0]]}, {"line": [[1, 0], [1, 1]]}])).unwrap();
        assert_eq!(p.end(), Complex64::new(1.0, 1.0));
        assert!(path(&json!({"circle": {"center": [0, 0], "radius": 1}})).unwrap().is_closed());
        assert!(path(&json!([{"line": [[0, 0], [1, 0]]}, {"line": [[2, 0], [1, 1]]}])).is_err());
        let c = path(&json!({"curve": {"x": "t", "y": "t^2", "t": [0, 1]}})).unwrap();
        assert_eq!(c.end(), Complex64::new(1.0, 1.0));
        assert!(solid(&json!({"box": {"lo": [0, 0, 0], "hi": [1, 1, 1]}})).is_ok());
        assert!(solid(&json!({"ball": {}})).is_err());
        let g = grid(&json!({"region": {"rectangle": [-1, 1, -1, 1]}, "resolution": 5,
                             "exclude": [{"center": [0, 0], "radius": 0.1}]})).unwrap();
        assert_eq!(g.points().unwrap().len(), 24);
    }

    #[test]
    fn jobs_are_validated_up_front() {
        let ok = r#"{"jobs": [{"kind": "rectangle_identity", "f": "exp(z)", "region": {"rectangle": [0,1,0,1]}}]}"#;
        let jobs = JobConfig::from_json(ok).unwrap().prepare().unwrap();
        assert_eq!(jobs[0].name, "rectangle_identity#1");
        assert_eq!(jobs[0].tol, DEFAULT_TOL);

        for bad in [
            r#"{"jobs": [{"kind": "rectangle_identity", "f": "exp(", "region": {"rectangle": [0,1,0,1]}}]}"#,
            r#"{"jobs": [{"kind": "rectangle_identity", "f": "x", "region": {"rectangle": [0,1,0,1]}}]}"#,
            r#"{"jobs": [{"kind": "rectangle_identity", "f": "z", "region": {"disk": {"center": [0,0], "radius": 1}}}]}"#,
            r#"{"jobs": [{"kind": "rectangle_identity", "f": "z", "regoin": {"rectangle": [0,1,0,1]}}]}"#,
            r#"{"jobs": [{"kind": "no_such_check"}]}"#,
            r#"{"jobs": [{"kind": "gauss_volume", "solid": {"box": {"lo": [0,0,0], "hi": [1,1,1]}}, "tol": -1}]}"#,
            r#"{"jobs": [{"kind": "gauss_volume", "solid": {"box": {"lo": [0,0,0], "hi": [1,1,1]}}, "output": {"csv": "x.csv"}}]}"#,
        ] {
            assert!(JobConfig::from_json(bad).unwrap().prepare().is_err(), "{bad}");
        }
    }

    #[test]
    fn overrides_merge_with_defaults() {
        let text = r#"{"defaults": {"tol": 1e-6, "quad": {"panels": 4}},
            "jobs": [{"kind": "gauss_volume", "solid": {"box": {"lo": [0,0,0], "hi": [1,1,1]}},
                      "quad": {"nodes_per_panel": 8}}]}"#;
        let job = &JobConfig::from_json(text).unwrap().prepare().unwrap()[0];
        assert_eq!(job.tol, 1e-6);
        assert_eq!((job.quad.nodes_per_panel, job.quad.panels, job.quad.grid), (8, 4, 64));
    }
}
