use std::path::PathBuf;
use std::process::ExitCode;

use cauchy_cli::{explain_summary, run_jobs, summary_json, JobConfig, RunOptions, RunSummary};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

/// Numerical checks of the Cauchy-Riemann, Cauchy, Green and divergence
/// identities and of potential-flow relations.
///
/// Geometry arguments are JSON literals, e.g.
/// `{"rectangle": [0, 1, 0, 1]}`, `{"circle": {"center": [0, 0], "radius": 1}}`
/// or `[{"line": [[0, 0], [1, 0]]}, {"line": [[1, 0], [1, 1]]}]`.
#[derive(Parser)]
#[command(name = "cauchy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep wall-clock timings (makes output differ between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    /// Residual CSV for the field-valued checks.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GridArgs {
    /// Region literal to sample.
    #[arg(long)]
    region: String,
    #[arg(long)]
    resolution: Option<usize>,
    /// JSON list of `{"center": [x, y], "radius": r}` disks to skip.
    #[arg(long)]
    exclude: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every job of a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Contour integral of f along a path.
    Integrate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        path: String,
        /// Expected value as `[re, im]`.
        #[arg(long)]
        expected: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Cauchy-Riemann residuals of f over a grid.
    CheckCr {
        #[arg(long)]
        f: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Green's formula for P dx + Q dy, or Cauchy's theorem via Green for f.
    Green {
        #[arg(long = "P", conflicts_with = "f", requires = "q_form")]
        p_form: Option<String>,
        #[arg(long = "Q", requires = "p_form")]
        q_form: Option<String>,
        #[arg(long, required_unless_present = "p_form")]
        f: Option<String>,
        #[arg(long)]
        region: String,
        #[command(flatten)]
        common: Common,
    },
    /// Rectangle identity for f.
    Rectangle {
        #[arg(long)]
        f: String,
        #[arg(long)]
        region: String,
        #[command(flatten)]
        common: Common,
    },
    /// Goursat certification by recursive quadrisection.
    Goursat {
        #[arg(long)]
        f: String,
        #[arg(long)]
        region: String,
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Flux of a 3D field against the volume integral of its divergence.
    Divergence {
        /// JSON list of three expressions.
        #[arg(long)]
        field: String,
        #[arg(long)]
        solid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Volume directly and as a boundary integral.
    GaussVolume {
        #[arg(long)]
        solid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Path-independence under the blend of two paths.
    Homotopy {
        #[arg(long)]
        f: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        target: String,
        /// JSON list of blend parameters.
        #[arg(long)]
        eps: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Velocity from a complex potential psi and its closedness residuals.
    FluidPotential {
        #[arg(long)]
        psi: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Planar incompressibility q_x + p_z.
    FluidIncompressibility {
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Axisymmetric divergence q_x + p_z + p/z.
    FluidAxisym {
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        axis_guard: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Material acceleration of a steady meridional flow.
    FluidAcceleration {
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        a_scale: Option<f64>,
        /// JSON list of the two expected components.
        #[arg(long)]
        expected: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Rate of change of the flow-map Jacobian against the divergence.
    FluidJacobian {
        #[arg(long)]
        field: String,
        /// JSON list of [x, y, z] points.
        #[arg(long)]
        points: String,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Streamline pressure drop against the speed change.
    FluidBernoulli {
        #[arg(long)]
        v: String,
        #[arg(long)]
        s_max: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn literal(flag: &str, text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("--{flag}: not a JSON literal: {e}"))
}

fn grid_value(g: &GridArgs) -> Result<Value, String> {
    let mut m = Map::new();
    m.insert("region".into(), literal("region", &g.region)?);
    if let Some(n) = g.resolution {
        m.insert("resolution".into(), json!(n));
    }
    if let Some(ex) = &g.exclude {
        m.insert("exclude".into(), literal("exclude", ex)?);
    }
    Ok(Value::Object(m))
}

/// A one-job config equivalent to the subcommand.
fn single_job(kind: &str, params: Value, common: &Common) -> Result<Value, String> {
    let mut job = match params {
        Value::Object(m) => m,
        _ => unreachable!("job parameters are built as objects"),
    };
    job.insert("kind".into(), json!(kind));
    if let Some(t) = common.tol {
        job.insert("tol".into(), json!(t));
    }
    let mut quad = Map::new();
    for (k, v) in [("nodes_per_panel", common.nodes), ("panels", common.panels), ("grid", common.grid)] {
        if let Some(v) = v {
            quad.insert(k.into(), json!(v));
        }
    }
    job.insert("quad".into(), Value::Object(quad));
    if let Some(csv) = &common.csv {
        job.insert("output".into(), json!({"csv": csv}));
    }
    Ok(json!({"jobs": [job]}))
}

fn insert_opt(params: &mut Value, key: &str, v: Option<Value>) {
    if let (Some(v), Value::Object(m)) = (v, params) {
        m.insert(key.into(), v);
    }
}

fn plan(command: Command) -> Result<(Value, Output), String> {
    let (kind, mut params, common) = match command {
        Command::Run { config, output } => {
            let text = std::fs::read_to_string(&config).map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            return Ok((literal("config", &text)?, output));
        }
        Command::Integrate { f, path, expected, common } => {
            let mut p = json!({"f": f, "path": literal("path", &path)?});
            insert_opt(&mut p, "expected", expected.map(|e| literal("expected", &e)).transpose()?);
            ("contour_integral", p, common)
        }
        Command::CheckCr { f, grid, common } => ("cr_residual", json!({"f": f, "grid": grid_value(&grid)?}), common),
        Command::Green { p_form, q_form, f, region, common } => {
            let region = literal("region", &region)?;
            match f {
                Some(f) => ("cauchy_via_green", json!({"f": f, "region": region}), common),
                None => ("green_check", json!({"P": p_form, "Q": q_form, "region": region}), common),
            }
        }
        Command::Rectangle { f, region, common } => {
            ("rectangle_identity", json!({"f": f, "region": literal("region", &region)?}), common)
        }
        Command::Goursat { f, region, max_depth, common } => {
            let mut p = json!({"f": f, "region": literal("region", &region)?});
            insert_opt(&mut p, "max_depth", max_depth.map(|d| json!(d)));
            ("goursat_certify", p, common)
        }
        Command::Divergence { field, solid, common } => (
            "divergence_check",
            json!({"field": literal("field", &field)?, "solid": literal("solid", &solid)?}),
            common,
        ),
        Command::GaussVolume { solid, common } => ("gauss_volume", json!({"solid": literal("solid", &solid)?}), common),
        Command::Homotopy { f, base, target, eps, common } => {
            let mut p = json!({"f": f, "base": literal("base", &base)?, "target": literal("target", &target)?});
            insert_opt(&mut p, "epsilons", eps.map(|e| literal("eps", &e)).transpose()?);
            ("homotopy_invariance", p, common)
        }
        Command::FluidPotential { psi, grid, common } => {
            ("potential_velocity", json!({"psi": psi, "grid": grid_value(&grid)?}), common)
        }
        Command::FluidIncompressibility { q, p, grid, common } => {
            ("planar_incompressibility", json!({"q": q, "p": p, "grid": grid_value(&grid)?}), common)
        }
        Command::FluidAxisym { q, p, axis_guard, grid, common } => {
            let mut params = json!({"q": q, "p": p, "grid": grid_value(&grid)?});
            insert_opt(&mut params, "axis_guard", axis_guard.map(|g| json!(g)));
            ("axisym_divergence", params, common)
        }
        Command::FluidAcceleration { q, p, a_scale, expected, common } => {
            let mut params = json!({"q": q, "p": p});
            insert_opt(&mut params, "a_scale", a_scale.map(|a| json!(a)));
            insert_opt(&mut params, "expected", expected.map(|e| literal("expected", &e)).transpose()?);
            ("material_acceleration", params, common)
        }
        Command::FluidJacobian { field, points, dt, steps, common } => {
            let mut params = json!({"field": literal("field", &field)?, "points": literal("points", &points)?});
            insert_opt(&mut params, "dt", dt.map(|d| json!(d)));
            insert_opt(&mut params, "steps", steps.map(|s| json!(s)));
            ("flow_jacobian_check", params, common)
        }
        Command::FluidBernoulli { v, s_max, common } => ("bernoulli_check", json!({"v": v, "s_max": s_max}), common),
    };
    let config = single_job(kind, std::mem::take(&mut params), &common)?;
    Ok((config, common.output))
}

fn render(summary: &RunSummary, format: Format) -> String {
    match format {
        Format::Json => summary_json(summary),
        Format::Text => explain_summary(summary),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, output) = match plan(cli.command) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let jobs = match serde_json::from_value::<JobConfig>(config)
        .map_err(cauchy_cli::ConfigError::from)
        .and_then(|c| c.prepare())
    {
        Ok(jobs) => jobs,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let summary = run_jobs(&jobs, RunOptions { timings: output.timings });
    let text = render(&summary, output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(summary.exit_code() as u8)
}
