use std::path::PathBuf;
use std::time::Instant;

use cauchy_core::analysis::{
    csv_number, cr_residual, cr_residual_pair, exactness_residual, primitive_cr_check, residual_pair_csv,
    ResidualField,
};
use cauchy_core::fluids::{
    acceleration_report, axisym_divergence, axisym_report, bernoulli_check, flow_jacobian_check, incompressibility_report,
    planar_incompressibility, potential_report, potential_velocity, velocity_csv,
};
use cauchy_core::theorems::{
    cauchy_via_green, conformality_report, contour_report, cr_pair_report, cr_report, divergence_check,
    exactness_report, gauss_volume, goursat_report, green_check, green_identity_check, homotopy_invariance,
    loop_exactness_report, primitive_cr_report, rectangle_identity, winding_report,
};
use cauchy_core::{Status, VerificationReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Job, Task};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub violation: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub reports: Vec<VerificationReport>,
    pub counts: Counts,
    pub runtime_ms: f64,
}

impl RunSummary {
    /// 0 when everything passes, 1 for violations only, 2 on any error.
    pub fn exit_code(&self) -> i32 {
        if self.counts.error > 0 {
            2
        } else if self.counts.violation > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Keep wall-clock times in the reports. Off by default so repeated runs
    /// produce identical output.
    pub timings: bool,
}

/// Runs every job (concurrently) and writes requested CSV files. Reports
/// keep the job order.
pub fn run_jobs(jobs: &[Job], opts: RunOptions) -> RunSummary {
    let started = Instant::now();
    let outcomes: Vec<(VerificationReport, Option<(PathBuf, String)>)> = jobs.par_iter().map(execute).collect();
    let mut reports = Vec::with_capacity(outcomes.len());
    for (mut report, csv) in outcomes {
        if let Some((path, text)) = csv {
            if let Err(e) = std::fs::write(&path, text) {
                report.status = Status::Error;
                report
                    .diagnostics
                    .insert("error".into(), Value::String(format!("cannot write {}: {e}", path.display())));
            }
        }
        if !opts.timings {
            report.runtime_ms = 0.0;
        }
        reports.push(report);
    }
    let mut counts = Counts::default();
    for r in &reports {
        match r.status {
            Status::Pass => counts.pass += 1,
            Status::Violation => counts.violation += 1,
            Status::Error => counts.error += 1,
        }
    }
    let runtime_ms = if opts.timings { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    RunSummary { reports, counts, runtime_ms }
}

fn single_csv(r: &ResidualField) -> String {
    let mut out = String::from("x,y,residual\n");
    for (p, v) in r.points.iter().zip(&r.values) {
        out.push_str(&[p[0], p[1], *v].map(csv_number).join(","));
        out.push('\n');
    }
    out
}

/// CSV body for the residual-field kinds.
fn csv_for(task: &Task) -> cauchy_core::Result<Option<String>> {
    Ok(Some(match task {
        Task::CauchyRiemann { f: Some(f), grid, .. } => {
            let (a, b) = cr_residual(f, grid)?;
            residual_pair_csv(&a, &b)
        }
        Task::CauchyRiemann { pair: Some((u, v)), grid, .. } => {
            let (a, b) = cr_residual_pair(u, v, grid)?;
            residual_pair_csv(&a, &b)
        }
        Task::PrimitiveCr { primitive, grid } => {
            let (a, b) = primitive_cr_check(primitive, grid)?;
            residual_pair_csv(&a, &b)
        }
        Task::Exactness { p, q, grid } => single_csv(&exactness_residual(p, q, grid)?),
        Task::Potential { psi, grid } => {
            let flow = potential_velocity(psi, grid)?;
            velocity_csv(&flow.velocity, &planar_incompressibility(&flow.velocity, grid)?)?
        }
        Task::Incompressibility { velocity, grid } => velocity_csv(velocity, &planar_incompressibility(velocity, grid)?)?,
        Task::Axisym { velocity, grid, guard } => velocity_csv(velocity, &axisym_divergence(velocity, grid, *guard)?.residual)?,
        _ => return Ok(None),
    }))
}

/// Runs one job; the second element is the CSV to write, if requested.
pub fn execute(job: &Job) -> (VerificationReport, Option<(PathBuf, String)>) {
    let (tol, q) = (job.tol, &job.quad);
    let mut report = match &job.task {
        Task::RectangleIdentity { f, rect } => rectangle_identity(f, rect, q, tol),
        Task::Homotopy { f, homotopy, epsilons } => homotopy_invariance(f, homotopy, epsilons, q, tol),
        Task::Green { p, q: qf, region } => green_check(p, qf, region, q, tol),
        Task::CauchyViaGreen { f, region } => cauchy_via_green(f, region, q, tol),
        Task::Goursat { f, rect, max_depth } => goursat_report(f, rect, tol, *max_depth, q),
        Task::Divergence { field, solid } => divergence_check(field, solid, q, tol),
        Task::GaussVolume { solid } => gauss_volume(solid, q, tol),
        Task::GreenIdentity { u, v, solid } => green_identity_check(u, v, solid, q, tol),
        Task::Contour { f, path, expected } => contour_report(f, path, q, *expected, tol),
        Task::CauchyRiemann { f: Some(f), grid, .. } => cr_report(f, grid, tol),
        Task::CauchyRiemann { pair, grid, .. } => {
            let (u, v) = pair.as_ref().expect("config guarantees f or (u, v)");
            cr_pair_report(u, v, grid, tol)
        }
        Task::PrimitiveCr { primitive, grid } => primitive_cr_report(primitive, grid, tol),
        Task::Exactness { p, q: qf, grid } => exactness_report(p, qf, grid, tol),
        Task::LoopExactness { p, q: qf, path, expect } => loop_exactness_report(p, qf, path, q, tol, *expect),
        Task::Winding { path, point, expected } => winding_report(path, *point, q, *expected, tol),
        Task::Conformality { f, point, dirs } => conformality_report(f, *point, dirs[0], dirs[1], tol),
        Task::Potential { psi, grid } => potential_report(psi, grid, tol),
        Task::Incompressibility { velocity, grid } => incompressibility_report(velocity, grid, tol),
        Task::Axisym { velocity, grid, guard } => axisym_report(velocity, grid, *guard, tol),
        Task::Acceleration { velocity, scale, expected, grid } => {
            acceleration_report(velocity, *scale, expected.as_ref(), grid, tol)
        }
        Task::FlowJacobian { field, points, dt, steps } => flow_jacobian_check(field, points, *dt, *steps, tol),
        Task::Bernoulli { v, s_max } => bernoulli_check(v, *s_max, q, tol),
    };
    report.job = job.name.clone();
    let csv = match &job.csv {
        Some(path) if report.status != Status::Error => match csv_for(&job.task) {
            Ok(Some(text)) => Some((path.clone(), text)),
            Ok(None) => None,
            Err(e) => {
                report.status = Status::Error;
                report.diagnostics.insert("error".into(), Value::String(format!("CSV: {e}")));
                None
            }
        },
        _ => None,
    };
    (report, csv)
}
