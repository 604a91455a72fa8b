use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::config::{Resolved, ResolvedSettings, RunConfig};
use super::output::{write_diagnostics_csv, write_solution_csv};
use super::CliError;
use crate::limiter::LimiterConfig;
use crate::physics::PhysicsContext;
use crate::sbp::SbpOperator;
use crate::scenarios::{error_norms, ErrorNorms};
use crate::semidisc::{Mesh, SemiDiscretisation, SolutionField};
use crate::time::{evolve, StepRecord};

/// Everything produced by one simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub mesh: Mesh,
    pub op: std::sync::Arc<SbpOperator>,
    pub state: SolutionField,
    pub t: f64,
    pub records: Vec<StepRecord>,
    pub errors: Option<ErrorNorms>,
}

impl Simulation {
    /// `(U(T) - U(0)) / |U(0)|`.
    pub fn entropy_drift(&self) -> f64 {
        let (first, last) = (self.records[0].entropy, self.records[self.records.len() - 1].entropy);
        (last - first) / first.abs()
    }

    pub fn min_h(&self) -> f64 {
        self.records.iter().map(|r| r.min_h).fold(f64::INFINITY, f64::min)
    }

    pub fn max_error(&self) -> Option<f64> {
        self.errors.map(|e| e.max_linf())
    }
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub settings: ResolvedSettings,
    pub steps: usize,
    pub t: f64,
    pub errors: Option<ErrorNorms>,
    pub max_error: Option<f64>,
    pub entropy_drift: f64,
    pub min_h: f64,
    pub initial: StepRecord,
    pub last: StepRecord,
    pub wall_time_s: f64,
}

/// Runs a resolved configuration. Records are pushed to `records` as they are
/// accepted, so they survive a solver failure.
fn simulate_into(resolved: &Resolved, records: &mut Vec<StepRecord>) -> Result<Simulation, CliError> {
    let s = &resolved.settings;
    let sc = &resolved.scenario;
    let op = SbpOperator::cached(s.family, s.degree)?;
    let mesh = sc.mesh(s.n_elements)?;
    let ctx = PhysicsContext::new(sc.g);
    let disc = SemiDiscretisation::new(
        mesh.clone(),
        op.clone(),
        ctx,
        s.vol_params,
        s.surface_flux,
        s.subcells(),
    );
    let limiter = LimiterConfig::new(&op, s.limiter)?;
    let initial = sc.initial_field(&mesh, &op);
    let outcome = evolve(&disc, &limiter, initial, &s.control, |r, _| records.push(*r))?;
    let errors = match &sc.exact {
        Some(exact) => Some(error_norms(&outcome.state, |x| exact(x, outcome.t), &mesh, &op)?),
        None => None,
    };
    Ok(Simulation {
        mesh,
        op,
        state: outcome.state,
        t: outcome.t,
        records: std::mem::take(records),
        errors,
    })
}

pub fn simulate(resolved: &Resolved) -> Result<Simulation, CliError> {
    simulate_into(resolved, &mut Vec::new())
}

/// `run` verb: simulate and write `solution.csv`, `diagnostics.csv` and
/// `summary.json` into the output root.
pub fn run(config: &RunConfig) -> Result<RunSummary, CliError> {
    let resolved = config.resolve()?;
    let dir = config.output_root();
    fs::create_dir_all(&dir)?;

    let start = Instant::now();
    let mut partial = Vec::new();
    let sim = match simulate_into(&resolved, &mut partial) {
        Ok(sim) => sim,
        Err(e) => {
            write_diagnostics_csv(create(&dir, "diagnostics.csv")?, &partial)?;
            return Err(e);
        }
    };
    let wall_time_s = start.elapsed().as_secs_f64();

    let h_dry = PhysicsContext::new(resolved.scenario.g).h_dry;
    write_solution_csv(create(&dir, "solution.csv")?, &sim.state, &sim.mesh, &sim.op, h_dry)?;
    write_diagnostics_csv(create(&dir, "diagnostics.csv")?, &sim.records)?;

    let summary = RunSummary {
        settings: resolved.settings.clone(),
        steps: sim.records.len() - 1,
        t: sim.t,
        errors: sim.errors,
        max_error: sim.max_error(),
        entropy_drift: sim.entropy_drift(),
        min_h: sim.min_h(),
        initial: sim.records[0],
        last: sim.records[sim.records.len() - 1],
        wall_time_s,
    };
    let mut f = create(&dir, "summary.json")?;
    serde_json::to_writer_pretty(&mut f, &summary)?;
    std::io::Write::write_all(&mut f, b"\n")?;
    Ok(summary)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}
