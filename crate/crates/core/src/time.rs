//! SSPRK(3,3) time stepping with per-stage limiting and CFL control.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};
use crate::limiter::{limit_field, LimiterConfig};
use crate::physics::{max_wave_speed, PhysicsContext, SweState};
use crate::sbp::SbpOperator;
use crate::semidisc::{diagnostics, Mesh, Rates, SemiDiscretisation, SolutionField};

/// States that can be advanced by convex combinations of Euler steps.
pub trait SspState: Clone {
    type Rate;

    /// `self += dt * rate`.
    fn add_scaled(&mut self, rate: &Self::Rate, dt: f64);

    /// `self = a * self + b * other`.
    fn blend(&mut self, a: f64, other: &Self, b: f64);
}

impl SspState for Vec<f64> {
    type Rate = Vec<f64>;

    fn add_scaled(&mut self, rate: &Vec<f64>, dt: f64) {
        self.iter_mut().zip(rate).for_each(|(u, r)| *u += dt * r);
    }

    fn blend(&mut self, a: f64, other: &Self, b: f64) {
        self.iter_mut().zip(other).for_each(|(u, o)| *u = a * *u + b * o);
    }
}

impl SspState for SolutionField {
    type Rate = Rates;

    fn add_scaled(&mut self, rate: &Rates, dt: f64) {
        self.h.add_scaled(&rate.h, dt);
        self.hv.add_scaled(&rate.hv, dt);
    }

    fn blend(&mut self, a: f64, other: &Self, b: f64) {
        self.h.blend(a, &other.h, b);
        self.hv.blend(a, &other.hv, b);
    }
}

/// One SSPRK(3,3) step. `first_rate` may carry `rhs(u)` if already known.
pub fn ssprk33_step_with_rate<S, R, L>(
    u: &S,
    dt: f64,
    first_rate: Option<S::Rate>,
    mut rhs: R,
    mut post_stage: L,
) -> Result<S>
where
    S: SspState,
    R: FnMut(&S) -> Result<S::Rate>,
    L: FnMut(&mut S) -> Result<()>,
{
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SweError::Config(format!("time step must be positive, got {dt}")));
    }
    let r0 = match first_rate {
        Some(r) => r,
        None => rhs(u)?,
    };
    let mut u1 = u.clone();
    u1.add_scaled(&r0, dt);
    post_stage(&mut u1)?;

    let r1 = rhs(&u1)?;
    let mut u2 = u1;
    u2.add_scaled(&r1, dt);
    u2.blend(0.25, u, 0.75);
    post_stage(&mut u2)?;

    let r2 = rhs(&u2)?;
    let mut u3 = u2;
    u3.add_scaled(&r2, dt);
    u3.blend(2.0 / 3.0, u, 1.0 / 3.0);
    post_stage(&mut u3)?;
    Ok(u3)
}

pub fn ssprk33_step<S, R, L>(u: &S, dt: f64, rhs: R, post_stage: L) -> Result<S>
where
    S: SspState,
    R: FnMut(&S) -> Result<S::Rate>,
    L: FnMut(&mut S) -> Result<()>,
{
    ssprk33_step_with_rate(u, dt, None, rhs, post_stage)
}

/// Weight factor `omega_min / 2` of the CFL condition; 1 for `p = 0`.
pub fn cfl_weight_factor(op: &SbpOperator, limiter: Option<&LimiterConfig>) -> f64 {
    if op.degree() == 0 {
        return 1.0;
    }
    let min = match limiter {
        Some(cfg) => cfg.min_weight(op),
        None => op.weights().iter().copied().fold(f64::INFINITY, f64::min),
    };
    0.5 * min
}

/// `dt = cfl * weight_factor * dx / max wave speed`, or `dt_max` if dry.
pub fn compute_dt(
    state: &SolutionField,
    mesh: &Mesh,
    cfl: f64,
    weight_factor: f64,
    ctx: &PhysicsContext,
    dt_max: f64,
) -> f64 {
    let lambda = state
        .h
        .iter()
        .zip(&state.hv)
        .map(|(&h, &hv)| max_wave_speed(SweState::new(h, hv), ctx))
        .fold(0.0, f64::max);
    if lambda <= 0.0 {
        return dt_max;
    }
    (cfl * weight_factor * mesh.dx() / lambda).min(dt_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum StepMode {
    Fixed { steps: usize },
    Adaptive { cfl: f64, dt_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub t_final: f64,
    pub mode: StepMode,
}

impl StepControl {
    pub fn fixed(t_final: f64, steps: usize) -> Self {
        Self {
            t_final,
            mode: StepMode::Fixed { steps },
        }
    }

    pub fn adaptive(t_final: f64, cfl: f64) -> Self {
        Self {
            t_final,
            mode: StepMode::Adaptive {
                cfl,
                dt_max: f64::INFINITY,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final >= 0.0) {
            return Err(SweError::NegativeTime(self.t_final));
        }
        match self.mode {
            StepMode::Fixed { steps } if steps == 0 && self.t_final > 0.0 => {
                Err(SweError::Config("fixed step count must be positive".into()))
            }
            StepMode::Adaptive { cfl, dt_max } if !(cfl > 0.0 && cfl <= 1.0) || !(dt_max > 0.0) => {
                Err(SweError::Config(format!(
                    "cfl must lie in (0, 1] and dt_max be positive, got {cfl}, {dt_max}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// Diagnostics of one accepted state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    pub momentum: f64,
    pub entropy: f64,
    pub entropy_rate: f64,
    pub min_h: f64,
    pub n_subcell_elements: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOutcome {
    pub state: SolutionField,
    pub t: f64,
    pub steps: usize,
    pub initial: StepRecord,
    pub last: StepRecord,
}

/// Advances `state` to `control.t_final`, calling `observer` for the initial
/// and every accepted state.
pub fn evolve<F>(
    disc: &SemiDiscretisation,
    limiter: &LimiterConfig,
    mut state: SolutionField,
    control: &StepControl,
    mut observer: F,
) -> Result<EvolveOutcome>
where
    F: FnMut(&StepRecord, &SolutionField),
{
    control.validate()?;
    let weight_factor = cfl_weight_factor(&disc.op, limiter.enabled.then_some(limiter));
    let post = |u: &mut SolutionField| limit_field(u, &disc.op, limiter).map(|_| ());
    let fail = |step: usize| move |e: SweError| SweError::StepFailed {
        step,
        source: Box::new(e),
    };

    let mut t = 0.0;
    let mut step = 0;
    let mut output = disc.rhs_detailed(&state).map_err(fail(0))?;
    let record = |step: usize, t: f64, dt: f64, state: &SolutionField, rates: &Rates, flags: &[bool]| {
        let d = diagnostics(state, Some(rates), &disc.mesh, &disc.op, &disc.ctx);
        StepRecord {
            step,
            t,
            dt,
            mass: d.mass,
            momentum: d.momentum,
            entropy: d.entropy,
            entropy_rate: d.entropy_rate,
            min_h: state.min_h(),
            n_subcell_elements: flags.iter().filter(|&&f| f).count(),
        }
    };
    let initial = record(0, t, 0.0, &state, &output.rates, &output.subcell_flags);
    observer(&initial, &state);
    let mut last = initial;

    loop {
        let dt = match control.mode {
            StepMode::Fixed { steps } => {
                if step >= steps {
                    break;
                }
                control.t_final / steps as f64
            }
            StepMode::Adaptive { cfl, dt_max } => {
                let remaining = control.t_final - t;
                if remaining <= 0.0 {
                    break;
                }
                let dt = compute_dt(&state, &disc.mesh, cfl, weight_factor, &disc.ctx, dt_max);
                if dt >= remaining { remaining } else { dt }
            }
        };
        let rates = std::mem::take(&mut output.rates);
        state = ssprk33_step_with_rate(&state, dt, Some(rates), |u| disc.rhs(u), post)
            .map_err(fail(step + 1))?;
        step += 1;
        t = match control.mode {
            StepMode::Fixed { steps } => control.t_final * step as f64 / steps as f64,
            StepMode::Adaptive { .. } if control.t_final - (t + dt) <= 0.0 => control.t_final,
            StepMode::Adaptive { .. } => t + dt,
        };
        output = disc.rhs_detailed(&state).map_err(fail(step))?;
        last = record(step, t, dt, &state, &output.rates, &output.subcell_flags);
        observer(&last, &state);
    }
    Ok(EvolveOutcome {
        state,
        t,
        steps: step,
        initial,
        last,
    })
}
