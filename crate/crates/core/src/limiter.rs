//! Zhang-Shu linear scaling limiter for the water height.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};
use crate::sbp::{lobatto_points, SbpOperator};
use crate::semidisc::SolutionField;

const PARALLEL_MIN_ELEMENTS: usize = 64;

/// User-facing limiter switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimiterSettings {
    pub enabled: bool,
    pub limit_discharge: bool,
}

impl Default for LimiterSettings {
    fn default() -> Self {
        Self {
            enabled: true,
            limit_discharge: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimiterConfig {
    pub enabled: bool,
    pub limit_discharge: bool,
    check_degree: usize,
    check_weights: Vec<f64>,
    /// Row-major `(q + 1) x (p + 1)` interpolation to the Lobatto check nodes.
    interpolation: Vec<f64>,
    n_nodes: usize,
}

/// Smallest check degree whose Lobatto quadrature is exact for degree `p`,
/// i.e. `2q - 1 >= p`.
pub fn default_check_degree(p: usize) -> usize {
    (p + 1).div_ceil(2).max(1)
}

impl LimiterConfig {
    pub fn new(op: &SbpOperator, settings: LimiterSettings) -> Result<Self> {
        Self::with_check_degree(op, default_check_degree(op.degree()), settings)
    }

    pub fn with_check_degree(
        op: &SbpOperator,
        q: usize,
        settings: LimiterSettings,
    ) -> Result<Self> {
        if q == 0 || 2 * q < op.degree() + 1 {
            return Err(SweError::Config(format!(
                "check degree {q} too small for polynomial degree {}",
                op.degree()
            )));
        }
        let (points, check_weights) = lobatto_points(q);
        Ok(Self {
            enabled: settings.enabled,
            limit_discharge: settings.limit_discharge,
            check_degree: q,
            check_weights,
            interpolation: op.interpolation_matrix(&points),
            n_nodes: op.len(),
        })
    }

    pub fn check_degree(&self) -> usize {
        self.check_degree
    }

    /// Smallest quadrature weight over the check nodes and the solution nodes.
    pub fn min_weight(&self, op: &SbpOperator) -> f64 {
        self.check_weights
            .iter()
            .chain(op.weights())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum of the element polynomial over solution and check nodes.
    pub fn check_min(&self, h: &[f64]) -> f64 {
        let nodal = h.iter().copied().fold(f64::INFINITY, f64::min);
        self.interpolation
            .chunks(self.n_nodes)
            .map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum::<f64>())
            .fold(nodal, f64::min)
    }
}

/// Quadrature mean over the reference element.
pub fn element_mean(values: &[f64], op: &SbpOperator) -> f64 {
    let w = op.weights();
    let total: f64 = w.iter().sum();
    values.iter().zip(w).map(|(v, w)| v * w).sum::<f64>() / total
}

/// Scales `h` about its mean so that it is non-negative on the check set.
/// Returns the applied `theta` and the mean.
pub fn positivity_limit(h: &mut [f64], op: &SbpOperator, cfg: &LimiterConfig) -> Result<(f64, f64)> {
    let mean = element_mean(h, op);
    if !mean.is_finite() {
        return Err(SweError::NonFinite("positivity_limit"));
    }
    if mean < 0.0 {
        return Err(SweError::NegativeMean { mean });
    }
    let min = cfg.check_min(h);
    if min >= 0.0 {
        return Ok((1.0, mean));
    }
    // Target a rounding-sized positive minimum.
    let scale = h.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let margin = (16.0 * f64::EPSILON * scale).min(mean);
    let theta = ((mean - margin) / (mean - min)).clamp(0.0, 1.0);
    for x in h.iter_mut() {
        *x = mean + theta * (*x - mean);
    }
    Ok((theta, mean))
}

/// Scales `hv` about its own mean by `theta`.
pub fn limit_discharge_consistency(hv: &mut [f64], theta: f64, op: &SbpOperator) {
    if theta == 1.0 {
        return;
    }
    let mean = element_mean(hv, op);
    for x in hv.iter_mut() {
        *x = mean + theta * (*x - mean);
    }
}

fn limit_element(h: &mut [f64], hv: &mut [f64], op: &SbpOperator, cfg: &LimiterConfig) -> Result<f64> {
    let (theta, _) = positivity_limit(h, op, cfg)?;
    if cfg.limit_discharge {
        limit_discharge_consistency(hv, theta, op);
    }
    Ok(theta)
}

/// Applies the limiter to every element; returns the per-element `theta`.
pub fn limit_field(state: &mut SolutionField, op: &SbpOperator, cfg: &LimiterConfig) -> Result<Vec<f64>> {
    if !cfg.enabled {
        return Ok(vec![1.0; state.n_elements]);
    }
    let n = state.n_nodes;
    let work = |(h, hv): (&mut [f64], &mut [f64])| limit_element(h, hv, op, cfg);
    if state.n_elements >= PARALLEL_MIN_ELEMENTS {
        state
            .h
            .par_chunks_mut(n)
            .zip(state.hv.par_chunks_mut(n))
            .map(work)
            .collect()
    } else {
        state
            .h
            .chunks_mut(n)
            .zip(state.hv.chunks_mut(n))
            .map(work)
            .collect()
    }
}
