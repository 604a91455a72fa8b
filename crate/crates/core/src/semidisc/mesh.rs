use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};
use crate::sbp::SbpOperator;

/// Uniform periodic mesh of `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub x_left: f64,
    pub x_right: f64,
    pub n_elements: usize,
}

impl Mesh {
    pub fn new(x_left: f64, x_right: f64, n_elements: usize) -> Result<Self> {
        if !(x_left.is_finite() && x_right.is_finite() && x_left < x_right) {
            return Err(SweError::Config(format!(
                "invalid domain [{x_left}, {x_right}]"
            )));
        }
        if n_elements == 0 {
            return Err(SweError::Config("at least one element required".into()));
        }
        Ok(Self {
            x_left,
            x_right,
            n_elements,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_elements as f64
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Physical coordinate of reference point `xi` in element `e`.
    pub fn x(&self, e: usize, xi: f64) -> f64 {
        self.x_left + e as f64 * self.dx() + 0.5 * (xi + 1.0) * self.dx()
    }

    /// All node coordinates, element-major.
    pub fn node_coordinates(&self, op: &SbpOperator) -> Vec<f64> {
        (0..self.n_elements)
            .flat_map(|e| op.nodes().iter().map(move |&xi| self.x(e, xi)))
            .collect()
    }

    #[inline]
    pub fn left_neighbour(&self, e: usize) -> usize {
        (e + self.n_elements - 1) % self.n_elements
    }

    #[inline]
    pub fn right_neighbour(&self, e: usize) -> usize {
        (e + 1) % self.n_elements
    }
}
