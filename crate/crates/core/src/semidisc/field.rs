use serde::{Deserialize, Serialize};

use super::Mesh;
use crate::error::{Result, SweError};
use crate::sbp::SbpOperator;

/// Nodal water height, discharge and bottom, stored element-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub n_elements: usize,
    pub n_nodes: usize,
    pub h: Vec<f64>,
    pub hv: Vec<f64>,
    pub b: Vec<f64>,
}

impl SolutionField {
    pub fn new(n_elements: usize, n_nodes: usize, h: Vec<f64>, hv: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let len = n_elements * n_nodes;
        for v in [&h, &hv, &b] {
            if v.len() != len {
                return Err(SweError::LengthMismatch {
                    expected: len,
                    got: v.len(),
                });
            }
        }
        Ok(Self {
            n_elements,
            n_nodes,
            h,
            hv,
            b,
        })
    }

    /// Sample `(h, hv, b)` at the nodes of `mesh` and `op`.
    pub fn from_functions<F, G, B>(mesh: &Mesh, op: &SbpOperator, h: F, hv: G, b: B) -> Self
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
        B: Fn(f64) -> f64,
    {
        let x = mesh.node_coordinates(op);
        Self {
            n_elements: mesh.n_elements,
            n_nodes: op.len(),
            h: x.iter().map(|&x| h(x)).collect(),
            hv: x.iter().map(|&x| hv(x)).collect(),
            b: x.iter().map(|&x| b(x)).collect(),
        }
    }

    #[inline]
    pub fn range(&self, e: usize) -> std::ops::Range<usize> {
        e * self.n_nodes..(e + 1) * self.n_nodes
    }

    pub fn h_elem(&self, e: usize) -> &[f64] {
        &self.h[self.range(e)]
    }

    pub fn hv_elem(&self, e: usize) -> &[f64] {
        &self.hv[self.range(e)]
    }

    pub fn b_elem(&self, e: usize) -> &[f64] {
        &self.b[self.range(e)]
    }

    pub fn check_shape(&self, mesh: &Mesh, op: &SbpOperator) -> Result<()> {
        if self.n_elements != mesh.n_elements {
            return Err(SweError::LengthMismatch {
                expected: mesh.n_elements,
                got: self.n_elements,
            });
        }
        if self.n_nodes != op.len() {
            return Err(SweError::LengthMismatch {
                expected: op.len(),
                got: self.n_nodes,
            });
        }
        let len = self.n_elements * self.n_nodes;
        for v in [&self.h, &self.hv, &self.b] {
            if v.len() != len {
                return Err(SweError::LengthMismatch {
                    expected: len,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    pub fn min_h(&self) -> f64 {
        self.h.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Time derivatives of `h` and `hv`, same layout as [`SolutionField`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rates {
    pub h: Vec<f64>,
    pub hv: Vec<f64>,
}

impl Rates {
    pub fn max_abs(&self) -> f64 {
        self.h
            .iter()
            .chain(&self.hv)
            .fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}
