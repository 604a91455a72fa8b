use serde::{Deserialize, Serialize};

use super::{Mesh, Rates, SolutionField};
use crate::physics::{entropy, entropy_variables, PhysicsContext, SweState};
use crate::sbp::SbpOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub mass: f64,
    pub momentum: f64,
    pub entropy: f64,
    /// `d/dt` of the total entropy implied by the given rates.
    pub entropy_rate: f64,
}

/// Quadrature sums of mass, momentum and entropy, plus the semidiscrete
/// entropy rate `sum (w1^T M dh/dt + w2^T M dhv/dt) dx/2` when rates are given.
pub fn diagnostics(
    state: &SolutionField,
    rates: Option<&Rates>,
    mesh: &Mesh,
    op: &SbpOperator,
    ctx: &PhysicsContext,
) -> Diagnostics {
    let jac = 0.5 * mesh.dx();
    let w = op.weights();
    let n = op.len();
    let mut out = Diagnostics {
        mass: 0.0,
        momentum: 0.0,
        entropy: 0.0,
        entropy_rate: 0.0,
    };
    for e in 0..state.n_elements {
        let (mut m, mut p, mut u, mut r) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..n {
            let idx = e * n + k;
            let s = SweState::new(state.h[idx], state.hv[idx]);
            m += w[k] * s.h;
            p += w[k] * s.hv;
            u += w[k] * entropy(s, state.b[idx], ctx);
            if let Some(rates) = rates {
                let ev = entropy_variables(s, state.b[idx], ctx);
                r += w[k] * (ev.w1 * rates.h[idx] + ev.w2 * rates.hv[idx]);
            }
        }
        out.mass += jac * m;
        out.momentum += jac * p;
        out.entropy += jac * u;
        out.entropy_rate += jac * r;
    }
    out
}
