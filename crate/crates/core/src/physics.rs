//! Pointwise shallow-water quantities.
//!
//! Conserved variables are `(h, hv)`; the entropy is the total energy
//! `U = h v^2 / 2 + g h^2 / 2 + g h b` with entropy variables
//! `w = (g (h + b) - v^2 / 2, v)`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};

pub const DEFAULT_H_DRY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsContext {
    pub g: f64,
    pub h_dry: f64,
}

impl PhysicsContext {
    pub fn new(g: f64) -> Self {
        Self {
            g,
            h_dry: DEFAULT_H_DRY,
        }
    }

    pub fn with_h_dry(g: f64, h_dry: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(SweError::Config(format!("gravity must be positive, got {g}")));
        }
        if !(h_dry > 0.0 && h_dry.is_finite()) {
            return Err(SweError::Config(format!(
                "dry tolerance must be positive, got {h_dry}"
            )));
        }
        Ok(Self { g, h_dry })
    }

    /// Desingularised velocity; zero at or below the dry tolerance.
    #[inline]
    pub fn vel(&self, h: f64, hv: f64) -> f64 {
        if h > self.h_dry {
            hv / h
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SweState {
    pub h: f64,
    pub hv: f64,
}

impl SweState {
    pub fn new(h: f64, hv: f64) -> Self {
        Self { h, hv }
    }

    pub fn from_primitive(h: f64, v: f64) -> Self {
        Self { h, hv: h * v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyVars {
    pub w1: f64,
    pub w2: f64,
}

pub type Mat2 = [[f64; 2]; 2];

fn check_height(h: f64) -> Result<()> {
    if h.is_nan() {
        Err(SweError::NonFinite("height"))
    } else if h < 0.0 {
        Err(SweError::NegativeHeight { h })
    } else {
        Ok(())
    }
}

pub fn velocity(s: SweState, ctx: &PhysicsContext) -> Result<f64> {
    check_height(s.h)?;
    Ok(ctx.vel(s.h, s.hv))
}

pub fn physical_flux(s: SweState, ctx: &PhysicsContext) -> Result<[f64; 2]> {
    check_height(s.h)?;
    let v = ctx.vel(s.h, s.hv);
    Ok([s.hv, s.hv * v + 0.5 * ctx.g * s.h * s.h])
}

pub fn entropy(s: SweState, b: f64, ctx: &PhysicsContext) -> f64 {
    let v = ctx.vel(s.h, s.hv);
    0.5 * s.h * v * v + 0.5 * ctx.g * s.h * s.h + ctx.g * s.h * b
}

pub fn entropy_flux(s: SweState, b: f64, ctx: &PhysicsContext) -> f64 {
    let v = ctx.vel(s.h, s.hv);
    0.5 * s.h * v * v * v + ctx.g * s.h * s.h * v + ctx.g * b * s.h * v
}

/// `psi = g h^2 v / 2` for a flat bottom.
pub fn flux_potential(s: SweState, ctx: &PhysicsContext) -> f64 {
    let v = ctx.vel(s.h, s.hv);
    0.5 * ctx.g * s.h * s.h * v
}

pub fn entropy_variables(s: SweState, b: f64, ctx: &PhysicsContext) -> EntropyVars {
    let v = ctx.vel(s.h, s.hv);
    EntropyVars {
        w1: ctx.g * (s.h + b) - 0.5 * v * v,
        w2: v,
    }
}

/// Inverse of [`entropy_variables`]; requires a wet state.
pub fn state_from_entropy_variables(
    w: EntropyVars,
    b: f64,
    ctx: &PhysicsContext,
) -> Result<SweState> {
    if !(w.w1.is_finite() && w.w2.is_finite()) {
        return Err(SweError::NonFinite("entropy variables"));
    }
    let h = (w.w1 + 0.5 * w.w2 * w.w2) / ctx.g - b;
    if h <= 0.0 {
        return Err(SweError::NonInvertibleEntropyVars { h });
    }
    Ok(SweState::from_primitive(h, w.w2))
}

/// `du/dw`.
pub fn entropy_jacobian(s: SweState, ctx: &PhysicsContext) -> Mat2 {
    let g = ctx.g;
    let v = ctx.vel(s.h, s.hv);
    [[1.0 / g, v / g], [v / g, s.h + v * v / g]]
}

/// `dw/du`, the Hessian of the entropy in conserved variables.
pub fn entropy_hessian(s: SweState, ctx: &PhysicsContext) -> Mat2 {
    let g = ctx.g;
    let h = s.h;
    let v = ctx.vel(s.h, s.hv);
    [[g + v * v / h, -v / h], [-v / h, 1.0 / h]]
}

/// Eigenvector scaling `R` with `R R^T = du/dw`.
pub fn barth_scaling(s: SweState, ctx: &PhysicsContext) -> Mat2 {
    let v = ctx.vel(s.h, s.hv);
    let c = (ctx.g * s.h.max(0.0)).sqrt();
    let scale = 1.0 / (2.0 * ctx.g).sqrt();
    [[scale, scale], [scale * (v - c), scale * (v + c)]]
}

pub fn max_wave_speed(s: SweState, ctx: &PhysicsContext) -> f64 {
    let v = ctx.vel(s.h, s.hv);
    v.abs() + (ctx.g * s.h.max(0.0)).sqrt()
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}
