//! Local Lax-Friedrichs and LLF-type entropy dissipative fluxes.

use super::{check_pair, ec_ext_prim, ExtendedFluxPair, FluxPair, Trace};
use crate::error::{Result, SweError};
use crate::physics::{PhysicsContext, SweState};

#[inline]
fn lambda(hl: f64, vl: f64, hr: f64, vr: f64, g: f64) -> f64 {
    (vl.abs() + (g * hl.max(0.0)).sqrt()).max(vr.abs() + (g * hr.max(0.0)).sqrt())
}

#[inline]
pub(crate) fn llf_prim(hl: f64, vl: f64, hr: f64, vr: f64, g: f64) -> FluxPair {
    let lam = lambda(hl, vl, hr, vr, g);
    let (ql, qr) = (hl * vl, hr * vr);
    FluxPair {
        h: 0.5 * (ql + qr) - 0.5 * lam * (hr - hl),
        hv: 0.5 * (ql * vl + 0.5 * g * hl * hl + qr * vr + 0.5 * g * hr * hr)
            - 0.5 * lam * (qr - ql),
    }
}

#[inline]
pub(crate) fn llf_type_prim(l: Trace, r: Trace, a1: f64, g: f64) -> ExtendedFluxPair {
    let lam = lambda(l.h, l.v, r.h, r.v, g);
    let f = ec_ext_prim(l, r, a1, (2.0 - a1) / 3.0, g);
    let db = r.b - l.b;
    let d_h = (r.h + r.b) - (l.h + l.b);
    let d_hv = r.h * r.v - l.h * l.v + 0.5 * (l.v + r.v) * db;
    ExtendedFluxPair {
        h: f.h - 0.5 * lam * d_h,
        hv_into_left: f.hv_into_left - 0.5 * lam * d_hv,
        hv_into_right: f.hv_into_right - 0.5 * lam * d_hv,
    }
}

pub fn llf_flux(ul: SweState, ur: SweState, ctx: &PhysicsContext) -> Result<FluxPair> {
    check_pair("llf_flux", ul, ur)?;
    Ok(llf_prim(
        ul.h,
        ctx.vel(ul.h, ul.hv),
        ur.h,
        ctx.vel(ur.h, ur.hv),
        ctx.g,
    ))
}

/// One-parameter EC flux `a2 = (2 - a1)/3` with dissipation
/// `-(lambda/2) (jump(h + b), jump(hv) + mean(v) jump(b))`.
pub fn es_flux_llf_type(
    ul: SweState,
    ur: SweState,
    bl: f64,
    br: f64,
    a1: f64,
    ctx: &PhysicsContext,
) -> Result<ExtendedFluxPair> {
    check_pair("es_flux_llf_type", ul, ur)?;
    if !(bl.is_finite() && br.is_finite() && a1.is_finite()) {
        return Err(SweError::NonFinite("es_flux_llf_type"));
    }
    Ok(llf_type_prim(
        Trace::from_state(ul, bl, ctx),
        Trace::from_state(ur, br, ctx),
        a1,
        ctx.g,
    ))
}
