//! The two-parameter family of entropy conservative fluxes and its
//! source-extended, well-balanced variant.

use super::{check_pair, ExtendedFluxPair, FluxPair, FluxParams, Trace};
use crate::error::Result;
use crate::physics::{state_from_entropy_variables, EntropyVars, PhysicsContext, SweState};

/// Primitive-variable form; `(hm, vm)` is the left state, `(hp, vp)` the right.
#[inline]
pub(crate) fn ec_prim(hm: f64, vm: f64, hp: f64, vp: f64, a1: f64, a2: f64, g: f64) -> FluxPair {
    let a = a1 + 3.0 * a2 - 2.0;
    let (vm2, vp2) = (vm * vm, vp * vp);
    let f_h = (3.0 - a1) / 8.0 * (hp * vp + hm * vm)
        + (1.0 + a1) / 8.0 * (hp * vm + hm * vp)
        + a / (16.0 * g) * ((vp2 * vp + vm2 * vm) - (vp2 * vm + vp * vm2));
    let f_hv = (1.0 + a1) / 8.0 * g * (hp * hp + hm * hm)
        + (1.0 - a1) / 4.0 * g * (hp * hm)
        - (2.0 * a1 + 3.0 * a2 - 5.0) / 16.0 * (hp * vp2 + hm * vm2)
        + (2.0 * a1 + 3.0 * a2 - 1.0) / 16.0 * (hp * vm2 + hm * vp2)
        + 0.25 * (hp + hm) * (vp * vm)
        + a / (32.0 * g) * ((vp2 * vp2 + vm2 * vm2) - 2.0 * vp2 * vm2);
    FluxPair { h: f_h, hv: f_hv }
}

/// Non-symmetric source contribution `S_{i,k}` to the discharge flux into side `i`.
#[inline]
pub(crate) fn source_part(i: Trace, k: Trace, a1: f64, a2: f64, g: f64) -> f64 {
    let a = a1 + 3.0 * a2 - 2.0;
    let db = k.b - i.b;
    let dv = k.v - i.v;
    a / 16.0 * dv * dv * db + 0.25 * g * ((3.0 - a1) / 2.0 * i.h + (1.0 + a1) / 2.0 * k.h) * db
}

#[inline]
pub(crate) fn ec_ext_prim(l: Trace, r: Trace, a1: f64, a2: f64, g: f64) -> ExtendedFluxPair {
    let f = ec_prim(l.h, l.v, r.h, r.v, a1, a2, g);
    ExtendedFluxPair {
        h: f.h,
        hv_into_left: f.hv + source_part(l, r, a1, a2, g),
        hv_into_right: f.hv + source_part(r, l, a1, a2, g),
    }
}

pub fn ec_flux(
    ul: SweState,
    ur: SweState,
    params: &FluxParams,
    ctx: &PhysicsContext,
) -> Result<FluxPair> {
    check_pair("ec_flux", ul, ur)?;
    Ok(ec_prim(
        ul.h,
        ctx.vel(ul.h, ul.hv),
        ur.h,
        ctx.vel(ur.h, ur.hv),
        params.a1,
        params.a2,
        ctx.g,
    ))
}

/// The same family written in entropy variables `w = (g h - v^2/2, v)` (flat bottom).
pub fn ec_flux_entropy_form(
    wl: EntropyVars,
    wr: EntropyVars,
    params: &FluxParams,
    ctx: &PhysicsContext,
) -> Result<FluxPair> {
    state_from_entropy_variables(wl, 0.0, ctx)?;
    state_from_entropy_variables(wr, 0.0, ctx)?;
    let (a1, a2, g) = (params.a1, params.a2, ctx.g);
    let (x1, x2) = (wl.w1, wl.w2);
    let (y1, y2) = (wr.w1, wr.w2);
    let f_h = (3.0 - a1) / (8.0 * g) * (y1 * y2 + x1 * x2)
        + (1.0 + a1) / (8.0 * g) * (y1 * x2 + x1 * y2)
        + (1.0 + 3.0 * a2) / (16.0 * g) * (y2 * y2 * y2 + x2 * x2 * x2)
        + (3.0 - 3.0 * a2) / (16.0 * g) * (y2 * y2 * x2 + y2 * x2 * x2);
    let f_hv = (1.0 + a1) / (8.0 * g) * (y1 * y1 + x1 * x1)
        + (1.0 - a1) / (4.0 * g) * y1 * x1
        + (7.0 - 3.0 * a2) / (16.0 * g) * (y1 * y2 * y2 + x1 * x2 * x2)
        + (1.0 + 3.0 * a2) / (16.0 * g) * (y1 * x2 * x2 + x1 * y2 * y2)
        + (y1 + x1) * y2 * x2 / (4.0 * g)
        + (y2.powi(4) + y2.powi(3) * x2 + y2 * y2 * x2 * x2 + y2 * x2.powi(3) + x2.powi(4))
            / (8.0 * g);
    Ok(FluxPair { h: f_h, hv: f_hv })
}

pub fn ec_flux_extended(
    ul: SweState,
    ur: SweState,
    bl: f64,
    br: f64,
    params: &FluxParams,
    ctx: &PhysicsContext,
) -> Result<ExtendedFluxPair> {
    check_pair("ec_flux_extended", ul, ur)?;
    if !(bl.is_finite() && br.is_finite()) {
        return Err(crate::error::SweError::NonFinite("ec_flux_extended"));
    }
    Ok(ec_ext_prim(
        Trace::from_state(ul, bl, ctx),
        Trace::from_state(ur, br, ctx),
        params.a1,
        params.a2,
        ctx.g,
    ))
}
