//! Hydrostatic reconstruction of a flat-bottom flux.

use super::{check_pair, ConstantBottomFlux, ExtendedFluxPair, Trace};
use crate::error::{Result, SweError};
use crate::physics::{PhysicsContext, SweState};

#[inline]
pub(crate) fn hydrostatic_prim(
    inner: ConstantBottomFlux,
    l: Trace,
    r: Trace,
    g: f64,
) -> ExtendedFluxPair {
    let (hl, hr) = if l.b == r.b {
        (l.h.max(0.0), r.h.max(0.0))
    } else {
        let bmax = l.b.max(r.b);
        ((l.h + l.b - bmax).max(0.0), (r.h + r.b - bmax).max(0.0))
    };
    let f = inner.eval(hl, l.v, hr, r.v, g);
    ExtendedFluxPair {
        h: f.h,
        hv_into_left: f.hv + 0.5 * g * (l.h * l.h - hl * hl),
        hv_into_right: f.hv + 0.5 * g * (r.h * r.h - hr * hr),
    }
}

pub fn hydrostatic_reconstruction(
    inner: ConstantBottomFlux,
    ul: SweState,
    ur: SweState,
    bl: f64,
    br: f64,
    ctx: &PhysicsContext,
) -> Result<ExtendedFluxPair> {
    check_pair("hydrostatic_reconstruction", ul, ur)?;
    if !(bl.is_finite() && br.is_finite()) {
        return Err(SweError::NonFinite("hydrostatic_reconstruction"));
    }
    Ok(hydrostatic_prim(
        inner,
        Trace::from_state(ul, bl, ctx),
        Trace::from_state(ur, br, ctx),
        ctx.g,
    ))
}
