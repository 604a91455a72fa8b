//! Suliciu relaxation solver for a flat bottom (Bouchut's construction with
//! `alpha = 3/2`), extended to vacuum states.
//!
//! A dry side has zero Lagrangian speed `a = h c`; divisions by it are replaced
//! by their limits, so the dry intermediate state carries no flux.

use super::{check_pair, FluxPair};
use crate::error::Result;
use crate::physics::{PhysicsContext, SweState};

const ALPHA: f64 = 1.5;

#[inline]
fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Eulerian relaxation speeds `(c_l, c_r)`.
fn speeds(hl: f64, ul: f64, hr: f64, ur: f64, g: f64) -> (f64, f64) {
    let pl = 0.5 * g * hl * hl;
    let pr = 0.5 * g * hr * hr;
    let (sl, sr) = ((g * hl).sqrt(), (g * hr).sqrt());
    if pr >= pl {
        let cl = if hr > 0.0 {
            sl + ALPHA * pos((pr - pl) / (hr * sr) + ul - ur)
        } else {
            sl + ALPHA * pos(ul - ur)
        };
        let al = hl * cl;
        let cr = if al > 0.0 {
            sr + ALPHA * pos((pl - pr) / al + ul - ur)
        } else {
            sr
        };
        (cl, cr)
    } else {
        let cr = sr + ALPHA * pos((pl - pr) / (hl * sl) + ul - ur);
        let ar = hr * cr;
        let cl = if ar > 0.0 {
            sl + ALPHA * pos((pr - pl) / ar + ul - ur)
        } else {
            sl
        };
        (cl, cr)
    }
}

/// Wave speeds `(u_l - c_l, u*, u_r + c_r)` of the relaxation Riemann problem.
pub fn suliciu_wave_speeds(ul: SweState, ur: SweState, ctx: &PhysicsContext) -> [f64; 3] {
    let (hl, vl) = (ul.h, ctx.vel(ul.h, ul.hv));
    let (hr, vr) = (ur.h, ctx.vel(ur.h, ur.hv));
    let g = ctx.g;
    if hl <= 0.0 && hr <= 0.0 {
        return [0.0; 3];
    }
    let (cl, cr) = speeds(hl, vl, hr, vr, g);
    let (al, ar) = (hl * cl, hr * cr);
    let ustar = (al * vl + ar * vr + 0.5 * g * (hl * hl - hr * hr)) / (al + ar);
    [vl - cl, ustar, vr + cr]
}

pub(crate) fn suliciu_prim(hl: f64, ul: f64, hr: f64, ur: f64, g: f64) -> FluxPair {
    if hl <= 0.0 && hr <= 0.0 {
        return FluxPair::default();
    }
    let pl = 0.5 * g * hl * hl;
    let pr = 0.5 * g * hr * hr;
    let (cl, cr) = speeds(hl, ul, hr, ur, g);
    let (al, ar) = (hl * cl, hr * cr);
    let sum = al + ar;
    let ustar = (al * ul + ar * ur + pl - pr) / sum;
    let pstar = (ar * pl + al * pr - al * ar * (ur - ul)) / sum;

    let flux = |h: f64, u: f64, p: f64| FluxPair {
        h: h * u,
        hv: h * u * u + p,
    };
    if ul - cl >= 0.0 {
        flux(hl, ul, pl)
    } else if ustar >= 0.0 {
        let hs = if al > 0.0 {
            1.0 / (1.0 / hl + (ar * (ur - ul) + pl - pr) / (al * sum))
        } else {
            0.0
        };
        flux(hs, ustar, pstar)
    } else if ur + cr >= 0.0 {
        let hs = if ar > 0.0 {
            1.0 / (1.0 / hr + (al * (ur - ul) + pr - pl) / (ar * sum))
        } else {
            0.0
        };
        flux(hs, ustar, pstar)
    } else {
        flux(hr, ur, pr)
    }
}

pub fn suliciu_flux(ul: SweState, ur: SweState, ctx: &PhysicsContext) -> Result<FluxPair> {
    check_pair("suliciu_flux", ul, ur)?;
    Ok(suliciu_prim(
        ul.h,
        ctx.vel(ul.h, ul.hv),
        ur.h,
        ctx.vel(ur.h, ur.hv),
        ctx.g,
    ))
}
