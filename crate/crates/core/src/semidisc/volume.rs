//! Split-form volume terms of the two-parameter family with source terms.

use crate::error::{Result, SweError};
use crate::fluxes::{ec_ext_prim, FluxParams, Trace};
use crate::physics::PhysicsContext;
use crate::sbp::SbpOperator;

pub(crate) fn check_len(n: usize, arrays: &[&[f64]]) -> Result<()> {
    for a in arrays {
        if a.len() != n {
            return Err(SweError::LengthMismatch {
                expected: n,
                got: a.len(),
            });
        }
    }
    Ok(())
}

/// Nodal velocities with the dry-state convention.
pub(crate) fn velocities(h: &[f64], hv: &[f64], ctx: &PhysicsContext) -> Vec<f64> {
    h.iter().zip(hv).map(|(&h, &q)| ctx.vel(h, q)).collect()
}

fn pointwise<F: Fn(usize) -> f64>(n: usize, f: F) -> Vec<f64> {
    (0..n).map(f).collect()
}

/// Split-form volume terms `(VOL_h, VOL_hv)` on the reference element.
pub fn volume_terms(
    h: &[f64],
    hv: &[f64],
    b: &[f64],
    op: &SbpOperator,
    params: &FluxParams,
    ctx: &PhysicsContext,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = op.len();
    check_len(n, &[h, hv, b])?;
    let v = velocities(h, hv, ctx);
    Ok(volume_split(h, &v, b, op, params.a1, params.a2, ctx.g))
}

pub(crate) fn volume_split(
    h: &[f64],
    v: &[f64],
    b: &[f64],
    op: &SbpOperator,
    a1: f64,
    a2: f64,
    g: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = op.len();
    let a = a1 + 3.0 * a2 - 2.0;
    let d = |x: &[f64]| op.derivative_of(x);

    let q = pointwise(n, |i| h[i] * v[i]);
    let v2 = pointwise(n, |i| v[i] * v[i]);
    let dh = d(h);
    let dv = d(v);
    let dq = d(&q);
    let dv2 = d(&v2);
    let dv3 = d(&pointwise(n, |i| v2[i] * v[i]));

    let vol_h = pointwise(n, |i| {
        (3.0 - a1) / 4.0 * dq[i]
            + (1.0 + a1) / 4.0 * (h[i] * dv[i] + v[i] * dh[i])
            + a / (8.0 * g) * (dv3[i] - v[i] * dv2[i] - v2[i] * dv[i])
    });

    let dhv2 = d(&pointwise(n, |i| h[i] * v2[i]));
    let dv4 = d(&pointwise(n, |i| v2[i] * v2[i]));
    let db = d(b);
    // Gravity and bottom terms are evaluated through the free surface relative
    // to its first nodal value, so a lake at rest cancels to roundoff squared.
    let eta0 = h[0] + b[0];
    let eta = pointwise(n, |i| (h[i] + b[i]) - eta0);
    let deta = d(&eta);
    let dheta = d(&pointwise(n, |i| h[i] * eta[i]));
    let dbv2 = d(&pointwise(n, |i| b[i] * v2[i]));
    let dbv = d(&pointwise(n, |i| b[i] * v[i]));

    let vol_hv = pointwise(n, |i| {
        (1.0 + a1) / 4.0 * g * (dheta[i] - eta[i] * dh[i]) + (3.0 - a1) / 4.0 * g * h[i] * deta[i]
            - (2.0 * a1 + 3.0 * a2 - 5.0) / 8.0 * dhv2[i]
            + (2.0 * a1 + 3.0 * a2 - 1.0) / 8.0 * (h[i] * dv2[i] + v2[i] * dh[i])
            + 0.5 * (q[i] * dv[i] + v[i] * dq[i])
            + a / (16.0 * g) * (dv4[i] - 2.0 * v2[i] * dv2[i])
            + a / 8.0
                * (dbv2[i] - b[i] * dv2[i] - 2.0 * v[i] * dbv[i]
                    + v2[i] * db[i]
                    + 2.0 * b[i] * v[i] * dv[i])
    });
    (vol_h, vol_hv)
}

/// The same volume terms in flux differencing form `sum_k 2 D_ik f(u_i, u_k)`
/// with the source-extended flux.
pub fn volume_terms_flux_differencing(
    h: &[f64],
    hv: &[f64],
    b: &[f64],
    op: &SbpOperator,
    params: &FluxParams,
    ctx: &PhysicsContext,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = op.len();
    check_len(n, &[h, hv, b])?;
    let v = velocities(h, hv, ctx);
    let mut vol_h = vec![0.0; n];
    let mut vol_hv = vec![0.0; n];
    for i in 0..n {
        let ui = Trace::new(h[i], v[i], b[i]);
        for k in 0..n {
            let dik = op.d(i, k);
            if dik == 0.0 {
                continue;
            }
            let f = ec_ext_prim(ui, Trace::new(h[k], v[k], b[k]), params.a1, params.a2, ctx.g);
            vol_h[i] += 2.0 * dik * f.h;
            vol_hv[i] += 2.0 * dik * f.hv_into_left;
        }
    }
    Ok((vol_h, vol_hv))
}
