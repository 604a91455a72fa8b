//! Kinetic flux for a flat bottom with the semicircle Maxwellian
//! `chi(w) = sqrt(1 - w^2/4) / pi`.
//!
//! With `c = sqrt(g h / 2)` and `xi = u + 2 c s`, the half fluxes reduce to the
//! moments `I_k = int s^k sqrt(1 - s^2) ds` over the part of `[-1, 1]` where
//! `xi` has the required sign.

use super::{check_pair, FluxPair};
use crate::error::Result;
use crate::physics::{PhysicsContext, SweState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfFluxSide {
    /// Particles moving right, `xi >= 0`.
    Plus,
    /// Particles moving left, `xi <= 0`.
    Minus,
}

fn antiderivatives(s: f64) -> [f64; 3] {
    let r = (1.0 - s * s).max(0.0).sqrt();
    let asin = s.asin();
    [
        0.5 * (s * r + asin),
        -(r * r * r) / 3.0,
        0.125 * (asin - s * r * (1.0 - 2.0 * s * s)),
    ]
}

#[inline]
fn half_prim(h: f64, u: f64, g: f64, side: HalfFluxSide) -> FluxPair {
    if h <= 0.0 {
        return FluxPair::default();
    }
    let c = (0.5 * g * h).sqrt();
    let s0 = (-u / (2.0 * c)).clamp(-1.0, 1.0);
    let a0 = antiderivatives(s0);
    let (lo, hi) = match side {
        HalfFluxSide::Plus => (a0, antiderivatives(1.0)),
        HalfFluxSide::Minus => (antiderivatives(-1.0), a0),
    };
    let i0 = hi[0] - lo[0];
    let i1 = hi[1] - lo[1];
    let i2 = hi[2] - lo[2];
    let k = 2.0 * h / std::f64::consts::PI;
    FluxPair {
        h: k * (u * i0 + 2.0 * c * i1),
        hv: k * (u * u * i0 + 4.0 * u * c * i1 + 4.0 * c * c * i2),
    }
}

pub fn kinetic_half_flux(u: SweState, side: HalfFluxSide, ctx: &PhysicsContext) -> FluxPair {
    half_prim(u.h.max(0.0), ctx.vel(u.h, u.hv), ctx.g, side)
}

pub(crate) fn kinetic_prim(hl: f64, vl: f64, hr: f64, vr: f64, g: f64) -> FluxPair {
    let p = half_prim(hl, vl, g, HalfFluxSide::Plus);
    let m = half_prim(hr, vr, g, HalfFluxSide::Minus);
    FluxPair {
        h: p.h + m.h,
        hv: p.hv + m.hv,
    }
}

pub fn kinetic_flux(ul: SweState, ur: SweState, ctx: &PhysicsContext) -> Result<FluxPair> {
    check_pair("kinetic_flux", ul, ur)?;
    Ok(kinetic_prim(
        ul.h,
        ctx.vel(ul.h, ul.hv),
        ur.h,
        ctx.vel(ur.h, ur.hv),
        ctx.g,
    ))
}

/// Largest microscopic speed `|u| + 2c` of a state.
pub(crate) fn kinetic_speed(h: f64, u: f64, g: f64) -> f64 {
    u.abs() + 2.0 * (0.5 * g * h.max(0.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{entropy_variables, flux_potential, physical_flux};
    use crate::sbp::gauss_legendre;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments_match_quadrature() {
        let (x, w) = gauss_legendre(200);
        for &s0 in &[-1.0, -0.7, -0.1, 0.0, 0.35, 0.9, 1.0] {
            let a = antiderivatives(s0);
            let b = antiderivatives(1.0);
            for k in 0..3 {
                let half = 0.5 * (1.0 - s0);
                let mid = 0.5 * (1.0 + s0);
                let q: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(xi, wi)| {
                        let s = mid + half * xi;
                        half * wi * s.powi(k as i32) * (1.0 - s * s).sqrt()
                    })
                    .sum();
                assert!((b[k] - a[k] - q).abs() < 1e-6, "k={k} s0={s0}");
            }
        }
    }

    #[test]
    fn half_fluxes_sum_to_flux() {
        let ctx = PhysicsContext::new(9.81);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let u = SweState::from_primitive(rng.gen_range(0.0..5.0), rng.gen_range(-10.0..10.0));
            let p = kinetic_half_flux(u, HalfFluxSide::Plus, &ctx);
            let m = kinetic_half_flux(u, HalfFluxSide::Minus, &ctx);
            let f = physical_flux(u, &ctx).unwrap();
            assert!((p.h + m.h - f[0]).abs() < 1e-12 * (1.0 + f[0].abs()));
            assert!((p.hv + m.hv - f[1]).abs() < 1e-12 * (1.0 + f[1].abs()));
            assert!(p.h >= -1e-15 && m.h <= 1e-15);
        }
    }

    #[test]
    fn dry_right_state() {
        let ctx = PhysicsContext::new(9.81);
        let ul = SweState::from_primitive(1.0, 0.5);
        let f = kinetic_flux(ul, SweState::new(0.0, 0.0), &ctx).unwrap();
        assert_eq!(f, kinetic_half_flux(ul, HalfFluxSide::Plus, &ctx));
    }

    #[test]
    fn positivity_and_entropy_sampled() {
        let ctx = PhysicsContext::new(9.81);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10_000 {
            let u: Vec<SweState> = (0..3)
                .map(|_| {
                    let h = if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..5.0) };
                    SweState::from_primitive(h, rng.gen_range(-3.0..3.0))
                })
                .collect();
            let smax = u
                .iter()
                .map(|s| kinetic_speed(s.h, ctx.vel(s.h, s.hv), ctx.g))
                .fold(0.0, f64::max);
            if smax == 0.0 {
                continue;
            }
            let dt = 1.0 / smax;
            let fl = kinetic_flux(u[0], u[1], &ctx).unwrap();
            let fr = kinetic_flux(u[1], u[2], &ctx).unwrap();
            let h_new = u[1].h - dt * (fr.h - fl.h);
            assert!(h_new >= -1e-15 * (1.0 + u[1].h), "{h_new:e}");

            let wl = entropy_variables(u[0], 0.0, &ctx);
            let wr = entropy_variables(u[1], 0.0, &ctx);
            let dpsi = flux_potential(u[1], &ctx) - flux_potential(u[0], &ctx);
            let res = (wr.w1 - wl.w1) * fl.h + (wr.w2 - wl.w2) * fl.hv - dpsi;
            let scale = 1.0 + dpsi.abs() + fl.h.abs() + fl.hv.abs();
            assert!(res <= 1e-12 * scale * 10.0, "entropy residual {res:e}");
        }
    }
}
