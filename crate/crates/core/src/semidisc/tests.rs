use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fluxes::{ConstantBottomFlux, FluxParams, SurfaceFlux};
use crate::physics::PhysicsContext;
use crate::sbp::{NodeFamily, SbpOperator};

fn random_smooth_state(
    rng: &mut ChaCha8Rng,
    mesh: &Mesh,
    op: &SbpOperator,
    with_bottom: bool,
) -> SolutionField {
    let l = mesh.length();
    let x0 = mesh.x_left;
    let (ph, pv, pb) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI));
    let (ah, av, ab) = (rng.gen_range(0.1..0.8), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..0.5));
    let kh = rng.gen_range(1..3) as f64;
    SolutionField::from_functions(
        mesh,
        op,
        |x| 2.0 + ah * (2.0 * PI * kh * (x - x0) / l + ph).sin(),
        |x| av * (2.0 * PI * (x - x0) / l + pv).cos() + 0.3,
        |x| {
            if with_bottom {
                ab * (2.0 * PI * (x - x0) / l + pb).sin()
            } else {
                0.0
            }
        },
    )
}

fn lake_at_rest(mesh: &Mesh, op: &SbpOperator) -> SolutionField {
    SolutionField::from_functions(
        mesh,
        op,
        |x| 1.0 - (PI * x / 4.0).sin(),
        |_| 0.0,
        |x| (PI * x / 4.0).sin(),
    )
}

fn disc(
    family: NodeFamily,
    p: usize,
    n_el: usize,
    params: FluxParams,
    flux: SurfaceFlux,
    subcells: SubcellConfig,
    g: f64,
) -> SemiDiscretisation {
    SemiDiscretisation::new(
        Mesh::new(-1.0, 1.0, n_el).unwrap(),
        SbpOperator::cached(family, p).unwrap(),
        PhysicsContext::new(g),
        params,
        flux,
        subcells,
    )
}

// Rates are scaled by 2/dx and inverse quadrature weights, so a few ulps at
// the periodic bottom jump already reach 1e-13.
const WELL_BALANCE_TOL: f64 = 2.5e-13;

const LLF: SurfaceFlux = SurfaceFlux::Hydrostatic {
    inner: ConstantBottomFlux::Llf,
};

#[test]
fn lake_at_rest_is_preserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
        for p in 0..=7 {
            for _ in 0..4 {
                let mut r = || rng.gen_range(-1.0..1.0);
                let params =
                    FluxParams::new(3.0 * r(), 3.0 * r()).with_free(r(), r(), r(), r(), r());
                let fluxes = [
                    SurfaceFlux::Ec { a1: params.a1, a2: params.a2 },
                    SurfaceFlux::LlfType { a1: params.a1 },
                    LLF,
                ];
                for flux in fluxes {
                    for subcells in [SubcellConfig::disabled(), SubcellConfig::new(10.0, false)] {
                        let d = disc(family, p, 15, params, flux, subcells, 1.0);
                        let state = lake_at_rest(&d.mesh, &d.op);
                        let rates = d.rhs(&state).unwrap();
                        assert!(
                            rates.max_abs() <= WELL_BALANCE_TOL,
                            "{family} p={p} {} {:?}: {:e}",
                            flux.name(),
                            subcells,
                            rates.max_abs()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn constant_state_has_zero_rhs() {
    for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
        let d = disc(family, 3, 5, FluxParams::new(0.5, 0.5), LLF, SubcellConfig::disabled(), 9.81);
        let state = SolutionField::from_functions(&d.mesh, &d.op, |_| 1.0, |_| 0.0, |_| 0.0);
        let rates = d.rhs(&state).unwrap();
        assert!(rates.max_abs() <= 1e-13);
    }
}

#[test]
fn mass_is_conserved() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
        for p in [0, 2, 5] {
            for flux in [SurfaceFlux::Ec { a1: 0.3, a2: -0.4 }, SurfaceFlux::LlfType { a1: 0.0 }, LLF] {
                let d = disc(family, p, 8, FluxParams::new(1.2, -0.6), flux, SubcellConfig::disabled(), 9.81);
                let state = random_smooth_state(&mut rng, &d.mesh, &d.op, true);
                let rates = d.rhs(&state).unwrap();
                let mass_rate: f64 = (0..d.mesh.n_elements)
                    .map(|e| d.op.integrate(&rates.h[state.range(e)]))
                    .sum();
                let scale = rates.h.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
                assert!(mass_rate.abs() <= 1e-13 * 8.0 * scale, "{family} p={p}: {mass_rate:e}");
            }
        }
    }
}

#[test]
fn momentum_conserved_for_flat_bottom() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let d = disc(NodeFamily::Gauss, 4, 6, FluxParams::new(-0.5, 2.0), SurfaceFlux::Ec { a1: 1.0, a2: 0.0 }, SubcellConfig::disabled(), 9.81);
    let state = random_smooth_state(&mut rng, &d.mesh, &d.op, false);
    let rates = d.rhs(&state).unwrap();
    let rate: f64 = (0..6).map(|e| d.op.integrate(&rates.hv[state.range(e)])).sum();
    assert!(rate.abs() <= 1e-11, "{rate:e}");
}

#[test]
fn entropy_conservation_with_ec_surface_flux() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
        for p in [1, 3, 5] {
            for _ in 0..10 {
                let mut r = || rng.gen_range(-1.0..1.0);
                let params =
                    FluxParams::new(3.0 * r(), 3.0 * r()).with_free(r(), r(), r(), r(), r());
                let flux = SurfaceFlux::Ec { a1: 3.0 * r(), a2: 3.0 * r() };
                let d = disc(family, p, 6, params, flux, SubcellConfig::disabled(), 9.81);
                let state = random_smooth_state(&mut rng, &d.mesh, &d.op, true);
                let rates = d.rhs(&state).unwrap();
                let diag = diagnostics(&state, Some(&rates), &d.mesh, &d.op, &d.ctx);
                assert!(
                    diag.entropy_rate.abs() <= 1e-12 * (1.0 + diag.entropy.abs()),
                    "{family} p={p}: {:e}",
                    diag.entropy_rate
                );
            }
        }
    }
}

#[test]
fn entropy_stability_with_dissipative_fluxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let fluxes = [
        SurfaceFlux::LlfType { a1: 0.5 },
        LLF,
        SurfaceFlux::Hydrostatic { inner: ConstantBottomFlux::Suliciu },
        SurfaceFlux::Hydrostatic { inner: ConstantBottomFlux::Kinetic },
    ];
    for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
        for p in [1, 3] {
            for flux in fluxes {
                let d = disc(family, p, 6, FluxParams::new(0.2, 1.4), flux, SubcellConfig::disabled(), 9.81);
                let state = random_smooth_state(&mut rng, &d.mesh, &d.op, false);
                let rates = d.rhs(&state).unwrap();
                let diag = diagnostics(&state, Some(&rates), &d.mesh, &d.op, &d.ctx);
                assert!(diag.entropy_rate <= 1e-12 * (1.0 + diag.entropy.abs()), "{}", flux.name());
            }
        }
    }
}

#[test]
fn lake_at_rest_entropy_rate_vanishes() {
    let d = disc(NodeFamily::Gauss, 7, 15, FluxParams::new(0.0, 0.0), SurfaceFlux::Ec { a1: 0.0, a2: 0.0 }, SubcellConfig::disabled(), 1.0);
    let state = lake_at_rest(&d.mesh, &d.op);
    let rates = d.rhs(&state).unwrap();
    let diag = diagnostics(&state, Some(&rates), &d.mesh, &d.op, &d.ctx);
    assert!(diag.entropy_rate.abs() <= 1e-12 * (1.0 + diag.entropy.abs()));
}

#[test]
fn unit_mass() {
    let d = disc(NodeFamily::Gauss, 3, 4, FluxParams::default(), LLF, SubcellConfig::disabled(), 1.0);
    let state = SolutionField::from_functions(&d.mesh, &d.op, |_| 1.0, |_| 0.0, |_| 0.0);
    let diag = diagnostics(&state, None, &d.mesh, &d.op, &d.ctx);
    assert!((diag.mass - 2.0).abs() < 1e-14);
}

#[test]
fn momentum_source_consistency_converges() {
    // Total momentum rate must approach -int g h b_x as the mesh is refined.
    let g = 9.81;
    for p in 1..=3 {
        let mut errors = Vec::new();
        for n_el in [8, 16, 32] {
            let d = disc(NodeFamily::Gauss, p, n_el, FluxParams::one_parameter(0.0), SurfaceFlux::Ec { a1: 0.0, a2: 2.0 / 3.0 }, SubcellConfig::disabled(), g);
            let b = |x: f64| 0.2 * (PI * x).sin();
            let h = |x: f64| 1.5 + 0.3 * (PI * x).cos();
            let state = SolutionField::from_functions(&d.mesh, &d.op, h, |x| 0.2 * h(x), b);
            let rates = d.rhs(&state).unwrap();
            let jac = 0.5 * d.mesh.dx();
            let rate: f64 = (0..n_el).map(|e| jac * d.op.integrate(&rates.hv[state.range(e)])).sum();
            // int_{-1}^{1} g h b_x dx with h = 1.5 + 0.3 cos(pi x), b_x = 0.2 pi cos(pi x)
            let exact_source = g * 0.3 * 0.2 * PI;
            errors.push((rate + exact_source).abs());
        }
        assert!(errors[2] < errors[0], "p={p}: {errors:?}");
    }
}

#[test]
fn nan_is_reported() {
    let d = disc(NodeFamily::Gauss, 2, 3, FluxParams::default(), LLF, SubcellConfig::disabled(), 1.0);
    let mut state = SolutionField::from_functions(&d.mesh, &d.op, |_| 1.0, |_| 0.0, |_| 0.0);
    state.hv[4] = f64::NAN;
    assert!(matches!(d.rhs(&state), Err(crate::SweError::NotFinite { .. })));
}

#[test]
fn global_rhs_wrapper_matches() {
    let op = SbpOperator::cached(NodeFamily::Lobatto, 3).unwrap();
    let mesh = Mesh::new(-1.0, 1.0, 4).unwrap();
    let ctx = PhysicsContext::new(1.0);
    let state = lake_at_rest(&mesh, &op);
    let r = global_rhs(&state, &mesh, Arc::clone(&op), &FluxParams::default(), LLF, SubcellConfig::disabled(), &ctx).unwrap();
    assert!(r.max_abs() < 1e-13);
}

#[test]
fn lake_at_rest_gauss_p7_parameter_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..=12 {
        for j in 0..=12 {
            let (a1, a2) = (-3.0 + 0.5 * i as f64, -3.0 + 0.5 * j as f64);
            let params = FluxParams::new(a1, a2);
            for flux in [SurfaceFlux::Ec { a1, a2 }, LLF] {
                let d = disc(NodeFamily::Gauss, 7, 15, params, flux, SubcellConfig::disabled(), 1.0);
                let state = lake_at_rest(&d.mesh, &d.op);
                worst = worst.max(d.rhs(&state).unwrap().max_abs());
            }
        }
    }
    assert!(worst <= WELL_BALANCE_TOL, "{worst:e}");
}
