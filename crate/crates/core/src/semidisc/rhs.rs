//! Global right-hand side assembly.

use std::sync::Arc;

use rayon::prelude::*;

use super::coefficients::{surface_coefficients, SurfaceCoefficients};
use super::subcell::{subcell_detector, subcell_rates, SubcellConfig};
use super::surface::{height_traces, surface_terms};
use super::volume::{velocities, volume_split};
use super::{Mesh, Rates, SolutionField};
use crate::error::{Result, SweError};
use crate::fluxes::{ExtendedFluxPair, FluxParams, SurfaceFlux, Trace};
use crate::physics::{PhysicsContext, SweState};
use crate::sbp::SbpOperator;

const PARALLEL_MIN_ELEMENTS: usize = 64;

#[derive(Debug, Clone)]
pub struct SemiDiscretisation {
    pub mesh: Mesh,
    pub op: Arc<SbpOperator>,
    pub ctx: PhysicsContext,
    pub vol_params: FluxParams,
    pub coeffs: SurfaceCoefficients,
    pub surface_flux: SurfaceFlux,
    pub subcells: SubcellConfig,
}

/// Right-hand side together with the elements that used subcells.
#[derive(Debug, Clone, Default)]
pub struct RhsOutput {
    pub rates: Rates,
    pub subcell_flags: Vec<bool>,
}

impl SemiDiscretisation {
    pub fn new(
        mesh: Mesh,
        op: Arc<SbpOperator>,
        ctx: PhysicsContext,
        vol_params: FluxParams,
        surface_flux: SurfaceFlux,
        subcells: SubcellConfig,
    ) -> Self {
        Self {
            mesh,
            op,
            ctx,
            coeffs: surface_coefficients(&vol_params),
            vol_params,
            surface_flux,
            subcells,
        }
    }

    pub fn subcell_flags(&self, state: &SolutionField) -> Vec<bool> {
        let n_el = self.mesh.n_elements;
        match self.subcells.threshold {
            None => vec![false; n_el],
            Some(threshold) => (0..n_el)
                .map(|e| {
                    let left = state.h_elem(self.mesh.left_neighbour(e));
                    let right = state.h_elem(self.mesh.right_neighbour(e));
                    subcell_detector(
                        state.h_elem(e),
                        [left, right],
                        threshold,
                        self.subcells.include_neighbors,
                    )
                })
                .collect(),
        }
    }

    fn element_traces(&self, state: &SolutionField, e: usize, subcell: bool) -> [Trace; 2] {
        let (h, hv, b) = (state.h_elem(e), state.hv_elem(e), state.b_elem(e));
        let n = h.len();
        if subcell {
            let t = |k: usize| Trace::from_state(SweState::new(h[k], hv[k]), b[k], &self.ctx);
            [t(0), t(n - 1)]
        } else {
            let v = velocities(h, hv, &self.ctx);
            let op = &self.op;
            let [hl, hr] = height_traces(op, h, b);
            let [vl, vr] = op.boundary_values(&v);
            let [bl, br] = op.boundary_values(b);
            [Trace::new(hl, vl, bl), Trace::new(hr, vr, br)]
        }
    }

    /// Interface fluxes; entry `j` couples element `j` with element `j + 1`.
    fn interface_fluxes(&self, state: &SolutionField, flags: &[bool]) -> Vec<ExtendedFluxPair> {
        let n_el = self.mesh.n_elements;
        let traces: Vec<[Trace; 2]> = (0..n_el)
            .map(|e| self.element_traces(state, e, flags[e]))
            .collect();
        (0..n_el)
            .map(|j| {
                let r = self.mesh.right_neighbour(j);
                self.surface_flux
                    .interface(traces[j][1], traces[r][0], self.ctx.g)
            })
            .collect()
    }

    fn element_rates(
        &self,
        state: &SolutionField,
        e: usize,
        subcell: bool,
        left: &ExtendedFluxPair,
        right: &ExtendedFluxPair,
        out_h: &mut [f64],
        out_hv: &mut [f64],
    ) {
        let op = &*self.op;
        let g = self.ctx.g;
        let scale = 2.0 / self.mesh.dx();
        let (h, hv, b) = (state.h_elem(e), state.hv_elem(e), state.b_elem(e));
        let f_left = (left.h, left.hv_into_right);
        let f_right = (right.h, right.hv_into_left);
        if subcell {
            let traces: Vec<Trace> = (0..h.len())
                .map(|k| Trace::from_state(SweState::new(h[k], hv[k]), b[k], &self.ctx))
                .collect();
            let (rh, rhv) = subcell_rates(&traces, op, &self.surface_flux, f_left, f_right, g);
            for k in 0..h.len() {
                out_h[k] = scale * rh[k];
                out_hv[k] = scale * rhv[k];
            }
            return;
        }
        let v = velocities(h, hv, &self.ctx);
        let (vol_h, vol_hv) = volume_split(h, &v, b, op, self.vol_params.a1, self.vol_params.a2, g);
        let (rate_h, rate_hv) = surface_terms(
            h,
            &v,
            b,
            op,
            &self.coeffs,
            [f_left.0, f_right.0],
            Some(([f_left.0, f_right.0], [f_left.1, f_right.1])),
            g,
        );
        for j in 0..h.len() {
            out_h[j] = scale * (rate_h[j] - vol_h[j]);
            out_hv[j] = scale * (rate_hv[j] - vol_hv[j]);
        }
    }

    pub fn rhs_detailed(&self, state: &SolutionField) -> Result<RhsOutput> {
        state.check_shape(&self.mesh, &self.op)?;
        let flags = self.subcell_flags(state);
        let fluxes = self.interface_fluxes(state, &flags);
        let n = state.n_nodes;
        let n_el = self.mesh.n_elements;
        let mut rates = Rates {
            h: vec![0.0; n_el * n],
            hv: vec![0.0; n_el * n],
        };
        let work = |(e, (oh, ohv)): (usize, (&mut [f64], &mut [f64]))| {
            let left = &fluxes[self.mesh.left_neighbour(e)];
            self.element_rates(state, e, flags[e], left, &fluxes[e], oh, ohv);
        };
        if n_el >= PARALLEL_MIN_ELEMENTS {
            rates
                .h
                .par_chunks_mut(n)
                .zip(rates.hv.par_chunks_mut(n))
                .enumerate()
                .for_each(work);
        } else {
            rates
                .h
                .chunks_mut(n)
                .zip(rates.hv.chunks_mut(n))
                .enumerate()
                .for_each(work);
        }
        check_finite(&rates, n)?;
        Ok(RhsOutput {
            rates,
            subcell_flags: flags,
        })
    }

    pub fn rhs(&self, state: &SolutionField) -> Result<Rates> {
        self.rhs_detailed(state).map(|o| o.rates)
    }
}

fn check_finite(rates: &Rates, n: usize) -> Result<()> {
    for (component, values) in [("h", &rates.h), ("hv", &rates.hv)] {
        if let Some(idx) = values.iter().position(|x| !x.is_finite()) {
            return Err(SweError::NotFinite {
                element: idx / n,
                node: idx % n,
                component,
            });
        }
    }
    Ok(())
}

/// Convenience wrapper building a one-off [`SemiDiscretisation`].
pub fn global_rhs(
    state: &SolutionField,
    mesh: &Mesh,
    op: Arc<SbpOperator>,
    vol_params: &FluxParams,
    surface_flux: SurfaceFlux,
    subcells: SubcellConfig,
    ctx: &PhysicsContext,
) -> Result<Rates> {
    SemiDiscretisation::new(*mesh, op, *ctx, *vol_params, surface_flux, subcells).rhs(state)
}
