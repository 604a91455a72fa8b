//! First-order finite volume subcells for elements near wet-dry fronts.

use serde::{Deserialize, Serialize};

use super::volume::check_len;
use crate::error::Result;
use crate::fluxes::{SurfaceFlux, Trace};
use crate::physics::PhysicsContext;
use crate::sbp::SbpOperator;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SubcellConfig {
    /// Activation threshold on nodal `h`; `None` disables subcells.
    pub threshold: Option<f64>,
    pub include_neighbors: bool,
}

impl SubcellConfig {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn new(threshold: f64, include_neighbors: bool) -> Self {
        Self {
            threshold: Some(threshold),
            include_neighbors,
        }
    }
}

/// `true` if some nodal height in the element (or, when requested, in a
/// neighbour) is below `threshold`.
pub fn subcell_detector(
    h: &[f64],
    neighbors: [&[f64]; 2],
    threshold: f64,
    include_neighbors: bool,
) -> bool {
    let below = |x: &[f64]| x.iter().any(|&h| h < threshold);
    below(h) || (include_neighbors && (below(neighbors[0]) || below(neighbors[1])))
}

/// Subcell update on the reference element.
///
/// `left` is the element's left interface flux as `(f_h, f_hv into this
/// element)`, `right` likewise for the right interface.
pub fn fv_subcell_rhs(
    h: &[f64],
    hv: &[f64],
    b: &[f64],
    op: &SbpOperator,
    flux: &SurfaceFlux,
    left: (f64, f64),
    right: (f64, f64),
    ctx: &PhysicsContext,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = op.len();
    check_len(n, &[h, hv, b])?;
    let traces: Vec<Trace> = (0..n)
        .map(|k| Trace::from_state(crate::physics::SweState::new(h[k], hv[k]), b[k], ctx))
        .collect();
    Ok(subcell_rates(&traces, op, flux, left, right, ctx.g))
}

pub(crate) fn subcell_rates(
    traces: &[Trace],
    op: &SbpOperator,
    flux: &SurfaceFlux,
    left: (f64, f64),
    right: (f64, f64),
    g: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = traces.len();
    let w = op.weights();
    let mut rh = vec![0.0; n];
    let mut rhv = vec![0.0; n];
    rh[0] += left.0 / w[0];
    rhv[0] += left.1 / w[0];
    rh[n - 1] -= right.0 / w[n - 1];
    rhv[n - 1] -= right.1 / w[n - 1];
    for k in 0..n - 1 {
        let f = flux.interface(traces[k], traces[k + 1], g);
        rh[k] -= f.h / w[k];
        rhv[k] -= f.hv_into_left / w[k];
        rh[k + 1] += f.h / w[k + 1];
        rhv[k + 1] += f.hv_into_right / w[k + 1];
    }
    (rh, rhv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluxes::ConstantBottomFlux;
    use crate::sbp::gauss_operator;

    #[test]
    fn detector_cases() {
        let ones = [1.0; 4];
        assert!(!subcell_detector(&ones, [&ones, &ones], 1e-5, false));
        let wet_dry = [1.0, 1e-6, 1.0, 1.0];
        assert!(subcell_detector(&wet_dry, [&ones, &ones], 1e-5, false));
        let dry = [0.0; 4];
        assert!(!subcell_detector(&ones, [&dry, &ones], 1e-6, false));
        assert!(subcell_detector(&ones, [&dry, &ones], 1e-6, true));
    }

    #[test]
    fn p0_is_first_order_fv() {
        let ctx = PhysicsContext::new(9.81);
        let op = gauss_operator(0).unwrap();
        let flux = SurfaceFlux::Hydrostatic {
            inner: ConstantBottomFlux::Llf,
        };
        let (rh, rhv) =
            fv_subcell_rhs(&[1.0], &[0.2], &[0.0], &op, &flux, (0.3, 1.1), (0.5, 1.4), &ctx)
                .unwrap();
        assert!((rh[0] - (-(0.5 - 0.3) / 2.0)).abs() < 1e-15);
        assert!((rhv[0] - (-(1.4 - 1.1) / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn lake_at_rest_and_constant_states() {
        let ctx = PhysicsContext::new(9.81);
        let op = gauss_operator(4).unwrap();
        let flux = SurfaceFlux::Hydrostatic {
            inner: ConstantBottomFlux::Llf,
        };
        let b: Vec<f64> = op.nodes().iter().map(|x| 0.3 * x * x).collect();
        let h: Vec<f64> = b.iter().map(|b| 1.0 - b).collect();
        let hv = vec![0.0; 5];
        let g = ctx.g;
        let left = (0.0, 0.5 * g * h[0] * h[0]);
        let right = (0.0, 0.5 * g * h[4] * h[4]);
        let (rh, rhv) = fv_subcell_rhs(&h, &hv, &b, &op, &flux, left, right, &ctx).unwrap();
        assert!(rh.iter().chain(&rhv).all(|x| x.abs() < 1e-13));

        let h = vec![1.5; 5];
        let hv = vec![0.6; 5];
        let b = vec![0.0; 5];
        let f = (0.6, 0.6 * 0.4 + 0.5 * g * 2.25);
        let (rh, rhv) = fv_subcell_rhs(&h, &hv, &b, &op, &flux, f, f, &ctx).unwrap();
        assert!(rh.iter().chain(&rhv).all(|x| x.abs() < 1e-13));
    }
}
