//! Surface correction terms for general SBP bases.
//!
//! Every term has the form `pre * M^{-1} R^T B beta`, where `beta` holds one
//! value per element boundary and `pre` is an optional nodal multiplier.

use super::coefficients::SurfaceCoefficients;
use super::volume::{check_len, velocities};
use crate::error::Result;
use crate::physics::PhysicsContext;
use crate::sbp::SbpOperator;

type Pair = [f64; 2];

#[inline]
fn mul(a: Pair, b: Pair) -> Pair {
    [a[0] * b[0], a[1] * b[1]]
}

/// Boundary values of `h`. Without boundary nodes they are interpolated
/// through the free surface relative to its first nodal value, so that a flat
/// free surface yields matching traces on both sides of an interface.
pub(crate) fn height_traces(op: &SbpOperator, h: &[f64], b: &[f64]) -> Pair {
    if op.includes_boundary_nodes() {
        return op.boundary_values(h);
    }
    let eta0 = h[0] + b[0];
    let eta: Vec<f64> = h.iter().zip(b).map(|(h, b)| (h + b) - eta0).collect();
    let re = op.boundary_values(&eta);
    let rb = op.boundary_values(b);
    [(eta0 + re[0]) - rb[0], (eta0 + re[1]) - rb[1]]
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Accumulates terms `coef * pre * M^{-1} R^T B beta`. Terms without a nodal
/// multiplier are summed per boundary first and lifted once.
struct Lifter<'a> {
    op: &'a SbpOperator,
    out: Vec<f64>,
    plain: [CompensatedSum; 2],
}

impl<'a> Lifter<'a> {
    fn new(op: &'a SbpOperator) -> Self {
        Self {
            op,
            out: vec![0.0; op.len()],
            plain: Default::default(),
        }
    }

    #[inline]
    fn add(&mut self, coef: f64, pre: Option<&[f64]>, beta: Pair) {
        if coef == 0.0 {
            return;
        }
        let Some(pre) = pre else {
            self.plain[0].add(coef * beta[0]);
            self.plain[1].add(coef * beta[1]);
            return;
        };
        let op = self.op;
        let w = op.weights();
        for (j, o) in self.out.iter_mut().enumerate() {
            let lifted = (op.r(1, j) * beta[1] - op.r(0, j) * beta[0]) / w[j];
            *o += coef * pre[j] * lifted;
        }
    }

    fn finish(mut self) -> Vec<f64> {
        let op = self.op;
        let w = op.weights();
        let beta = [self.plain[0].value(), self.plain[1].value()];
        for (j, o) in self.out.iter_mut().enumerate() {
            *o += (op.r(1, j) * beta[1] - op.r(0, j) * beta[0]) / w[j];
        }
        self.out
    }
}

/// `(SURF_h, SURF_hv)` on the reference element; `f_h` holds the numerical
/// mass flux at the left and right element boundary.
pub fn surface_correction_terms(
    h: &[f64],
    hv: &[f64],
    b: &[f64],
    op: &SbpOperator,
    coeffs: &SurfaceCoefficients,
    f_h: [f64; 2],
    ctx: &PhysicsContext,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(op.len(), &[h, hv, b])?;
    let v = velocities(h, hv, ctx);
    Ok(surface_terms(h, &v, b, op, coeffs, f_h, None, ctx.g))
}

pub(crate) fn surface_terms(
    h: &[f64],
    v: &[f64],
    b: &[f64],
    op: &SbpOperator,
    s: &SurfaceCoefficients,
    f_h: Pair,
    minus_flux: Option<(Pair, Pair)>,
    g: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = op.len();
    let nodal = |f: &dyn Fn(usize) -> f64| (0..n).map(f).collect::<Vec<f64>>();
    let q = nodal(&|i| h[i] * v[i]);
    let v2 = nodal(&|i| v[i] * v[i]);
    let v3 = nodal(&|i| v2[i] * v[i]);
    let bv = nodal(&|i| b[i] * v[i]);

    let r = |x: &[f64]| op.boundary_values(x);
    let rh = height_traces(op, h, b);
    let rv = r(v);
    let rb = r(b);
    let rq = r(&q);
    let rv2 = r(&v2);
    let rv3 = r(&v3);
    let rv4 = r(&nodal(&|i| v2[i] * v2[i]));
    let rhv2 = r(&nodal(&|i| h[i] * v2[i]));
    let rbh = r(&nodal(&|i| b[i] * h[i]));
    let rbv = r(&bv);
    let rbv2 = r(&nodal(&|i| b[i] * v2[i]));
    let rvv = mul(rv, rv);

    let mut sh = Lifter::new(op);
    let [b1, b2, b3, b4] = s.b;
    let [c1, c2, c3, c4] = s.c;
    sh.add(b1, None, rq);
    sh.add(b2, None, mul(rh, rv));
    sh.add(b3, Some(h), rv);
    sh.add(b4, Some(v), rh);
    sh.add(c1 / g, None, rv3);
    sh.add(c2 / g, None, mul(rv, rv2));
    sh.add(c3 / g, Some(v), rv2);
    sh.add(c4 / g, Some(&v2), rv);

    let mut shv = Lifter::new(op);
    let [d1, d2, d3, d4, d5, d6, d7, d8] = s.d;
    shv.add(d1, None, rhv2);
    shv.add(d2, None, mul(rh, rv2));
    shv.add(d3, None, mul(rq, rv));
    shv.add(d4, None, mul(rh, rvv));
    shv.add(d5, Some(v), rq);
    shv.add(d6, Some(&q), rv);
    shv.add(d7, Some(&v2), rh);
    shv.add(d8, Some(h), rv2);

    // The e- and m-groups are rewritten with h = eta - b, where eta is the free
    // surface shifted by its first nodal value, so a lake at rest cancels
    // without large intermediate terms.
    let [e1, e2, e3] = s.e;
    let [m1, m2, m3, m4] = s.m;
    let eta0 = h[0] + b[0];
    let eta = nodal(&|i| (h[i] + b[i]) - eta0);
    let reta = r(&eta);
    shv.add(e1 * g, None, r(&nodal(&|i| h[i] * eta[i])));
    shv.add(e2 * g, None, mul(rh, reta));
    shv.add(e3 * g, Some(&eta), rh);
    shv.add((m1 - e1) * g, None, rbh);
    shv.add(m2 * g, None, mul(rb, rh));
    shv.add(-e2 * g, None, mul(rb, rh));
    shv.add(m3 * g, Some(h), rb);
    shv.add((m4 - e3) * g, Some(b), rh);
    shv.add((e1 + e2 + e3) * g * eta0, None, rh);

    let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11] = s.k;
    shv.add(k1 / g, None, rv4);
    shv.add(k2 / g, None, mul(rv, rv3));
    shv.add(k3 / g, None, mul(rv2, rv2));
    shv.add(k4 / g, None, mul(rvv, rv2));
    shv.add(k5 / g, None, mul(rvv, rvv));
    shv.add(k6 / g, Some(v), rv3);
    shv.add(k7 / g, Some(v), mul(rv, rv2));
    shv.add(k8 / g, Some(v), mul(rvv, rv));
    shv.add(k9 / g, Some(&v2), rv2);
    shv.add(k10 / g, Some(&v2), rvv);
    shv.add(k11 / g, Some(&v3), rv);

    let [l1, l2, l3, l4, l5, l6, l7, l8, l9, l10] = s.l;
    shv.add(l1, None, rbv2);
    shv.add(l2, None, mul(rb, rv2));
    shv.add(l3, None, mul(rbv, rv));
    shv.add(l4, None, mul(rb, rvv));
    shv.add(l5, Some(b), rv2);
    shv.add(l6, Some(&v2), rb);
    shv.add(l7, Some(&bv), rv);
    shv.add(l8, Some(v), rbv);
    shv.add(l9, Some(b), rvv);
    shv.add(l10, Some(v), mul(rb, rv));

    shv.add(-0.5, Some(v), f_h);
    shv.add(0.5, None, mul(f_h, rv));

    if let Some((fh, fhv)) = minus_flux {
        sh.add(-1.0, None, fh);
        shv.add(-1.0, None, fhv);
    }
    (sh.finish(), shv.finish())
}
