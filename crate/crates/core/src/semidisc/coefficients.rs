//! Coefficients of the general-basis surface correction terms.

use serde::{Deserialize, Serialize};

use crate::fluxes::FluxParams;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SurfaceCoefficients {
    pub b: [f64; 4],
    pub c: [f64; 4],
    pub d: [f64; 8],
    pub e: [f64; 3],
    pub k: [f64; 11],
    pub l: [f64; 10],
    pub m: [f64; 4],
}

/// Closed-form solution of the conservation and stability conditions with
/// free parameters `m4, k9, k10, k11, l10`.
pub fn surface_coefficients(params: &FluxParams) -> SurfaceCoefficients {
    let FluxParams {
        a1,
        a2,
        m4,
        k9,
        k10,
        k11,
        l10,
    } = *params;
    let a = a1 + 3.0 * a2 - 2.0;

    let b = [(3.0 - a1) / 4.0, a1 / 4.0 + m4 + 0.25, 0.0, -m4];
    let c = [
        a / 8.0,
        -a / 8.0 - 2.0 * k10 - 2.0 * k9,
        2.0 * k10 - 2.0 * k11 + 2.0 * k9,
        2.0 * k11,
    ];
    let d = [
        -a1 / 4.0 - 3.0 * a2 / 8.0 + 5.0 / 8.0,
        (2.0 * a1 + 3.0 * a2 - 1.0) / 8.0 + 2.0 * k10 + 2.0 * k9 + m4 / 2.0,
        0.0,
        0.0,
        2.0 * k11 + 0.5,
        -2.0 * k11,
        -m4 / 2.0,
        -2.0 * k10 - 2.0 * k9,
    ];
    let e = [(a1 + 1.0) / 4.0, -a1 / 4.0 - m4 + 0.25, m4];
    let k = [
        a / 16.0,
        -k10,
        -a / 16.0 - k9,
        0.0,
        0.0,
        k10 - k11,
        -k10,
        0.0,
        k9,
        k10,
        k11,
    ];
    let l = [
        a / 8.0,
        a / 8.0 + 2.0 * k10 + 2.0 * k9 - l10,
        l10,
        0.0,
        l10 - a / 4.0 - 2.0 * k10 - 2.0 * k9,
        0.0,
        -2.0 * k11,
        2.0 * k11 - l10,
        -l10,
        l10,
    ];
    let m = [(a1 + 1.0) / 4.0, -a1 / 4.0 - m4 - 0.25, 0.0, m4];
    SurfaceCoefficients { b, c, d, e, k, l, m }
}

/// Residuals of the conservation conditions for `h`.
pub fn cons_h_residuals(s: &SurfaceCoefficients, params: &FluxParams) -> Vec<f64> {
    let (a1, a2) = (params.a1, params.a2);
    let a = a1 + 3.0 * a2 - 2.0;
    let [b1, b2, b3, b4] = s.b;
    let [c1, c2, c3, c4] = s.c;
    vec![
        b1 - (3.0 - a1) / 4.0,
        b2 + b3 + b4 - (1.0 + a1) / 4.0,
        c1 - a / 8.0,
        c2 + c3 + c4 + a / 8.0,
    ]
}

/// Residuals of the conservation conditions for `hv`.
pub fn cons_hv_residuals(s: &SurfaceCoefficients, params: &FluxParams) -> Vec<f64> {
    let (a1, a2) = (params.a1, params.a2);
    let a = a1 + 3.0 * a2 - 2.0;
    let [d1, d2, d3, d4, d5, d6, d7, d8] = s.d;
    let [e1, e2, e3] = s.e;
    let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11] = s.k;
    let [l1, l2, l3, l4, l5, l6, l7, l8, l9, l10] = s.l;
    let [m1, m2, m3, m4] = s.m;
    vec![
        d1 - (5.0 - 2.0 * a1 - 3.0 * a2) / 8.0,
        d2 + d7 + d8 - (2.0 * a1 + 3.0 * a2 - 1.0) / 8.0,
        d3 + d5 + d6 - 0.5,
        d4,
        e1 - (1.0 + a1) / 4.0,
        e2 + e3 - (1.0 - a1) / 4.0,
        k1 - a / 16.0,
        k2 + k6 + k11,
        k3 + k9 + a / 16.0,
        k4 + k7 + k10,
        k5 + k8,
        l1 - a / 8.0,
        l2 + l5 + l6 + a / 8.0,
        l3 + l7 + l8,
        l4 + l9 + l10,
        m1 - (1.0 + a1) / 4.0,
        m2 + m3 + m4 + (1.0 + a1) / 4.0,
    ]
}

/// Residuals of the entropy stability conditions.
pub fn stab_residuals(s: &SurfaceCoefficients, params: &FluxParams) -> Vec<f64> {
    let (a1, a2) = (params.a1, params.a2);
    let a = a1 + 3.0 * a2 - 2.0;
    let [b1, b2, b3, b4] = s.b;
    let [c1, c2, c3, c4] = s.c;
    let [d1, d2, d3, d4, d5, d6, d7, d8] = s.d;
    let [e1, e2, e3] = s.e;
    let [k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11] = s.k;
    let [l1, l2, l3, l4, l5, l6, l7, l8, l9, l10] = s.l;
    let [m1, m2, m3, m4] = s.m;
    vec![
        b1 + b4 + e3 - (3.0 - a1) / 4.0,
        b2 + e2 - 0.5,
        b3 + e1 - (1.0 + a1) / 4.0,
        c1 - b4 / 2.0 + d7 - a / 8.0,
        c2 - b2 / 2.0 + d2,
        c3 - b1 / 2.0 + d5 + d8 - (a1 + 1.0) / 8.0,
        c4 - b3 / 2.0 + d1 + d6 - (5.0 - 2.0 * a1 - 3.0 * a2) / 8.0,
        b1 + m3 - (3.0 - a1) / 4.0,
        b2 + m2,
        b3 + m1 - (a1 + 1.0) / 4.0,
        b4 + m4,
        c1 + l6 - a / 8.0,
        c2 + l2 + l10,
        c3 + l5 + l8 + a / 4.0,
        c4 + l1 + l7 - a / 8.0,
        l4,
        -c1 / 2.0 - c3 / 2.0 + k6 + k9 + a / 16.0,
        -c2 / 2.0 + k3 + k7,
        -c4 / 2.0 + k1 + k11 - a / 16.0,
        d3,
        d4,
        k2 + k10,
        k4 + k8,
        k5,
        l3 + l9,
    ]
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_form_pattern() {
        let s = surface_coefficients(&FluxParams::new(-1.0, 1.0));
        assert_eq!(s.b, [1.0, 0.0, 0.0, 0.0]);
        assert!(s.c.iter().all(|&x| x == 0.0));
        assert_eq!(s.d, [0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]);
        assert_eq!(s.e, [0.0, 0.5, 0.0]);
        assert!(s.k.iter().all(|&x| x == 0.0));
        assert!(s.l.iter().all(|&x| x == 0.0));
        assert!(s.m.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn a1_one_values() {
        let s = surface_coefficients(&FluxParams::new(1.0, 1.0 / 3.0));
        assert!((s.b[0] - 0.5).abs() < 1e-15);
        assert!((s.b[1] - 0.5).abs() < 1e-15);
        assert!((s.e[0] - 0.5).abs() < 1e-15);
        assert!(s.e[1].abs() < 1e-15);
        assert!(s.c[0].abs() < 1e-15);
    }

    #[test]
    fn random_parameters_satisfy_all_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let mut r = || rng.gen_range(-3.0..3.0);
            let p = FluxParams::new(r(), r()).with_free(r(), r(), r(), r(), r());
            let s = surface_coefficients(&p);
            assert!(max_abs(&cons_h_residuals(&s, &p)) <= 1e-13);
            assert!(max_abs(&cons_hv_residuals(&s, &p)) <= 1e-13);
            assert!(max_abs(&stab_residuals(&s, &p)) <= 1e-13);
        }
    }

    #[test]
    fn sign_flip_is_detected() {
        let p = FluxParams::new(0.3, -0.7).with_free(0.1, 0.2, -0.3, 0.4, 0.5);
        let mut s = surface_coefficients(&p);
        s.d[4] = -s.d[4];
        assert!(max_abs(&stab_residuals(&s, &p)) > 1e-3);
    }
}
