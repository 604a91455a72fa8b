//! Initial conditions, exact solutions and error norms of the test problems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};
use crate::sbp::{NodeFamily, SbpOperator};
use crate::semidisc::{Mesh, SolutionField};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ExactFn = Arc<dyn Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    LakeAtRest,
    SmoothPerturbation,
    EmergedBump,
    MovingWater,
    DamBreak,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::LakeAtRest,
        ScenarioKind::SmoothPerturbation,
        ScenarioKind::EmergedBump,
        ScenarioKind::MovingWater,
        ScenarioKind::DamBreak,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::LakeAtRest => "lake_at_rest",
            ScenarioKind::SmoothPerturbation => "smooth_perturbation",
            ScenarioKind::EmergedBump => "emerged_bump",
            ScenarioKind::MovingWater => "moving_water",
            ScenarioKind::DamBreak => "dam_break",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = SweError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SweError::Config(format!("unknown scenario '{s}'")))
    }
}

/// Discretisation defaults attached to a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDefaults {
    pub n_elements: usize,
    pub degree: usize,
    pub family: NodeFamily,
    pub flux: String,
    pub a1: f64,
    pub a2: f64,
    pub limiter: bool,
    pub subcell_threshold: Option<f64>,
    pub include_neighbors: bool,
    /// Fixed step count; adaptive stepping when `None`.
    pub steps: Option<usize>,
    pub cfl: f64,
}

#[derive(Clone)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub x_left: f64,
    pub x_right: f64,
    pub g: f64,
    pub t_final: f64,
    pub bottom: ScalarFn,
    pub initial_h: ScalarFn,
    pub initial_hv: ScalarFn,
    pub exact: Option<ExactFn>,
    pub defaults: ScenarioDefaults,
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("kind", &self.kind)
            .field("domain", &(self.x_left, self.x_right))
            .field("g", &self.g)
            .field("t_final", &self.t_final)
            .field("has_exact", &self.exact.is_some())
            .field("defaults", &self.defaults)
            .finish()
    }
}

impl Scenario {
    pub fn mesh(&self, n_elements: usize) -> Result<Mesh> {
        Mesh::new(self.x_left, self.x_right, n_elements)
    }

    pub fn initial_field(&self, mesh: &Mesh, op: &SbpOperator) -> SolutionField {
        SolutionField::from_functions(mesh, op, &*self.initial_h, &*self.initial_hv, &*self.bottom)
    }

    /// Exact `(h, hv)`, if known.
    pub fn exact_at(&self, x: f64, t: f64) -> Option<Result<(f64, f64)>> {
        self.exact.as_ref().map(|f| f(x, t))
    }
}

fn defaults(
    n_elements: usize,
    degree: usize,
    flux: &str,
    subcell_threshold: Option<f64>,
    include_neighbors: bool,
    steps: Option<usize>,
) -> ScenarioDefaults {
    ScenarioDefaults {
        n_elements,
        degree,
        family: NodeFamily::Gauss,
        flux: flux.to_string(),
        a1: -1.0,
        a2: 1.0,
        limiter: true,
        subcell_threshold,
        include_neighbors,
        steps,
        cfl: 0.5,
    }
}

fn sine_bottom(x: f64) -> f64 {
    (PI * x / 4.0).sin()
}

pub fn lake_at_rest() -> Scenario {
    Scenario {
        kind: ScenarioKind::LakeAtRest,
        x_left: -1.0,
        x_right: 1.0,
        g: 1.0,
        t_final: 1.0,
        bottom: Arc::new(sine_bottom),
        initial_h: Arc::new(|x| 1.0 - sine_bottom(x)),
        initial_hv: Arc::new(|_| 0.0),
        exact: Some(Arc::new(|x, _| Ok((1.0 - sine_bottom(x), 0.0)))),
        defaults: defaults(15, 7, "ec", None, false, Some(1000)),
    }
}

pub fn smooth_perturbation() -> Scenario {
    Scenario {
        kind: ScenarioKind::SmoothPerturbation,
        initial_h: Arc::new(|_| 1.0),
        exact: None,
        ..lake_at_rest()
    }
}

pub fn emerged_bump_bottom(x: f64) -> f64 {
    if x > 8.0 && x < 12.0 {
        0.2 - 0.05 * (x - 10.0).powi(2)
    } else {
        0.0
    }
}

pub fn emerged_bump() -> Scenario {
    let h0 = |x: f64| {
        let b = emerged_bump_bottom(x);
        0.1f64.max(b) - b
    };
    Scenario {
        kind: ScenarioKind::EmergedBump,
        x_left: 0.0,
        x_right: 25.0,
        g: 9.81,
        t_final: 1.0,
        bottom: Arc::new(emerged_bump_bottom),
        initial_h: Arc::new(h0),
        initial_hv: Arc::new(|_| 0.0),
        exact: Some(Arc::new(move |x, _| Ok((h0(x), 0.0)))),
        defaults: defaults(40, 5, "llf", Some(1e-5), false, None),
    }
}

pub fn moving_water_bottom(x: f64) -> f64 {
    if x > -0.1 && x < 0.1 {
        0.25 * (10.0 * PI * (x + 1.0)).cos() + 0.25
    } else {
        0.0
    }
}

/// The transcritical energy `3/2 (m g)^{2/3} + g/2` of the second preset.
pub fn critical_energy(m: f64, g: f64) -> f64 {
    1.5 * (m * g).powf(2.0 / 3.0) + 0.5 * g
}

/// Subcritical height `h` with `m^2 / (2 h^2) + g (h + b) = energy`.
pub fn equilibrium_height(m: f64, energy: f64, b: f64, g: f64) -> Result<f64> {
    let k = energy - g * b;
    if m == 0.0 {
        return Ok((k / g).max(0.0));
    }
    let m2 = m * m;
    let f = |h: f64| 0.5 * m2 / (h * h) + g * h - k;
    let h_crit = (m2 / g).cbrt();
    let f_crit = f(h_crit);
    if f_crit > 1e-12 * k.abs().max(1.0) {
        return Err(SweError::InfeasibleEquilibrium { m, energy, b });
    }
    if f_crit >= 0.0 {
        return Ok(h_crit);
    }
    // Newton from the right converges monotonically since f is convex.
    let mut h = k / g;
    for _ in 0..100 {
        let step = f(h) / (g - m2 / (h * h * h));
        let next = h - step;
        if !(next > h_crit) || !next.is_finite() {
            break;
        }
        if (next - h).abs() <= 4.0 * f64::EPSILON * h {
            return Ok(next);
        }
        h = next;
    }
    let (mut lo, mut hi) = (h_crit, k / g);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn moving_water(m: f64, energy: f64) -> Result<Scenario> {
    let g = 9.81;
    for x in [-1.0, 0.0, 1.0] {
        equilibrium_height(m, energy, moving_water_bottom(x), g)?;
    }
    let h = move |x: f64| {
        equilibrium_height(m, energy, moving_water_bottom(x), g)
            .expect("feasibility checked at the bump top")
    };
    Ok(Scenario {
        kind: ScenarioKind::MovingWater,
        x_left: -1.0,
        x_right: 1.0,
        g,
        t_final: 1.0,
        bottom: Arc::new(moving_water_bottom),
        initial_h: Arc::new(h),
        initial_hv: Arc::new(move |_| m),
        exact: Some(Arc::new(move |x, _| {
            Ok((equilibrium_height(m, energy, moving_water_bottom(x), g)?, m))
        })),
        defaults: defaults(40, 5, "llf", None, false, None),
    })
}

pub const DAM_X0: f64 = 5.0;
pub const DAM_H_LEFT: f64 = 0.005;

/// Ritter solution of a dam at the origin with water on the left.
pub fn ritter(xi: f64, t: f64, h_left: f64, g: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(SweError::NegativeTime(t));
    }
    let c0 = (g * h_left).sqrt();
    if t == 0.0 {
        return Ok(if xi < 0.0 { (h_left, 0.0) } else { (0.0, 0.0) });
    }
    if xi <= -c0 * t {
        Ok((h_left, 0.0))
    } else if xi < 2.0 * c0 * t {
        let s = xi / t;
        let h = (2.0 * c0 - s).powi(2) / (9.0 * g);
        let v = 2.0 / 3.0 * (s + c0);
        Ok((h, h * v))
    } else {
        Ok((0.0, 0.0))
    }
}

/// Exact dam break on the periodic domain `[0, 10]`: the dam at `x0 = 5` and
/// its mirrored periodic image at `x = 0 = 10`, each used on its nearer half.
pub fn dam_break_exact(x: f64, t: f64) -> Result<(f64, f64)> {
    let g = 9.81;
    let x = x.rem_euclid(10.0);
    if (x - DAM_X0).abs() <= x.min(10.0 - x) {
        ritter(x - DAM_X0, t, DAM_H_LEFT, g)
    } else {
        let xi = if x < DAM_X0 { -x } else { 10.0 - x };
        let (h, hv) = ritter(xi, t, DAM_H_LEFT, g)?;
        Ok((h, -hv))
    }
}

pub fn dam_break() -> Scenario {
    Scenario {
        kind: ScenarioKind::DamBreak,
        x_left: 0.0,
        x_right: 10.0,
        g: 9.81,
        t_final: 6.0,
        bottom: Arc::new(|_| 0.0),
        initial_h: Arc::new(|x| if x < DAM_X0 { DAM_H_LEFT } else { 0.0 }),
        initial_hv: Arc::new(|_| 0.0),
        exact: Some(Arc::new(dam_break_exact)),
        defaults: {
            let mut d = defaults(100, 2, "llf", Some(1e-6), true, None);
            d.a2 = (2.0 - d.a1) / 3.0;
            d
        },
    }
}

/// Scenario by kind; the moving water parameters are only used by that kind.
pub fn scenario(kind: ScenarioKind, m: f64, energy: f64) -> Result<Scenario> {
    Ok(match kind {
        ScenarioKind::LakeAtRest => lake_at_rest(),
        ScenarioKind::SmoothPerturbation => smooth_perturbation(),
        ScenarioKind::EmergedBump => emerged_bump(),
        ScenarioKind::MovingWater => moving_water(m, energy)?,
        ScenarioKind::DamBreak => dam_break(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l2_sq_h: f64,
    pub l2_sq_hv: f64,
    pub linf_h: f64,
    pub linf_hv: f64,
}

impl ErrorNorms {
    pub fn max_linf(&self) -> f64 {
        self.linf_h.max(self.linf_hv)
    }
}

/// Quadrature `L2^2` and nodal maximum errors against `exact(x) = (h, hv)`.
pub fn error_norms<F>(state: &SolutionField, exact: F, mesh: &Mesh, op: &SbpOperator) -> Result<ErrorNorms>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    state.check_shape(mesh, op)?;
    let x = mesh.node_coordinates(op);
    let w = op.weights();
    let n = op.len();
    let jac = 0.5 * mesh.dx();
    let mut out = ErrorNorms::default();
    for (idx, &xi) in x.iter().enumerate() {
        let (he, hve) = exact(xi)?;
        let dh = state.h[idx] - he;
        let dhv = state.hv[idx] - hve;
        out.l2_sq_h += jac * w[idx % n] * dh * dh;
        out.l2_sq_hv += jac * w[idx % n] * dhv * dhv;
        out.linf_h = out.linf_h.max(dh.abs());
        out.linf_hv = out.linf_hv.max(dhv.abs());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbp::gauss_legendre;

    #[test]
    fn names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
        }
        assert!("nope".parse::<ScenarioKind>().is_err());
    }

    #[test]
    fn lake_and_smooth() {
        let s = lake_at_rest();
        for x in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert!(((s.initial_h)(x) + (s.bottom)(x) - 1.0).abs() < 1e-15);
        }
        assert_eq!((s.initial_h)(0.0), 1.0);
        let p = smooth_perturbation();
        assert_eq!((p.initial_h)(0.5), 1.0);
        assert!(((p.initial_h)(0.5) + (p.bottom)(0.5) - 1.0).abs() > 0.1);
        assert!(p.exact.is_none());
    }

    #[test]
    fn smooth_initial_entropy_by_quadrature() {
        use crate::physics::PhysicsContext;
        use crate::semidisc::diagnostics;
        let s = smooth_perturbation();
        let op = SbpOperator::cached(NodeFamily::Gauss, 7).unwrap();
        let mesh = s.mesh(15).unwrap();
        let state = s.initial_field(&mesh, &op);
        let d = diagnostics(&state, None, &mesh, &op, &PhysicsContext::new(1.0));
        // int_{-1}^{1} 1/2 + sin(pi x / 4) dx = 1 (odd part vanishes).
        assert!((d.entropy - 1.0).abs() < 1e-13);
    }

    #[test]
    fn emerged_bump_values() {
        let s = emerged_bump();
        assert!((emerged_bump_bottom(10.0) - 0.2).abs() < 1e-15);
        assert_eq!((s.initial_h)(10.0), 0.0);
        assert_eq!((s.initial_h)(0.0), 0.1);
        for x in [1.0, 8.5, 8.9, 11.2, 20.0] {
            let b = emerged_bump_bottom(x);
            if b < 0.1 {
                assert!(((s.initial_h)(x) + b - 0.1).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn equilibrium_root() {
        let g = 9.81;
        let h = equilibrium_height(1.0, 25.0, 0.0, g).unwrap();
        assert!((h - 2.54053).abs() < 1e-5, "{h}");
        assert!((0.5 / (h * h) + g * h - 25.0).abs() < 1e-12);
        let h0 = equilibrium_height(0.0, 25.0, 0.3, g).unwrap();
        assert!((h0 + 0.3 - 25.0 / g).abs() < 1e-14);
        assert!((critical_energy(3.0, g) - 19.203311922761937).abs() < 1e-12);
        assert!(matches!(
            equilibrium_height(3.0, 5.0, 0.0, g),
            Err(SweError::InfeasibleEquilibrium { .. })
        ));
    }

    #[test]
    fn equilibria_satisfy_invariants_pointwise() {
        let g = 9.81;
        for (m, e) in [(1.0, 25.0), (3.0, critical_energy(3.0, g))] {
            let s = moving_water(m, e).unwrap();
            for &fam in &[NodeFamily::Gauss, NodeFamily::Lobatto] {
                let op = SbpOperator::cached(fam, 5).unwrap();
                let mesh = s.mesh(40).unwrap();
                let state = s.initial_field(&mesh, &op);
                for i in 0..state.h.len() {
                    let (h, hv) = (state.h[i], state.hv[i]);
                    let v = hv / h;
                    assert_eq!(hv, m);
                    let res = 0.5 * v * v + g * (h + state.b[i]) - e;
                    assert!(res.abs() <= 1e-12 * e, "m={m} res={res:e}");
                }
            }
            // Bump top is exactly critical for the second preset.
            let top = equilibrium_height(m, e, 0.5, g).unwrap();
            assert!(top > 0.0);
        }
    }

    #[test]
    fn ritter_values() {
        let g = 9.81;
        let c0 = (g * DAM_H_LEFT).sqrt();
        let (h, hv) = dam_break_exact(DAM_X0, 2.0).unwrap();
        assert!((h - 4.0 * DAM_H_LEFT / 9.0).abs() < 1e-15);
        assert!((hv / h - 2.0 / 3.0 * c0).abs() < 1e-14);
        assert_eq!(dam_break_exact(2.0, 0.0).unwrap(), (DAM_H_LEFT, 0.0));
        assert_eq!(dam_break_exact(6.0, 0.0).unwrap(), (0.0, 0.0));
        assert!(dam_break_exact(1.0, -1.0).is_err());
        // Continuity at the fan edges.
        let t = 3.0;
        let (hl, _) = dam_break_exact(DAM_X0 - c0 * t + 1e-9, t).unwrap();
        assert!((hl - DAM_H_LEFT).abs() < 1e-9);
        let (hr, _) = dam_break_exact(DAM_X0 + 2.0 * c0 * t - 1e-9, t).unwrap();
        assert!(hr < 1e-12);
    }

    #[test]
    fn ritter_matches_characteristics() {
        // In the fan, u + 2c equals the left state's invariant 2 c0 and
        // x / t = u - c (left-going characteristic family is centred).
        let g = 9.81;
        let c0 = (g * DAM_H_LEFT).sqrt();
        let t = 4.0;
        for k in 1..20 {
            let xi = -c0 * t + 3.0 * c0 * t * k as f64 / 20.0;
            let (h, hv) = ritter(xi, t, DAM_H_LEFT, g).unwrap();
            let (u, c) = (hv / h, (g * h).sqrt());
            assert!((u + 2.0 * c - 2.0 * c0).abs() < 1e-13);
            assert!((u - c - xi / t).abs() < 1e-13);
        }
    }

    #[test]
    fn ritter_solves_swe_in_fan() {
        let g = 9.81;
        let c0 = (g * DAM_H_LEFT).sqrt();
        let (t, eps) = (3.0, 1e-5);
        let f = |x: f64, t: f64| ritter(x, t, DAM_H_LEFT, g).unwrap();
        for k in 1..10 {
            let x = -c0 * t + 3.0 * c0 * t * k as f64 / 10.0;
            let (ht1, qt1) = f(x, t + eps);
            let (ht0, qt0) = f(x, t - eps);
            let (h1, q1) = f(x + eps, t);
            let (h0, q0) = f(x - eps, t);
            let flux = |h: f64, q: f64| if h > 0.0 { q * q / h + 0.5 * g * h * h } else { 0.0 };
            let r_mass = (ht1 - ht0) / (2.0 * eps) + (q1 - q0) / (2.0 * eps);
            let r_mom = (qt1 - qt0) / (2.0 * eps) + (flux(h1, q1) - flux(h0, q0)) / (2.0 * eps);
            assert!(r_mass.abs() < 1e-6 && r_mom.abs() < 1e-6, "{r_mass:e} {r_mom:e}");
        }
    }

    #[test]
    fn ritter_conserves_mass() {
        let g = 9.81;
        let (nodes, weights) = gauss_legendre(8);
        let mass = |t: f64| {
            let (a, n_sub) = (-5.0, 20_000);
            let dx = 10.0 / n_sub as f64;
            let mut total = 0.0;
            for i in 0..n_sub {
                let xc = a + (i as f64 + 0.5) * dx;
                for (xi, w) in nodes.iter().zip(&weights) {
                    total += 0.5 * dx * w * ritter(xc + 0.5 * dx * xi, t, DAM_H_LEFT, g).unwrap().0;
                }
            }
            total
        };
        let m0 = mass(0.0);
        assert!((m0 - 0.025).abs() < 1e-12);
        for t in [3.0, 6.0] {
            assert!((mass(t) - m0).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn periodic_dam_break_is_symmetric_about_the_fronts() {
        // The two images meet at x = 7.5; the split there is continuous.
        for t in [3.0, 6.0] {
            let (a, _) = dam_break_exact(7.5 - 1e-12, t).unwrap();
            let (b, _) = dam_break_exact(7.5 + 1e-12, t).unwrap();
            assert!((a - b).abs() < 1e-12);
            let (c, _) = dam_break_exact(2.5 - 1e-12, t).unwrap();
            assert!((c - DAM_H_LEFT).abs() < 1e-15);
        }
        assert_eq!(dam_break_exact(1.0, 3.0).unwrap(), dam_break_exact(11.0, 3.0).unwrap());
    }

    #[test]
    fn initial_heights_non_negative() {
        for kind in ScenarioKind::ALL {
            let s = scenario(kind, 1.0, 25.0).unwrap();
            for fam in [NodeFamily::Gauss, NodeFamily::Lobatto] {
                for p in [0, 2, 5, 7] {
                    let op = SbpOperator::cached(fam, p).unwrap();
                    let mesh = s.mesh(s.defaults.n_elements).unwrap();
                    assert!(s.initial_field(&mesh, &op).min_h() >= 0.0);
                }
            }
            if let Some(exact) = &s.exact {
                for x in [s.x_left + 0.1, 0.5 * (s.x_left + s.x_right), s.x_right - 0.3] {
                    let (h, hv) = exact(x, 0.0).unwrap();
                    assert!((h - (s.initial_h)(x)).abs() < 1e-13);
                    assert!((hv - (s.initial_hv)(x)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn norms() {
        let op = SbpOperator::cached(NodeFamily::Gauss, 3).unwrap();
        let mesh = Mesh::new(0.0, 10.0, 7).unwrap();
        let state = SolutionField::from_functions(&mesh, &op, |x| x, |x| -x, |_| 0.0);
        let zero = error_norms(&state, |x| Ok((x, -x)), &mesh, &op).unwrap();
        assert_eq!(zero, ErrorNorms::default());
        let d = 0.01;
        let off = error_norms(&state, |x| Ok((x - d, -x)), &mesh, &op).unwrap();
        assert!((off.l2_sq_h - 10.0 * d * d).abs() < 1e-15);
        assert!((off.linf_h - d).abs() < 1e-15);
        assert_eq!(off.linf_hv, 0.0);
    }
}
