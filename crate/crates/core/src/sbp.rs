//! Nodal summation-by-parts operators on the reference element `[-1, 1]`.
//!
//! An operator bundles the nodes, the diagonal mass matrix (stored as a weight
//! vector), the collocation derivative matrix `D` and the restriction `R` to the
//! two boundary points. Together they satisfy
//!
//! ```text
//! M D + D^T M = R^T B R,    B = diag(-1, 1)
//! ```
//!
//! Nodes are Legendre–Gauß or Legendre–Gauß–Lobatto points obtained by Newton
//! iteration on the three-term Legendre recurrence.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SweError};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 20;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeFamily {
    Lobatto,
    Gauss,
}

impl std::fmt::Display for NodeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeFamily::Lobatto => write!(f, "lobatto"),
            NodeFamily::Gauss => write!(f, "gauss"),
        }
    }
}

impl std::str::FromStr for NodeFamily {
    type Err = SweError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lobatto" => Ok(NodeFamily::Lobatto),
            "gauss" => Ok(NodeFamily::Gauss),
            other => Err(SweError::Config(format!("unknown node family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SbpOperator {
    family: NodeFamily,
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Row-major `(p+1) x (p+1)`.
    derivative: Vec<f64>,
    /// Row 0 evaluates at -1, row 1 at +1; row-major `2 x (p+1)`.
    restriction: Vec<f64>,
}

impl SbpOperator {
    pub fn new(family: NodeFamily, degree: usize) -> Result<Self> {
        match family {
            NodeFamily::Lobatto => lobatto_operator(degree),
            NodeFamily::Gauss => gauss_operator(degree),
        }
    }

    /// Shared, lazily constructed operator for `(family, degree)`.
    pub fn cached(family: NodeFamily, degree: usize) -> Result<Arc<SbpOperator>> {
        static CACHE: OnceLock<Mutex<HashMap<(NodeFamily, usize), Arc<SbpOperator>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("operator cache poisoned");
        if let Some(op) = map.get(&(family, degree)) {
            return Ok(Arc::clone(op));
        }
        let op = Arc::new(SbpOperator::new(family, degree)?);
        map.insert((family, degree), Arc::clone(&op));
        Ok(op)
    }

    pub fn family(&self) -> NodeFamily {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes, `p + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.derivative[i * self.len() + j]
    }

    /// Boundary evaluation weight: `side` 0 is the left boundary, 1 the right.
    #[inline]
    pub fn r(&self, side: usize, j: usize) -> f64 {
        self.restriction[side * self.len() + j]
    }

    pub fn derivative_row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.derivative[i * n..(i + 1) * n]
    }

    pub fn restriction_row(&self, side: usize) -> &[f64] {
        let n = self.len();
        &self.restriction[side * n..(side + 1) * n]
    }

    /// `true` when both boundary points are nodes, i.e. `R` selects nodal values.
    pub fn includes_boundary_nodes(&self) -> bool {
        self.family == NodeFamily::Lobatto
    }

    /// `D x`.
    pub fn apply_derivative(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.derivative[i * n..(i + 1) * n];
            *o = row.iter().zip(x).map(|(d, x)| d * x).sum();
        }
    }

    pub fn derivative_of(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.apply_derivative(x, &mut out);
        out
    }

    /// `(R x)` as `[left, right]`.
    pub fn boundary_values(&self, x: &[f64]) -> [f64; 2] {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(r, x)| r * x).sum::<f64>();
        [dot(self.restriction_row(0)), dot(self.restriction_row(1))]
    }

    /// `M^{-1} R^T B beta` for boundary data `beta = [left, right]`.
    pub fn lift(&self, beta: [f64; 2], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = (self.r(1, j) * beta[1] - self.r(0, j) * beta[0]) / self.weights[j];
        }
    }

    /// `1^T M x`, the quadrature of `x` over the reference element.
    pub fn integrate(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, x)| w * x).sum()
    }

    /// Lagrange interpolation matrix from the nodes to `points`, row-major
    /// `points.len() x (p+1)`.
    pub fn interpolation_matrix(&self, points: &[f64]) -> Vec<f64> {
        let bary = barycentric_weights(&self.nodes);
        let mut out = Vec::with_capacity(points.len() * self.len());
        for &z in points {
            out.extend(lagrange_row(&self.nodes, &bary, z));
        }
        out
    }

    /// `M`-adjoint multiplication `(M^{-1} diag(a)^T M) x`.
    ///
    /// The mass matrix is diagonal for every operator built here, so the
    /// adjoint of a nodal multiplication operator is the operator itself and
    /// this reduces to the pointwise product `a * x`.
    pub fn adjoint_multiply(&self, a: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if a.len() != n {
            return Err(SweError::LengthMismatch {
                expected: n,
                got: a.len(),
            });
        }
        if x.len() != n {
            return Err(SweError::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        Ok(a.iter().zip(x).map(|(a, x)| a * x).collect())
    }
}

/// Max-norm of the SBP residual `M D + D^T M - R^T B R`.
pub fn verify_sbp(op: &SbpOperator) -> f64 {
    let n = op.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let md = op.weights[i] * op.d(i, j) + op.weights[j] * op.d(j, i);
            let rbr = op.r(1, i) * op.r(1, j) - op.r(0, i) * op.r(0, j);
            worst = worst.max((md - rbr).abs());
        }
    }
    worst
}

fn check_degree(p: usize) -> Result<()> {
    if p > MAX_DEGREE {
        Err(SweError::UnsupportedDegree {
            degree: p,
            max: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

pub fn lobatto_operator(p: usize) -> Result<SbpOperator> {
    check_degree(p)?;
    let (nodes, weights) = if p == 0 {
        (vec![0.0], vec![2.0])
    } else {
        lobatto_nodes_weights(p)
    };
    let mut op = assemble(NodeFamily::Lobatto, p, nodes, weights);
    if p > 0 {
        let n = p + 1;
        op.restriction.iter_mut().for_each(|r| *r = 0.0);
        op.restriction[0] = 1.0;
        op.restriction[n + p] = 1.0;
    }
    Ok(op)
}

pub fn gauss_operator(p: usize) -> Result<SbpOperator> {
    check_degree(p)?;
    let (nodes, weights) = gauss_nodes_weights(p + 1);
    Ok(assemble(NodeFamily::Gauss, p, nodes, weights))
}

fn assemble(family: NodeFamily, degree: usize, nodes: Vec<f64>, weights: Vec<f64>) -> SbpOperator {
    let n = nodes.len();
    let bary = barycentric_weights(&nodes);
    let mut derivative = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let dij = bary[j] / bary[i] / (nodes[i] - nodes[j]);
                derivative[i * n + j] = dij;
                diag -= dij;
            }
        }
        derivative[i * n + i] = diag;
    }
    let mut restriction = lagrange_row(&nodes, &bary, -1.0);
    restriction.extend(lagrange_row(&nodes, &bary, 1.0));
    SbpOperator {
        family,
        degree,
        nodes,
        weights,
        derivative,
        restriction,
    }
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect()
}

fn lagrange_row(nodes: &[f64], bary: &[f64], z: f64) -> Vec<f64> {
    if let Some(hit) = nodes.iter().position(|&x| x == z) {
        let mut row = vec![0.0; nodes.len()];
        row[hit] = 1.0;
        return row;
    }
    let terms: Vec<f64> = nodes
        .iter()
        .zip(bary)
        .map(|(&x, &w)| w / (z - x))
        .collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub(crate) fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    let (mut dp_prev, mut dp) = (0.0, 1.0);
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        let dp_next = dp_prev + (2.0 * kf - 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

fn newton<F: Fn(f64) -> (f64, f64)>(mut x: f64, f: F) -> f64 {
    for _ in 0..NEWTON_MAX_ITER {
        let (val, der) = f(x);
        let step = val / der;
        x -= step;
        if step.abs() <= NEWTON_TOL {
            break;
        }
    }
    x
}

fn gauss_nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-type guess for the i-th root from the right.
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let x = newton(guess, |x| legendre(n, x));
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    sort_pairs(nodes, weights)
}

fn lobatto_nodes_weights(p: usize) -> (Vec<f64>, Vec<f64>) {
    let pf = p as f64;
    let mut nodes = vec![-1.0, 1.0];
    for i in 1..p {
        let guess = (std::f64::consts::PI * i as f64 / pf).cos();
        // Roots of P_p'; P_p'' from the Legendre differential equation.
        let x = newton(guess, |x| {
            let (pv, dp) = legendre(p, x);
            let ddp = (2.0 * x * dp - pf * (pf + 1.0) * pv) / (1.0 - x * x);
            (dp, ddp)
        });
        nodes.push(x);
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (pv, _) = legendre(p, x);
            2.0 / (pf * (pf + 1.0) * pv * pv)
        })
        .collect();
    sort_pairs(nodes, weights)
}

fn sort_pairs(nodes: Vec<f64>, weights: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauß–Legendre nodes and weights with `n >= 1` points.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss rule needs at least one point");
    gauss_nodes_weights(n)
}

/// Lobatto–Legendre nodes and weights with `q + 1` points (`q >= 1`).
pub fn lobatto_points(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "Lobatto rule needs at least two points");
    lobatto_nodes_weights(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn lobatto_p1_matches_two_point_lagrange() {
        let op = lobatto_operator(1).unwrap();
        assert_eq!(op.nodes(), &[-1.0, 1.0]);
        assert!(max_abs_diff(op.weights(), &[1.0, 1.0]) < 1e-15);
        for i in 0..2 {
            assert!((op.d(i, 0) + 0.5).abs() < 1e-15);
            assert!((op.d(i, 1) - 0.5).abs() < 1e-15);
        }
        assert_eq!(op.restriction_row(0), &[1.0, 0.0]);
        assert_eq!(op.restriction_row(1), &[0.0, 1.0]);
    }

    #[test]
    fn lobatto_p2_simpson() {
        let op = lobatto_operator(2).unwrap();
        assert!(max_abs_diff(op.nodes(), &[-1.0, 0.0, 1.0]) < 1e-15);
        assert!(max_abs_diff(op.weights(), &[1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) < 1e-14);
    }

    #[test]
    fn gauss_p1_values() {
        let op = gauss_operator(1).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(max_abs_diff(op.nodes(), &[-s, s]) < 1e-15);
        assert!(max_abs_diff(op.weights(), &[1.0, 1.0]) < 1e-14);
        let h = 3f64.sqrt() / 2.0;
        for i in 0..2 {
            assert!((op.d(i, 0) + h).abs() < 1e-14);
            assert!((op.d(i, 1) - h).abs() < 1e-14);
        }
        let r0 = op.restriction_row(0);
        assert!((r0[0] - 1.366_025_403_784_438_6).abs() < 1e-14);
        assert!((r0[1] + 0.366_025_403_784_438_6).abs() < 1e-14);
        let r1 = op.restriction_row(1);
        assert!((r1[0] + 0.366_025_403_784_438_6).abs() < 1e-14);
        assert!((r1[1] - 1.366_025_403_784_438_6).abs() < 1e-14);
    }

    #[test]
    fn gauss_p0_is_constant_basis() {
        let op = gauss_operator(0).unwrap();
        assert_eq!(op.nodes(), &[0.0]);
        assert!((op.weights()[0] - 2.0).abs() < 1e-15);
        assert_eq!(op.d(0, 0), 0.0);
        assert_eq!(op.restriction_row(0), &[1.0]);
        assert_eq!(op.restriction_row(1), &[1.0]);
    }

    #[test]
    fn sbp_residual_small_for_both_families() {
        for p in 0..=9 {
            for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
                let op = SbpOperator::new(family, p).unwrap();
                let res = verify_sbp(&op);
                assert!(res <= 1e-13, "{family} p={p}: residual {res:e}");
                let wsum: f64 = op.weights().iter().sum();
                assert!((wsum - 2.0).abs() < 1e-14);
                assert!(op.weights().iter().all(|&w| w > 0.0));
                assert!(op.nodes().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn perturbed_derivative_is_detected() {
        let mut op = lobatto_operator(4).unwrap();
        op.derivative[7] += 1e-6;
        assert!(verify_sbp(&op) >= 1e-7);
    }

    #[test]
    fn derivative_and_restriction_exact_on_monomials() {
        for p in 1..=12 {
            for family in [NodeFamily::Lobatto, NodeFamily::Gauss] {
                let op = SbpOperator::new(family, p).unwrap();
                for k in 0..=p {
                    let f: Vec<f64> = op.nodes().iter().map(|x| x.powi(k as i32)).collect();
                    let df: Vec<f64> = op
                        .nodes()
                        .iter()
                        .map(|x| if k == 0 { 0.0 } else { k as f64 * x.powi(k as i32 - 1) })
                        .collect();
                    let err = max_abs_diff(&op.derivative_of(&f), &df);
                    assert!(err <= 1e-12 * (p * p) as f64, "{family} p={p} k={k}: {err:e}");
                    let [l, r] = op.boundary_values(&f);
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((l - sign).abs() <= 1e-13, "{family} p={p} k={k}");
                    assert!((r - 1.0).abs() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn quadrature_exactness() {
        for p in 1..=9 {
            for (family, exact_deg) in [(NodeFamily::Lobatto, 2 * p - 1), (NodeFamily::Gauss, 2 * p + 1)] {
                let op = SbpOperator::new(family, p).unwrap();
                for k in 0..=exact_deg {
                    let f: Vec<f64> = op.nodes().iter().map(|x| x.powi(k as i32)).collect();
                    let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                    let q = op.integrate(&f);
                    assert!((q - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{family} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn unsupported_degree() {
        assert!(matches!(
            gauss_operator(MAX_DEGREE + 1),
            Err(SweError::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn adjoint_multiply_is_pointwise() {
        let op = gauss_operator(2).unwrap();
        let x = op.nodes().to_vec();
        let sq = op.adjoint_multiply(&x, &x).unwrap();
        for (s, x) in sq.iter().zip(&x) {
            assert_eq!(*s, x * x);
        }
        let ones = vec![1.0; 3];
        assert_eq!(op.adjoint_multiply(&ones, &x).unwrap(), x);
        assert!(matches!(
            op.adjoint_multiply(&[1.0], &x),
            Err(SweError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn lobatto_restriction_is_selection() {
        for p in 1..=8 {
            let op = lobatto_operator(p).unwrap();
            let r0 = op.restriction_row(0);
            let r1 = op.restriction_row(1);
            assert_eq!(r0[0], 1.0);
            assert_eq!(r1[p], 1.0);
            assert!(r0[1..].iter().all(|&r| r == 0.0));
            assert!(r1[..p].iter().all(|&r| r == 0.0));
        }
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = SbpOperator::cached(NodeFamily::Gauss, 3).unwrap();
        let b = SbpOperator::cached(NodeFamily::Gauss, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
