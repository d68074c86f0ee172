//! Gauss-Legendre rules and the end-corrected composite time rule.

use crate::error::{Error, Result};

/// Gauss-Legendre rule on (-1, 1): `order` nodes at the roots of the
/// Legendre polynomial, weights 2 / ((1 - x^2) P'(x)^2).
#[derive(Debug, Clone)]
pub struct GaussLegendreRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

// Value and derivative of the Legendre polynomial P_k by the three-term
// recurrence.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let deriv = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, deriv)
}

/// Build the Gauss-Legendre rule of the given order by Newton refinement
/// from the Chebyshev-like initial guesses. Nodes are refined to 1e-14.
pub fn gauss_legendre_rule(order: usize) -> Result<GaussLegendreRule> {
    if order == 0 {
        return Err(Error::OutOfRange { what: "gauss-legendre order", value: 0.0 });
    }
    if order == 1 {
        return Ok(GaussLegendreRule { order, nodes: vec![0.0], weights: vec![2.0] });
    }
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    // Roots come out in descending order from this guess; fill from the top.
    for i in 0..order {
        let mut x =
            (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (pv, dv) = legendre(order, x);
            let dx = pv / dv;
            x -= dx;
            if dx.abs() < 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence("legendre root refinement"));
        }
        let (_, dv) = legendre(order, x);
        nodes[order - 1 - i] = x;
        weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dv * dv);
    }
    // Symmetrise: pair each root with its mirror image to cancel the
    // asymmetric part of the rounding.
    for i in 0..order / 2 {
        let k = order - 1 - i;
        let x = 0.5 * (nodes[k] - nodes[i]);
        nodes[i] = -x;
        nodes[k] = x;
        let w = 0.5 * (weights[i] + weights[k]);
        weights[i] = w;
        weights[k] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    Ok(GaussLegendreRule { order, nodes, weights })
}

impl GaussLegendreRule {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Integrate f over [a, b] by mapping the rule nodes affinely.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, rule: &GaussLegendreRule) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(mid + half * x);
    }
    half * acc
}

/// End-corrected composite weights for K equal segments of unit total length:
/// {3/8, 7/6, 23/24, 1, ..., 1, 23/24, 7/6, 3/8} scaled by 1/K.
///
/// K < 6 is rejected: the two three-point end corrections would overlap.
pub fn composite_time_weights(k_segments: usize) -> Result<Vec<f64>> {
    if k_segments < 6 {
        return Err(Error::OutOfRange {
            what: "composite rule segment count (need >= 6)",
            value: k_segments as f64,
        });
    }
    let h = 1.0 / k_segments as f64;
    let mut w = vec![h; k_segments + 1];
    w[0] = h * 3.0 / 8.0;
    w[1] = h * 7.0 / 6.0;
    w[2] = h * 23.0 / 24.0;
    w[k_segments] = h * 3.0 / 8.0;
    w[k_segments - 1] = h * 7.0 / 6.0;
    w[k_segments - 2] = h * 23.0 / 24.0;
    Ok(w)
}

/// Equidistant time grid t_k = k T / K with the end-corrected composite
/// weights, so that a dot product with sampled values integrates over [0, T].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_final: f64, k_segments: usize) -> Result<Self> {
        if !(t_final > 0.0) {
            return Err(Error::OutOfRange { what: "final time", value: t_final });
        }
        let points = (0..=k_segments)
            .map(|k| t_final * k as f64 / k_segments as f64)
            .collect();
        let weights = composite_time_weights(k_segments)?
            .into_iter()
            .map(|w| w * t_final)
            .collect();
        Ok(Self { t_final, points, weights })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral over the full interval [0, T].
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        integrate_time_series(values, self)
    }

    /// Integral over the prefix [0, t_k] using the same node spacing.
    ///
    /// For k >= 6 this is the end-corrected rule on the sub-grid; for
    /// 0 < k < 6 it falls back to the composite trapezoid (second order),
    /// which only ever covers a span of a few segments.
    pub fn integrate_prefix(&self, values: &[f64], k: usize) -> Result<f64> {
        if values.len() != self.points.len() {
            return Err(Error::LengthMismatch { expected: self.points.len(), got: values.len() });
        }
        if k >= self.points.len() {
            return Err(Error::OutOfRange { what: "prefix index", value: k as f64 });
        }
        let h = self.t_final / self.segments() as f64;
        if k == 0 {
            return Ok(0.0);
        }
        if k >= 6 {
            let w = composite_time_weights(k)?;
            let span = h * k as f64;
            return Ok(values[..=k]
                .iter()
                .zip(&w)
                .map(|(v, wi)| v * wi * span)
                .sum());
        }
        let mut acc = 0.5 * (values[0] + values[k]);
        for v in &values[1..k] {
            acc += v;
        }
        Ok(acc * h)
    }
}

/// Dot product of sampled values with the grid weights.
pub fn integrate_time_series(values: &[f64], grid: &TimeGrid) -> Result<f64> {
    if values.len() != grid.points.len() {
        return Err(Error::LengthMismatch { expected: grid.points.len(), got: values.len() });
    }
    Ok(values.iter().zip(&grid.weights).map(|(v, w)| v * w).sum())
}
