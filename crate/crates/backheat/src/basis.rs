//! Sine basis on the midpoint grid and its discrete coefficient transform.
//!
//! The basis is phi_p(x) = sqrt(2/pi) sin(px) on (0, pi), tensorised as
//! phi_{p,q}(x,y) = phi_p(x) phi_q(y). On the midpoint grid
//! x_i = pi(2i-1)/(2n) the first n-1 modes are exactly orthogonal under the
//! discrete average, which is what makes the coefficient transform below an
//! exact inverse for in-range modes.

use crate::error::{Error, Result};
use ndarray::Array2;
use std::f64::consts::PI;

/// Midpoint grid geometry: x_i = pi(2i-1)/(2n), y_j = pi(2j-1)/(2m).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    n: usize,
    m: usize,
    nodes_x: Vec<f64>,
    nodes_y: Vec<f64>,
}

impl GridSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Config(format!("grid sizes must be positive, got {n}x{m}")));
        }
        let nodes_x = (1..=n).map(|i| PI * (2 * i - 1) as f64 / (2 * n) as f64).collect();
        let nodes_y = (1..=m).map(|j| PI * (2 * j - 1) as f64 / (2 * m) as f64).collect();
        Ok(Self { n, m, nodes_x, nodes_y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nodes_x(&self) -> &[f64] {
        &self.nodes_x
    }

    pub fn nodes_y(&self) -> &[f64] {
        &self.nodes_y
    }

    /// Sample a function of (x, y) at every grid node.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Array2<f64> {
        Array2::from_shape_fn((self.n, self.m), |(i, j)| f(self.nodes_x[i], self.nodes_y[j]))
    }

    fn check_mode(&self, p: usize, q: usize) -> Result<()> {
        if p == 0 || q == 0 || p >= self.n || q >= self.m {
            return Err(Error::ModeOutOfRange { p, q, n: self.n, m: self.m });
        }
        Ok(())
    }

    fn check_shape(&self, values: &Array2<f64>) -> Result<()> {
        if values.dim() != (self.n, self.m) {
            return Err(Error::ShapeMismatch { expected: (self.n, self.m), got: values.dim() });
        }
        Ok(())
    }
}

/// One-dimensional basis function sqrt(2/pi) sin(px).
pub fn basis_eval_1d(p: usize, x: f64) -> f64 {
    (2.0 / PI).sqrt() * (p as f64 * x).sin()
}

/// phi_{p,q}(x,y) = (2/pi) sin(px) sin(qy).
pub fn basis_eval(p: usize, q: usize, x: f64, y: f64) -> f64 {
    basis_eval_1d(p, x) * basis_eval_1d(q, y)
}

/// Discrete coefficient transform
/// (pi^2/(nm)) sum_ij values[i][j] phi_{p,q}(x_i, y_j).
///
/// Rejects p >= n or q >= m: beyond that range the transform aliases onto a
/// lower mode and the result would be meaningless to callers.
pub fn discrete_coefficient(
    values: &Array2<f64>,
    grid: &GridSpec,
    p: usize,
    q: usize,
) -> Result<f64> {
    grid.check_mode(p, q)?;
    grid.check_shape(values)?;
    let (n, m) = (grid.n, grid.m);
    // Factorised double sum: contract the y index first.
    let mut acc = 0.0;
    for i in 0..n {
        let bx = basis_eval_1d(p, grid.nodes_x[i]);
        let mut row = 0.0;
        for j in 0..m {
            row += values[(i, j)] * basis_eval_1d(q, grid.nodes_y[j]);
        }
        acc += bx * row;
    }
    Ok(PI * PI / (n * m) as f64 * acc)
}

/// All coefficients (p, q) for p = 1..=p_max, q = 1..=q_max in one pass.
///
/// Same contract as [`discrete_coefficient`]; returns a p_max x q_max matrix
/// whose (p-1, q-1) entry is the coefficient of mode (p, q).
pub fn discrete_coefficient_block(
    values: &Array2<f64>,
    grid: &GridSpec,
    p_max: usize,
    q_max: usize,
) -> Result<Array2<f64>> {
    grid.check_mode(p_max, q_max)?;
    grid.check_shape(values)?;
    let (n, m) = (grid.n, grid.m);
    let bx = Array2::from_shape_fn((p_max, n), |(k, i)| basis_eval_1d(k + 1, grid.nodes_x[i]));
    let by = Array2::from_shape_fn((m, q_max), |(j, k)| basis_eval_1d(k + 1, grid.nodes_y[j]));
    let block = bx.dot(values).dot(&by);
    Ok(block * (PI * PI / (n * m) as f64))
}

fn axis_average(nodes: &[f64], p: usize, r: usize) -> f64 {
    let s: f64 = nodes.iter().map(|&x| basis_eval_1d(p, x) * basis_eval_1d(r, x)).sum();
    s / nodes.len() as f64
}

/// Direct-summation orthogonality functional
/// delta = (1/n) sum_i phi_p phi_r * (1/m) sum_j phi_q phi_s.
///
/// This is the ground truth the closed-form predictor is tested against.
pub fn delta_orthogonality(grid: &GridSpec, p: usize, q: usize, r: usize, s: usize) -> f64 {
    axis_average(&grid.nodes_x, p, r) * axis_average(&grid.nodes_y, q, s)
}

// (1/n) sum_i phi_p(x_i) phi_r(x_i) in closed form. Writing
// c(a) = (-1)^k when a = 2kn and 0 otherwise, the product-to-sum identity
// gives the average as (c(p-r) - c(p+r)) / pi. In particular the value is
// (-1)^k/pi for r = 2kn + p and (-1)^(k+1)/pi for r = 2kn - p; the sign of
// the second family differs from the compact statement one might expect,
// which is why the direct sum above stays the oracle.
fn axis_closed_form(n: usize, p: usize, r: usize) -> f64 {
    let period = 2 * n as i64;
    let c = |a: i64| -> f64 {
        if a.rem_euclid(period) == 0 {
            let k = a / period;
            if k.rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    };
    (c(p as i64 - r as i64) - c(p as i64 + r as i64)) / PI
}

/// Pure-arithmetic predictor for [`delta_orthogonality`]: 1/pi^2 times a
/// sign determined by which alias family (r, s) falls into, 0 otherwise.
pub fn delta_orthogonality_predicted(
    grid: &GridSpec,
    p: usize,
    q: usize,
    r: usize,
    s: usize,
) -> f64 {
    axis_closed_form(grid.n, p, r) * axis_closed_form(grid.m, q, s)
}

/// Matrix of sine coefficients indexed by mode (p, q), p = 1..=P, q = 1..=Q.
///
/// Entries must be finite: a diverging computation is reported through
/// [`Error::BlowUp`] by its producer rather than stored here silently.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    coeffs: Array2<f64>,
}

impl CoefficientField {
    pub fn new(coeffs: Array2<f64>) -> Result<Self> {
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("coefficient field"));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(p_max: usize, q_max: usize) -> Self {
        Self { coeffs: Array2::zeros((p_max, q_max)) }
    }

    /// Build from a closed-form oracle over 1-based mode indices.
    pub fn from_fn(p_max: usize, q_max: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(Array2::from_shape_fn((p_max, q_max), |(i, j)| f(i + 1, j + 1)))
    }

    pub fn p_max(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn q_max(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Coefficient of mode (p, q) (1-based); zero outside the stored block.
    pub fn coeff(&self, p: usize, q: usize) -> f64 {
        if p == 0 || q == 0 || p > self.p_max() || q > self.q_max() {
            0.0
        } else {
            self.coeffs[(p - 1, q - 1)]
        }
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.coeffs
    }

    /// Sum of squared coefficients (the squared norm under the orthonormal basis).
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|v| v * v).sum()
    }
}

/// Evaluate the finite sine series at every grid node.
pub fn synthesize_field(coeffs: &CoefficientField, grid: &GridSpec) -> Array2<f64> {
    let (n, m) = (grid.n, grid.m);
    let (p_max, q_max) = (coeffs.p_max(), coeffs.q_max());
    let bx = Array2::from_shape_fn((n, p_max), |(i, k)| basis_eval_1d(k + 1, grid.nodes_x[i]));
    let by = Array2::from_shape_fn((q_max, m), |(k, j)| basis_eval_1d(k + 1, grid.nodes_y[j]));
    bx.dot(&coeffs.coeffs).dot(&by)
}
