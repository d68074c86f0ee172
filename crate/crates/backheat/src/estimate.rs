//! Inverse machinery: coefficient estimators from noisy observations,
//! truncation-level selection, the truncated spectral estimator, the
//! quasi-boundary-value filter, the unfiltered classical inversion, and the
//! discretization-bias diagnostics.
//!
//! All exponentials of A(T)(p^2+q^2) are formed through their natural log
//! first; a configurable cap (default [`crate::LOG_BLOWUP_CAP`]) turns what
//! would be an infinity into a structured blow-up report.

use crate::basis::{discrete_coefficient, discrete_coefficient_block, synthesize_field,
                   CoefficientField, GridSpec};
use crate::error::{BlowUpReport, Error, Result};
use crate::heat::DiffusionProfile;
use crate::noise::NoisyDataset;
use crate::LOG_BLOWUP_CAP;
use ndarray::{Array2, Array3};

/// How the retained mode counts (N, M) are chosen from (n, m) and A(T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationRule {
    /// N = floor(sqrt(omega1 log n) / (2 sqrt(A(T)))), same for M.
    Theorem { omega1: f64, omega2: f64 },
    /// N = floor(sqrt(log n) / A(T)), same for M.
    Numeric,
    /// Fixed counts, clamped to the alias-free range.
    Manual { n_modes: usize, m_modes: usize },
}

impl TruncationRule {
    pub fn theorem(omega1: f64, omega2: f64) -> Result<Self> {
        for w in [omega1, omega2] {
            if !(w > 0.0 && w < 2.0) {
                return Err(Error::OutOfRange { what: "omega (need 0 < omega < 2)", value: w });
            }
        }
        Ok(TruncationRule::Theorem { omega1, omega2 })
    }
}

fn clamp_modes(v: f64, cap: usize) -> usize {
    if !v.is_finite() || v < 1.0 {
        1
    } else {
        (v as usize).clamp(1, cap)
    }
}

/// Resolve a truncation rule into retained counts, clamped to
/// [1, n-1] x [1, m-1] so the estimator is never empty and never aliased.
pub fn select_truncation(rule: &TruncationRule, n: usize, m: usize, a_t: f64) -> (usize, usize) {
    let (cap_n, cap_m) = (n.saturating_sub(1).max(1), m.saturating_sub(1).max(1));
    match *rule {
        TruncationRule::Theorem { omega1, omega2 } => {
            let nn = (omega1 * (n as f64).ln()).sqrt() / (2.0 * a_t.sqrt());
            let mm = (omega2 * (m as f64).ln()).sqrt() / (2.0 * a_t.sqrt());
            (clamp_modes(nn.floor(), cap_n), clamp_modes(mm.floor(), cap_m))
        }
        TruncationRule::Numeric => {
            let nn = (n as f64).ln().sqrt() / a_t;
            let mm = (m as f64).ln().sqrt() / a_t;
            (clamp_modes(nn.floor(), cap_n), clamp_modes(mm.floor(), cap_m))
        }
        TruncationRule::Manual { n_modes, m_modes } => {
            (n_modes.clamp(1, cap_n), m_modes.clamp(1, cap_m))
        }
    }
}

/// Transform of the final-data observations: the estimator of h_{p,q}.
pub fn estimate_h_coeff(dataset: &NoisyDataset, p: usize, q: usize) -> Result<f64> {
    discrete_coefficient(&dataset.d, &dataset.grid, p, q)
}

/// Transform of the source observations at every time node: the estimator
/// of the series f_{p,q}(t_k).
pub fn estimate_f_coeff(dataset: &NoisyDataset, p: usize, q: usize) -> Result<Vec<f64>> {
    let k = dataset.time_grid.segments();
    let mut out = Vec::with_capacity(k + 1);
    for step in 0..=k {
        let slice = dataset.g.index_axis(ndarray::Axis(2), step).to_owned();
        out.push(discrete_coefficient(&slice, &dataset.grid, p, q)?);
    }
    Ok(out)
}

// All h-hat coefficients up to (p_max, q_max).
fn h_hat_block(dataset: &NoisyDataset, p_max: usize, q_max: usize) -> Result<Array2<f64>> {
    discrete_coefficient_block(&dataset.d, &dataset.grid, p_max, q_max)
}

// All f-hat series up to (p_max, q_max): shape (p_max, q_max, K+1).
fn f_hat_block(dataset: &NoisyDataset, p_max: usize, q_max: usize) -> Result<Array3<f64>> {
    let k = dataset.time_grid.segments();
    let mut out = Array3::zeros((p_max, q_max, k + 1));
    for step in 0..=k {
        let slice = dataset.g.index_axis(ndarray::Axis(2), step).to_owned();
        let block = discrete_coefficient_block(&slice, &dataset.grid, p_max, q_max)?;
        out.index_axis_mut(ndarray::Axis(2), step).assign(&block);
    }
    Ok(out)
}

/// A reconstructed initial state: its coefficients and the synthesized field
/// on the observation grid.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub coeffs: CoefficientField,
    pub field: Array2<f64>,
}

/// Classical (unfiltered) reconstruction plus the size of its largest
/// coefficient, kept in log10 because divergent runs routinely leave the
/// range where the magnitude itself is printable.
#[derive(Debug, Clone)]
pub struct ClassicalEstimate {
    pub estimate: Estimate,
    pub log10_peak: f64,
}

// Sum of sign * exp(log) terms evaluated without forming the exponentials.
fn signed_log_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let peak = terms
        .iter()
        .filter(|(s, _)| *s != 0.0)
        .map(|&(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return (0.0, f64::NEG_INFINITY);
    }
    let scaled: f64 = terms.iter().map(|&(s, l)| s * (l - peak).exp()).sum();
    (scaled.signum(), peak + scaled.abs().ln())
}

// log-space evaluation of h_hat * lambda^{-1}(T) - sum_k w_k lambda^{-1}(t_k) f_hat_k
// for one mode; returns (sign, ln |coefficient|).
pub(crate) fn inversion_coeff_log_parts(
    h_hat: f64,
    f_hat: &[f64],
    log_lam_inv: &[f64],
    weights: &[f64],
) -> (f64, f64) {
    let k_last = log_lam_inv.len() - 1;
    let mut terms = Vec::with_capacity(f_hat.len() + 1);
    terms.push((h_hat.signum(), h_hat.abs().ln() + log_lam_inv[k_last]));
    for k in 0..f_hat.len() {
        let v = weights[k] * f_hat[k];
        terms.push((-v.signum(), v.abs().ln() + log_lam_inv[k]));
    }
    signed_log_sum(&terms)
}

fn unfiltered_inversion(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    p_max: usize,
    q_max: usize,
    log_cap: f64,
) -> Result<ClassicalEstimate> {
    let t_points = dataset.time_grid.points();
    let weights = dataset.time_grid.weights();
    let a_of_t: Vec<f64> = t_points
        .iter()
        .map(|&t| profile.cumulative(t))
        .collect::<Result<_>>()?;
    let a_t = a_of_t[a_of_t.len() - 1];
    let h_hat = h_hat_block(dataset, p_max, q_max)?;
    let f_hat = f_hat_block(dataset, p_max, q_max)?;

    let mut coeffs = Array2::zeros((p_max, q_max));
    let mut peak_log10 = f64::NEG_INFINITY;
    let mut peak_mode = (1, 1);
    let mut capped: Option<(usize, usize)> = None;
    for p in 1..=p_max {
        for q in 1..=q_max {
            let s = (p * p + q * q) as f64;
            let log_lam: Vec<f64> = a_of_t.iter().map(|&a| a * s).collect();
            let series: Vec<f64> =
                (0..t_points.len()).map(|k| f_hat[(p - 1, q - 1, k)]).collect();
            let (sign, log_mag) =
                inversion_coeff_log_parts(h_hat[(p - 1, q - 1)], &series, &log_lam, weights);
            let log10 = log_mag / std::f64::consts::LN_10;
            if log10 > peak_log10 {
                peak_log10 = log10;
                peak_mode = (p, q);
            }
            if a_t * s > log_cap {
                capped.get_or_insert((p, q));
            } else {
                coeffs[(p - 1, q - 1)] = if sign == 0.0 { 0.0 } else { sign * log_mag.exp() };
            }
        }
    }
    if capped.is_some() {
        return Err(Error::BlowUp(BlowUpReport { mode: peak_mode, log10_magnitude: peak_log10 }));
    }
    let coeffs = CoefficientField::new(coeffs)?;
    let field = synthesize_field(&coeffs, &dataset.grid);
    Ok(ClassicalEstimate { estimate: Estimate { coeffs, field }, log10_peak: peak_log10 })
}

/// Truncated spectral estimator: unfiltered inversion restricted to the
/// modes selected by `rule`.
pub fn truncated_estimator(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    rule: &TruncationRule,
) -> Result<Estimate> {
    truncated_estimator_with_cap(dataset, profile, rule, LOG_BLOWUP_CAP)
}

pub fn truncated_estimator_with_cap(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    rule: &TruncationRule,
    log_cap: f64,
) -> Result<Estimate> {
    let a_t = profile.cumulative(dataset.time_grid.t_final())?;
    let (n_modes, m_modes) =
        select_truncation(rule, dataset.grid.n(), dataset.grid.m(), a_t);
    Ok(unfiltered_inversion(dataset, profile, n_modes, m_modes, log_cap)?.estimate)
}

/// Quasi-boundary-value estimator: every mode up to the caps passes through
/// the filter 1 / (epsilon (p^2+q^2) + lambda_{p,q}(T)), which bounds the
/// inversion by O(1/epsilon) and makes overflow impossible.
pub fn qbv_estimator(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    epsilon: f64,
    p_max: usize,
    q_max: usize,
) -> Result<Estimate> {
    if !(epsilon > 0.0) {
        return Err(Error::OutOfRange { what: "qbv epsilon", value: epsilon });
    }
    let t_points = dataset.time_grid.points();
    let weights = dataset.time_grid.weights();
    let a_of_t: Vec<f64> = t_points
        .iter()
        .map(|&t| profile.cumulative(t))
        .collect::<Result<_>>()?;
    let a_t = a_of_t[a_of_t.len() - 1];
    let h_hat = h_hat_block(dataset, p_max, q_max)?;
    let f_hat = f_hat_block(dataset, p_max, q_max)?;
    let mut coeffs = Array2::zeros((p_max, q_max));
    for p in 1..=p_max {
        for q in 1..=q_max {
            let s = (p * p + q * q) as f64;
            let lam_t = (-a_t * s).exp();
            let den = epsilon * s + lam_t;
            // lambda^{-1}(tau) lambda(T) = exp((A(tau) - A(T)) s) stays <= 1.
            let mut integral = 0.0;
            for k in 0..t_points.len() {
                integral +=
                    weights[k] * ((a_of_t[k] - a_t) * s).exp() * f_hat[(p - 1, q - 1, k)];
            }
            coeffs[(p - 1, q - 1)] = (h_hat[(p - 1, q - 1)] - integral) / den;
        }
    }
    let coeffs = CoefficientField::new(coeffs)?;
    let field = synthesize_field(&coeffs, &dataset.grid);
    Ok(Estimate { coeffs, field })
}

/// Classical (unfiltered) reconstruction up to the caps. Values are returned
/// even when huge; only an exponent beyond the cap is reported as blow-up.
pub fn classical_estimator(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    p_max: usize,
    q_max: usize,
) -> Result<ClassicalEstimate> {
    classical_estimator_with_cap(dataset, profile, p_max, q_max, LOG_BLOWUP_CAP)
}

pub fn classical_estimator_with_cap(
    dataset: &NoisyDataset,
    profile: &DiffusionProfile,
    p_max: usize,
    q_max: usize,
    log_cap: f64,
) -> Result<ClassicalEstimate> {
    unfiltered_inversion(dataset, profile, p_max, q_max, log_cap)
}

/// Grid-sum coefficient of exact field samples minus the exact coefficient:
/// the discretization bias of one mode.
pub fn discretization_bias_direct(
    field: impl Fn(f64, f64) -> f64,
    exact_coeff: impl Fn(usize, usize) -> f64,
    grid: &GridSpec,
    p: usize,
    q: usize,
) -> Result<f64> {
    let sampled = grid.sample(field);
    Ok(discrete_coefficient(&sampled, grid, p, q)? - exact_coeff(p, q))
}

/// Partial sums of the three alias-tail series that make up the
/// discretization bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasTail {
    pub p_tail: f64,
    pub q_tail: f64,
    pub r_tail: f64,
}

impl BiasTail {
    pub fn total(&self) -> f64 {
        self.p_tail + self.q_tail + self.r_tail
    }
}

/// Alias-tail representation of the bias, summed to the given caps.
///
/// The aliased mode r = 2kn + p enters with sign (-1)^k and r = 2kn - p with
/// sign (-1)^{k+1} (and likewise in q); the cross terms multiply the two
/// axis signs. These signs follow from the closed-form grid averages and are
/// checked against [`discretization_bias_direct`] rather than taken on
/// trust.
pub fn bias_tail_series(
    coeff_oracle: impl Fn(usize, usize) -> f64,
    n: usize,
    m: usize,
    p: usize,
    q: usize,
    k_cap: usize,
    l_cap: usize,
) -> BiasTail {
    let mut p_tail = 0.0;
    for k in 1..=k_cap {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        p_tail += sign * (coeff_oracle(2 * k * n + p, q) - coeff_oracle(2 * k * n - p, q));
    }
    let mut q_tail = 0.0;
    for l in 1..=l_cap {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        q_tail += sign * (coeff_oracle(p, 2 * l * m + q) - coeff_oracle(p, 2 * l * m - q));
    }
    let mut r_tail = 0.0;
    for k in 1..=k_cap {
        for l in 1..=l_cap {
            let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            r_tail += sign
                * (coeff_oracle(2 * k * n + p, 2 * l * m + q)
                    + coeff_oracle(2 * k * n - p, 2 * l * m - q)
                    - coeff_oracle(2 * k * n + p, 2 * l * m - q)
                    - coeff_oracle(2 * k * n - p, 2 * l * m + q));
        }
    }
    BiasTail { p_tail, q_tail, r_tail }
}

/// Diagnostic smoothness class: coefficients weighted by p^{2 alpha} q^{2 beta}
/// must stay within a fixed energy budget. No estimator consumes this at
/// runtime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessClass {
    pub alpha: f64,
    pub beta: f64,
    pub budget: f64,
}

impl SmoothnessClass {
    pub fn weighted_energy(&self, coeffs: &CoefficientField) -> f64 {
        let mut acc = 0.0;
        for p in 1..=coeffs.p_max() {
            for q in 1..=coeffs.q_max() {
                let c = coeffs.coeff(p, q);
                acc += (p as f64).powf(2.0 * self.alpha) * (q as f64).powf(2.0 * self.beta) * c * c;
            }
        }
        acc
    }

    pub fn is_member(&self, coeffs: &CoefficientField) -> bool {
        self.weighted_energy(coeffs) <= self.budget * self.budget
    }
}
