//! Forward model: diffusion profiles a(t), their integral A(t), the spectral
//! decay factors lambda_{p,q}(t) = exp(-A(t)(p^2+q^2)), and evaluable problem
//! instances (initial state theta, source f, final state h) with coefficient
//! oracles.
//!
//! Mode-wise the solution is
//! u_{p,q}(t) = (theta_{p,q} + int_0^t lambda^{-1}_{p,q} f_{p,q}) lambda_{p,q}(t),
//! so the final data satisfy
//! h_{p,q} = (theta_{p,q} + int_0^T lambda^{-1}_{p,q} f_{p,q}) lambda_{p,q}(T).

use crate::basis::{basis_eval, CoefficientField};
use crate::error::{BlowUpReport, Error, Result};
use crate::quadrature::{gauss_legendre_rule, integrate_gl, TimeGrid};
use crate::LOG_BLOWUP_CAP;
use std::f64::consts::PI;

/// Default Gauss-Legendre order for cumulative-diffusion quadrature.
pub const DEFAULT_GL_ORDER: usize = 512;

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant; keeps tabulated
// profiles inside the bounds of their samples.
#[derive(Debug, Clone, PartialEq)]
struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    derivs: Vec<f64>,
}

impl MonotoneCubic {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::Config("tabulated profile needs >= 2 samples".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("tabulated profile times must increase".into()));
        }
        let k = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let sec: Vec<f64> = (0..k - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut d = vec![0.0; k];
        d[0] = sec[0];
        d[k - 1] = sec[k - 2];
        for i in 1..k - 1 {
            if sec[i - 1] * sec[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
            }
        }
        Ok(Self { xs, ys, derivs: d })
    }

    fn eval(&self, x: f64) -> f64 {
        let k = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[k - 1]);
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(k - 2),
            Err(i) => i.saturating_sub(1).min(k - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.derivs[i] + h01 * self.ys[i + 1]
            + h11 * h * self.derivs[i + 1]
    }
}

/// The heat-transfer coefficient a(t) with its bounds 0 < a1 <= a(t) <= a2.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionProfile {
    /// a(t) = c.
    Constant(f64),
    /// a(t) = 2 - t (first built-in problem).
    LinearEx1,
    /// a(t) = 0.5 e^{-t} (second built-in problem).
    ExpEx2,
    /// Sampled profile interpolated monotonically between nodes.
    Tabulated(MonotoneCubicProfile),
}

/// Tabulated profile wrapper carrying its interpolant and quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubicProfile {
    interp: MonotoneCubic,
    rule_order: usize,
}

impl DiffusionProfile {
    pub fn tabulated(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let interp = MonotoneCubic::new(times, values)?;
        let profile =
            DiffusionProfile::Tabulated(MonotoneCubicProfile { interp, rule_order: DEFAULT_GL_ORDER });
        let (a1, _) = profile.bounds_on(profile.domain_end());
        if a1 <= 0.0 {
            return Err(Error::Config(format!(
                "diffusion profile must stay positive, min sample {a1}"
            )));
        }
        Ok(profile)
    }

    fn domain_end(&self) -> f64 {
        match self {
            DiffusionProfile::Tabulated(p) => *p.interp.xs.last().unwrap(),
            _ => 1.0,
        }
    }

    /// a(t).
    pub fn value(&self, t: f64) -> f64 {
        match self {
            DiffusionProfile::Constant(c) => *c,
            DiffusionProfile::LinearEx1 => 2.0 - t,
            DiffusionProfile::ExpEx2 => 0.5 * (-t).exp(),
            DiffusionProfile::Tabulated(p) => p.interp.eval(t),
        }
    }

    /// Bounds (a1, a2) of a(t) over [0, t_final], computed on a dense sample
    /// for tabulated profiles and in closed form otherwise.
    pub fn bounds_on(&self, t_final: f64) -> (f64, f64) {
        match self {
            DiffusionProfile::Constant(c) => (*c, *c),
            DiffusionProfile::LinearEx1 => (2.0 - t_final, 2.0),
            DiffusionProfile::ExpEx2 => (0.5 * (-t_final).exp(), 0.5),
            DiffusionProfile::Tabulated(_) => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for k in 0..=2048 {
                    let v = self.value(t_final * k as f64 / 2048.0);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            }
        }
    }

    /// Cumulative diffusion A(t) = int_0^t a. Analytic for the named
    /// profiles, Gauss-Legendre quadrature for tabulated ones.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::OutOfRange { what: "time", value: t });
        }
        Ok(match self {
            DiffusionProfile::Constant(c) => c * t,
            DiffusionProfile::LinearEx1 => 2.0 * t - 0.5 * t * t,
            DiffusionProfile::ExpEx2 => 0.5 * (1.0 - (-t).exp()),
            DiffusionProfile::Tabulated(p) => {
                if t == 0.0 {
                    0.0
                } else {
                    let rule = gauss_legendre_rule(p.rule_order)?;
                    integrate_gl(|s| p.interp.eval(s), 0.0, t, &rule)
                }
            }
        })
    }
}

/// lambda_{p,q}(t) = exp(-A(t)(p^2+q^2)).
pub fn lambda_pq(profile: &DiffusionProfile, p: usize, q: usize, t: f64) -> Result<f64> {
    Ok((-log_lambda_inv(profile, p, q, t)?).exp())
}

/// Natural log of lambda^{-1}_{p,q}(t), i.e. A(t)(p^2+q^2). The estimators
/// work with this quantity directly so that divergence can be detected
/// before any exponential is formed.
pub fn log_lambda_inv(profile: &DiffusionProfile, p: usize, q: usize, t: f64) -> Result<f64> {
    if p == 0 || q == 0 {
        return Err(Error::OutOfRange { what: "mode index", value: 0.0 });
    }
    Ok(profile.cumulative(t)? * (p * p + q * q) as f64)
}

// Time polynomial c0 + c1 t + c2 t^2 + ...
fn poly_eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

#[derive(Debug, Clone)]
enum ProblemKind {
    Example1,
    Example2,
    Custom {
        theta: Vec<(usize, usize, f64)>,
        // (p, q, polynomial in t)
        source: Vec<(usize, usize, Vec<f64>)>,
        // h_{p,q} derived once via the final-data identity
        h_coeffs: Vec<(usize, usize, f64)>,
    },
}

/// A fully evaluable problem: ground-truth theta, source f, final data h,
/// plus coefficient oracles where closed forms exist.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    t_final: f64,
    profile: DiffusionProfile,
    kind: ProblemKind,
    label: String,
}

// Example 2 pieces. theta = (1/pi)[x(pi-x) sin y - sin 3x sin y] and
// u = e^{-t} theta, which under a(t) = 0.5 e^{-t} forces
// f = (e^{-t}/pi)[(e^{-t} + (e^{-t}/2 - 1) x(pi-x)) sin y + (1 - 5 e^{-t}) sin 3x sin y].
// The sine expansion of x(pi-x) has coefficients 8/(pi p^3) over odd p, so
// against the orthonormal basis:
//   <(1/pi) x(pi-x) sin y, phi_{p,1}> = 4/(pi p^3)   (odd p)
//   <(1/pi) sin y,         phi_{p,1}> = 2/(pi p)     (odd p)
//   <(1/pi) sin 3x sin y,  phi_{3,1}> = 1/2.
fn ex2_theta_coeff(p: usize, q: usize) -> f64 {
    if q != 1 || p % 2 == 0 {
        return 0.0;
    }
    let mut v = 4.0 / (PI * (p * p * p) as f64);
    if p == 3 {
        v -= 0.5;
    }
    v
}

fn ex2_f_coeff(p: usize, q: usize, t: f64) -> f64 {
    if q != 1 || p % 2 == 0 {
        return 0.0;
    }
    let et = (-t).exp();
    let c_const = 2.0 / (PI * p as f64);
    let c_profile = 4.0 / (PI * (p * p * p) as f64);
    let mut v = et * (et * c_const + (0.5 * et - 1.0) * c_profile);
    if p == 3 {
        v += et * (1.0 - 5.0 * et) * 0.5;
    }
    v
}

impl ProblemInstance {
    /// The two bundled benchmark problems (T = 1 for both).
    pub fn builtin_example(id: usize) -> Result<Self> {
        match id {
            1 => Ok(Self {
                t_final: 1.0,
                profile: DiffusionProfile::LinearEx1,
                kind: ProblemKind::Example1,
                label: "example-1".into(),
            }),
            2 => Ok(Self {
                t_final: 1.0,
                profile: DiffusionProfile::ExpEx2,
                kind: ProblemKind::Example2,
                label: "example-2".into(),
            }),
            other => Err(Error::Config(format!("unknown builtin example id {other}"))),
        }
    }

    /// A custom problem from a finite sine expansion of theta and a source
    /// given mode-wise as polynomials in t. The final data h are derived
    /// from the mode-wise solution identity, so the triple is consistent by
    /// construction.
    pub fn custom(
        profile: DiffusionProfile,
        t_final: f64,
        theta: Vec<(usize, usize, f64)>,
        source: Vec<(usize, usize, Vec<f64>)>,
    ) -> Result<Self> {
        if !(t_final > 0.0) {
            return Err(Error::OutOfRange { what: "final time", value: t_final });
        }
        let (a1, _) = profile.bounds_on(t_final);
        if a1 <= 0.0 {
            return Err(Error::Config("diffusion profile must be positive".into()));
        }
        for &(p, q, _) in &theta {
            if p == 0 || q == 0 {
                return Err(Error::OutOfRange { what: "mode index", value: 0.0 });
            }
        }
        let rule = gauss_legendre_rule(DEFAULT_GL_ORDER)?;
        let mut h_coeffs: Vec<(usize, usize, f64)> = Vec::new();
        let add = |p: usize, q: usize, v: f64, hc: &mut Vec<(usize, usize, f64)>| {
            if let Some(e) = hc.iter_mut().find(|(a, b, _)| *a == p && *b == q) {
                e.2 += v;
            } else {
                hc.push((p, q, v));
            }
        };
        // h_{p,q} = (theta_{p,q} + int lambda^-1 f_{p,q}) lambda(T)
        let mut modes: Vec<(usize, usize)> = theta.iter().map(|&(p, q, _)| (p, q)).collect();
        for &(p, q, _) in &source {
            if p == 0 || q == 0 {
                return Err(Error::OutOfRange { what: "mode index", value: 0.0 });
            }
            if !modes.contains(&(p, q)) {
                modes.push((p, q));
            }
        }
        for (p, q) in modes {
            let s = (p * p + q * q) as f64;
            let log_lam_t = profile.cumulative(t_final)? * s;
            if log_lam_t > LOG_BLOWUP_CAP {
                return Err(Error::BlowUp(BlowUpReport {
                    mode: (p, q),
                    log10_magnitude: log_lam_t / std::f64::consts::LN_10,
                }));
            }
            let th = theta
                .iter()
                .find(|&&(a, b, _)| (a, b) == (p, q))
                .map_or(0.0, |&(_, _, v)| v);
            let mut integral = 0.0;
            if let Some(&(_, _, ref poly)) = source.iter().find(|&&(a, b, _)| (a, b) == (p, q)) {
                let prof = profile.clone();
                integral = integrate_gl(
                    |tau| (prof.cumulative(tau).unwrap() * s).exp() * poly_eval(poly, tau),
                    0.0,
                    t_final,
                    &rule,
                );
            }
            add(p, q, (th + integral) * (-log_lam_t).exp(), &mut h_coeffs);
        }
        Ok(Self {
            t_final,
            profile,
            kind: ProblemKind::Custom { theta, source, h_coeffs },
            label: "custom".into(),
        })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn profile(&self) -> &DiffusionProfile {
        &self.profile
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Ground-truth initial state theta(x, y).
    pub fn theta(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => 5.0 * x.sin() * y.sin(),
            ProblemKind::Example2 => {
                (x * (PI - x) * y.sin() - (3.0 * x).sin() * y.sin()) / PI
            }
            ProblemKind::Custom { theta, .. } => theta
                .iter()
                .map(|&(p, q, v)| v * basis_eval(p, q, x, y))
                .sum(),
        }
    }

    /// Final data h(x, y) = u(x, y, T).
    pub fn h(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => 4.0 * x.sin() * y.sin(),
            ProblemKind::Example2 => (-1.0f64).exp() * self.theta(x, y),
            ProblemKind::Custom { h_coeffs, .. } => h_coeffs
                .iter()
                .map(|&(p, q, v)| v * basis_eval(p, q, x, y))
                .sum(),
        }
    }

    /// Source f(x, y, t).
    pub fn f(&self, x: f64, y: f64, t: f64) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => {
                2.0 * (t * t * t - 2.0 * t * t - 6.0 * t + 10.0) * x.sin() * y.sin()
            }
            ProblemKind::Example2 => {
                let et = (-t).exp();
                et / PI
                    * ((et + (0.5 * et - 1.0) * x * (PI - x)) * y.sin()
                        + (1.0 - 5.0 * et) * (3.0 * x).sin() * y.sin())
            }
            ProblemKind::Custom { source, .. } => source
                .iter()
                .map(|&(p, q, ref poly)| poly_eval(poly, t) * basis_eval(p, q, x, y))
                .sum(),
        }
    }

    /// Exact coefficient <theta, phi_{p,q}>.
    pub fn theta_coeff(&self, p: usize, q: usize) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => {
                if (p, q) == (1, 1) {
                    5.0 * PI / 2.0
                } else {
                    0.0
                }
            }
            ProblemKind::Example2 => ex2_theta_coeff(p, q),
            ProblemKind::Custom { theta, .. } => theta
                .iter()
                .find(|&&(a, b, _)| (a, b) == (p, q))
                .map_or(0.0, |&(_, _, v)| v),
        }
    }

    /// Exact coefficient <h, phi_{p,q}>.
    pub fn h_coeff(&self, p: usize, q: usize) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => {
                if (p, q) == (1, 1) {
                    2.0 * PI
                } else {
                    0.0
                }
            }
            ProblemKind::Example2 => (-1.0f64).exp() * ex2_theta_coeff(p, q),
            ProblemKind::Custom { h_coeffs, .. } => h_coeffs
                .iter()
                .find(|&&(a, b, _)| (a, b) == (p, q))
                .map_or(0.0, |&(_, _, v)| v),
        }
    }

    /// Exact coefficient <f(.,.,t), phi_{p,q}>.
    pub fn f_coeff(&self, p: usize, q: usize, t: f64) -> f64 {
        match &self.kind {
            ProblemKind::Example1 => {
                if (p, q) == (1, 1) {
                    PI * (t * t * t - 2.0 * t * t - 6.0 * t + 10.0)
                } else {
                    0.0
                }
            }
            ProblemKind::Example2 => ex2_f_coeff(p, q, t),
            ProblemKind::Custom { source, .. } => source
                .iter()
                .find(|&&(a, b, _)| (a, b) == (p, q))
                .map_or(0.0, |&(_, _, ref poly)| poly_eval(poly, t)),
        }
    }
}

/// Mode-wise forward solution u_{p,q}(t_k) from an initial coefficient and a
/// sampled source series: (theta_pq + int_0^{t_k} lambda^{-1} f) lambda(t_k).
///
/// The inner integral uses the composite rule restricted to [0, t_k]; for
/// t_k = T this is exactly the final-data identity.
pub fn forward_coefficient(
    profile: &DiffusionProfile,
    theta_pq: f64,
    f_series: &[f64],
    p: usize,
    q: usize,
    t_index: usize,
    grid: &TimeGrid,
) -> Result<f64> {
    if f_series.len() != grid.points().len() {
        return Err(Error::LengthMismatch { expected: grid.points().len(), got: f_series.len() });
    }
    let s = (p * p + q * q) as f64;
    let t_k = *grid.points().get(t_index).ok_or(Error::OutOfRange {
        what: "time index",
        value: t_index as f64,
    })?;
    let log_lam_inv_k = profile.cumulative(t_k)? * s;
    if log_lam_inv_k > LOG_BLOWUP_CAP {
        return Err(Error::BlowUp(BlowUpReport {
            mode: (p, q),
            log10_magnitude: log_lam_inv_k / std::f64::consts::LN_10,
        }));
    }
    let mut integrand = vec![0.0; f_series.len()];
    for (j, v) in integrand.iter_mut().enumerate().take(t_index + 1) {
        *v = (profile.cumulative(grid.points()[j])? * s).exp() * f_series[j];
    }
    let integral = grid.integrate_prefix(&integrand, t_index)?;
    Ok((theta_pq + integral) * (-log_lam_inv_k).exp())
}

/// Final-data coefficients h_{p,q} for p <= p_max, q <= q_max, computed from
/// the instance's coefficient oracles through the solution identity.
pub fn final_data_coefficients(
    instance: &ProblemInstance,
    p_max: usize,
    q_max: usize,
    grid: &TimeGrid,
) -> Result<CoefficientField> {
    let k_last = grid.points().len() - 1;
    let mut out = ndarray::Array2::zeros((p_max, q_max));
    for p in 1..=p_max {
        for q in 1..=q_max {
            let f_series: Vec<f64> =
                grid.points().iter().map(|&t| instance.f_coeff(p, q, t)).collect();
            out[(p - 1, q - 1)] = forward_coefficient(
                instance.profile(),
                instance.theta_coeff(p, q),
                &f_series,
                p,
                q,
                k_last,
                grid,
            )?;
        }
    }
    CoefficientField::new(out)
}
