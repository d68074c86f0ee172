//! Reconstruction of the initial temperature of a two-dimensional
//! nonhomogeneous backward heat problem from noisy discrete observations of
//! the source and the final temperature.
//!
//! The problem on (0, pi)^2 with Dirichlet boundaries and a known
//! time-dependent coefficient a(t) is
//!
//! ```text
//! u_t - a(t)(u_xx + u_yy) = f(x, y, t),    u(x, y, T) = h(x, y),
//! ```
//!
//! and the goal is theta(x, y) = u(x, y, 0) given only the regression data
//! g_ij(t) = f(x_i, y_j, t) + vartheta xi_ij(t) (Brownian perturbation) and
//! d_ij = h(x_i, y_j) + sigma_ij eps_ij (Gaussian perturbation) on a
//! midpoint grid. Backward inversion multiplies mode (p, q) by
//! exp(A(T)(p^2+q^2)), so the unfiltered reconstruction diverges under any
//! noise; the crate implements the stable truncated spectral estimator, the
//! quasi-boundary-value filter and that divergent classical inversion side
//! by side, plus a seeded Monte Carlo harness that compares them.
//!
//! Modules:
//! - [`basis`]: sine basis, midpoint grid, discrete coefficient transform
//!   and its exact orthogonality relations.
//! - [`quadrature`]: Gauss-Legendre rules and the end-corrected composite
//!   time rule.
//! - [`heat`]: diffusion profiles, the forward solution identity and the
//!   bundled example problems.
//! - [`noise`]: keyed, reproducible Gaussian and Brownian noise streams.
//! - [`estimate`]: the three reconstruction methods, truncation selection
//!   and discretization-bias diagnostics.
//! - [`experiment`]: Monte Carlo benchmark, instability demo, bias study,
//!   CSV output.
//! - [`config`]: flat key-value configuration shared by the library and the
//!   command-line front end.
//!
//! The `examples/` directory carries one runnable example per capability;
//! `backheat --help` describes the equivalent command-line entry points.

pub mod basis;
pub mod config;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod heat;
pub mod noise;
pub mod quadrature;

pub use error::{BlowUpReport, Error, Result};

/// Natural-log exponent cap for backward amplification factors. A mode whose
/// exponent A(T)(p^2+q^2) exceeds this is reported as a blow-up instead of
/// being evaluated into an infinity.
pub const LOG_BLOWUP_CAP: f64 = 700.0;
