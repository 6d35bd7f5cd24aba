//! Shrinkage estimation of a p-variate normal mean under quadratic loss.
//!
//! The crate evaluates estimators of the form
//! `θ̂(x) = (1 − φ(‖x‖²)/‖x‖²)·x` for `X ~ N_p(θ, I)`:
//!
//! * [`numerics`]: log-space special functions, (non)central chi-square
//!   laws, Gauss–Legendre quadrature and a reproducible normal generator.
//! * [`shrinkage`]: the catalog of shrinkage factors (James–Stein, positive
//!   part, ridge, soft/hard thresholding, SCAD, MCP, quadratic tail) and the
//!   scalar penalized least-squares solvers behind them.
//! * [`risk`]: Stein's unbiased risk integrand, exact risk by quadrature,
//!   Monte Carlo risk and the James–Stein / positive-part gap.
//! * [`asymptotics`]: truncated expectations `E[g(‖X‖²)1{‖X‖² ≤ a}]` at large
//!   noncentrality, tail-case classification and non-minimaxity certificates.
//! * [`cli`]: the `shrinklab` command set (CSV/JSON/SVG outputs).

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod risk;
pub mod shrinkage;

pub use error::{Error, Result};
pub use numerics::LogValue;
pub use shrinkage::{Family, ShrinkageFactor};

