//! Central and noncentral chi-square laws.
//!
//! The noncentral density and distribution function are Poisson mixtures
//! `Σᵢ Pois(i; ν/2) · h_{k+2i}(w)` of central ones. The series is summed in
//! log space starting at the Poisson mode `⌊ν/2⌋` and expanded in both
//! directions, so nothing underflows even when every individual term is
//! below `f64::MIN_POSITIVE`.

use std::f64::consts::LN_2;

use super::logvalue::{LogSum, LogValue};
use super::special::{ln_gamma, ln_gamma_p};
use crate::error::{domain, Error, Result};

/// Relative truncation threshold of the mixture series (`e^{−45} ≈ 2.9e−20`).
pub const SERIES_LOG_CUTOFF: f64 = 45.0;

/// Degrees of freedom and noncentrality `ν = ‖θ‖²` of a chi-square law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareSpec {
    dof: u32,
    noncentrality: f64,
}

impl ChiSquareSpec {
    pub fn new(dof: u32, noncentrality: f64) -> Result<Self> {
        if dof == 0 {
            return domain("chi-square degrees of freedom must be >= 1");
        }
        if !(noncentrality.is_finite() && noncentrality >= 0.0) {
            return domain(format!("noncentrality must be finite and >= 0, got {noncentrality}"));
        }
        Ok(ChiSquareSpec { dof, noncentrality })
    }

    pub fn central(dof: u32) -> Result<Self> {
        Self::new(dof, 0.0)
    }

    pub fn dof(&self) -> u32 {
        self.dof
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }
}

fn check_w(w: f64) -> Result<()> {
    if w.is_nan() || w < 0.0 {
        return domain(format!("chi-square argument must be >= 0, got {w}"));
    }
    Ok(())
}

/// `ln f_k(w)` for real `k > 0`, with the `w = 0` limits.
pub(crate) fn ln_central_pdf(w: f64, k: f64) -> f64 {
    let half = 0.5 * k;
    if w == 0.0 {
        return match half.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => -LN_2,
            _ => f64::NEG_INFINITY,
        };
    }
    (half - 1.0) * w.ln() - 0.5 * w - ln_gamma(half) - half * LN_2
}

/// Density of the central chi-square law with `k` degrees of freedom.
pub fn central_chisq_pdf(w: f64, k: u32) -> Result<f64> {
    check_w(w)?;
    ChiSquareSpec::central(k)?;
    Ok(ln_central_pdf(w, f64::from(k)).exp())
}

/// Distribution function `P(k/2, w/2)` of the central chi-square law.
pub fn central_chisq_cdf(w: f64, k: u32) -> Result<f64> {
    central_chisq_logcdf(w, k).map(f64::exp)
}

pub fn central_chisq_logcdf(w: f64, k: u32) -> Result<f64> {
    check_w(w)?;
    ChiSquareSpec::central(k)?;
    ln_gamma_p(0.5 * f64::from(k), 0.5 * w)
}

/// Log of the noncentral chi-square density.
pub fn noncentral_chisq_logpdf(w: f64, spec: ChiSquareSpec) -> Result<LogValue> {
    check_w(w)?;
    let k = f64::from(spec.dof);
    if w == 0.0 {
        // only the i = 0 component is nonzero at the origin
        return Ok(LogValue::from_ln(ln_central_pdf(0.0, k) - 0.5 * spec.noncentrality));
    }
    let lw = w.ln();
    let ln = poisson_mixture_ln(spec, "noncentral chi-square density", |i| {
        let half = 0.5 * k + i as f64;
        Ok((half - 1.0) * lw - 0.5 * w - ln_gamma(half) - half * LN_2)
    })?;
    Ok(LogValue::from_ln(ln))
}

/// Log of the noncentral chi-square distribution function.
pub fn noncentral_chisq_logcdf(w: f64, spec: ChiSquareSpec) -> Result<LogValue> {
    check_w(w)?;
    if w == 0.0 {
        return Ok(LogValue::ZERO);
    }
    let k = f64::from(spec.dof);
    let x = 0.5 * w;
    let ln = poisson_mixture_ln(spec, "noncentral chi-square cdf", |i| {
        ln_gamma_p(0.5 * k + i as f64, x)
    })?;
    Ok(LogValue::from_ln(ln))
}

pub fn noncentral_chisq_pdf(w: f64, spec: ChiSquareSpec) -> Result<f64> {
    noncentral_chisq_logpdf(w, spec).map(|v| v.to_f64())
}

pub fn noncentral_chisq_cdf(w: f64, spec: ChiSquareSpec) -> Result<f64> {
    noncentral_chisq_logcdf(w, spec).map(|v| v.to_f64())
}

/// `ln Pois(i; λ)`.
pub(crate) fn ln_poisson(i: usize, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if i == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -lambda + i as f64 * lambda.ln() - ln_gamma(i as f64 + 1.0)
}

/// `ln Σᵢ Pois(i; ν/2) · exp(component(i))`.
///
/// Terms are log-concave in `i`, so each direction stops once a term is
/// both decreasing and more than [`SERIES_LOG_CUTOFF`] below the running
/// sum; the upward direction additionally runs past the Poisson mode.
/// The total number of terms is capped at `10·(2 + ν/2 + k)`.
pub(crate) fn poisson_mixture_ln<F>(spec: ChiSquareSpec, what: &'static str, mut component: F) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    let lambda = 0.5 * spec.noncentrality;
    if lambda == 0.0 {
        return component(0);
    }
    let cap = (10.0 * (2.0 + lambda + f64::from(spec.dof))).ceil() as usize;
    let mode = lambda.floor() as usize;
    let mut acc = LogSum::new();
    let mut used = 0usize;
    let mut term = |i: usize, used: &mut usize| -> Result<f64> {
        *used += 1;
        Ok(ln_poisson(i, lambda) + component(i)?)
    };

    let mut prev = f64::NEG_INFINITY;
    let mut i = mode;
    loop {
        let t = term(i, &mut used)?;
        acc.push_ln(t);
        let total = acc.value().log_magnitude();
        if i > mode && t < total - SERIES_LOG_CUTOFF && t <= prev {
            break;
        }
        if used >= cap {
            return Err(Error::Convergence { what, terms: used, partial_log_sum: total });
        }
        prev = t;
        i += 1;
    }

    prev = f64::NEG_INFINITY;
    let mut i = mode;
    while i > 0 {
        i -= 1;
        let t = term(i, &mut used)?;
        acc.push_ln(t);
        let total = acc.value().log_magnitude();
        if t < total - SERIES_LOG_CUTOFF && t <= prev {
            break;
        }
        if used >= cap {
            return Err(Error::Convergence { what, terms: used, partial_log_sum: total });
        }
        prev = t;
    }
    Ok(acc.value().log_magnitude())
}
