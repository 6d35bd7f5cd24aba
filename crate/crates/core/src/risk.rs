//! Risk of `θ̂_φ` under quadratic loss.
//!
//! Exact risk uses Stein's identity `R = p + E[r_φ(W)]`, `W = ‖X‖²`, with
//! the expectation taken by panel Gauss–Legendre against the noncentral
//! chi-square density. Monte Carlo risk samples the loss directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::chisq::{ln_central_pdf, poisson_mixture_ln};
use crate::numerics::quadrature::{geometric_toward, integrate_panels, integrate_panels_log, sorted_breaks, uniform_breaks};
use crate::numerics::{central_chisq_logcdf, noncentral_chisq_logpdf, pairwise_sum, ChiSquareSpec, LogSum, LogValue, NormalStream};
use crate::shrinkage::ShrinkageFactor;

/// Smallest replication count accepted for Monte Carlo queries.
pub const MIN_REPLICATIONS: usize = 1000;

const MC_BATCH: usize = 8192;
const NEAR_ZERO_LEVELS: u32 = 60;
const RULE_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskMethod {
    Quadrature,
    MonteCarlo,
}

impl RiskMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            RiskMethod::Quadrature => "quadrature",
            RiskMethod::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::str::FromStr for RiskMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(RiskMethod::Quadrature),
            "monte_carlo" | "mc" => Ok(RiskMethod::MonteCarlo),
            _ => domain(format!("unknown risk method `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub replications: usize,
}

/// One risk evaluation: factor, dimension, noncentrality `ν = ‖θ‖²` and method.
#[derive(Debug, Clone)]
pub struct RiskQuery {
    pub factor: ShrinkageFactor,
    pub p: u32,
    pub nu: f64,
    pub method: RiskMethod,
    pub mc: Option<McConfig>,
}

impl RiskQuery {
    pub fn quadrature(factor: ShrinkageFactor, p: u32, nu: f64) -> Self {
        RiskQuery { factor, p, nu, method: RiskMethod::Quadrature, mc: None }
    }

    pub fn monte_carlo(factor: ShrinkageFactor, p: u32, nu: f64, seed: u64, replications: usize) -> Self {
        RiskQuery {
            factor,
            p,
            nu,
            method: RiskMethod::MonteCarlo,
            mc: Some(McConfig { seed, replications }),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return domain("dimension p must be at least 1");
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return domain(format!("noncentrality must be finite and >= 0, got {}", self.nu));
        }
        if self.method == RiskMethod::MonteCarlo {
            match self.mc {
                None => return domain("monte carlo query needs a seed and replication count"),
                Some(mc) if mc.replications < MIN_REPLICATIONS => {
                    return domain(format!(
                        "monte carlo needs at least {MIN_REPLICATIONS} replications, got {}",
                        mc.replications
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// A risk value with its error: the quadrature refinement difference, or
/// the Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskValue {
    pub risk: f64,
    pub error: f64,
    pub method: RiskMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskRow {
    pub nu: f64,
    pub risk: f64,
    pub error: f64,
    pub method: RiskMethod,
}

/// Risk over a sweep of noncentralities, rows sorted by `ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    pub rows: Vec<RiskRow>,
    pub p: u32,
    pub factor: String,
}

/// `r_φ(w) = (φ(w)/w)(φ(w) − 2(p − 2)) − 4φ′(w)`; at `w = 0` the limit of
/// `φ(w)/w` is used.
pub fn sure_integrand(factor: &ShrinkageFactor, p: u32, w: f64) -> f64 {
    let phi = factor.phi(w);
    let ratio = factor.phi_over_w(w);
    let core = phi - 2.0 * (f64::from(p) - 2.0);
    let lead = if ratio == 0.0 || core == 0.0 { 0.0 } else { ratio * core };
    lead - 4.0 * factor.dphi(w)
}

/// Evaluates a query with the method it names.
pub fn evaluate(query: &RiskQuery) -> Result<RiskValue> {
    match query.method {
        RiskMethod::Quadrature => risk_quadrature(query),
        RiskMethod::MonteCarlo => risk_monte_carlo(query).map(|(risk, se)| RiskValue {
            risk,
            error: se,
            method: RiskMethod::MonteCarlo,
        }),
    }
}

/// `p + ∫ r_φ(w) f_p(w; ν) dw`, plus `−4·J·f_p(c; ν)` for each jump `J` of
/// `φ` at `c`.
pub fn risk_quadrature(query: &RiskQuery) -> Result<RiskValue> {
    query.validate()?;
    let excess = sure_expectation(&query.factor, query.p, query.nu, None)?;
    Ok(RiskValue {
        risk: f64::from(query.p) + excess.0,
        error: excess.1,
        method: RiskMethod::Quadrature,
    })
}

fn default_upper(p: u32, nu: f64) -> f64 {
    let p = f64::from(p);
    let sd = (2.0 * (p + 2.0 * nu)).sqrt();
    p + nu + 12.0 * sd + 60.0
}

fn check_integrable(factor: &ShrinkageFactor, p: u32) -> Result<()> {
    if p > 2 {
        return Ok(());
    }
    let tiny = 1e-300;
    let phi0 = factor.phi(tiny);
    let singular = factor.phi_over_w_at_zero().is_infinite() || phi0 > 1e-200;
    if singular && phi0 != 2.0 * (f64::from(p) - 2.0) {
        return Err(Error::NonIntegrable(format!(
            "{} has r_phi ~ c/w near 0, not integrable for p = {p}",
            factor.name()
        )));
    }
    Ok(())
}

/// Panel breaks on `[0, upper]`: factor kinks, `width`-wide pieces and a
/// geometric refinement toward the origin.
fn risk_breaks(kinks: &[f64], upper: f64, width: f64) -> Vec<f64> {
    let mut b = uniform_breaks(0.0, upper, width);
    b.extend(kinks.iter().copied().filter(|&k| k > 0.0 && k < upper));
    let b = sorted_breaks(&b);
    let first = b[1];
    let mut all = geometric_toward(0.0, first, NEAR_ZERO_LEVELS);
    all.extend(b.into_iter().filter(|&x| x > 0.0));
    sorted_breaks(&all)
}

/// `E[r_φ(W)]` with jump corrections, and its refinement error. `upper`
/// overrides the integration end (defaults: support end, else a far tail).
pub(crate) fn sure_expectation(
    factor: &ShrinkageFactor,
    p: u32,
    nu: f64,
    upper: Option<f64>,
) -> Result<(f64, f64)> {
    check_integrable(factor, p)?;
    let spec = ChiSquareSpec::new(p, nu)?;
    let end = factor.support_end();
    let upper = upper.unwrap_or(if end.is_finite() { end } else { default_upper(p, nu) });
    if upper <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let sd = (2.0 * (f64::from(p) + 2.0 * nu)).sqrt();
    let breaks = risk_breaks(&factor.breakpoints(), upper, (0.5 * sd).max(0.25));

    let mut density_err = None;
    let mut integrand = |w: f64| -> f64 {
        match noncentral_chisq_logpdf(w, spec) {
            Ok(d) => {
                let r = sure_integrand(factor, p, w);
                if r == 0.0 || d.is_zero() {
                    0.0
                } else {
                    r * d.to_f64()
                }
            }
            Err(e) => {
                density_err.get_or_insert(e);
                0.0
            }
        }
    };
    let coarse = integrate_panels(&breaks, RULE_POINTS, &mut integrand);
    let fine = integrate_panels(&breaks, 2 * RULE_POINTS, &mut integrand);
    if let Some(e) = density_err {
        return Err(e);
    }

    // [0, ε]: density ~ C·w^{p/2−1}, r_φ ~ r(ε) or r(ε)·ε/w
    let eps = breaks[0];
    let r_eps = sure_integrand(factor, p, eps);
    let d_eps = noncentral_chisq_logpdf(eps, spec)?.to_f64();
    let half = 0.5 * f64::from(p);
    let power = if factor.phi_over_w_at_zero().is_infinite() { half - 1.0 } else { half };
    let origin = if power > 0.0 { r_eps * d_eps * eps / power } else { 0.0 };

    let mut jumps = 0.0;
    for (c, j) in factor.jumps() {
        if c > 0.0 && c <= upper {
            jumps += -4.0 * j * noncentral_chisq_logpdf(c, spec)?.to_f64();
        }
    }
    let total = fine + origin + jumps;
    Ok((total, (fine - coarse).abs() + origin.abs() * 1e-2))
}

/// Sample mean of `‖θ̂(X) − θ‖²` with `θ = (√ν, 0, …, 0)` and its standard
/// error. Batches run in parallel on disjoint `(seed, batch)` streams and
/// are merged in batch order, so the result does not depend on the pool size.
pub fn risk_monte_carlo(query: &RiskQuery) -> Result<(f64, f64)> {
    query.validate()?;
    let mc = match (query.method, query.mc) {
        (_, Some(mc)) => mc,
        (_, None) => return domain("monte carlo query needs a seed and replication count"),
    };
    let p = query.p as usize;
    let theta0 = query.nu.sqrt();
    let end = query.factor.support_end();
    let n_batches = mc.replications.div_ceil(MC_BATCH);
    let batches: Vec<(f64, f64)> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let count = MC_BATCH.min(mc.replications - b * MC_BATCH);
            let mut stream = NormalStream::new(mc.seed, b as u64);
            let mut x = vec![0.0; p];
            let mut losses = Vec::with_capacity(count);
            for _ in 0..count {
                stream.fill_standard(&mut x);
                x[0] += theta0;
                let w: f64 = x.iter().map(|v| v * v).sum();
                let weight = if w >= end { 1.0 } else { 1.0 - query.factor.phi_over_w(w) };
                let mut loss = 0.0;
                for (i, xi) in x.iter().enumerate() {
                    let target = if i == 0 { theta0 } else { 0.0 };
                    let est = if w == 0.0 && weight.is_infinite() { 0.0 } else { weight * xi };
                    loss += (est - target) * (est - target);
                }
                losses.push(loss);
            }
            let sum = pairwise_sum(&losses);
            let mean = sum / count as f64;
            let centered: Vec<f64> = losses.iter().map(|l| (l - mean) * (l - mean)).collect();
            (sum, pairwise_sum(&centered) + mean * mean * count as f64)
        })
        .collect();
    let sums: Vec<f64> = batches.iter().map(|b| b.0).collect();
    let squares: Vec<f64> = batches.iter().map(|b| b.1).collect();
    let n = mc.replications as f64;
    let mean = pairwise_sum(&sums) / n;
    let var = ((pairwise_sum(&squares) - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

/// Risk over `nu_grid` (sorted on output).
pub fn risk_profile(
    factor: &ShrinkageFactor,
    p: u32,
    nu_grid: &[f64],
    method: RiskMethod,
    mc: Option<McConfig>,
) -> Result<RiskProfile> {
    let mut nus = nu_grid.to_vec();
    nus.sort_by(f64::total_cmp);
    let rows = nus
        .iter()
        .map(|&nu| {
            let q = RiskQuery { factor: factor.clone(), p, nu, method, mc };
            evaluate(&q).map(|v| RiskRow { nu, risk: v.risk, error: v.error, method })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RiskProfile { rows, p, factor: factor.name() })
}

fn js_gap_integrand(p: f64, w: f64) -> f64 {
    let q = p - 2.0;
    -q * q / w + 2.0 * p - w
}

/// `E[(−(p−2)²/W + 2p − W)·1{W ≤ p−2}]`: the risk of James–Stein minus that
/// of its positive part, by log-space quadrature of the density.
pub fn js_gap_direct(p: u32, nu: f64) -> Result<LogValue> {
    if p <= 2 {
        return domain(format!("js gap requires p >= 3, got {p}"));
    }
    let spec = ChiSquareSpec::new(p, nu)?;
    let pf = f64::from(p);
    let top = pf - 2.0;
    // density grows like e^{√(νw)} toward the top; refine there as well
    let mut breaks = geometric_toward(0.0, 0.5 * top, NEAR_ZERO_LEVELS);
    breaks.extend((0..=40).map(|k| top - 0.5 * top * 0.5f64.powi(k)));
    breaks.push(top);
    let breaks = sorted_breaks(&breaks);
    let mut density_err = None;
    let mut integrand = |w: f64| -> LogValue {
        match noncentral_chisq_logpdf(w, spec) {
            Ok(d) => d * js_gap_integrand(pf, w),
            Err(e) => {
                density_err.get_or_insert(e);
                LogValue::ZERO
            }
        }
    };
    let body = integrate_panels_log(&breaks, 2 * RULE_POINTS, &mut integrand);
    if let Some(e) = density_err {
        return Err(e);
    }
    let eps = breaks[0];
    let origin = noncentral_chisq_logpdf(eps, spec)? * (js_gap_integrand(pf, eps) * eps / (0.5 * pf - 1.0));
    Ok(body + origin)
}

/// The same gap from the Poisson-mixture representation
/// `2pF_p(p−2;ν) − pF_{p+2}(p−2;ν) − νF_{p+4}(p−2;ν)
///  − (p−2)² Σᵢ Pois(i; ν/2)·F_{p+2i−2}(p−2)/(p+2i−2)`.
///
/// Every term draws on the central values `F_{p−2+2j}(p−2)`, computed once.
/// Truncation follows the noncentral cdf series, whose neglected mass is
/// below `e^{−45}` of the total; `tol` only has to be positive.
pub fn js_gap_hansen(p: u32, nu: f64, tol: f64) -> Result<f64> {
    js_gap_hansen_log(p, nu, tol).map(|v| v.to_f64())
}

/// [`js_gap_hansen`] before conversion out of log space.
pub fn js_gap_hansen_log(p: u32, nu: f64, tol: f64) -> Result<LogValue> {
    if p <= 2 {
        return domain(format!("js gap requires p >= 3, got {p}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let spec = ChiSquareSpec::new(p, nu)?;
    let pf = f64::from(p);
    let x = pf - 2.0;
    let mut ladder: Vec<f64> = Vec::new();
    let mut central = |j: usize| -> Result<f64> {
        while ladder.len() <= j {
            let dof = p - 2 + 2 * ladder.len() as u32;
            ladder.push(central_chisq_logcdf(x, dof)?);
        }
        Ok(ladder[j])
    };
    let f_p = poisson_mixture_ln(spec, "js gap series", |i| central(i + 1))?;
    let f_p2 = poisson_mixture_ln(spec, "js gap series", |i| central(i + 2))?;
    let f_p4 = poisson_mixture_ln(spec, "js gap series", |i| central(i + 3))?;
    let tail = poisson_mixture_ln(spec, "js gap series", |i| {
        Ok(central(i)? - (x + 2.0 * i as f64).ln())
    })?;
    let mut acc = LogSum::new();
    acc.push(LogValue::from_ln(f_p) * (2.0 * pf));
    acc.push(-(LogValue::from_ln(f_p2) * pf));
    if nu > 0.0 {
        acc.push(-(LogValue::from_ln(f_p4) * nu));
    }
    acc.push(-(LogValue::from_ln(tail) * (x * x)));
    Ok(acc.value())
}

/// Result of checking `0 ≤ φ ≤ 2(p − 2)` (B.1) and `φ` nondecreasing (B.2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaranchikReport {
    pub b1_ok: bool,
    pub b2_ok: bool,
    /// Grid points violating B.1.
    pub b1_witnesses: Vec<f64>,
    /// Grid points where `φ′ < 0` or where `φ` dropped since the previous point.
    pub b2_witnesses: Vec<f64>,
}

pub fn baranchik_check(factor: &ShrinkageFactor, p: u32, grid: &[f64]) -> Result<BaranchikReport> {
    if grid.is_empty() || grid.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return domain("baranchik grid must be nonempty and positive");
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let cap = 2.0 * (f64::from(p) - 2.0);
    let slack = 1e-12;
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    let mut prev: Option<f64> = None;
    for &w in &grid {
        let phi = factor.phi(w);
        if phi < -slack || phi > cap + slack * cap.abs().max(1.0) {
            b1.push(w);
        }
        let dropped = prev.is_some_and(|q| phi < q - slack * q.abs().max(1.0));
        if factor.dphi(w) < -slack || dropped {
            b2.push(w);
        }
        prev = Some(phi);
    }
    Ok(BaranchikReport {
        b1_ok: b1.is_empty(),
        b2_ok: b2.is_empty(),
        b1_witnesses: b1,
        b2_witnesses: b2,
    })
}

/// `E[1/W]` for `W ~ χ²_p(ν)`, `p ≥ 3`, by quadrature of the density.
pub fn expected_inverse(p: u32, nu: f64) -> Result<f64> {
    if p <= 2 {
        return domain(format!("E[1/W] is infinite for p = {p}"));
    }
    let spec = ChiSquareSpec::new(p, nu)?;
    let upper = default_upper(p, nu);
    let breaks = risk_breaks(&[], upper, 2.0);
    let mut err = None;
    let body = integrate_panels(&breaks, 2 * RULE_POINTS, |w| match noncentral_chisq_logpdf(w, spec) {
        Ok(d) => d.to_f64() / w,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let eps = breaks[0];
    let origin = (ln_central_pdf(eps, f64::from(p)) - 0.5 * nu).exp() / (0.5 * f64::from(p) - 1.0);
    Ok(body + origin)
}
