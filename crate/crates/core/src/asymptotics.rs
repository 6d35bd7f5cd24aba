//! Truncated expectations `G(ν; a) = E[g(‖X‖²)·1{‖X‖² ≤ a}]` at large
//! noncentrality, their limiting constant `c(a, b, p)`, tail-case
//! classification of debiased factors and non-minimaxity certificates.
//!
//! `G` is evaluated through `‖X‖² = U² + V` with `U ~ N(√ν, 1)` and
//! `V ~ χ²_{p−1}`: an outer integral over `s = √a − u` whose Gaussian factor
//! `e^{−(√ν−√a)²/2}` is carried in the log exponent, and an inner integral
//! over `v = t²`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::quadrature::{geometric_toward, integrate_panels, sorted_breaks, uniform_breaks};
use crate::numerics::special::ln_gamma;
use crate::numerics::LogValue;
use crate::risk::{js_gap_direct, sure_expectation, sure_integrand};
use crate::shrinkage::ShrinkageFactor;

const OUTER_POINTS: usize = 16;
const INNER_POINTS: usize = 16;

/// Default noncentrality grid for scans: `100·4^k`, `k = 0..3`.
pub const DEFAULT_NU_GRID: [f64; 4] = [100.0, 400.0, 1600.0, 6400.0];

/// Default grid for certificates: moderate `ν` where the excess is largest,
/// then the scan grid for the limiting check.
pub const DEFAULT_CERTIFY_GRID: [f64; 12] =
    [1.0, 4.0, 9.0, 16.0, 25.0, 36.0, 49.0, 64.0, 100.0, 400.0, 1600.0, 6400.0];

/// Threshold on `normalized excess / bound_constant` at the last grid point.
/// The limit statements give no finite-`ν` bound; one half is a chosen margin.
pub const ASYMPTOTIC_CHECK_FRACTION: f64 = 0.5;

/// `ln c(a, b, p)`.
pub fn ln_c_constant(a: f64, b: f64, p: u32) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("c(a,b,p) needs a > 0, got {a}"));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return domain(format!("c(a,b,p) needs b >= 0, got {b}"));
    }
    if p < 2 {
        return domain(format!("c(a,b,p) needs p >= 2, got {p}"));
    }
    let expo = (f64::from(p) - 1.0) / 4.0 + b / 2.0;
    Ok(expo * a.ln() + b * LN_2 + ln_gamma(b + 1.0) - 0.5 * (2.0 * PI).ln() - 0.5 * a)
}

/// `c(a, b, p) = a^{(p−1)/4 + b/2}·2^b·Γ(b + 1) / (√(2π)·e^{a/2})`.
pub fn c_constant(a: f64, b: f64, p: u32) -> Result<f64> {
    ln_c_constant(a, b, p).map(f64::exp)
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function `g` on `[0, a]` with tail `g(w) ~ (a − w)^b` as `w ↗ a`.
///
/// `singular_ok` allows `g` unbounded at the origin as long as
/// `w^{(p−1)/2}|g(w)|` stays bounded; quadrature then refines toward it.
#[derive(Clone)]
pub struct TruncatedFunctional {
    g: ScalarFn,
    a: f64,
    b: f64,
    singular_ok: bool,
    kinks: Vec<f64>,
}

impl fmt::Debug for TruncatedFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedFunctional")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("singular_ok", &self.singular_ok)
            .field("kinks", &self.kinks)
            .finish_non_exhaustive()
    }
}

impl TruncatedFunctional {
    pub fn from_fn<G>(g: G, a: f64, b: f64, singular_ok: bool, kinks: Vec<f64>) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("truncation point must be positive, got {a}"));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return domain(format!("tail exponent must be >= 0, got {b}"));
        }
        let kinks = sorted_breaks(&kinks).into_iter().filter(|&k| k > 0.0 && k < a).collect();
        Ok(TruncatedFunctional { g: Arc::new(g), a, b, singular_ok, kinks })
    }

    /// `g(w) = (a − w)^b`.
    pub fn power_tail(a: f64, b: f64) -> Result<Self> {
        if b == 0.0 {
            return Self::constant(a);
        }
        Self::from_fn(move |w| (a - w).max(0.0).powf(b), a, b, false, vec![])
    }

    /// `g ≡ 1`.
    pub fn constant(a: f64) -> Result<Self> {
        Self::from_fn(|_| 1.0, a, 0.0, false, vec![])
    }

    /// `r_φ` on `[0, a]` for a factor with finite support end `a`.
    pub fn sure_of(factor: &ShrinkageFactor, p: u32) -> Result<Self> {
        let a = factor.support_end();
        if !(a.is_finite() && a > 0.0) {
            return domain(format!("{} has no finite support end", factor.name()));
        }
        let f = factor.clone();
        Self::from_fn(move |w| sure_integrand(&f, p, w), a, 0.0, true, factor.breakpoints())
    }

    /// `c·g`, same tail metadata.
    pub fn scaled(&self, c: f64) -> Self {
        let g = self.g.clone();
        TruncatedFunctional { g: Arc::new(move |w| c * g(w)), ..self.clone() }
    }

    pub fn eval(&self, w: f64) -> f64 {
        (self.g)(w)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn singular_ok(&self) -> bool {
        self.singular_ok
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// `g(w)/(a − w)^b` within 1% of 1 at `w = a − 10⁻⁶`.
    pub fn tail_normalized(&self) -> bool {
        let d = 1e-6;
        let r = self.eval(self.a - d) / d.powf(self.b);
        (r - 1.0).abs() < 0.01
    }
}

// ln of 2 / (2^{(p−1)/2} Γ((p−1)/2)): χ²_{p−1} density after v = t²
fn ln_inner_const(p: u32) -> f64 {
    let h = 0.5 * (f64::from(p) - 1.0);
    LN_2 - h * LN_2 - ln_gamma(h)
}

/// `∫₀^{√m} g(u2 + t²)·2t·f_{p−1}(t²) dt`, i.e. `∫₀^m g(u2 + v) f_{p−1}(v) dv`.
fn inner_integral(f: &TruncatedFunctional, p: u32, u2: f64, m: f64, n: usize, ln_c: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    let tm = m.sqrt();
    let mut breaks = uniform_breaks(0.0, tm, 0.5);
    for &k in &f.kinks {
        if k > u2 && k < u2 + m {
            breaks.push((k - u2).sqrt());
        }
    }
    if f.singular_ok {
        breaks.extend(geometric_toward(0.0, tm.min(0.5), 30));
    }
    if f.b.fract() != 0.0 {
        breaks.extend(geometric_toward(tm, tm * 0.5, 30));
    }
    let tpow = f64::from(p) - 2.0;
    integrate_panels(&breaks, n, |t| {
        let g = f.eval(u2 + t * t);
        if g == 0.0 {
            0.0
        } else {
            g * (tpow * t.ln() - 0.5 * t * t + ln_c).exp()
        }
    })
}

// Outer breakpoints in s = √a − u on [0, 2√a].
fn outer_breaks(f: &TruncatedFunctional, d: f64) -> Vec<f64> {
    let sa = f.a.sqrt();
    let top = 2.0 * sa;
    let kappa = d.max(0.0) + 1.0;
    let h0 = (1.0 / kappa).min(top);
    let mut b = geometric_toward(0.0, h0, 40);
    // the inner range a − u² also closes at u = −√a
    b.extend(geometric_toward(top, top - h0.min(0.5 * sa), 40));
    let flat = (60.0 / kappa).min(top);
    if flat > h0 {
        b.extend(uniform_breaks(h0, flat, 1.0 / kappa));
    }
    let mut s = flat;
    while s < top {
        b.push(s);
        s *= 2.0;
    }
    b.push(top);
    let mut refine_at = |c: f64, levels: u32, half_width: f64| {
        b.push(c);
        if c - half_width > 0.0 {
            b.extend(geometric_toward(c, c - half_width, levels));
        }
        if c + half_width < top {
            b.extend(geometric_toward(c, c + half_width, levels));
        }
    };
    refine_at(sa, if f.singular_ok { 30 } else { 0 }, 0.25 * sa);
    for &k in &f.kinks {
        let r = k.sqrt();
        refine_at(sa - r, 12, 0.05 * sa);
        refine_at(sa + r, 12, 0.05 * sa);
    }
    if d < 0.0 {
        b.push(-d);
    }
    sorted_breaks(&b).into_iter().filter(|&x| (0.0..=top).contains(&x)).collect()
}

fn outer_integral(f: &TruncatedFunctional, p: u32, d: f64, breaks: &[f64], n_out: usize, n_in: usize) -> f64 {
    let sa = f.a.sqrt();
    let ln_c = ln_inner_const(p);
    integrate_panels(breaks, n_out, |s| {
        let lw = if d > 0.0 { -0.5 * s * (2.0 * d + s) } else { -0.5 * (d + s) * (d + s) };
        let u = sa - s;
        let m = s * (2.0 * sa - s);
        let inner = inner_integral(f, p, u * u, m, n_in, ln_c);
        if inner == 0.0 {
            0.0
        } else {
            inner * lw.exp()
        }
    })
}

/// `G(ν; a)` with an estimate of its relative error from doubling the
/// number of nodes in every panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub value: LogValue,
    pub rel_error: f64,
}

pub fn g_eval_detailed(f: &TruncatedFunctional, p: u32, nu: f64) -> Result<GValue> {
    if p < 2 {
        return domain(format!("G(nu; a) needs p >= 2, got {p}"));
    }
    if !(nu >= 0.0 && nu.is_finite()) {
        return domain(format!("noncentrality must be finite and >= 0, got {nu}"));
    }
    let d = nu.sqrt() - f.a.sqrt();
    let pulled = if d > 0.0 { -0.5 * d * d } else { 0.0 };
    let breaks = outer_breaks(f, d);
    let coarse = outer_integral(f, p, d, &breaks, OUTER_POINTS, INNER_POINTS);
    let fine = outer_integral(f, p, d, &breaks, 2 * OUTER_POINTS, 2 * INNER_POINTS);
    if !fine.is_finite() {
        return Err(Error::NonIntegrable(format!("G(nu; a) at nu = {nu} is not finite")));
    }
    let rel_error = if fine == 0.0 { (fine - coarse).abs() } else { ((fine - coarse) / fine).abs() };
    let value = LogValue::from_f64(fine).scale_exp(pulled - 0.5 * (2.0 * PI).ln());
    Ok(GValue { value, rel_error })
}

/// `G(ν; a) = E[g(‖X‖²)·1{‖X‖² ≤ a}]`, `‖θ‖² = ν`, in log space.
pub fn g_eval(f: &TruncatedFunctional, p: u32, nu: f64) -> Result<LogValue> {
    g_eval_detailed(f, p, nu).map(|v| v.value)
}

/// `H(y) = y^{−(b+q)} ∫₀^y g(v + a − y) f_{p−1}(v) dv`, `q = (p − 1)/2`.
pub fn h_eval(f: &TruncatedFunctional, p: u32, y: f64) -> Result<f64> {
    if p < 2 {
        return domain(format!("H(y) needs p >= 2, got {p}"));
    }
    if !(y > 0.0 && y <= f.a * (1.0 + 1e-15)) {
        return domain(format!("H(y) needs 0 < y <= a, got {y}"));
    }
    let y = y.min(f.a);
    let q = 0.5 * (f64::from(p) - 1.0);
    let body = inner_integral(f, p, f.a - y, y, 2 * INNER_POINTS, ln_inner_const(p));
    Ok(body * (-(f.b + q) * y.ln()).exp())
}

/// The rescaled integrand `H₁(z; ν)` of the limit argument:
/// `H(a − (√a − z/(√ν − √a))²)·(1 − z/(2√a(√ν − √a)))^{b+q}·e^{−z²/(2(√ν−√a)²)}`
/// on `0 < z < 2√a(√ν − √a)`, zero beyond. Needs `ν > a`.
pub fn h1_eval(f: &TruncatedFunctional, p: u32, z: f64, nu: f64) -> Result<f64> {
    let sa = f.a.sqrt();
    let d = nu.sqrt() - sa;
    if !(d > 0.0) {
        return domain(format!("H1 needs nu > a, got nu = {nu}"));
    }
    if z <= 0.0 || z >= 2.0 * sa * d {
        return Ok(0.0);
    }
    let q = 0.5 * (f64::from(p) - 1.0);
    let s = z / d;
    let y = s * (2.0 * sa - s);
    let h = h_eval(f, p, y)?;
    Ok(h * (1.0 - z / (2.0 * sa * d)).powf(f.b + q) * (-0.5 * s * s).exp())
}

/// `Γ(b + 1) / (Γ(b + (p+1)/2)·2^{(p−1)/2})`, the limit of `H(y)` at `0⁺`.
pub fn h_limit_at_zero(b: f64, p: u32) -> f64 {
    let pf = f64::from(p);
    (ln_gamma(b + 1.0) - ln_gamma(b + 0.5 * (pf + 1.0)) - 0.5 * (pf - 1.0) * LN_2).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub nu: f64,
    pub log_g: LogValue,
    pub ratio: f64,
    pub target: f64,
    pub rel_dev: f64,
}

/// `ν^{(p+1)/4 + b/2} e^{ν/2} e^{−√(νa)} G(ν; a)` against its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRatioScan {
    pub rows: Vec<ScanRow>,
    pub a: f64,
    pub b: f64,
    pub p: u32,
}

impl AsymptoticRatioScan {
    pub fn rel_dev_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].rel_dev < w[0].rel_dev)
    }
}

fn scan_row(nu: f64, log_g: LogValue, a: f64, b: f64, p: u32, target: f64) -> ScanRow {
    let expo = (f64::from(p) + 1.0) / 4.0 + b / 2.0;
    let ln_ratio = expo * nu.ln() + 0.5 * nu - (nu * a).sqrt() + log_g.log_magnitude();
    let ratio = f64::from(log_g.sign()) * ln_ratio.exp();
    ScanRow { nu, log_g, ratio, target, rel_dev: (ratio / target - 1.0).abs() }
}

fn check_scan_grid(nu_grid: &[f64]) -> Result<()> {
    if nu_grid.is_empty() || nu_grid.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return domain("scan grid must be nonempty, positive and finite");
    }
    if nu_grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("scan grid must be strictly increasing");
    }
    Ok(())
}

/// Ratio scan for Theorem-style convergence. The grid must be increasing
/// and reach at least `10³`.
pub fn theorem1_scan(f: &TruncatedFunctional, p: u32, nu_grid: &[f64]) -> Result<AsymptoticRatioScan> {
    check_scan_grid(nu_grid)?;
    if nu_grid[nu_grid.len() - 1] < 1e3 {
        return domain("scan grid must reach nu >= 1000");
    }
    let target = c_constant(f.a, f.b, p)?;
    let rows = nu_grid
        .iter()
        .map(|&nu| g_eval(f, p, nu).map(|g| scan_row(nu, g, f.a, f.b, p, target)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticRatioScan { rows, a: f.a, b: f.b, p })
}

/// Normalized James–Stein gap against `4c(p − 2, 0, p)`.
pub fn js_gap_asymptote(p: u32, nu_grid: &[f64]) -> Result<AsymptoticRatioScan> {
    if p < 3 {
        return domain(format!("js gap requires p >= 3, got {p}"));
    }
    check_scan_grid(nu_grid)?;
    let a = f64::from(p) - 2.0;
    let target = 4.0 * c_constant(a, 0.0, p)?;
    let rows = nu_grid
        .iter()
        .map(|&nu| js_gap_direct(p, nu).map(|g| scan_row(nu, g, a, 0.0, p, target)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticRatioScan { rows, a, b: 0.0, p })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Case1,
    Case2,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Case1 => "case1",
            Case::Case2 => "case2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseParams {
    /// `φ′ < −δ₁` and `(φ/w)(φ − 2(p−2)) > −δ₁` on `(δ₂a, a)`.
    Case1 { delta1: f64, delta2: f64 },
    /// `−γ < (a−w)φ′/φ < −1/γ` on `(εa, a)`, `φ > φ*(a−w)^γ` there.
    Case2 { gamma: f64, epsilon: f64, phi_star: f64, epsilon_prime: f64 },
}

const TAIL_K_MIN: f64 = 4.0;
const TAIL_K_MAX: f64 = 40.0;

fn tail_w(a: f64, k: f64) -> f64 {
    a * (1.0 - 0.5f64.powf(k))
}

fn tail_grid(k_from: f64, step: f64) -> Vec<f64> {
    let n = ((TAIL_K_MAX - k_from) / step).round() as usize;
    (0..=n).map(|i| k_from + step * i as f64).collect()
}

/// Reads off Case 1 or Case 2 from `φ` on `w = a(1 − 2^{−k})`, `k = 4..40`,
/// with conservative witnesses (half the observed bounds).
pub fn classify_case(factor: &ShrinkageFactor, p: u32) -> Result<(Case, CaseParams)> {
    let a = factor.support_end();
    if !factor.is_ds_compliant() || !(a.is_finite() && a > 0.0) {
        return Err(Error::Classification(format!(
            "{} is not a debiased factor with finite support end",
            factor.name()
        )));
    }
    if p < 3 {
        return domain(format!("classification needs p >= 3, got {p}"));
    }
    let pf = f64::from(p);
    let ks = tail_grid(TAIL_K_MIN, 1.0);
    let ws: Vec<f64> = ks.iter().map(|&k| tail_w(a, k)).collect();
    let dphi: Vec<f64> = ws.iter().map(|&w| factor.dphi(w)).collect();
    let phi: Vec<f64> = ws.iter().map(|&w| factor.phi(w)).collect();
    let lead: Vec<f64> = ws.iter().zip(&phi).map(|(&w, &f)| f / w * (f - 2.0 * (pf - 2.0))).collect();
    let last = dphi.len() - 1;
    let scale = dphi.iter().fold(0.0f64, |m, d| m.max(d.abs()));

    // first index from which a property holds on the rest of the grid
    let holds_from = |ok: &dyn Fn(usize) -> bool| -> Option<usize> {
        let mut start = None;
        for i in (0..=last).rev() {
            if ok(i) {
                start = Some(i);
            } else {
                break;
            }
        }
        start
    };

    let limit_nonzero = dphi[last] < 0.0 && dphi[last].abs() > 1e-3 * scale;
    if limit_nonzero {
        if let Some(i0) = holds_from(&|i| dphi[i] < 0.0) {
            let delta1 = 0.5 * dphi[i0..].iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
            if let Some(istar) = holds_from(&|i| i >= i0 && dphi[i] < -delta1 && lead[i] > -delta1) {
                let delta2 = 1.0 - 0.5f64.powf(ks[istar]);
                return Ok((Case::Case1, CaseParams::Case1 { delta1, delta2 }));
            }
        }
    }

    let vanishing = dphi[last].abs() <= 1e-6 * scale.max(1e-300);
    let ratio: Vec<f64> = ws
        .iter()
        .zip(&phi)
        .zip(&dphi)
        .map(|((&w, &f), &d)| if f > 0.0 { (a - w) * d / f } else { f64::NAN })
        .collect();
    if vanishing {
        if let Some(i0) = holds_from(&|i| ratio[i] < 0.0 && ratio[i].is_finite()) {
            let sup = ratio[i0..].iter().fold(0.0f64, |m, r| m.max(r.abs()));
            let inf = ratio[i0..].iter().fold(f64::INFINITY, |m, r| m.min(r.abs()));
            let gamma = 2.0 * sup.max(1.0 / inf);
            let epsilon = 1.0 - 0.5f64.powf(ks[i0]);
            let epsilon_prime = 1.0 / (1.0 + 1.0 / ((pf - 2.0) * gamma));
            let phi_star = factor.phi(epsilon * a) / (a - epsilon * a).powf(gamma);
            return Ok((Case::Case2, CaseParams::Case2 { gamma, epsilon, phi_star, epsilon_prime }));
        }
    }

    Err(Error::Classification(format!(
        "{}: tail matches neither case; phi' on k=4..40: first {:.3e}, last {:.3e}; (a-w)phi'/phi last {:.3e}",
        factor.name(),
        dphi[0],
        dphi[last],
        ratio[last]
    )))
}

/// Checks the case's defining inequalities and its lower bound on `r_φ` on
/// a tail grid `10×` finer than the one used for classification.
pub fn verify_case_bounds(factor: &ShrinkageFactor, p: u32, params: &CaseParams) -> Result<()> {
    let a = factor.support_end();
    let pf = f64::from(p);
    let fail = |msg: String| Err(Error::Certification(format!("{}: {msg}", factor.name())));
    match *params {
        CaseParams::Case1 { delta1, delta2 } => {
            let k0 = -(1.0 - delta2).log2();
            for k in tail_grid(k0, 0.1) {
                let w = tail_w(a, k);
                let phi = factor.phi(w);
                let d = factor.dphi(w);
                let r = sure_integrand(factor, p, w);
                if !(d < -delta1 && phi / w * (phi - 2.0 * (pf - 2.0)) > -delta1 && r >= 3.0 * delta1) {
                    return fail(format!("case1 bound falsified at w = {w}"));
                }
            }
        }
        CaseParams::Case2 { gamma, epsilon, phi_star, epsilon_prime } => {
            let k0 = -(1.0 - epsilon.max(epsilon_prime)).log2();
            for k in tail_grid(k0, 0.1).into_iter().skip(1) {
                let w = tail_w(a, k);
                let phi = factor.phi(w);
                let ratio = (a - w) * factor.dphi(w) / phi;
                let r = sure_integrand(factor, p, w);
                let bound = 2.0 * phi_star / gamma * (a - w).powf(gamma - 1.0);
                if !(ratio > -gamma && ratio < -1.0 / gamma && r >= bound) {
                    return fail(format!("case2 bound falsified at w = {w}"));
                }
            }
        }
    }
    Ok(())
}

/// Evidence that `R(ν*) > p` for a debiased factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonMinimaxCertificate {
    pub factor: String,
    pub case: Case,
    pub case_params: CaseParams,
    pub nu_star: f64,
    pub excess: LogValue,
    pub bound_constant: f64,
}

/// `R(ν) − p` over a grid, in log space. Finite-support factors go through
/// [`g_eval`] of `r_φ`; others through direct quadrature, where a value
/// inside its error bound counts as zero.
pub fn risk_excess_grid(factor: &ShrinkageFactor, p: u32, nu_grid: &[f64]) -> Result<Vec<LogValue>> {
    let a = factor.support_end();
    if a.is_finite() && a > 0.0 && factor.jumps().is_empty() {
        let f = TruncatedFunctional::sure_of(factor, p)?;
        nu_grid.iter().map(|&nu| g_eval(&f, p, nu)).collect()
    } else {
        nu_grid
            .iter()
            .map(|&nu| {
                let (v, err) = sure_expectation(factor, p, nu, None)?;
                Ok(if v.abs() <= err { LogValue::ZERO } else { LogValue::from_f64(v) })
            })
            .collect()
    }
}

/// Certifies `sup_ν R(ν) > p`.
///
/// The excess is computed first, so a factor with no positive excess on the
/// grid fails with [`Error::Certification`] whether or not its tail can be
/// classified; then the case is classified, its bounds are re-checked on a
/// refined grid, and the normalized excess at the last grid point must reach
/// [`ASYMPTOTIC_CHECK_FRACTION`] of `bound_constant`.
pub fn certify_nonminimax(factor: &ShrinkageFactor, p: u32, nu_grid: &[f64]) -> Result<NonMinimaxCertificate> {
    if p < 3 {
        return domain(format!("certification needs p >= 3, got {p}"));
    }
    check_scan_grid(nu_grid)?;
    let excess = risk_excess_grid(factor, p, nu_grid)?;
    let best = excess
        .iter()
        .enumerate()
        .filter(|(_, e)| e.sign() > 0)
        .max_by(|x, y| x.1.total_cmp(y.1));
    let Some((i_star, &best_excess)) = best else {
        return Err(Error::Certification(format!(
            "{}: no grid noncentrality gives risk above p = {p}",
            factor.name()
        )));
    };
    let (case, params) = classify_case(factor, p)?;
    verify_case_bounds(factor, p, &params)?;
    let a = factor.support_end();
    let (bound_constant, b) = match params {
        CaseParams::Case1 { delta1, .. } => (3.0 * delta1 * c_constant(a, 0.0, p)?, 0.0),
        CaseParams::Case2 { gamma, phi_star, .. } => {
            (2.0 * phi_star / gamma * c_constant(a, gamma - 1.0, p)?, gamma - 1.0)
        }
    };
    let last = nu_grid.len() - 1;
    let row = scan_row(nu_grid[last], excess[last], a, b, p, bound_constant);
    if !(row.ratio >= ASYMPTOTIC_CHECK_FRACTION * bound_constant) {
        return Err(Error::Certification(format!(
            "{}: normalized excess {:.6e} at nu = {} is below {} x bound {:.6e}",
            factor.name(),
            row.ratio,
            row.nu,
            ASYMPTOTIC_CHECK_FRACTION,
            bound_constant
        )));
    }
    Ok(NonMinimaxCertificate {
        factor: factor.name(),
        case,
        case_params: params,
        nu_star: nu_grid[i_star],
        excess: best_excess,
        bound_constant,
    })
}

/// Normalized excess `ν^{(p+1)/4+b/2}e^{ν/2}e^{−√(νa)}(R(ν) − p)` for a
/// certificate's case (`b = 0` in Case 1, `γ − 1` in Case 2).
pub fn normalized_excess(certificate: &NonMinimaxCertificate, a: f64, p: u32, nu: f64, excess: LogValue) -> f64 {
    let b = match certificate.case_params {
        CaseParams::Case1 { .. } => 0.0,
        CaseParams::Case2 { gamma, .. } => gamma - 1.0,
    };
    scan_row(nu, excess, a, b, p, certificate.bound_constant).ratio
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{central_chisq_cdf, noncentral_chisq_cdf, noncentral_chisq_pdf, ChiSquareSpec};
    use crate::shrinkage::Family;

    #[test]
    fn c_constant_examples() {
        // mpmath, 30 digits
        assert!((c_constant(1.0, 0.0, 3).unwrap() - 0.241_970_724_519_143_35).abs() < 1e-15);
        assert!((c_constant(4.0, 1.0, 3).unwrap() - 0.431_927_732_105_504_4).abs() < 1e-13);
        let direct = 4f64.powf(0.5) / ((2.0 * PI).sqrt() * 2f64.exp());
        assert!((c_constant(4.0, 0.0, 3).unwrap() / direct - 1.0).abs() < 1e-12);
        assert!(c_constant(0.0, 0.0, 3).is_err());
        assert!(c_constant(1.0, -1.0, 3).is_err());
        assert!(c_constant(1.0, 0.0, 1).is_err());
    }

    #[test]
    fn g_of_one_is_the_cdf() {
        for a in [1.0, 4.0] {
            let f = TruncatedFunctional::constant(a).unwrap();
            for p in [2, 3, 6] {
                for nu in [0.0, 1.0, 25.0, 100.0] {
                    let g = g_eval(&f, p, nu).unwrap().to_f64();
                    let cdf = noncentral_chisq_cdf(a, ChiSquareSpec::new(p, nu).unwrap()).unwrap();
                    assert!((g / cdf - 1.0).abs() < 1e-8, "a={a} p={p} nu={nu}: {g} {cdf}");
                }
            }
        }
    }

    #[test]
    fn g_matches_one_dimensional_quadrature() {
        let f = TruncatedFunctional::power_tail(4.0, 2.0).unwrap();
        let g = g_eval(&f, 3, 0.0).unwrap().to_f64();
        let breaks = geometric_toward(0.0, 4.0, 50);
        let oracle = integrate_panels(&breaks, 30, |w| (4.0 - w).powi(2) * crate::numerics::central_chisq_pdf(w, 3).unwrap());
        assert!((g - oracle).abs() < 1e-8, "{g} {oracle}");
        let spec = ChiSquareSpec::new(5, 9.0).unwrap();
        let g = g_eval(&f, 5, 9.0).unwrap().to_f64();
        let oracle = integrate_panels(&breaks, 30, |w| (4.0 - w).powi(2) * noncentral_chisq_pdf(w, spec).unwrap());
        assert!((g / oracle - 1.0).abs() < 1e-8, "{g} {oracle}");
    }

    #[test]
    fn g_is_linear() {
        let g1 = TruncatedFunctional::power_tail(2.0, 1.0).unwrap();
        let g2 = TruncatedFunctional::from_fn(|w| (w - 0.7).abs(), 2.0, 1.0, false, vec![0.7]).unwrap();
        let (x, y) = (1.5, -0.25);
        let c1 = g1.clone();
        let c2 = g2.clone();
        let combo = TruncatedFunctional::from_fn(move |w| x * c1.eval(w) + y * c2.eval(w), 2.0, 1.0, false, vec![0.7]).unwrap();
        for nu in [0.5, 4.0, 30.0] {
            let lhs = g_eval(&combo, 4, nu).unwrap().to_f64();
            let rhs = x * g_eval(&g1, 4, nu).unwrap().to_f64() + y * g_eval(&g2, 4, nu).unwrap().to_f64();
            assert!((lhs / rhs - 1.0).abs() < 1e-10, "nu={nu}: {lhs} {rhs}");
        }
    }

    #[test]
    fn h_limits() {
        for b in [0.0, 1.0, 2.0] {
            for p in [3, 5] {
                let f = TruncatedFunctional::power_tail(4.0, b).unwrap();
                let h = h_eval(&f, p, 4e-3).unwrap();
                let lim = h_limit_at_zero(b, p);
                assert!((h / lim - 1.0).abs() < 0.02, "b={b} p={p}: {h} {lim}");
            }
        }
        let f = TruncatedFunctional::constant(3.0).unwrap();
        let h = h_eval(&f, 4, 3.0).unwrap();
        let expect = 3f64.powf(-1.5) * central_chisq_cdf(3.0, 3).unwrap();
        assert!((h - expect).abs() < 1e-12);
        assert!(h_eval(&f, 4, 0.0).is_err());
    }

    #[test]
    fn h1_is_dominated_by_max_h() {
        let f = TruncatedFunctional::power_tail(4.0, 1.0).unwrap();
        let p = 3;
        let hmax = (1..=400)
            .map(|i| 4.0 * f64::from(i) / 400.0)
            .chain((3..12).map(|k| 4.0 * 10f64.powi(-k)))
            .map(|y| h_eval(&f, p, y).unwrap().abs())
            .fold(0.0, f64::max);
        for nu in [9.0, 100.0, 2500.0] {
            for j in 0..200 {
                let z = 0.05 * f64::from(j);
                assert!(h1_eval(&f, p, z, nu).unwrap() <= hmax * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn scan_is_scale_covariant() {
        let f = TruncatedFunctional::power_tail(4.0, 1.0).unwrap();
        let s1 = theorem1_scan(&f, 3, &DEFAULT_NU_GRID).unwrap();
        let s2 = theorem1_scan(&f.scaled(2.0), 3, &DEFAULT_NU_GRID).unwrap();
        for (r1, r2) in s1.rows.iter().zip(&s2.rows) {
            assert!((r2.ratio / r1.ratio - 2.0).abs() < 1e-12);
        }
        assert!(theorem1_scan(&f, 3, &[10.0, 100.0]).is_err());
    }

    #[test]
    fn classification_examples() {
        let scad = ShrinkageFactor::from_family(Family::Scad { lambda: 1.0, alpha: 3.7 });
        let (case, params) = classify_case(&scad, 5).unwrap();
        assert_eq!(case, Case::Case1);
        let CaseParams::Case1 { delta1, delta2 } = params else { panic!() };
        assert!(delta1 > 0.0 && delta1 <= 0.5 / 1.7 && delta2 > 0.0 && delta2 < 1.0);

        let mcp = ShrinkageFactor::from_family(Family::Mcp { lambda: 1.0, alpha: 2.0 });
        assert_eq!(classify_case(&mcp, 5).unwrap().0, Case::Case1);

        let quad = ShrinkageFactor::from_family(Family::Quad { a: 2.0 });
        let (case, params) = classify_case(&quad, 4).unwrap();
        assert_eq!(case, Case::Case2);
        let CaseParams::Case2 { gamma, .. } = params else { panic!() };
        assert!(gamma > 2.0 && gamma <= 4.0 + 1e-9, "{gamma}");
        verify_case_bounds(&quad, 4, &params).unwrap();

        let js = ShrinkageFactor::from_family(Family::JsPlus { p: 5 });
        assert!(matches!(classify_case(&js, 5), Err(Error::Classification(_))));
    }
}
