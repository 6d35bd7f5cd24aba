//! Shrinkage factors `φ(w)` and the estimator `x ↦ (1 − φ(‖x‖²)/‖x‖²)·x`.

mod pls;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use pls::{brute_force_pls_oracle, penalty_value, solve_penalized_ls, Penalty};

/// Names of the built-in factor families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Identity,
    Js,
    JsPlus,
    Ridge,
    Soft,
    Hard,
    Scad,
    Mcp,
    Quad,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 9] = [
        FamilyKind::Identity,
        FamilyKind::Js,
        FamilyKind::JsPlus,
        FamilyKind::Ridge,
        FamilyKind::Soft,
        FamilyKind::Hard,
        FamilyKind::Scad,
        FamilyKind::Mcp,
        FamilyKind::Quad,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Identity => "identity",
            FamilyKind::Js => "js",
            FamilyKind::JsPlus => "js_plus",
            FamilyKind::Ridge => "ridge",
            FamilyKind::Soft => "soft",
            FamilyKind::Hard => "hard",
            FamilyKind::Scad => "scad",
            FamilyKind::Mcp => "mcp",
            FamilyKind::Quad => "quad",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .map_or_else(|| domain(format!("unknown factor family `{s}`")), Ok)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters accepted by [`make_factor`]; each family reads the ones it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FactorParams {
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub p: Option<u32>,
}

/// A validated built-in family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Identity,
    Js { p: u32 },
    JsPlus { p: u32 },
    Ridge { lambda: f64 },
    Soft { lambda: f64 },
    Hard { lambda: f64 },
    Scad { lambda: f64, alpha: f64 },
    Mcp { lambda: f64, alpha: f64 },
    Quad { a: f64 },
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Identity => FamilyKind::Identity,
            Family::Js { .. } => FamilyKind::Js,
            Family::JsPlus { .. } => FamilyKind::JsPlus,
            Family::Ridge { .. } => FamilyKind::Ridge,
            Family::Soft { .. } => FamilyKind::Soft,
            Family::Hard { .. } => FamilyKind::Hard,
            Family::Scad { .. } => FamilyKind::Scad,
            Family::Mcp { .. } => FamilyKind::Mcp,
            Family::Quad { .. } => FamilyKind::Quad,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Identity => write!(f, "identity"),
            Family::Js { p } => write!(f, "js(p={p})"),
            Family::JsPlus { p } => write!(f, "js_plus(p={p})"),
            Family::Ridge { lambda } => write!(f, "ridge(lambda={lambda})"),
            Family::Soft { lambda } => write!(f, "soft(lambda={lambda})"),
            Family::Hard { lambda } => write!(f, "hard(lambda={lambda})"),
            Family::Scad { lambda, alpha } => write!(f, "scad(lambda={lambda},alpha={alpha})"),
            Family::Mcp { lambda, alpha } => write!(f, "mcp(lambda={lambda},alpha={alpha})"),
            Family::Quad { a } => write!(f, "quad(a={a})"),
        }
    }
}

/// Asymptotic form `φ(w) ~ g*·(a − w)^b` as `w ↗ a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailHint {
    pub b: f64,
    pub g_star: f64,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-defined factor. Nothing about its tail is inferred: the caller
/// states the support end, kinks, DS compliance and tail form.
#[derive(Clone)]
pub struct CustomFactor {
    pub name: String,
    pub phi: ScalarFn,
    pub dphi: ScalarFn,
    pub support_end: f64,
    pub breakpoints: Vec<f64>,
    pub tail_hint: Option<TailHint>,
    pub ds_compliant: bool,
    /// `lim_{w→0} φ(w)/w`.
    pub phi_over_w_at_zero: f64,
}

#[derive(Clone)]
enum Kind {
    Builtin(Family),
    Custom(Arc<CustomFactor>),
}

/// A shrinkage factor `φ` with its weak derivative and support metadata.
///
/// Immutable once built. At kinks `dphi` is the right-hand derivative.
#[derive(Clone)]
pub struct ShrinkageFactor {
    kind: Kind,
}

impl fmt::Debug for ShrinkageFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShrinkageFactor({})", self.name())
    }
}

/// Builds a factor, checking each family's parameter constraints.
pub fn make_factor(family: FamilyKind, params: FactorParams) -> Result<ShrinkageFactor> {
    let need = |v: Option<f64>, name: &str| -> Result<f64> {
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => domain(format!("{family}: parameter {name} must be finite, got {x}")),
            None => domain(format!("{family}: parameter {name} is required")),
        }
    };
    let positive_lambda = || -> Result<f64> {
        let lambda = need(params.lambda, "lambda")?;
        if lambda <= 0.0 {
            return domain(format!("{family}: requires lambda > 0, got {lambda}"));
        }
        Ok(lambda)
    };
    let js_p = || -> Result<u32> {
        match params.p {
            Some(p) if p >= 3 => Ok(p),
            Some(p) => domain(format!("{family}: requires p >= 3, got {p}")),
            None => domain(format!("{family}: parameter p is required")),
        }
    };
    let fam = match family {
        FamilyKind::Identity => Family::Identity,
        FamilyKind::Js => Family::Js { p: js_p()? },
        FamilyKind::JsPlus => Family::JsPlus { p: js_p()? },
        FamilyKind::Ridge => Family::Ridge { lambda: positive_lambda()? },
        FamilyKind::Soft => Family::Soft { lambda: positive_lambda()? },
        FamilyKind::Hard => Family::Hard { lambda: positive_lambda()? },
        FamilyKind::Scad => {
            let lambda = positive_lambda()?;
            let alpha = need(params.alpha, "alpha")?;
            if alpha <= 2.0 {
                return domain(format!("scad: requires alpha > 2, got {alpha}"));
            }
            Family::Scad { lambda, alpha }
        }
        FamilyKind::Mcp => {
            let lambda = positive_lambda()?;
            let alpha = need(params.alpha, "alpha")?;
            if alpha <= 1.0 {
                return domain(format!("mcp: requires alpha > 1, got {alpha}"));
            }
            Family::Mcp { lambda, alpha }
        }
        FamilyKind::Quad => {
            let a = need(params.a, "a")?;
            if a <= 0.0 {
                return domain(format!("quad: requires a > 0, got {a}"));
            }
            Family::Quad { a }
        }
    };
    Ok(ShrinkageFactor::from_family(fam))
}

// α²λ², computed one way everywhere so branch tests and support_end agree
fn debiased_end(lambda: f64, alpha: f64) -> f64 {
    alpha * alpha * (lambda * lambda)
}

// (2a + 1 − √(4a + 1))/2: where w = (a − w)², the switch point of φ_Q.
fn quad_switch(a: f64) -> f64 {
    0.5 * (2.0 * a + 1.0 - (4.0 * a + 1.0).sqrt())
}

impl ShrinkageFactor {
    /// Wraps an already-validated family. Prefer [`make_factor`] for user input.
    pub fn from_family(family: Family) -> Self {
        ShrinkageFactor {
            kind: Kind::Builtin(family),
        }
    }

    pub fn custom(factor: CustomFactor) -> Self {
        ShrinkageFactor {
            kind: Kind::Custom(Arc::new(factor)),
        }
    }

    pub fn family(&self) -> Option<Family> {
        match &self.kind {
            Kind::Builtin(f) => Some(*f),
            Kind::Custom(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Builtin(f) => f.to_string(),
            Kind::Custom(c) => c.name.clone(),
        }
    }

    pub fn phi(&self, w: f64) -> f64 {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return (c.phi)(w),
        };
        match fam {
            Family::Identity => 0.0,
            Family::Js { p } => f64::from(p) - 2.0,
            Family::JsPlus { p } => w.min(f64::from(p) - 2.0),
            Family::Ridge { lambda } => w / (lambda + 1.0),
            Family::Soft { lambda } => {
                if w <= lambda * lambda {
                    w
                } else {
                    lambda * w.sqrt()
                }
            }
            Family::Hard { lambda } => {
                if w <= lambda * lambda {
                    w
                } else {
                    0.0
                }
            }
            Family::Scad { lambda, alpha } => {
                let l2 = lambda * lambda;
                if w < l2 {
                    w
                } else if w < 4.0 * l2 {
                    lambda * w.sqrt()
                } else if w < debiased_end(lambda, alpha) {
                    (-w + alpha * lambda * w.sqrt()) / (alpha - 2.0)
                } else {
                    0.0
                }
            }
            Family::Mcp { lambda, alpha } => {
                let l2 = lambda * lambda;
                if w < l2 {
                    w
                } else if w < debiased_end(lambda, alpha) {
                    (-w + alpha * lambda * w.sqrt()) / (alpha - 1.0)
                } else {
                    0.0
                }
            }
            Family::Quad { a } => {
                if w < quad_switch(a) {
                    w
                } else if w <= a {
                    (a - w) * (a - w)
                } else {
                    0.0
                }
            }
        }
    }

    /// Weak derivative of `φ`, right-continuous at kinks. Jumps of `φ`
    /// (hard thresholding) are not part of it; see [`Self::jumps`].
    pub fn dphi(&self, w: f64) -> f64 {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return (c.dphi)(w),
        };
        match fam {
            Family::Identity | Family::Js { .. } => 0.0,
            Family::JsPlus { p } => {
                if w < f64::from(p) - 2.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Ridge { lambda } => 1.0 / (lambda + 1.0),
            Family::Soft { lambda } => {
                if w < lambda * lambda {
                    1.0
                } else {
                    0.5 * lambda / w.sqrt()
                }
            }
            Family::Hard { lambda } => {
                if w < lambda * lambda {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Scad { lambda, alpha } => {
                let l2 = lambda * lambda;
                if w < l2 {
                    1.0
                } else if w < 4.0 * l2 {
                    0.5 * lambda / w.sqrt()
                } else if w < debiased_end(lambda, alpha) {
                    (-1.0 + 0.5 * alpha * lambda / w.sqrt()) / (alpha - 2.0)
                } else {
                    0.0
                }
            }
            Family::Mcp { lambda, alpha } => {
                let l2 = lambda * lambda;
                if w < l2 {
                    1.0
                } else if w < debiased_end(lambda, alpha) {
                    (-1.0 + 0.5 * alpha * lambda / w.sqrt()) / (alpha - 1.0)
                } else {
                    0.0
                }
            }
            Family::Quad { a } => {
                if w < quad_switch(a) {
                    1.0
                } else if w < a {
                    -2.0 * (a - w)
                } else {
                    0.0
                }
            }
        }
    }

    /// Smallest `a` with `φ ≡ 0` on `[a, ∞)`; `∞` if there is none.
    pub fn support_end(&self) -> f64 {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return c.support_end,
        };
        match fam {
            Family::Identity => 0.0,
            Family::Hard { lambda } => lambda * lambda,
            Family::Scad { lambda, alpha } | Family::Mcp { lambda, alpha } => {
                debiased_end(lambda, alpha)
            }
            Family::Quad { a } => a,
            _ => f64::INFINITY,
        }
    }

    pub fn tail_hint(&self) -> Option<TailHint> {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return c.tail_hint,
        };
        match fam {
            Family::Scad { alpha, .. } => Some(TailHint {
                b: 1.0,
                g_star: 1.0 / (2.0 * (alpha - 2.0)),
            }),
            Family::Mcp { alpha, .. } => Some(TailHint {
                b: 1.0,
                g_star: 1.0 / (2.0 * (alpha - 1.0)),
            }),
            Family::Quad { .. } => Some(TailHint { b: 2.0, g_star: 1.0 }),
            _ => None,
        }
    }

    /// Points where `φ` or `φ′` is not smooth (finite, ascending).
    pub fn breakpoints(&self) -> Vec<f64> {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return c.breakpoints.clone(),
        };
        match fam {
            Family::Identity | Family::Js { .. } | Family::Ridge { .. } => vec![],
            Family::JsPlus { p } => vec![f64::from(p) - 2.0],
            Family::Soft { lambda } | Family::Hard { lambda } => vec![lambda * lambda],
            Family::Scad { lambda, alpha } => {
                let l2 = lambda * lambda;
                vec![l2, 4.0 * l2, debiased_end(lambda, alpha)]
            }
            Family::Mcp { lambda, alpha } => {
                let l2 = lambda * lambda;
                vec![l2, debiased_end(lambda, alpha)]
            }
            Family::Quad { a } => vec![quad_switch(a), a],
        }
    }

    /// Discontinuities of `φ` as `(location, φ(c+) − φ(c−))`.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        match self.family() {
            Some(Family::Hard { lambda }) => vec![(lambda * lambda, -lambda * lambda)],
            _ => vec![],
        }
    }

    /// `lim_{w→0} φ(w)/w`; infinite for James–Stein.
    pub fn phi_over_w_at_zero(&self) -> f64 {
        let fam = match &self.kind {
            Kind::Builtin(f) => *f,
            Kind::Custom(c) => return c.phi_over_w_at_zero,
        };
        match fam {
            Family::Identity => 0.0,
            Family::Js { .. } => f64::INFINITY,
            Family::Ridge { lambda } => 1.0 / (lambda + 1.0),
            _ => 1.0,
        }
    }

    /// `φ(w)/w` with the origin limit substituted at `w = 0`.
    pub fn phi_over_w(&self, w: f64) -> f64 {
        if w == 0.0 {
            self.phi_over_w_at_zero()
        } else {
            self.phi(w) / w
        }
    }

    /// Whether the factor satisfies the debiasing conditions: bounded weak
    /// derivative, `0 < φ(w) ≤ w` on `(0, a)` and `φ = 0` on `[a, ∞)`.
    pub fn is_ds_compliant(&self) -> bool {
        match &self.kind {
            Kind::Builtin(f) => matches!(f, Family::Scad { .. } | Family::Mcp { .. } | Family::Quad { .. }),
            Kind::Custom(c) => c.ds_compliant,
        }
    }

    /// Applies `θ̂(x) = (1 − φ(‖x‖²)/‖x‖²)·x`.
    ///
    /// At the origin the weight uses `lim φ(w)/w`; for James–Stein that limit
    /// is infinite, the weight is `−∞` and the estimate is the zero vector.
    pub fn apply(&self, x: &[f64]) -> EstimateResult {
        let w: f64 = x.iter().map(|v| v * v).sum();
        if w >= self.support_end() {
            return EstimateResult {
                estimate: x.to_vec(),
                shrink_weight: 1.0,
                w,
            };
        }
        let shrink_weight = 1.0 - self.phi_over_w(w);
        let estimate = if w == 0.0 {
            vec![0.0; x.len()]
        } else {
            x.iter().map(|v| shrink_weight * v).collect()
        };
        EstimateResult {
            estimate,
            shrink_weight,
            w,
        }
    }
}

/// Output of [`ShrinkageFactor::apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub estimate: Vec<f64>,
    pub shrink_weight: f64,
    pub w: f64,
}

pub fn apply_estimator(factor: &ShrinkageFactor, x: &[f64]) -> EstimateResult {
    factor.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scad(lambda: f64, alpha: f64) -> ShrinkageFactor {
        ShrinkageFactor::from_family(Family::Scad { lambda, alpha })
    }

    fn all_test_factors() -> Vec<ShrinkageFactor> {
        [
            Family::Identity,
            Family::Js { p: 5 },
            Family::JsPlus { p: 5 },
            Family::Ridge { lambda: 0.7 },
            Family::Soft { lambda: 1.3 },
            Family::Hard { lambda: 1.0 },
            Family::Scad { lambda: 1.0, alpha: 3.7 },
            Family::Mcp { lambda: 1.0, alpha: 2.0 },
            Family::Mcp { lambda: 0.6, alpha: 3.5 },
            Family::Quad { a: 2.0 },
        ]
        .into_iter()
        .map(ShrinkageFactor::from_family)
        .collect()
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        let p = |lambda, alpha, a, p| FactorParams { lambda, alpha, a, p };
        assert!(make_factor(FamilyKind::Scad, p(Some(1.0), Some(2.0), None, None)).is_err());
        assert!(make_factor(FamilyKind::Mcp, p(Some(1.0), Some(1.0), None, None)).is_err());
        assert!(make_factor(FamilyKind::Js, p(None, None, None, Some(2))).is_err());
        assert!(make_factor(FamilyKind::JsPlus, p(None, None, None, None)).is_err());
        assert!(make_factor(FamilyKind::Quad, p(None, None, Some(0.0), None)).is_err());
        assert!(make_factor(FamilyKind::Ridge, p(Some(-1.0), None, None, None)).is_err());
        assert!(make_factor(FamilyKind::Hard, p(None, None, None, None)).is_err());
        let err = make_factor(FamilyKind::Scad, p(Some(1.0), Some(1.5), None, None)).unwrap_err();
        assert!(err.to_string().contains("alpha > 2"));
        assert!(make_factor(FamilyKind::Mcp, p(Some(1.0), Some(2.0), None, None)).is_ok());
    }

    #[test]
    fn scad_values_by_substitution() {
        let f = scad(1.0, 3.7);
        assert_eq!(f.phi(0.5), 0.5);
        assert!((f.phi(2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert!((f.phi(9.0) - (-9.0 + 3.7 * 3.0) / 1.7).abs() < 1e-15);
        assert!((f.phi(9.0) - 1.235_294_117_647).abs() < 1e-11);
        assert_eq!(f.phi(14.0), 0.0);
        assert!((f.support_end() - 13.69).abs() < 1e-12);
    }

    #[test]
    fn mcp_vanishes_continuously_at_support_end() {
        let f = ShrinkageFactor::from_family(Family::Mcp { lambda: 1.0, alpha: 2.0 });
        assert_eq!(f.phi(4.0), 0.0);
        assert!(f.phi(4.0 - 1e-12).abs() < 1e-11);
    }

    #[test]
    fn quad_switch_point() {
        let f = ShrinkageFactor::from_family(Family::Quad { a: 2.0 });
        assert_eq!(quad_switch(2.0), 1.0);
        assert_eq!(f.phi(1.0), 1.0);
        assert!((f.phi(1.0 - 1e-13) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn continuity_at_branch_points() {
        for f in all_test_factors() {
            if !f.jumps().is_empty() {
                continue;
            }
            for c in f.breakpoints() {
                let left = f.phi(c * (1.0 - 1e-14));
                let right = f.phi(c);
                assert!((left - right).abs() <= 1e-12, "{} at {c}", f.name());
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for f in all_test_factors() {
            let kinks = f.breakpoints();
            let mut w = 0.013;
            while w < 20.0 {
                if kinks.iter().all(|k| (w - k).abs() > 1e-3) {
                    let fd = (f.phi(w + h) - f.phi(w - h)) / (2.0 * h);
                    assert!((fd - f.dphi(w)).abs() < 1e-4, "{} at {w}", f.name());
                }
                w += 0.0517;
            }
        }
    }

    #[test]
    fn ds_conditions_hold_for_debiased_families() {
        for f in all_test_factors().into_iter().filter(|f| f.is_ds_compliant()) {
            let a = f.support_end();
            let mut sup_dphi: f64 = 0.0;
            for i in 1..4000 {
                let w = a * i as f64 / 4000.0;
                let v = f.phi(w);
                assert!(v > 0.0 && v <= w, "{} at {w}", f.name());
                sup_dphi = sup_dphi.max(f.dphi(w).abs());
            }
            for i in 0..=300 {
                let w = a * (1.0 + 2.0 * i as f64 / 300.0);
                assert_eq!(f.phi(w), 0.0);
                assert_eq!(f.dphi(w), 0.0);
            }
            assert!(sup_dphi.is_finite() && sup_dphi <= 2.0 * a.max(1.0), "{}", f.name());
        }
    }

    #[test]
    fn endpoint_slopes() {
        for alpha in [2.5, 3.7, 6.0] {
            let f = scad(1.3, alpha);
            let a = f.support_end();
            assert!((f.dphi(a * (1.0 - 1e-15)) + 1.0 / (2.0 * (alpha - 2.0))).abs() < 1e-10);
            let m = ShrinkageFactor::from_family(Family::Mcp { lambda: 1.3, alpha });
            let a = m.support_end();
            assert!((m.dphi(a * (1.0 - 1e-15)) + 1.0 / (2.0 * (alpha - 1.0))).abs() < 1e-10);
        }
    }

    #[test]
    fn quad_logarithmic_ratio_tends_to_minus_two() {
        let f = ShrinkageFactor::from_family(Family::Quad { a: 2.0 });
        for k in 4..40 {
            let w = 2.0 * (1.0 - 0.5f64.powi(k));
            let ratio = (2.0 - w) * f.dphi(w) / f.phi(w);
            assert!((ratio + 2.0).abs() < 1e-9, "k={k}");
        }
        assert!(f.dphi(2.0 - 1e-12).abs() < 1e-11);
    }

    #[test]
    fn estimator_examples() {
        let js = ShrinkageFactor::from_family(Family::Js { p: 4 });
        let x = [2f64.sqrt(), 0.0, 0.0, 0.0];
        let r = js.apply(&x);
        assert!(r.estimate.iter().all(|v| v.abs() < 1e-15));

        let hard = ShrinkageFactor::from_family(Family::Hard { lambda: 1.0 });
        let r = hard.apply(&[0.3, 0.4]);
        assert_eq!(r.estimate, vec![0.0, 0.0]);

        for f in all_test_factors() {
            let a = f.support_end();
            if a.is_finite() {
                let x = [a.sqrt() * (1.0 + 1e-12), 0.0, 0.0];
                let r = f.apply(&x);
                assert_eq!(r.estimate, x.to_vec());
                assert_eq!(r.shrink_weight, 1.0);
            }
        }
    }

    #[test]
    fn estimate_is_weight_times_x() {
        for f in all_test_factors() {
            let x = [0.4, -1.1, 0.9];
            let r = f.apply(&x);
            for (e, v) in r.estimate.iter().zip(&x) {
                assert_eq!(*e, r.shrink_weight * v);
            }
            assert!(r.shrink_weight <= 1.0);
        }
    }

    #[test]
    fn origin_uses_limit() {
        let jsp = ShrinkageFactor::from_family(Family::JsPlus { p: 5 });
        let r = jsp.apply(&[0.0; 5]);
        assert_eq!(r.shrink_weight, 0.0);
        assert_eq!(r.estimate, vec![0.0; 5]);
        let js = ShrinkageFactor::from_family(Family::Js { p: 5 });
        assert_eq!(js.apply(&[0.0; 5]).estimate, vec![0.0; 5]);
    }

    #[test]
    fn positive_part_never_flips_signs() {
        let f = ShrinkageFactor::from_family(Family::JsPlus { p: 6 });
        let mut s = 0.17f64;
        for _ in 0..500 {
            s = (s * 9301.0 + 49297.0) % 233280.0;
            let x: Vec<f64> = (0..6).map(|i| ((s + i as f64 * 37.0) % 11.0) - 5.5).collect();
            let r = f.apply(&x);
            for (e, v) in r.estimate.iter().zip(&x) {
                assert!(e * v >= 0.0);
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for k in FamilyKind::ALL {
            assert_eq!(k.as_str().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("lasso".parse::<FamilyKind>().is_err());
    }
}
