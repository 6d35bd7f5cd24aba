use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::logvalue::{LogSum, LogValue};
use crate::error::{domain, Result};

/// A Gauss–Legendre rule mapped onto `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `n`-point Gauss–Legendre rule on `[lo, hi]`, exact for polynomials of
/// degree `2n − 1`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<QuadratureRule> {
    if n < 2 {
        return domain(format!("gauss_legendre needs n >= 2, got {n}"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return domain(format!("gauss_legendre needs finite lo < hi, got [{lo}, {hi}]"));
    }
    let base = reference_rule(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(QuadratureRule {
        nodes: base.nodes.iter().map(|t| mid + half * t).collect(),
        weights: base.weights.iter().map(|w| half * w).collect(),
        lo,
        hi,
    })
}

/// Nodes (ascending) and weights on `[−1, 1]`.
#[derive(Debug)]
pub(crate) struct ReferenceRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub(crate) fn reference_rule(n: usize) -> Arc<ReferenceRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ReferenceRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_reference(n));
    cache.lock().unwrap().insert(n, Arc::clone(&rule));
    rule
}

// Newton iteration on P_n from the Tricomi initial guesses.
fn compute_reference(n: usize) -> ReferenceRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    ReferenceRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `n` points on every panel between consecutive breakpoints.
/// Breakpoints need not be sorted or distinct; zero-width panels are skipped.
pub(crate) fn integrate_panels<F: FnMut(f64) -> f64>(breaks: &[f64], n: usize, mut f: F) -> f64 {
    let rule = reference_rule(n);
    let breaks = sorted_breaks(breaks);
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut panel = 0.0;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            panel += w * f(mid + half * t);
        }
        total += half * panel;
    }
    total
}

/// Composite rule for integrands returned in log space.
pub(crate) fn integrate_panels_log<F: FnMut(f64) -> LogValue>(
    breaks: &[f64],
    n: usize,
    mut f: F,
) -> LogValue {
    let rule = reference_rule(n);
    let breaks = sorted_breaks(breaks);
    let mut acc = LogSum::new();
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            acc.push(f(mid + half * t) * (half * w));
        }
    }
    acc.value()
}

pub(crate) fn sorted_breaks(breaks: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
    b
}

/// Breakpoints `lo + (hi−lo)·2^{−k}`, `k = 0..=levels`, refining toward `lo`.
pub(crate) fn geometric_toward(lo: f64, hi: f64, levels: u32) -> Vec<f64> {
    (0..=levels)
        .map(|k| lo + (hi - lo) * 0.5f64.powi(k as i32))
        .collect()
}

/// Splits `[lo, hi]` into pieces no wider than `max_width`.
pub(crate) fn uniform_breaks(lo: f64, hi: f64, max_width: f64) -> Vec<f64> {
    let pieces = (((hi - lo) / max_width).ceil() as usize).max(1);
    (0..=pieces)
        .map(|i| lo + (hi - lo) * i as f64 / pieces as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_requests() {
        assert!(gauss_legendre(1, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(gauss_legendre(4, 2.0, 1.0).is_err());
    }

    #[test]
    fn two_point_rule_integrates_cubic() {
        let r = gauss_legendre(2, -1.0, 1.0).unwrap();
        assert!((r.integrate(|w| w * w) - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.integrate(|w| w * w * w).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_length_and_nodes_are_interior() {
        for n in [2, 3, 7, 16, 33, 64, 128] {
            let r = gauss_legendre(n, -0.5, 2.5).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 3.0).abs() < 1e-12 * 3.0, "n={n}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(r.nodes[0] > -0.5 && r.nodes[n - 1] < 2.5);
        }
    }

    #[test]
    fn exact_at_maximal_degree() {
        for n in [2usize, 5, 10, 20] {
            let deg = 2 * n as i32 - 1;
            let r = gauss_legendre(n, 0.0, 1.0).unwrap();
            let got = r.integrate(|w| (deg as f64 + 1.0) * w.powi(deg));
            assert!((got - 1.0).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn exponential_on_unit_interval() {
        let r = gauss_legendre(16, 0.0, 1.0).unwrap();
        assert!((r.integrate(f64::exp) - (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn composite_log_matches_native() {
        let breaks = uniform_breaks(0.0, 3.0, 0.5);
        let a = integrate_panels(&breaks, 12, |x| x.sin() - 0.3);
        let b = integrate_panels_log(&breaks, 12, |x| LogValue::from_f64(x.sin() - 0.3));
        assert!((a - b.to_f64()).abs() < 1e-13);
    }
}
