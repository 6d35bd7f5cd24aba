//! Scalar penalized least squares `argmin_θ (θ − x)² + P(|θ|)`.
//!
//! Penalties are scaled so the minimizers are exactly the thresholding
//! rules whose shrinkage factors live in the parent module: ridge
//! `θ²/λ`, lasso `2λ|θ|`, hard `λ² − (|θ| − λ)²·1{|θ| ≤ λ}`, SCAD with
//! `P′(t) = 2λ, 2(αλ − t)/(α − 1), 0` and MCP with `P′(t) = 2(λ − t/α)₊`.

use serde::{Deserialize, Serialize};

use super::Family;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "penalty", rename_all = "snake_case")]
pub enum Penalty {
    Ridge { lambda: f64 },
    Lasso { lambda: f64 },
    Hard { lambda: f64 },
    Scad { lambda: f64, alpha: f64 },
    Mcp { lambda: f64, alpha: f64 },
}

impl Penalty {
    fn validate(&self) -> Result<()> {
        let (lambda, alpha_ok) = match *self {
            Penalty::Ridge { lambda } | Penalty::Lasso { lambda } | Penalty::Hard { lambda } => (lambda, true),
            Penalty::Scad { lambda, alpha } => (lambda, alpha > 2.0),
            Penalty::Mcp { lambda, alpha } => (lambda, alpha > 1.0),
        };
        if !(lambda.is_finite() && lambda > 0.0) {
            return domain(format!("penalty requires lambda > 0, got {lambda}"));
        }
        if !alpha_ok {
            return domain(format!("penalty alpha out of range: {self:?}"));
        }
        Ok(())
    }

    /// The shrinkage-factor family whose estimator this penalty produces.
    pub fn family(&self) -> Family {
        match *self {
            Penalty::Ridge { lambda } => Family::Ridge { lambda },
            Penalty::Lasso { lambda } => Family::Soft { lambda },
            Penalty::Hard { lambda } => Family::Hard { lambda },
            Penalty::Scad { lambda, alpha } => Family::Scad { lambda, alpha },
            Penalty::Mcp { lambda, alpha } => Family::Mcp { lambda, alpha },
        }
    }
}

/// `P(t)` for `t = |θ| ≥ 0`.
pub fn penalty_value(penalty: Penalty, t: f64) -> f64 {
    let t = t.abs();
    match penalty {
        Penalty::Ridge { lambda } => t * t / lambda,
        Penalty::Lasso { lambda } => 2.0 * lambda * t,
        Penalty::Hard { lambda } => {
            if t <= lambda {
                lambda * lambda - (t - lambda) * (t - lambda)
            } else {
                lambda * lambda
            }
        }
        Penalty::Scad { lambda, alpha } => {
            if t < lambda {
                2.0 * lambda * t
            } else if t < alpha * lambda {
                2.0 * lambda * lambda
                    + (2.0 * alpha * lambda * (t - lambda) - (t * t - lambda * lambda)) / (alpha - 1.0)
            } else {
                (alpha + 1.0) * lambda * lambda
            }
        }
        Penalty::Mcp { lambda, alpha } => {
            if t < alpha * lambda {
                2.0 * lambda * t - t * t / alpha
            } else {
                alpha * lambda * lambda
            }
        }
    }
}

fn objective(penalty: Penalty, x: f64, theta: f64) -> f64 {
    (theta - x) * (theta - x) + penalty_value(penalty, theta)
}

/// Global minimizer in closed form; a tie at the threshold resolves to 0.
pub fn solve_penalized_ls(penalty: Penalty, x: f64) -> Result<f64> {
    penalty.validate()?;
    if !x.is_finite() {
        return domain(format!("solve_penalized_ls needs finite x, got {x}"));
    }
    let ax = x.abs();
    let sign = x.signum();
    let theta = match penalty {
        Penalty::Ridge { lambda } => lambda * x / (lambda + 1.0),
        Penalty::Lasso { lambda } => {
            if ax <= lambda {
                0.0
            } else {
                sign * (ax - lambda)
            }
        }
        Penalty::Hard { lambda } => {
            if ax <= lambda {
                0.0
            } else {
                x
            }
        }
        Penalty::Scad { lambda, alpha } => {
            if ax <= lambda {
                0.0
            } else if ax <= 2.0 * lambda {
                sign * (ax - lambda)
            } else if ax <= alpha * lambda {
                sign * ((alpha - 1.0) * ax - alpha * lambda) / (alpha - 2.0)
            } else {
                x
            }
        }
        Penalty::Mcp { lambda, alpha } => {
            if ax <= lambda {
                0.0
            } else if ax <= alpha * lambda {
                sign * alpha * (ax - lambda) / (alpha - 1.0)
            } else {
                x
            }
        }
    };
    Ok(theta)
}

/// Grid search over `[x − halfwidth, x + halfwidth] ∪ {0}`; an independent
/// check on [`solve_penalized_ls`].
pub fn brute_force_pls_oracle(penalty: Penalty, x: f64, halfwidth: f64, step: f64) -> Result<f64> {
    penalty.validate()?;
    if !(halfwidth > 0.0 && step > 0.0) {
        return domain("oracle grid needs positive halfwidth and step");
    }
    let mut best = 0.0;
    let mut best_val = objective(penalty, x, 0.0);
    let n = (2.0 * halfwidth / step).ceil() as i64;
    for i in 0..=n {
        let theta = x - halfwidth + i as f64 * step;
        let v = objective(penalty, x, theta);
        if v < best_val || (v == best_val && theta.abs() < best) {
            best = theta;
            best_val = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shrinkage::ShrinkageFactor;

    const PENALTIES: [Penalty; 5] = [
        Penalty::Ridge { lambda: 1.0 },
        Penalty::Lasso { lambda: 1.0 },
        Penalty::Hard { lambda: 1.0 },
        Penalty::Scad { lambda: 1.0, alpha: 3.7 },
        Penalty::Mcp { lambda: 1.0, alpha: 2.0 },
    ];

    #[test]
    fn examples() {
        assert_eq!(solve_penalized_ls(Penalty::Lasso { lambda: 1.0 }, 3.0).unwrap(), 2.0);
        assert_eq!(solve_penalized_ls(Penalty::Scad { lambda: 1.0, alpha: 3.7 }, 5.0).unwrap(), 5.0);
        for p in PENALTIES {
            assert_eq!(solve_penalized_ls(p, 0.0).unwrap(), 0.0);
        }
        let step = 1e-4;
        let mcp = Penalty::Mcp { lambda: 1.0, alpha: 2.0 };
        let exact = solve_penalized_ls(mcp, 1.5).unwrap();
        assert!((brute_force_pls_oracle(mcp, 1.5, 2.0, step).unwrap() - exact).abs() <= 2.0 * step);
        assert_eq!(brute_force_pls_oracle(Penalty::Hard { lambda: 1.0 }, 0.999, 2.0, step).unwrap(), 0.0);
        let ridge = brute_force_pls_oracle(Penalty::Ridge { lambda: 1.0 }, 2.0, 2.0, step).unwrap();
        assert!((ridge - 1.0).abs() <= 2.0 * step);
    }

    #[test]
    fn ties_at_threshold_go_to_zero() {
        assert_eq!(solve_penalized_ls(Penalty::Hard { lambda: 1.0 }, 1.0).unwrap(), 0.0);
        assert_eq!(solve_penalized_ls(Penalty::Hard { lambda: 1.0 }, -1.0).unwrap(), 0.0);
        let v0 = objective(Penalty::Hard { lambda: 1.0 }, 1.0, 0.0);
        let v1 = objective(Penalty::Hard { lambda: 1.0 }, 1.0, 1.0);
        assert_eq!(v0, v1);
    }

    #[test]
    fn penalties_are_continuous() {
        for p in PENALTIES {
            for t in [1.0, 2.0, 3.7] {
                let l = penalty_value(p, t * (1.0 - 1e-13));
                let r = penalty_value(p, t);
                assert!((l - r).abs() < 1e-11, "{p:?} at {t}");
            }
        }
    }

    #[test]
    fn agrees_with_shrinkage_factor() {
        let params = [(0.5, 2.5), (1.0, 3.7), (2.0, 6.0)];
        for (lambda, alpha) in params {
            let penalties = [
                Penalty::Ridge { lambda },
                Penalty::Lasso { lambda },
                Penalty::Hard { lambda },
                Penalty::Scad { lambda, alpha },
                Penalty::Mcp { lambda, alpha },
            ];
            for p in penalties {
                let f = ShrinkageFactor::from_family(p.family());
                let mut x = -15.0;
                while x < 15.0 {
                    let direct = solve_penalized_ls(p, x).unwrap();
                    let via_phi = f.apply(&[x]).estimate[0];
                    assert!((direct - via_phi).abs() <= 1e-10 * x.abs().max(1.0), "{p:?} x={x}");
                    x += 0.0371;
                }
            }
        }
    }
}
