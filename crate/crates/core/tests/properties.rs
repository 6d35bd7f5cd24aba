//! Property tests for the structural invariants of factors, laws and risk.

use proptest::prelude::*;
use shrinklab::asymptotics::{c_constant, g_eval, TruncatedFunctional};
use shrinklab::numerics::{dawson, noncentral_chisq_cdf, noncentral_chisq_logcdf, ChiSquareSpec, LogValue};
use shrinklab::risk::{evaluate, sure_integrand, RiskQuery};
use shrinklab::shrinkage::{solve_penalized_ls, Penalty};
use shrinklab::{Family, ShrinkageFactor};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (0.2f64..3.0, 2.1f64..6.0).prop_map(|(lambda, alpha)| Family::Scad { lambda, alpha }),
        (0.2f64..3.0, 1.1f64..6.0).prop_map(|(lambda, alpha)| Family::Mcp { lambda, alpha }),
        (0.5f64..8.0).prop_map(|a| Family::Quad { a }),
        (3u32..10).prop_map(|p| Family::JsPlus { p }),
        (0.2f64..3.0).prop_map(|lambda| Family::Soft { lambda }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_bounded_by_w(fam in family(), w in 0.0f64..200.0) {
        let f = ShrinkageFactor::from_family(fam);
        let phi = f.phi(w);
        prop_assert!(phi >= 0.0 && phi <= w + 1e-12);
    }

    #[test]
    fn debiased_factors_vanish_past_support(fam in family(), extra in 0.0f64..100.0) {
        let f = ShrinkageFactor::from_family(fam);
        let end = f.support_end();
        if end.is_finite() {
            prop_assert_eq!(f.phi(end + extra + 1e-9), 0.0);
            prop_assert_eq!(sure_integrand(&f, 5, end + extra + 1e-9), 0.0);
        }
    }

    #[test]
    fn estimate_is_a_shrunken_copy(fam in family(), x in prop::collection::vec(-5.0f64..5.0, 3..8)) {
        let f = ShrinkageFactor::from_family(fam);
        let est = f.apply(&x);
        prop_assert!(est.shrink_weight >= 0.0 && est.shrink_weight <= 1.0);
        for (e, v) in est.estimate.iter().zip(&x) {
            prop_assert!((e - est.shrink_weight * v).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_is_monotone_in_w_and_decreasing_in_nu(k in 1u32..10, nu in 0.0f64..50.0, w in 0.01f64..40.0, dw in 0.01f64..5.0) {
        let s = ChiSquareSpec::new(k, nu).unwrap();
        let lo = noncentral_chisq_cdf(w, s).unwrap();
        let hi = noncentral_chisq_cdf(w + dw, s).unwrap();
        prop_assert!(lo <= hi + 1e-15);
        let further = noncentral_chisq_cdf(w, ChiSquareSpec::new(k, nu + 1.0).unwrap()).unwrap();
        prop_assert!(further <= lo + 1e-15);
        let l = noncentral_chisq_logcdf(w, s).unwrap();
        prop_assert!((l.to_f64() - lo).abs() <= 1e-10 * lo.max(1e-300));
    }

    #[test]
    fn logvalue_addition_matches_floats(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        let s = LogValue::from_f64(a) + LogValue::from_f64(b);
        prop_assert!((s.to_f64() - (a + b)).abs() <= 1e-12 * (a.abs() + b.abs()).max(1.0));
    }

    #[test]
    fn dawson_is_odd(x in -30.0f64..30.0) {
        prop_assert_eq!(dawson(-x).unwrap(), -dawson(x).unwrap());
    }

    #[test]
    fn solver_is_odd_and_shrinks(x in -10.0f64..10.0, lambda in 0.1f64..3.0) {
        for pen in [Penalty::Lasso { lambda }, Penalty::Scad { lambda, alpha: 3.7 }, Penalty::Mcp { lambda, alpha: 2.0 }, Penalty::Hard { lambda }] {
            let t = solve_penalized_ls(pen, x).unwrap();
            prop_assert_eq!(solve_penalized_ls(pen, -x).unwrap(), -t);
            prop_assert!(t.abs() <= x.abs() && t * x >= 0.0);
        }
    }

    #[test]
    fn c_constant_is_positive(a in 0.1f64..20.0, b in 0.0f64..4.0, p in 2u32..12) {
        let c = c_constant(a, b, p).unwrap();
        prop_assert!(c.is_finite() && c > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn g_of_constant_is_truncated_cdf(a in 0.5f64..6.0, p in 2u32..7, nu in 0.0f64..60.0) {
        let g = TruncatedFunctional::constant(a).unwrap();
        let v = g_eval(&g, p, nu).unwrap().to_f64();
        let cdf = noncentral_chisq_cdf(a, ChiSquareSpec::new(p, nu).unwrap()).unwrap();
        prop_assert!((v / cdf - 1.0).abs() < 1e-7, "{} vs {}", v, cdf);
    }

    #[test]
    fn debiased_risk_returns_to_p(fam in family(), p in 3u32..8) {
        let f = ShrinkageFactor::from_family(fam);
        if f.support_end().is_finite() {
            let nu = f.support_end() + 40.0 * f.support_end().sqrt() + 400.0;
            let r = evaluate(&RiskQuery::quadrature(f, p, nu)).unwrap().risk;
            prop_assert!((r - f64::from(p)).abs() < 1e-9);
        }
    }
}
