// Exact (quadrature) and simulated risk of several estimators over the
// noncentrality `ν = ‖θ‖²`.

use shrinklab::risk::{risk_profile, McConfig, RiskMethod, RiskProfile};
use shrinklab::{Family, ShrinkageFactor};

pub fn run_example() -> Vec<RiskProfile> {
    let p = 5;
    let grid = [0.0, 1.0, 4.0, 9.0, 16.0, 25.0, 49.0];
    let factors = [
        Family::Js { p },
        Family::JsPlus { p },
        Family::Scad { lambda: 1.0, alpha: 3.7 },
        Family::Mcp { lambda: 1.0, alpha: 2.0 },
        Family::Quad { a: 2.0 },
    ];
    let mut profiles = Vec::new();
    for fam in factors {
        let f = ShrinkageFactor::from_family(fam);
        let exact = risk_profile(&f, p, &grid, RiskMethod::Quadrature, None).unwrap();
        let mc = McConfig { seed: 7, replications: 20_000 };
        let sim = risk_profile(&f, p, &grid, RiskMethod::MonteCarlo, Some(mc)).unwrap();
        println!("{}", exact.factor);
        for (e, s) in exact.rows.iter().zip(&sim.rows) {
            let flag = if e.risk > f64::from(p) { "  > p" } else { "" };
            println!("  nu={:>5}  quadrature {:.6}  monte carlo {:.4} ± {:.4}{flag}", e.nu, e.risk, s.risk, s.error);
        }
        profiles.push(exact);
    }
    profiles
}

#[allow(dead_code)]
fn main() {
    run_example();
}
