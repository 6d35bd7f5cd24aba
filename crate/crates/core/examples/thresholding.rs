// Scalar thresholding rules as penalized least squares, and the same rules
// written as shrinkage factors applied to a vector.

use shrinklab::shrinkage::{penalty_value, solve_penalized_ls, Penalty};
use shrinklab::{Family, ShrinkageFactor};

pub fn run_example() -> Vec<(String, Vec<f64>)> {
    let penalties = [
        Penalty::Ridge { lambda: 1.0 },
        Penalty::Lasso { lambda: 1.0 },
        Penalty::Hard { lambda: 1.0 },
        Penalty::Scad { lambda: 1.0, alpha: 3.7 },
        Penalty::Mcp { lambda: 1.0, alpha: 2.0 },
    ];
    let xs = [0.5, 1.5, 2.5, 3.5, 5.0];
    let mut out = Vec::new();
    for pen in penalties {
        let thetas: Vec<f64> = xs.iter().map(|&x| solve_penalized_ls(pen, x).unwrap()).collect();
        println!("{:<28} P(1)={:<6.3} argmin at x={xs:?}: {thetas:.4?}", pen.family().to_string(), penalty_value(pen, 1.0));
        out.push((pen.family().to_string(), thetas));
    }

    let x = [1.2, -0.4, 2.0];
    for fam in [Family::Js { p: 3 }, Family::JsPlus { p: 3 }, Family::Scad { lambda: 1.0, alpha: 3.7 }] {
        let est = ShrinkageFactor::from_family(fam).apply(&x);
        println!("{fam:<28} w={:.3} weight={:.4} estimate={:.4?}", est.w, est.shrink_weight, est.estimate);
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
