// Risk gained by the positive-part James–Stein estimator: direct
// quadrature, the Poisson-mixture series, and the large-ν rate.

use shrinklab::asymptotics::{js_gap_asymptote, DEFAULT_NU_GRID};
use shrinklab::numerics::dawson;
use shrinklab::risk::{js_gap_direct, js_gap_hansen};

pub fn run_example() -> Vec<(u32, f64, f64, f64)> {
    let mut rows = Vec::new();
    for p in [3, 4, 6] {
        for nu in [0.0, 1.0, 10.0, 50.0] {
            let d = js_gap_direct(p, nu).unwrap().to_f64();
            let h = js_gap_hansen(p, nu, 1e-12).unwrap();
            println!("p={p} nu={nu:>4}  direct {d:.12e}  series {h:.12e}");
            rows.push((p, nu, d, h));
        }
        let scan = js_gap_asymptote(p, &DEFAULT_NU_GRID).unwrap();
        for r in &scan.rows {
            println!("  nu={:>6}  ln gap={:>11.3}  normalized {:.6} (limit {:.6})", r.nu, r.log_g.log_magnitude(), r.ratio, r.target);
        }
    }
    println!("Dawson D(1) = {:.15}", dawson(1.0).unwrap());
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
