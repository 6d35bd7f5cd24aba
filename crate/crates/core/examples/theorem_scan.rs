// `ν^{(p+1)/4+b/2} e^{ν/2} e^{−√(νa)} E[g(‖X‖²)1{‖X‖² ≤ a}]` approaching
// `c(a, b, p)` for `g(w) = (a − w)^b`, computed in log space up to ν = 6400.

use shrinklab::asymptotics::{h_eval, h_limit_at_zero, theorem1_scan, AsymptoticRatioScan, TruncatedFunctional, DEFAULT_NU_GRID};

pub fn run_example() -> Vec<AsymptoticRatioScan> {
    let mut scans = Vec::new();
    for (a, b, p) in [(4.0, 0.0, 3), (4.0, 1.0, 3), (1.0, 0.0, 2), (2.0, 2.0, 5)] {
        let g = TruncatedFunctional::power_tail(a, b).unwrap();
        let scan = theorem1_scan(&g, p, &DEFAULT_NU_GRID).unwrap();
        println!("a={a} b={b} p={p}  c(a,b,p)={:.6}", scan.rows[0].target);
        for r in &scan.rows {
            println!("  nu={:>6}  ln G={:>12.4}  ratio={:.6}  rel_dev={:.4}", r.nu, r.log_g.log_magnitude(), r.ratio, r.rel_dev);
        }
        let h = h_eval(&g, p, 1e-3 * a).unwrap();
        println!("  H(a/1000)={h:.6}  limit {:.6}", h_limit_at_zero(b, p));
        scans.push(scan);
    }
    scans
}

#[allow(dead_code)]
fn main() {
    run_example();
}
