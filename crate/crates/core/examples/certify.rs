// Non-minimaxity certificates for debiased factors, and the failure that
// a minimax factor (positive-part James–Stein) produces.

use shrinklab::asymptotics::{certify_nonminimax, NonMinimaxCertificate, DEFAULT_CERTIFY_GRID};
use shrinklab::risk::baranchik_check;
use shrinklab::{Error, Family, ShrinkageFactor};

pub fn run_example() -> Vec<Result<NonMinimaxCertificate, Error>> {
    let cases = [
        (Family::Scad { lambda: 1.0, alpha: 3.7 }, 5),
        (Family::Mcp { lambda: 1.0, alpha: 2.0 }, 5),
        (Family::Quad { a: 2.0 }, 4),
        (Family::JsPlus { p: 5 }, 5),
    ];
    let grid: Vec<f64> = (1..=300).map(|i| 0.05 * f64::from(i)).collect();
    let mut out = Vec::new();
    for (fam, p) in cases {
        let f = ShrinkageFactor::from_family(fam);
        let b = baranchik_check(&f, p, &grid).unwrap();
        println!("{} (p={p}): B.1 {} B.2 {}", f.name(), b.b1_ok, b.b2_ok);
        let cert = certify_nonminimax(&f, p, &DEFAULT_CERTIFY_GRID);
        match &cert {
            Ok(c) => println!(
                "  {}: {:?}, risk - p = {:.4e} at nu = {}, bound constant {:.4e}",
                c.case,
                c.case_params,
                c.excess.to_f64(),
                c.nu_star,
                c.bound_constant
            ),
            Err(e) => println!("  {e}"),
        }
        out.push(cert);
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
