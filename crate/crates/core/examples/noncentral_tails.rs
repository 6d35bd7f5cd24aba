// Noncentral chi-square laws far in the lower tail, where native floats
// underflow and the log-space series keeps full relative precision.

use shrinklab::numerics::{noncentral_chisq_cdf, noncentral_chisq_logcdf, noncentral_chisq_logpdf, ChiSquareSpec};

pub fn run_example() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for nu in [4.0, 100.0, 1600.0, 6400.0] {
        let spec = ChiSquareSpec::new(3, nu).unwrap();
        let lc = noncentral_chisq_logcdf(1.0, spec).unwrap();
        let lp = noncentral_chisq_logpdf(1.0, spec).unwrap();
        println!(
            "k=3 nu={nu:>6}: ln F(1) = {:>12.6}  ln f(1) = {:>12.6}  native F(1) = {:e}",
            lc.log_magnitude(),
            lp.log_magnitude(),
            noncentral_chisq_cdf(1.0, spec).unwrap()
        );
        out.push((nu, lc.log_magnitude()));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
