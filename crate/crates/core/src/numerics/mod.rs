//! Numerical building blocks: log-space arithmetic, special functions,
//! chi-square laws, quadrature and random normals.

pub mod chisq;
pub mod logvalue;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use chisq::{
    central_chisq_cdf, central_chisq_logcdf, central_chisq_pdf, noncentral_chisq_cdf,
    noncentral_chisq_logcdf, noncentral_chisq_logpdf, noncentral_chisq_pdf, ChiSquareSpec,
};
pub use logvalue::{log_sum_exp, LogSum, LogValue};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use rng::{rng_normal_vector, NormalStream};
pub use special::{dawson, gamma_p, log_gamma};

/// Pairwise (cascade) summation; the result depends only on the slice order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
