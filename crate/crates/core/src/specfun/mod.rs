//! Special functions needed by the kernels: 2F1, J0, I0, Gamma.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_i0, bessel_j0};
pub use gamma::{digamma, gamma_real, ln_gamma_complex, ln_gamma_real, rgamma_complex, rgamma_real};
pub use hypergeometric::{gauss_2f1, gauss_2f1_with, EvalResult, HypergeometricParams, Route};

pub(crate) use hypergeometric::{hyp2f1, hyp2f1_real, reduced_2f1_real};
