//! Special-function kernels behind the closed-form MGFs and fading densities.

mod bessel;
mod gamma;
mod hyper;
mod meijer;

pub use bessel::bessel_k0;
pub use gamma::{digamma, gamma, ln_gamma, EULER_GAMMA};
pub use hyper::{gauss_2f1, gauss_2f1_one_minus};
pub use meijer::{
    meijer_g_0220, meijer_g_0330, meijer_g_2332, meijer_g_2332_reduced, MellinBarnesConfig,
};
pub(crate) use meijer::{g2332_reduced_tabulated, g2332_tabulated};
