//! Special functions and fractional-calculus primitives.

pub mod fracdiff;
pub mod gamma;
pub mod mittag_leffler;
pub mod mwright;
pub mod quad;
pub mod selftest;
pub mod series;
pub mod wright;

pub use fracdiff::{caputo_l1, frac_binom_coeffs};
pub use gamma::{gamma, ln_gamma, ln_gamma_signed, rgamma};
pub use mittag_leffler::{ml1, ml2, ml3};
pub use mwright::{mwright, InverseStableLaw};
pub use selftest::{ml_laplace_selftest, ml_laplace_sweep};
pub use series::{Accumulator, SeriesControl};
pub use wright::{wright, Convergence, WrightSpec};
