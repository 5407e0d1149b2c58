//! Poisson random fields on the plane and their fractional, compound and
//! time-changed variants.
//!
//! The crate is split into five layers:
//!
//! * [`specfun`]: gamma functions, Mittag-Leffler and Fox-Wright series,
//!   fractional difference operators, quadrature and the inverse stable law.
//! * [`dists`]: closed-form pmfs, densities and transforms of the count and
//!   compound fields.
//! * [`fields`]: seeded samplers for point patterns, sheets and time-changed
//!   fields.
//! * [`verify`]: statistical comparisons of sampled output with exact laws.
//! * [`pdecheck`]: finite-difference residuals of the governing equations.

pub mod dists;
pub mod error;
pub mod fields;
pub mod io;
pub mod pdecheck;
pub mod report;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Library version, echoed into output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use report::ComparisonReport;
