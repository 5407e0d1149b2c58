//! Finite-difference residuals of the governing equations evaluated on the
//! closed-form distributions.

pub mod counts;
pub mod density;
pub mod grid;
pub mod run;

pub use counts::{
    residual_fprf_system, residual_prf_analytic, residual_prf_system, residual_sfprf_system,
    residual_stfprf_system, sfprf_lambda_derivative_gap, LambdaDerivative,
};
pub use density::{
    levy_half_density, residual_exp_compound, residual_subordinator_density,
    subordinator_laplace_gap, subordinator_mass, TimeAxis, Window,
};
pub use grid::{refinement_study, Refinement, ResidualGrid};
pub use run::{run_pde_check, PdeCheck, PdeOptions, AXIS_MARGIN, MIN_REFINEMENT_RATIO};
