//! Closed-form laws of the count and compound fields.

pub mod compound;
pub mod counts;
pub mod law;
pub mod mixture;
pub mod normal;
pub mod params;

pub use compound::{
    cprf_exp_cdf, cprf_exp_density, cprf_ml_density, ml_nfold_density, CdfParts, ExpCompound,
    MlCompound,
};
pub use counts::{
    fprf_laplace, fprf_pmf, prf_pmf, psi22, sfprf_pgf, sfprf_pmf, sfprf_pmf_dlambda,
    sfprf_pmf_table, stfprf_pmf, tfprf_laplace,
};
pub use law::{ml1_neg, psi22_neg, support_cutoff, CountFamily, CountLaw, Route};
pub use normal::{normal_cprf_cf, normal_cprf_joint_cf};
pub use params::{CompoundKind, CompoundParams, FieldParams};
