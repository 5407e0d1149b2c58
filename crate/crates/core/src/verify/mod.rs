//! Quantitative pass/fail comparisons between sampled fields and exact laws.

pub mod checks;
pub mod stats;

pub use checks::{
    check_covariance, check_increment_properties, check_limit, check_timechange, limit_cf,
    scaled_cf, PointPair, TimeChangeVariant,
};
pub use stats::{
    empirical_cf, empirical_pmf, empirical_pmf_counts, ks_batch, ks_critical,
    ks_critical_two_sample, ks_statistic, ks_two_sample, tv_distance, tv_distance_maps,
    tv_null_distribution, upper_quantile, EmpiricalPmf, DEFAULT_U_GRID,
};
