//! Seeded samplers for planar Poisson points, compound fields, subordinators,
//! sheets and the time-changed count fields.

pub mod compound;
pub mod geometry;
pub mod limits;
pub mod points;
pub mod rng;
pub mod sheets;
pub mod stable;
pub mod timechange;

pub use compound::{cprf, mark_draw, sample_cprf, CompoundField};
pub use geometry::{GridSpec, Rect};
pub use points::{count_in, prf_points, sample_prf_points, CountIndex, PointSet};
pub use rng::{poisson_draw, replicate, sample_batch, stream_rng, FieldRng, SampleBatch};
pub use sheets::{
    brownian_sheet, sample_brownian_sheet, sample_stable_sheet, stable_sheet, NodeArray,
};
pub use stable::{
    inverse_stable_draw, ln_stable_draw, sample_inverse_stable, sample_stable, stable_draw,
};
pub use timechange::{
    count_draw, ml_compound_direct, ml_compound_subordinated, sample_ml_compound_field,
    sample_ml_compound_subordinated, sample_sfprf, sample_stfprf, sample_tfprf, sfprf_draw,
    stfprf_draw, tfprf_draw,
};
