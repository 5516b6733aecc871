//! The N-term scheme: rearrangement, budgeted assembly, errors and rates.

mod approx;
pub mod engine;
mod rate;
mod seq;

pub use approx::{
    approximate, approximate_with, assemble, error_split, tail_norm, ApproxConfig, ApproxReport, Assembly,
    GeneratorCache, Target,
};
pub use engine::{EnvelopeConfig, PairEngine};
pub use rate::{
    draw_indices, fit_slope, idealized_error, rate_study, rate_study_on, synthetic_seq, Profile, RateConfig, RateRow,
    RateTable,
};
pub use seq::{class_norm, rearrange, CoefficientSeq};
