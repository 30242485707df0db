//! Series over holes and words, and the exponents read from them.

mod bounds;
mod exponent;
mod laplace;
mod logsum;
mod series;

pub use bounds::{
    comparability_constant, de_leo_lower_bound, de_leo_value, norm_volume_comparison, Bracketed, DimensionEstimate,
    NormVolumeReport,
};
pub use exponent::{
    counting_exponent, counting_exponent_from, estimate_hausdorff, estimate_sigma, half_decade_schedule, hole_terms,
    singular_terms, EstimateMethod, ExponentEstimate, GrowthOptions, LevelTerms, MIN_GROWTH_DEPTH, MIN_SCHEDULE,
};
pub use laplace::{
    bernoulli_coefficient, laplace_transform_closed, neighborhood_volume, HoleTable, LaplaceReport,
};
pub use logsum::LogSum;
pub use series::{
    counting_function, hole_series, norm_series, singular_series, SeriesKind, SeriesReport, SingularVariant,
    Truncation,
};
pub(crate) use exponent::least_squares;
