//! Weight distributions, the MacWilliams transform, and minimum distance
//! (exact enumeration and information-set search).

mod census;
mod distance;
mod weights;

pub use census::{census_all, generator_weight_census};
pub use distance::{
    dc_weight_distribution, low_weight_search, low_weight_search_best, min_distance_bruteforce,
    min_distance_capped, min_distance_exact, min_distance_exact_with_limit, DistanceResult, DEFAULT_EXHAUSTIVE_LIMIT,
};
pub use weights::{
    macwilliams_transform, weight_distribution, weight_distribution_direct, WeightDistribution,
    DEFAULT_DIM_LIMIT,
};

#[cfg(test)]
mod tests;
