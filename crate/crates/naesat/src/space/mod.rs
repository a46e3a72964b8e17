//! Desk-scale solution-space analysis: clusters, rigidity, pair-overlap
//! statistics, and conditioned support-skew experiments.

pub mod clusters;
pub mod pairs;
pub mod skew;
pub mod structures;

pub use clusters::{cluster_decomposition, sp_sample, ClusterDecomposition};
pub use pairs::{
    pair_distance_histogram, pair_profile_stats, positional_free_count,
    positional_support_counts, DistanceHistogram, OverlapVector, PairProfileStats,
};
pub use skew::{conditioned_support_skew, SkewReport};
pub use structures::{
    dense_check, is_beta_good, rigid_variables, self_contained_core, BetaGoodBreakdown,
    CoreResult, RigidSets,
};
