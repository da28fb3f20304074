//! The partition-enumeration approximation scheme.
//!
//! On a bounded-ratio instance, products are grouped into geometric weight
//! classes, and a reference assignment is cut into blocks by geometric
//! prefix-weight thresholds. A statistics guess (per-block class counts, or
//! light-class weight estimates) determines a partition of the products
//! into block subsets; laying the subsets out in order gives a ranking. The
//! solver evaluates every ranking of the enumerated family and keeps the
//! best.

pub mod blocks;
pub mod classes;
pub mod guesses;
pub mod partition;
pub mod solve;

pub use blocks::{
    block_count, block_decompose, block_layout, classify_stoppers, Block, BlockLayout, BlockStats,
    StopperClass,
};
pub use classes::{build_classes, sorted_within_class, ClassStructure};
pub use guesses::{
    count_family_size, enumerate_guesses, oracle_guess, GuessMode, GuessStream, LightGuess,
    StatGuess,
};
pub use partition::{
    assign_heavy, assign_light, build_partition, is_good_partition, partition_to_assignment,
    CandidatePartition, GoodnessReport,
};
pub use solve::{ptas_solve, OracleArtifacts, PtasOptions, PtasOutcome, DEFAULT_GUESS_BUDGET};
