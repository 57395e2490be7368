//! Coreset-based k-center clustering, with and without outliers.
//!
//! Everything is generic over the coordinate type through [`Scalar`]
//! (`f32` or `f64`); the aliases below fix the common choices.
//!
//! ```
//! use kcoreset::{Dataset64, MrConfig, kcenter_outliers_mr_det};
//!
//! let s = Dataset64::from_scalars(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0, 500.0]).unwrap();
//! let report = kcenter_outliers_mr_det(&s, &MrConfig::new(2, 1, 2, 0.5)).unwrap();
//! assert!(report.solution.radius <= 1.0 * 3.5);
//! ```

pub mod bench;
pub mod data;
pub mod error;
pub mod gmm;
pub mod mapreduce;
pub mod metric;
pub mod oracle;
pub mod outliers;
pub mod rng;
pub mod scalar;
pub mod solution;
pub mod streaming;

pub use bench::{bench, run, BenchOutput, BenchRecord, BenchSummary, MeanCi, Outcome, RunSpec};
pub use error::{Error, Result};
pub use gmm::{build_weighted_coreset, gmm, gmm_adaptive, Coreset, GmmTrace, WeightedPoint};
pub use mapreduce::{
    kcenter_mr, kcenter_outliers_mr_det, kcenter_outliers_mr_rand, partition, round_one_coresets,
    CoresetRule,
    FirstCenter, MrConfig, PartitionMode, PartitionPlan, RunReport,
};
pub use metric::{dist, distance, radius, radius_with_outliers, Dataset, Point, RadiusReport};
pub use oracle::{
    brute_force_by_coverage, brute_force_kcenter, brute_force_kcenter_outliers,
    charikar_baseline, sequential_coreset, OracleResult, SequentialSize,
};
pub use outliers::{find_min_radius, outliers_cluster, solve_weighted, OutliersClusterResult};
pub use scalar::Scalar;
pub use solution::{Algorithm, ClusteringSolution, Params};
pub use streaming::{
    stream_kcenter_no_outliers, stream_solve_outliers, two_pass_oblivious, DoublingCoreset,
    StreamConfig, StreamReport,
};

pub type Point64 = Point<f64>;
pub type Dataset64 = Dataset<f64>;
pub type Solution64 = ClusteringSolution<f64>;
pub type Point32 = Point<f32>;
pub type Dataset32 = Dataset<f32>;
pub type Solution32 = ClusteringSolution<f32>;
