//! Two-round partition-parallel pipelines: per-partition coresets in round
//! one, a single sequential solve on their union in round two.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmm::{build_weighted_coreset, gmm, gmm_adaptive, Coreset};
use crate::metric::Dataset;
use crate::outliers::solve_weighted;
use crate::rng::{rng_for, Substream};
use crate::scalar::Scalar;
use crate::solution::{Algorithm, ClusteringSolution, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    /// Contiguous blocks whose sizes differ by at most one.
    Chunked,
    /// Independent uniform partition id per point.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    /// Partition id of every input index.
    pub assignments: Vec<usize>,
    pub ell: usize,
    pub mode: PartitionMode,
    pub seed: u64,
}

impl PartitionPlan {
    /// Input indices of each partition, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.ell];
        for (i, &p) in self.assignments.iter().enumerate() {
            out[p].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.ell];
        for &p in &self.assignments {
            out[p] += 1;
        }
        out
    }
}

/// Splits `n` input indices into `ell` partitions.
pub fn partition(n: usize, ell: usize, mode: PartitionMode, seed: u64) -> Result<PartitionPlan> {
    if ell == 0 || ell > n {
        return Err(Error::input(format!("ell = {ell} must lie in [1, {n}]")));
    }
    let assignments = match mode {
        PartitionMode::Chunked => {
            let (q, r) = (n / ell, n % ell);
            (0..ell)
                .flat_map(|p| std::iter::repeat_n(p, q + usize::from(p < r)))
                .collect()
        }
        PartitionMode::Random => {
            let mut rng = rng_for(seed, Substream::Partition);
            (0..n).map(|_| rng.random_range(0..ell)).collect()
        }
    };
    Ok(PartitionPlan {
        assignments,
        ell,
        mode,
        seed,
    })
}

/// How many centers round one extracts from each partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum CoresetRule {
    /// Farthest-first until the radius drops to `eps / 2` of the radius at
    /// the variant's base size.
    Adaptive,
    /// Exactly this many centers per partition (fewer if a partition is smaller).
    Fixed(usize),
}

/// Where each partition's traversal starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstCenter {
    #[default]
    FirstElement,
    /// Drawn uniformly per partition from the seed.
    Seeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MrConfig<F> {
    pub k: usize,
    pub z: usize,
    pub ell: usize,
    /// `eps` for plain k-center, `eps_hat` for the outlier variants.
    pub eps: F,
    pub coreset: CoresetRule,
    pub seed: u64,
    pub first_center: FirstCenter,
}

impl<F: Scalar> MrConfig<F> {
    pub fn new(k: usize, z: usize, ell: usize, eps: F) -> Self {
        MrConfig {
            k,
            z,
            ell,
            eps,
            coreset: CoresetRule::Adaptive,
            seed: 0,
            first_center: FirstCenter::FirstElement,
        }
    }

    pub fn with_tau(mut self, tau: usize) -> Self {
        self.coreset = CoresetRule::Fixed(tau);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_first_center(mut self, first: FirstCenter) -> Self {
        self.first_center = first;
        self
    }

    fn params(&self) -> Params {
        Params {
            k: self.k,
            z: self.z,
            ell: Some(self.ell),
            eps: Some(self.eps.as_f64()),
            tau: match self.coreset {
                CoresetRule::Fixed(t) => Some(t),
                CoresetRule::Adaptive => None,
            },
            mu: None,
        }
    }
}

/// Coreset size `ceil(mu * k)` for plain k-center.
pub fn mu_tau_kcenter(mu: f64, k: usize) -> usize {
    (mu * k as f64).ceil() as usize
}

/// Coreset size `ceil(mu * (k + z))` for the deterministic outlier variant.
pub fn mu_tau_outliers(mu: f64, k: usize, z: usize) -> usize {
    (mu * (k + z) as f64).ceil() as usize
}

/// Coreset size `ceil(mu * (k + 6 z / ell))` for the randomized variant
/// (per-partition outlier bound without the logarithmic term).
pub fn mu_tau_randomized(mu: f64, k: usize, z: usize, ell: usize) -> usize {
    (mu * (k as f64 + 6.0 * z as f64 / ell as f64)).ceil() as usize
}

/// High-probability bound `ceil(6 (z / ell + log2 n))` on the outliers any
/// random partition receives.
pub fn z_prime(z: usize, ell: usize, n: usize) -> usize {
    (6.0 * (z as f64 / ell as f64 + (n as f64).log2())).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport<F> {
    pub solution: ClusteringSolution<F>,
    pub partition_mode: PartitionMode,
    pub coreset_rule: CoresetRule,
    /// Minimum per-partition coreset size demanded by the variant.
    pub base: usize,
    /// tau_i for every partition, in partition order.
    pub coreset_sizes: Vec<usize>,
    pub union_size: usize,
    /// max(ceil(n / ell), union_size): the largest set a single task holds.
    pub peak_local_memory_points: usize,
    /// Wall-clock seconds of round one and round two.
    pub round_times: [f64; 2],
}

/// Round one for every partition; coresets come back in partition order with
/// global origin indices.
fn round_one<F: Scalar>(
    s: &Dataset<F>,
    plan: &PartitionPlan,
    base: usize,
    cfg: &MrConfig<F>,
) -> Result<Vec<Coreset<F>>> {
    let members = plan.members();
    let mut rng = rng_for(cfg.seed, Substream::FirstCenter);
    let draws: Vec<u64> = (0..members.len()).map(|_| rng.random()).collect();

    members
        .par_iter()
        .zip(draws.par_iter())
        .map(|(idx, &draw)| {
            if idx.is_empty() {
                return Ok(Coreset {
                    items: Vec::new(),
                    source_size: 0,
                });
            }
            let local = s.select(idx)?;
            let first = match cfg.first_center {
                FirstCenter::FirstElement => 0,
                FirstCenter::Seeded => (draw % idx.len() as u64) as usize,
            };
            let trace = match cfg.coreset {
                CoresetRule::Fixed(tau) => gmm(&local, tau.clamp(1, idx.len()), first)?,
                CoresetRule::Adaptive => {
                    gmm_adaptive(&local, base.clamp(1, idx.len()), cfg.eps, first)?
                }
            };
            Ok(build_weighted_coreset(&local, &trace).map_origins(|i| idx[i]))
        })
        .collect()
}

fn check_common<F: Scalar>(s: &Dataset<F>, cfg: &MrConfig<F>) -> Result<()> {
    if cfg.k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    if cfg.k + cfg.z >= s.len() {
        return Err(Error::input(format!(
            "k + z = {} must be smaller than n = {}",
            cfg.k + cfg.z,
            s.len()
        )));
    }
    if let CoresetRule::Fixed(0) = cfg.coreset {
        return Err(Error::input("coreset size must be positive"));
    }
    Ok(())
}

/// Round one alone: the per-partition coresets, in partition order, with
/// origins indexing `s`.
pub fn round_one_coresets<F: Scalar>(
    s: &Dataset<F>,
    cfg: &MrConfig<F>,
    mode: PartitionMode,
    base: usize,
) -> Result<Vec<Coreset<F>>> {
    let plan = partition(s.len(), cfg.ell, mode, cfg.seed)?;
    round_one(s, &plan, base, cfg)
}

struct Pipeline<F> {
    coresets: Vec<Coreset<F>>,
    plan_mode: PartitionMode,
    round_one_secs: f64,
}

fn run_round_one<F: Scalar>(
    s: &Dataset<F>,
    cfg: &MrConfig<F>,
    mode: PartitionMode,
    base: usize,
) -> Result<Pipeline<F>> {
    let plan = partition(s.len(), cfg.ell, mode, cfg.seed)?;
    let start = Instant::now();
    let coresets = round_one(s, &plan, base, cfg)?;
    Ok(Pipeline {
        coresets,
        plan_mode: mode,
        round_one_secs: start.elapsed().as_secs_f64(),
    })
}

fn report<F: Scalar>(
    s: &Dataset<F>,
    cfg: &MrConfig<F>,
    base: usize,
    pipe: &Pipeline<F>,
    solution: ClusteringSolution<F>,
    round_two_secs: f64,
) -> RunReport<F> {
    let coreset_sizes: Vec<usize> = pipe.coresets.iter().map(Coreset::len).collect();
    let union_size = coreset_sizes.iter().sum();
    RunReport {
        solution,
        partition_mode: pipe.plan_mode,
        coreset_rule: cfg.coreset,
        base,
        coreset_sizes,
        union_size,
        peak_local_memory_points: s.len().div_ceil(cfg.ell).max(union_size),
        round_times: [pipe.round_one_secs, round_two_secs],
    }
}

/// Two-round k-center without outliers: per-partition coresets, then
/// farthest-first traversal for `k` centers on their union.
pub fn kcenter_mr<F: Scalar>(s: &Dataset<F>, cfg: &MrConfig<F>) -> Result<RunReport<F>> {
    if cfg.z != 0 {
        return Err(Error::input("kcenter-mr does not discard outliers; use z = 0"));
    }
    check_common(s, cfg)?;
    let pipe = run_round_one(s, cfg, PartitionMode::Chunked, cfg.k)?;

    let start = Instant::now();
    let union = Coreset::union(pipe.coresets.iter().cloned());
    let points = union.to_dataset()?;
    let trace = gmm(&points, cfg.k.min(points.len()), 0)?;
    let centers: Vec<usize> = trace
        .center_indices
        .iter()
        .map(|&c| union.items[c].origin_index)
        .collect();
    let round_two = start.elapsed().as_secs_f64();

    let solution = ClusteringSolution::score(s, Algorithm::KcenterMr, cfg.params(), cfg.seed, centers)?;
    Ok(report(s, cfg, cfg.k, &pipe, solution, round_two))
}

fn outliers_round_two<F: Scalar>(
    s: &Dataset<F>,
    cfg: &MrConfig<F>,
    algorithm: Algorithm,
    base: usize,
    pipe: Pipeline<F>,
) -> Result<RunReport<F>> {
    let start = Instant::now();
    let union = Coreset::union(pipe.coresets.iter().cloned());
    let sol = solve_weighted(&union, cfg.k, cfg.z as u64, cfg.eps)?;
    let round_two = start.elapsed().as_secs_f64();

    let solution = ClusteringSolution::score(s, algorithm, cfg.params(), cfg.seed, sol.center_origins)?
        .with_r_tilde(sol.r_tilde);
    Ok(report(s, cfg, base, &pipe, solution, round_two))
}

/// Two-round k-center with `z` outliers on contiguous partitions. Each
/// partition contributes a weighted coreset of at least `k + z` points.
pub fn kcenter_outliers_mr_det<F: Scalar>(s: &Dataset<F>, cfg: &MrConfig<F>) -> Result<RunReport<F>> {
    check_common(s, cfg)?;
    let base = cfg.k + cfg.z;
    let pipe = run_round_one(s, cfg, PartitionMode::Chunked, base)?;
    outliers_round_two(s, cfg, Algorithm::OutliersMrDet, base, pipe)
}

/// Randomized variant: points are scattered uniformly over partitions, so
/// each coreset only needs room for `k + z'` points, `z'` from [`z_prime`].
pub fn kcenter_outliers_mr_rand<F: Scalar>(s: &Dataset<F>, cfg: &MrConfig<F>) -> Result<RunReport<F>> {
    check_common(s, cfg)?;
    let base = cfg.k + z_prime(cfg.z, cfg.ell, s.len());
    let pipe = run_round_one(s, cfg, PartitionMode::Random, base)?;
    outliers_round_two(s, cfg, Algorithm::OutliersMrRand, base, pipe)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[f64]) -> Dataset<f64> {
        Dataset::from_scalars(v).unwrap()
    }

    #[test]
    fn chunked_partitions() {
        let p = partition(10, 2, PartitionMode::Chunked, 0).unwrap();
        assert_eq!(p.members(), vec![(0..5).collect::<Vec<_>>(), (5..10).collect()]);
        let p = partition(10, 3, PartitionMode::Chunked, 0).unwrap();
        assert_eq!(p.sizes(), vec![4, 3, 3]);
        let p = partition(7, 1, PartitionMode::Random, 3).unwrap();
        assert!(p.assignments.iter().all(|&a| a == 0));
        assert!(partition(3, 4, PartitionMode::Chunked, 0).is_err());
        assert!(partition(3, 0, PartitionMode::Chunked, 0).is_err());
    }

    #[test]
    fn random_partition_is_balanced() {
        let p = partition(10_000, 4, PartitionMode::Random, 11).unwrap();
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        for size in p.sizes() {
            assert!((size as f64 - 2500.0).abs() <= 4.0 * sigma, "size {size}");
        }
        assert_eq!(p, partition(10_000, 4, PartitionMode::Random, 11).unwrap());
    }

    #[test]
    fn tau_helpers() {
        assert_eq!(mu_tau_kcenter(4.0, 2), 8);
        assert_eq!(mu_tau_outliers(2.0, 20, 200), 440);
        assert_eq!(mu_tau_randomized(1.0, 20, 200, 16), 95);
        // 6 * (40 / 8 + log2 2000) = 95.79...
        assert_eq!(z_prime(40, 8, 2000), 96);
    }

    #[test]
    fn kcenter_mr_single_partition_hand_trace() {
        let s = line(&[0.0, 1.0, 2.0, 9.0, 10.0]);
        let r = kcenter_mr(&s, &MrConfig::new(2, 0, 1, 1.0)).unwrap();
        // coreset {0, 10, 2}; gmm picks 0 then 10
        assert_eq!(r.coreset_sizes, vec![3]);
        assert_eq!(r.solution.center_indices, vec![0, 4]);
        assert_eq!(r.solution.radius, 2.0);
        assert!(r.solution.radius <= 3.0);
        assert_eq!(r.union_size, 3);
        assert_eq!(r.peak_local_memory_points, 5);
    }

    #[test]
    fn kcenter_mr_all_but_one_center() {
        let s = line(&[0.0, 3.0, 4.0, 10.0, 12.0, 20.0]);
        for ell in 1..=3 {
            let r = kcenter_mr(&s, &MrConfig::new(5, 0, ell, 0.5)).unwrap();
            assert!(r.solution.radius <= 1.0, "ell {ell}: {}", r.solution.radius);
        }
    }

    #[test]
    fn det_single_outlier() {
        let s = line(&[0.0, 1.0, 2.0, 100.0]);
        let eps_hat = 0.05;
        let r = kcenter_outliers_mr_det(&s, &MrConfig::new(1, 1, 1, eps_hat)).unwrap();
        assert!(r.solution.center_indices[0] <= 2);
        assert!(r.solution.radius <= 3.0 + 6.0 * eps_hat);
        assert!(r.coreset_sizes[0] >= 2);
    }

    #[test]
    fn identical_points_radius_zero() {
        let s = line(&[4.0; 12]);
        for ell in [1, 3] {
            let cfg = MrConfig::new(2, 3, ell, 0.5);
            assert_eq!(kcenter_outliers_mr_det(&s, &cfg).unwrap().solution.radius, 0.0);
            assert_eq!(kcenter_outliers_mr_rand(&s, &cfg).unwrap().solution.radius, 0.0);
            let cfg = MrConfig::new(2, 0, ell, 0.5);
            assert_eq!(kcenter_mr(&s, &cfg).unwrap().solution.radius, 0.0);
        }
    }

    #[test]
    fn fixed_tau_overrides_stopping_rule() {
        let s = line(&(0..40).map(|i| i as f64).collect::<Vec<_>>());
        let r = kcenter_mr(&s, &MrConfig::new(2, 0, 4, 1.0).with_tau(6)).unwrap();
        assert_eq!(r.coreset_sizes, vec![6; 4]);
        assert_eq!(r.union_size, 24);
        assert_eq!(r.solution.params.tau, Some(6));
    }

    #[test]
    fn rejects_bad_configs() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert!(kcenter_mr(&s, &MrConfig::new(3, 0, 1, 0.5)).is_err());
        assert!(kcenter_mr(&s, &MrConfig::new(1, 1, 1, 0.5)).is_err());
        assert!(kcenter_outliers_mr_det(&s, &MrConfig::new(2, 1, 1, 0.5)).is_err());
        assert!(kcenter_outliers_mr_det(&s, &MrConfig::new(0, 1, 1, 0.5)).is_err());
        assert!(kcenter_outliers_mr_det(&s, &MrConfig::new(1, 1, 4, 0.5)).is_err());
    }
}
