//! Uniform entry point over every algorithm, plus benchmark records and
//! their aggregation.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::shuffled_order;
use crate::error::{Error, Result};
use crate::mapreduce::{
    kcenter_mr, kcenter_outliers_mr_det, kcenter_outliers_mr_rand, mu_tau_kcenter,
    mu_tau_outliers, mu_tau_randomized, FirstCenter, MrConfig, RunReport,
};
use crate::metric::Dataset;
use crate::oracle::{
    brute_force_kcenter_outliers, charikar_baseline, sequential_coreset, SequentialSize,
    DEFAULT_BUDGET,
};
use crate::rng::{rng_for, Substream};
use crate::scalar::Scalar;
use crate::solution::{Algorithm, ClusteringSolution, Params};
use crate::streaming::{
    stream_kcenter_no_outliers, stream_solve_outliers, two_pass_oblivious, StreamConfig,
    StreamReport,
};

/// Default accuracy `eps`: the guarantees become `2 + eps` without outliers
/// and `3 + eps` with them.
pub const DEFAULT_EPS: f64 = 0.6;

/// Everything needed to run one algorithm once.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub k: usize,
    pub z: usize,
    /// Number of partitions; defaults to `ceil(sqrt(n / k))`.
    pub ell: Option<usize>,
    /// Accuracy of the guarantee. Outlier algorithms run their weighted
    /// solve with `eps_hat = eps / 6`.
    pub eps: Option<f64>,
    pub mu: Option<f64>,
    pub tau: Option<usize>,
    pub seed: u64,
    /// Permute the input with the seed before running.
    pub shuffle: bool,
    pub budget: u128,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, k: usize, z: usize) -> Self {
        RunSpec {
            algorithm,
            k,
            z,
            ell: None,
            eps: None,
            mu: None,
            tau: None,
            seed: 0,
            shuffle: false,
            budget: DEFAULT_BUDGET,
        }
    }

    fn eps(&self) -> f64 {
        self.eps.unwrap_or(DEFAULT_EPS)
    }

    pub fn default_ell(n: usize, k: usize) -> usize {
        ((n as f64 / k.max(1) as f64).sqrt().ceil() as usize).clamp(1, n.max(1))
    }

    /// Explicit `tau`, else the variant's `mu` form, else none (adaptive).
    fn coreset_size(&self, ell: usize) -> Option<usize> {
        self.tau.or_else(|| {
            self.mu.map(|mu| match self.algorithm {
                Algorithm::KcenterMr | Algorithm::KcenterStream => mu_tau_kcenter(mu, self.k),
                Algorithm::OutliersMrRand => mu_tau_randomized(mu, self.k, self.z, ell),
                _ => mu_tau_outliers(mu, self.k, self.z),
            })
        })
    }
}

/// Wall-clock time of one phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub name: String,
    pub secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome<F> {
    pub solution: ClusteringSolution<F>,
    pub phases: Vec<Phase>,
    pub total_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub throughput: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_local_memory_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coreset_size: Option<usize>,
}

fn phase(name: &str, secs: f64) -> Phase {
    Phase {
        name: name.to_string(),
        secs,
    }
}

fn from_mr<F>(r: RunReport<F>) -> Outcome<F> {
    Outcome {
        phases: vec![phase("round1", r.round_times[0]), phase("round2", r.round_times[1])],
        total_secs: 0.0,
        throughput: None,
        peak_local_memory_points: Some(r.peak_local_memory_points),
        coreset_size: Some(r.union_size),
        solution: r.solution,
    }
}

fn from_stream<F: Scalar>(r: StreamReport<F>) -> Outcome<F> {
    let mut phases: Vec<Phase> = r
        .pass_secs
        .iter()
        .enumerate()
        .map(|(i, &s)| phase(&format!("pass{}", i + 1), s))
        .collect();
    phases.push(phase("finalize", r.finalize_secs));
    Outcome {
        phases,
        total_secs: 0.0,
        throughput: Some(r.throughput),
        peak_local_memory_points: None,
        coreset_size: Some(r.coreset.len()),
        solution: r.solution,
    }
}

/// Runs `spec` on `s`. Centers are reported as indices into `s` even when the
/// input was shuffled.
pub fn run<F: Scalar>(s: &Dataset<F>, spec: &RunSpec) -> Result<Outcome<F>> {
    let start = Instant::now();
    let n = s.len();
    let order: Vec<usize> = if spec.shuffle {
        shuffled_order(n, spec.seed)
    } else {
        (0..n).collect()
    };
    let ell = spec.ell.unwrap_or_else(|| RunSpec::default_ell(n, spec.k));
    let size = spec.coreset_size(ell);
    let eps = spec.eps();
    let eps_hat = if spec.algorithm == Algorithm::KcenterMr { eps } else { eps / 6.0 };

    let mr_cfg = || {
        let mut cfg = MrConfig::new(spec.k, spec.z, ell, F::of(eps_hat))
            .with_seed(spec.seed)
            .with_first_center(FirstCenter::FirstElement);
        if let Some(t) = size {
            cfg = cfg.with_tau(t);
        }
        cfg
    };
    // Order-sensitive algorithms see the permuted copy.
    let permuted = || -> Result<Dataset<F>> {
        if spec.shuffle {
            s.select(&order)
        } else {
            Ok(s.clone())
        }
    };
    let stream_tau = || -> Result<usize> {
        size.ok_or_else(|| Error::input("streaming algorithms need --tau or --mu"))
    };

    let mut outcome = match spec.algorithm {
        Algorithm::KcenterMr => from_mr(kcenter_mr(&permuted()?, &mr_cfg())?),
        Algorithm::OutliersMrDet => from_mr(kcenter_outliers_mr_det(&permuted()?, &mr_cfg())?),
        Algorithm::OutliersMrRand => from_mr(kcenter_outliers_mr_rand(&permuted()?, &mr_cfg())?),
        Algorithm::Sequential => {
            let mut r = match (spec.tau, spec.mu) {
                (Some(t), _) => {
                    let cfg = MrConfig::new(spec.k, spec.z, 1, F::of(eps_hat)).with_tau(t).with_seed(spec.seed);
                    kcenter_outliers_mr_det(&permuted()?, &cfg)?
                }
                (None, Some(mu)) => sequential_coreset(&permuted()?, spec.k, spec.z, SequentialSize::Mu(mu), F::of(eps_hat), spec.seed)?,
                (None, None) => sequential_coreset(&permuted()?, spec.k, spec.z, SequentialSize::Adaptive, F::of(eps_hat), spec.seed)?,
            };
            r.solution.algorithm = Algorithm::Sequential;
            from_mr(r)
        }
        Algorithm::Charikar => {
            let t = Instant::now();
            let sol = charikar_baseline(&permuted()?, spec.k, spec.z)?;
            let secs = t.elapsed().as_secs_f64();
            Outcome {
                solution: sol,
                phases: vec![phase("solve", secs)],
                total_secs: 0.0,
                throughput: None,
                peak_local_memory_points: None,
                coreset_size: Some(n),
            }
        }
        Algorithm::OutliersStream => {
            let mut cfg = StreamConfig::new(spec.k, spec.z, stream_tau()?, eps_hat)?;
            cfg.mu = spec.mu.filter(|_| spec.tau.is_none());
            from_stream(stream_solve_outliers(s, &order, &cfg, spec.seed)?)
        }
        Algorithm::KcenterStream => {
            from_stream(stream_kcenter_no_outliers(s, &order, spec.k, stream_tau()?, spec.seed)?)
        }
        Algorithm::TwoPass => from_stream(two_pass_oblivious(s, &order, spec.k, spec.z, eps, spec.seed)?),
        Algorithm::BruteForce => {
            let t = Instant::now();
            let opt = brute_force_kcenter_outliers(s, spec.k, spec.z, spec.budget)?;
            let secs = t.elapsed().as_secs_f64();
            let params = Params {
                k: spec.k,
                z: spec.z,
                ..Params::default()
            };
            Outcome {
                solution: ClusteringSolution::score(s, Algorithm::BruteForce, params, spec.seed, opt.opt_centers)?,
                phases: vec![phase("enumerate", secs)],
                total_secs: 0.0,
                throughput: None,
                peak_local_memory_points: None,
                coreset_size: None,
            }
        }
    };

    // Streaming and brute-force runs already index `s`; the others ran on
    // the permuted copy.
    let on_permuted = matches!(
        spec.algorithm,
        Algorithm::KcenterMr
            | Algorithm::OutliersMrDet
            | Algorithm::OutliersMrRand
            | Algorithm::Sequential
            | Algorithm::Charikar
    );
    if spec.shuffle && on_permuted {
        let old = outcome.solution;
        let centers = old.center_indices.iter().map(|&i| order[i]).collect();
        let mut rescored = ClusteringSolution::score(s, old.algorithm, old.params, old.seed, centers)?;
        rescored.r_tilde = old.r_tilde;
        outcome.solution = rescored;
    }
    outcome.solution.seed = spec.seed;
    if !matches!(spec.algorithm, Algorithm::Charikar | Algorithm::BruteForce | Algorithm::KcenterStream) {
        outcome.solution.params.eps = Some(eps);
    }
    if spec.mu.is_some() && spec.tau.is_none() {
        outcome.solution.params.mu = spec.mu;
    }
    outcome.total_secs = start.elapsed().as_secs_f64();
    Ok(outcome)
}

/// One benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub z: usize,
    pub ell: Option<usize>,
    pub mu: Option<f64>,
    pub eps: Option<f64>,
    pub tau: Option<usize>,
    pub seed: u64,
    pub rep: usize,
    pub radius: f64,
    /// Radius over the smallest radius among all records of the same
    /// dataset, `k` and `z`.
    pub approximation_ratio: f64,
    pub phases: Vec<Phase>,
    pub total_secs: f64,
    pub throughput: Option<f64>,
    pub peak_local_memory_points: Option<usize>,
    pub coreset_size: Option<usize>,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "dataset,algorithm,k,z,ell,mu,eps,tau,seed,rep,radius,approximation_ratio,total_secs,throughput,peak_local_memory_points,coreset_size";

    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.dataset,
            self.algorithm,
            self.k,
            self.z,
            opt(&self.ell),
            opt(&self.mu),
            opt(&self.eps),
            opt(&self.tau),
            self.seed,
            self.rep,
            self.radius,
            self.approximation_ratio,
            self.total_secs,
            opt(&self.throughput),
            opt(&self.peak_local_memory_points),
            opt(&self.coreset_size),
        )
    }
}

/// Mean with a normal-approximation 95% interval: mean +- 1.96 sd / sqrt(n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
    pub n: usize,
}

impl MeanCi {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanCi {
                mean: f64::NAN,
                half_width: f64::NAN,
                n,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let half_width = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            1.96 * var.sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        MeanCi { mean, half_width, n }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub algorithm: Algorithm,
    pub mu: Option<f64>,
    pub radius: MeanCi,
    pub approximation_ratio: MeanCi,
    pub total_secs: MeanCi,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub throughput: Option<MeanCi>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutput {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<BenchSummary>,
}

/// Fills in approximation ratios relative to the best radius per
/// (dataset, k, z).
pub fn assign_ratios(records: &mut [BenchRecord]) {
    let keys: Vec<(String, usize, usize)> = records.iter().map(|r| (r.dataset.clone(), r.k, r.z)).collect();
    for i in 0..records.len() {
        let best = records
            .iter()
            .zip(&keys)
            .filter(|(_, key)| **key == keys[i])
            .map(|(r, _)| r.radius)
            .fold(f64::INFINITY, f64::min);
        let r = records[i].radius;
        records[i].approximation_ratio = if r == best { 1.0 } else { r / best };
    }
}

pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut groups: Vec<(Algorithm, Option<f64>)> = Vec::new();
    for r in records {
        if !groups.contains(&(r.algorithm, r.mu)) {
            groups.push((r.algorithm, r.mu));
        }
    }
    groups
        .into_iter()
        .map(|(algorithm, mu)| {
            let rs: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.algorithm == algorithm && r.mu == mu)
                .collect();
            let col = |f: &dyn Fn(&BenchRecord) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<_>>();
            let tp: Vec<f64> = rs.iter().filter_map(|r| r.throughput).collect();
            BenchSummary {
                algorithm,
                mu,
                radius: MeanCi::of(&col(&|r| r.radius)),
                approximation_ratio: MeanCi::of(&col(&|r| r.approximation_ratio)),
                total_secs: MeanCi::of(&col(&|r| r.total_secs)),
                throughput: (!tp.is_empty()).then(|| MeanCi::of(&tp)),
            }
        })
        .collect()
}

/// Repeats `base` for every `mu` (or once with `base.mu` when `mus` is
/// empty) and `reps` times, each repetition with its own derived seed.
pub fn bench<F: Scalar>(
    s: &Dataset<F>,
    dataset: &str,
    base: &RunSpec,
    mus: &[f64],
    reps: usize,
) -> Result<BenchOutput> {
    if reps == 0 {
        return Err(Error::input("reps must be at least 1"));
    }
    let mut rng = rng_for(base.seed, Substream::Repetition);
    let seeds: Vec<u64> = (0..reps).map(|_| rng.random()).collect();
    let mu_list: Vec<Option<f64>> = if mus.is_empty() {
        vec![base.mu]
    } else {
        mus.iter().copied().map(Some).collect()
    };
    let ell = base.ell.unwrap_or_else(|| RunSpec::default_ell(s.len(), base.k));
    let mut records = Vec::new();
    for mu in mu_list {
        for (rep, &seed) in seeds.iter().enumerate() {
            let spec = RunSpec {
                mu,
                seed,
                ell: Some(ell),
                ..base.clone()
            };
            let out = run(s, &spec)?;
            records.push(BenchRecord {
                dataset: dataset.to_string(),
                algorithm: base.algorithm,
                k: base.k,
                z: base.z,
                ell: out.solution.params.ell,
                mu,
                eps: out.solution.params.eps,
                tau: out.solution.params.tau,
                seed,
                rep,
                radius: out.solution.radius.as_f64(),
                approximation_ratio: 1.0,
                phases: out.phases,
                total_secs: out.total_secs,
                throughput: out.throughput,
                peak_local_memory_points: out.peak_local_memory_points,
                coreset_size: out.coreset_size,
            });
        }
    }
    assign_ratios(&mut records);
    let summary = summarize(&records);
    Ok(BenchOutput { records, summary })
}
