//! Exact optima by enumeration, the unit-weight baseline, and the sequential
//! coreset algorithm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmm::Coreset;
use crate::mapreduce::{kcenter_outliers_mr_det, mu_tau_outliers, MrConfig, RunReport};
use crate::metric::{dist, report_from_distances, Dataset};
use crate::outliers::solve_weighted;
use crate::scalar::Scalar;
use crate::solution::{Algorithm, ClusteringSolution, Params};

/// Default cap on the number of center sets the oracle may enumerate.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult<F> {
    pub opt_radius: F,
    /// Lexicographically smallest optimal center set.
    pub opt_centers: Vec<usize>,
    /// Number of center sets examined.
    pub enumerated: u128,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn distance_matrix<F: Scalar>(s: &Dataset<F>) -> Vec<F> {
    let n = s.len();
    let mut m = vec![F::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(s.point(i), s.point(j));
            m[i * n + j] = d;
            m[j * n + i] = d;
        }
    }
    m
}

/// Advances `c` to the next k-subset of `hi` in lexicographic order, keeping
/// `c[0]` fixed. Returns false when exhausted.
fn next_combination(c: &mut [usize], hi: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 1 {
        i -= 1;
        if c[i] < hi - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact `min over k-subsets T of radius_with_outliers(S, T, z)`.
pub fn brute_force_kcenter_outliers<F: Scalar>(
    s: &Dataset<F>,
    k: usize,
    z: usize,
    budget: u128,
) -> Result<OracleResult<F>> {
    let n = s.len();
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} must lie in [1, {n}]")));
    }
    if z >= n {
        return Err(Error::input(format!("z = {z} must be smaller than n = {n}")));
    }
    let required = binomial(n, k);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let dm = distance_matrix(s);

    let best = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut combo: Vec<usize> = (first..first + k).collect();
            let mut nearest = vec![F::zero(); n];
            let mut best: Option<(F, Vec<usize>)> = None;
            let mut count = 0u128;
            loop {
                count += 1;
                for (p, slot) in nearest.iter_mut().enumerate() {
                    let row = &dm[p * n..(p + 1) * n];
                    *slot = combo.iter().map(|&c| row[c]).fold(F::infinity(), F::min);
                }
                let r = report_from_distances(&nearest, z).radius;
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, combo.clone()));
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
            (best.expect("at least one subset"), count)
        })
        .collect::<Vec<_>>();

    let enumerated = best.iter().map(|(_, c)| c).sum();
    // tasks are in order of first element, so the first minimum is the
    // lexicographically smallest witness
    let ((opt_radius, opt_centers), _) = best
        .into_iter()
        .reduce(|a, b| if b.0 .0 < a.0 .0 { b } else { a })
        .expect("n >= k");
    Ok(OracleResult {
        opt_radius,
        opt_centers,
        enumerated,
    })
}

/// Exact `min over k-subsets T of radius(S, T)`.
pub fn brute_force_kcenter<F: Scalar>(s: &Dataset<F>, k: usize, budget: u128) -> Result<OracleResult<F>> {
    brute_force_kcenter_outliers(s, k, 0, budget)
}

/// Independent optimum for small instances (n <= 64): scans candidate radii
/// upward and asks whether some k balls of that radius around input points
/// cover at least `n - z` points.
pub fn brute_force_by_coverage<F: Scalar>(s: &Dataset<F>, k: usize, z: usize) -> Result<F> {
    let n = s.len();
    if n > 64 {
        return Err(Error::input("coverage oracle handles at most 64 points"));
    }
    if k == 0 || k > n || z >= n {
        return Err(Error::input("need 1 <= k <= n and z < n"));
    }
    let dm = distance_matrix(s);
    let mut radii = dm.clone();
    radii.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    radii.dedup();

    fn cover(balls: &[u64], from: usize, left: usize, acc: u64, need: u32) -> bool {
        if acc.count_ones() >= need {
            return true;
        }
        if left == 0 {
            return false;
        }
        (from..balls.len()).any(|t| cover(balls, t + 1, left - 1, acc | balls[t], need))
    }

    let need = (n - z) as u32;
    for r in radii {
        let balls: Vec<u64> = (0..n)
            .map(|t| {
                (0..n)
                    .filter(|&p| dm[t * n + p] <= r)
                    .fold(0u64, |m, p| m | (1 << p))
            })
            .collect();
        if cover(&balls, 0, k, 0, need) {
            return Ok(r);
        }
    }
    Err(Error::Internal("no candidate radius covers the input".into()))
}

/// The unit-weight greedy with radius search over all pairwise distances of
/// the whole input (3-approximation).
pub fn charikar_baseline<F: Scalar>(s: &Dataset<F>, k: usize, z: usize) -> Result<ClusteringSolution<F>> {
    if z >= s.len() {
        return Err(Error::input(format!("z = {z} must be smaller than n = {}", s.len())));
    }
    let unit = Coreset::unit(s);
    let sol = solve_weighted(&unit, k, z as u64, F::zero())?;
    let params = Params {
        k,
        z,
        eps: Some(0.0),
        ..Params::default()
    };
    Ok(ClusteringSolution::score(s, Algorithm::Charikar, params, 0, sol.center_origins)?.with_r_tilde(sol.r_tilde))
}

/// Coreset size for [`sequential_coreset`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequentialSize {
    /// `tau = ceil(mu * (k + z))`; `mu = 1` is the plain `k + z` coreset.
    Mu(f64),
    /// Adaptive stopping with the run's `eps_hat`.
    Adaptive,
}

/// The outlier pipeline with a single partition: one coreset of the whole
/// input, then the weighted solve.
pub fn sequential_coreset<F: Scalar>(
    s: &Dataset<F>,
    k: usize,
    z: usize,
    size: SequentialSize,
    eps_hat: F,
    seed: u64,
) -> Result<RunReport<F>> {
    let mut cfg = MrConfig::new(k, z, 1, eps_hat).with_seed(seed);
    if let SequentialSize::Mu(mu) = size {
        if !(mu > 0.0) {
            return Err(Error::input(format!("mu = {mu} must be positive")));
        }
        cfg = cfg.with_tau(mu_tau_outliers(mu, k, z));
    }
    let mut report = kcenter_outliers_mr_det(s, &cfg)?;
    report.solution.algorithm = Algorithm::Sequential;
    if let SequentialSize::Mu(mu) = size {
        report.solution.params.mu = Some(mu);
    }
    Ok(report)
}
