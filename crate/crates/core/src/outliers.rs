//! Weighted k-center with outliers on a coreset: the greedy ball-covering
//! procedure and the radius search that drives it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmm::Coreset;
use crate::metric::{dist, Point};
use crate::scalar::Scalar;

/// Above this many point pairs the candidate radii are not materialized all at
/// once; the search first narrows the value range with sampled pivots.
const MATERIALIZE_PAIRS: usize = 1 << 22;
const PIVOT_SAMPLES: usize = 2049;
const MAX_REFINE_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutliersClusterResult<F> {
    pub centers: Vec<Point<F>>,
    /// Positions in the input coreset of the chosen centers, in selection order.
    pub center_positions: Vec<usize>,
    /// Positions of the coreset points left uncovered, ascending.
    pub uncovered: Vec<usize>,
    pub uncovered_weight: u64,
    /// Weight removed by each selected center.
    pub removed_weights: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    /// `r_tilde` is zero or a pairwise distance of the coreset.
    ExactPairwise,
    /// `r_tilde` was lowered geometrically below a pairwise distance.
    GeometricRefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSearchResult<F> {
    pub r_tilde: F,
    pub solution: OutliersClusterResult<F>,
    /// Number of calls to [`outliers_cluster`].
    pub probes: usize,
    pub candidate_source: CandidateSource,
    /// Probes that left more weight uncovered than some probe at a smaller radius.
    pub monotonicity_violations: usize,
}

/// Flat copy of a coreset for the inner loops.
struct Flat<'a, F> {
    dim: usize,
    coords: Vec<F>,
    weights: Vec<u64>,
    source: &'a Coreset<F>,
}

impl<'a, F: Scalar> Flat<'a, F> {
    fn new(t: &'a Coreset<F>) -> Result<Self> {
        let first = t
            .items
            .first()
            .ok_or_else(|| Error::input("coreset is empty"))?;
        let dim = first.point.dim();
        let mut coords = Vec::with_capacity(dim * t.len());
        for item in &t.items {
            if item.point.dim() != dim {
                return Err(Error::input("coreset points differ in dimension"));
            }
            if item.weight == 0 {
                return Err(Error::input("coreset weights must be positive"));
            }
            coords.extend_from_slice(item.point.coords());
        }
        Ok(Flat {
            dim,
            coords,
            weights: t.items.iter().map(|w| w.weight).collect(),
            source: t,
        })
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    fn p(&self, i: usize) -> &[F] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> F {
        dist(self.p(i), self.p(j))
    }

    fn max_pairwise(&self) -> F {
        let mut best = F::zero();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(self.d(i, j));
            }
        }
        best
    }

    /// Greedy cover: repeatedly pick the point whose `(1+2e)r` ball holds the
    /// most uncovered weight and drop everything within `(3+4e)r` of it.
    ///
    /// Ball weights only shrink, so stale heap entries are upper bounds and
    /// an entry refreshed in the current round is the exact maximum.
    fn cluster(&self, k: usize, r: F, eps_hat: F) -> OutliersClusterResult<F> {
        let two = F::of(2.0);
        let ball = (F::one() + two * eps_hat) * r;
        let erase = (F::of(3.0) + F::of(4.0) * eps_hat) * r;
        let m = self.len();

        let mut ball_weight: Vec<u64> = self.weights.clone();
        for i in 0..m {
            for j in i + 1..m {
                if self.d(i, j) <= ball {
                    ball_weight[i] += self.weights[j];
                    ball_weight[j] += self.weights[i];
                }
            }
        }
        let mut heap: BinaryHeap<(u64, Reverse<usize>, usize)> = ball_weight
            .iter()
            .enumerate()
            .map(|(t, &w)| (w, Reverse(t), 0))
            .collect();

        let mut covered = vec![false; m];
        let mut uncovered: Vec<usize> = (0..m).collect();
        let mut centers = Vec::new();
        let mut removed_weights = Vec::new();
        let mut round = 0usize;

        while centers.len() < k && !uncovered.is_empty() {
            let x = loop {
                let (w, Reverse(t), fresh) = heap.pop().expect("one entry per point");
                if fresh == round {
                    break t;
                }
                let exact: u64 = uncovered
                    .iter()
                    .filter(|&&v| self.d(v, t) <= ball)
                    .map(|&v| self.weights[v])
                    .sum();
                debug_assert!(exact <= w);
                heap.push((exact, Reverse(t), round));
            };
            centers.push(x);
            let mut removed = 0u64;
            uncovered.retain(|&v| {
                if self.d(v, x) <= erase {
                    covered[v] = true;
                    removed += self.weights[v];
                    false
                } else {
                    true
                }
            });
            removed_weights.push(removed);
            round += 1;
        }

        OutliersClusterResult {
            centers: centers
                .iter()
                .map(|&c| self.source.items[c].point.clone())
                .collect(),
            center_positions: centers,
            uncovered_weight: uncovered.iter().map(|&v| self.weights[v]).sum(),
            uncovered,
            removed_weights,
        }
    }
}

fn check_params<F: Scalar>(k: usize, eps_hat: F) -> Result<()> {
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    if !(eps_hat >= F::zero() && eps_hat.is_finite()) {
        return Err(Error::input(format!("eps_hat = {eps_hat} must be finite and >= 0")));
    }
    Ok(())
}

/// Runs the weighted greedy cover once at radius `r`.
pub fn outliers_cluster<F: Scalar>(
    t: &Coreset<F>,
    k: usize,
    r: F,
    eps_hat: F,
) -> Result<OutliersClusterResult<F>> {
    check_params(k, eps_hat)?;
    if !(r >= F::zero() && r.is_finite()) {
        return Err(Error::input(format!("radius {r} must be finite and >= 0")));
    }
    Ok(Flat::new(t)?.cluster(k, r, eps_hat))
}

struct Search<'a, F> {
    flat: Flat<'a, F>,
    k: usize,
    z: u64,
    eps_hat: F,
    probes: usize,
    trail: Vec<(F, u64)>,
}

impl<F: Scalar> Search<'_, F> {
    fn probe(&mut self, r: F) -> (bool, OutliersClusterResult<F>) {
        self.probes += 1;
        let sol = self.flat.cluster(self.k, r, self.eps_hat);
        self.trail.push((r, sol.uncovered_weight));
        (sol.uncovered_weight <= self.z, sol)
    }

    fn violations(&self) -> usize {
        let mut trail = self.trail.clone();
        trail.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut count = 0;
        let mut min_below = u64::MAX;
        for &(_, w) in &trail {
            if w > min_below {
                count += 1;
            }
            min_below = min_below.min(w);
        }
        count
    }

    /// Smallest feasible entry of the ascending `cands`, given that `top`
    /// (larger than every entry) is feasible with solution `top_sol`.
    fn lowest_feasible(
        &mut self,
        cands: &[F],
        top: F,
        top_sol: OutliersClusterResult<F>,
    ) -> (F, OutliersClusterResult<F>) {
        let (mut lo, mut hi) = (0usize, cands.len());
        let mut best = (top, top_sol);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let (ok, sol) = self.probe(cands[mid]);
            if ok {
                hi = mid;
                best = (cands[mid], sol);
            } else {
                lo = mid + 1;
            }
        }
        best
    }

    fn pairs_in(&self, lo: F, hi: F, limit: usize) -> (usize, Vec<F>) {
        let m = self.flat.len();
        let mut count = 0usize;
        let mut found = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let d = self.flat.d(i, j);
                if d > lo && d < hi {
                    count += 1;
                    if count <= limit {
                        found.push(d);
                    }
                }
            }
        }
        if count > limit {
            found.clear();
        }
        (count, found)
    }

    fn sample_pivot(&self, lo: F, hi: F, rng: &mut ChaCha8Rng) -> Option<F> {
        let m = self.flat.len();
        let mut sample = Vec::with_capacity(PIVOT_SAMPLES);
        let mut attempts = 0usize;
        while sample.len() < PIVOT_SAMPLES && attempts < 1000 * PIVOT_SAMPLES {
            attempts += 1;
            let i = rng.random_range(0..m);
            let j = rng.random_range(0..m);
            if i == j {
                continue;
            }
            let d = self.flat.d(i, j);
            if d > lo && d < hi {
                sample.push(d);
            }
        }
        if sample.is_empty() {
            return None;
        }
        let mid = sample.len() / 2;
        sample.select_nth_unstable_by(mid, |a, b| a.partial_cmp(b).expect("finite"));
        Some(sample[mid])
    }

    fn sort_unique(v: &mut Vec<F>) {
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        v.dedup();
    }

    /// Smallest feasible radius among zero and the pairwise distances.
    fn exact_candidate(&mut self) -> Result<(F, OutliersClusterResult<F>)> {
        let m = self.flat.len();
        let top = self.flat.max_pairwise();
        let (ok, top_sol) = self.probe(top);
        if !ok {
            return Err(Error::Internal(format!(
                "largest pairwise distance {top} is infeasible"
            )));
        }
        let pairs = m * (m - 1) / 2;
        if pairs <= MATERIALIZE_PAIRS {
            let mut cands = Vec::with_capacity(pairs + 1);
            cands.push(F::zero());
            for i in 0..m {
                for j in i + 1..m {
                    cands.push(self.flat.d(i, j));
                }
            }
            Self::sort_unique(&mut cands);
            cands.pop();
            return Ok(self.lowest_feasible(&cands, top, top_sol));
        }

        let (ok, zero_sol) = self.probe(F::zero());
        if ok {
            return Ok((F::zero(), zero_sol));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x006b_6365_6e74_6572);
        let (mut lo, mut hi, mut hi_sol) = (F::zero(), top, top_sol);
        loop {
            let (count, mut found) = self.pairs_in(lo, hi, MATERIALIZE_PAIRS);
            if count <= MATERIALIZE_PAIRS {
                Self::sort_unique(&mut found);
                return Ok(self.lowest_feasible(&found, hi, hi_sol));
            }
            let Some(pivot) = self.sample_pivot(lo, hi, &mut rng) else {
                let (_, mut found) = self.pairs_in(lo, hi, usize::MAX);
                Self::sort_unique(&mut found);
                return Ok(self.lowest_feasible(&found, hi, hi_sol));
            };
            let (ok, sol) = self.probe(pivot);
            if ok {
                hi = pivot;
                hi_sol = sol;
            } else {
                lo = pivot;
            }
        }
    }
}

/// Searches for the smallest radius at which [`outliers_cluster`] leaves at
/// most `z` weight uncovered.
///
/// Candidates are zero and every pairwise coreset distance, binary-searched
/// assuming feasibility is monotone in the radius. With `eps_hat > 0` the
/// answer is then lowered by factors of `1 + eps_hat / (3 + 4 eps_hat)` while
/// it stays feasible.
pub fn find_min_radius<F: Scalar>(
    t: &Coreset<F>,
    k: usize,
    z: u64,
    eps_hat: F,
) -> Result<RadiusSearchResult<F>> {
    check_params(k, eps_hat)?;
    let mut search = Search {
        flat: Flat::new(t)?,
        k,
        z,
        eps_hat,
        probes: 0,
        trail: Vec::new(),
    };
    let (mut r_tilde, mut solution) = search.exact_candidate()?;
    let mut candidate_source = CandidateSource::ExactPairwise;

    if eps_hat > F::zero() && r_tilde > F::zero() {
        let delta = eps_hat / (F::of(3.0) + F::of(4.0) * eps_hat);
        for _ in 0..MAX_REFINE_STEPS {
            let r = r_tilde / (F::one() + delta);
            let (ok, sol) = search.probe(r);
            if !ok {
                break;
            }
            r_tilde = r;
            solution = sol;
            candidate_source = CandidateSource::GeometricRefined;
        }
    }

    if solution.uncovered_weight > z {
        return Err(Error::Internal(format!(
            "radius search returned an infeasible radius {r_tilde}"
        )));
    }
    let monotonicity_violations = search.violations();
    if monotonicity_violations > 0 {
        log::warn!(
            "uncovered weight increased with the radius at {monotonicity_violations} probes (k = {k}, z = {z}, |T| = {})",
            t.len()
        );
    }
    Ok(RadiusSearchResult {
        r_tilde,
        solution,
        probes: search.probes,
        candidate_source,
        monotonicity_violations,
    })
}

/// Centers chosen on a weighted coreset at the searched radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSolution<F> {
    pub centers: Vec<Point<F>>,
    /// Origin indices of the centers (as recorded in the coreset).
    pub center_origins: Vec<usize>,
    pub r_tilde: F,
    pub search: RadiusSearchResult<F>,
}

/// Radius search followed by extraction of the centers found at `r_tilde`.
pub fn solve_weighted<F: Scalar>(
    t: &Coreset<F>,
    k: usize,
    z: u64,
    eps_hat: F,
) -> Result<WeightedSolution<F>> {
    let search = find_min_radius(t, k, z, eps_hat)?;
    Ok(WeightedSolution {
        centers: search.solution.centers.clone(),
        center_origins: search
            .solution
            .center_positions
            .iter()
            .map(|&p| t.items[p].origin_index)
            .collect(),
        r_tilde: search.r_tilde,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmm::WeightedPoint;

    fn coreset(items: &[(f64, u64)]) -> Coreset<f64> {
        Coreset {
            items: items
                .iter()
                .enumerate()
                .map(|(i, &(x, w))| WeightedPoint {
                    point: Point::new(vec![x]).unwrap(),
                    weight: w,
                    origin_index: i,
                })
                .collect(),
            source_size: items.iter().map(|&(_, w)| w as usize).sum(),
        }
    }

    #[test]
    fn heavier_ball_wins() {
        let t = coreset(&[(0.0, 3), (10.0, 2)]);
        let res = outliers_cluster(&t, 1, 5.0, 0.0).unwrap();
        assert_eq!(res.center_positions, vec![0]);
        assert!(res.uncovered.is_empty());
        assert_eq!(res.removed_weights, vec![5]);
    }

    #[test]
    fn zero_radius_one_center_per_location() {
        let t = coreset(&[(0.0, 1), (4.0, 2), (4.0, 1), (9.0, 1)]);
        let res = outliers_cluster(&t, 3, 0.0, 0.0).unwrap();
        assert!(res.uncovered.is_empty());
        assert_eq!(res.center_positions, vec![1, 0, 3]);
    }

    #[test]
    fn far_point_left_uncovered() {
        let t = coreset(&[(0.0, 1), (1.0, 1), (2.0, 1), (100.0, 1)]);
        let res = outliers_cluster(&t, 1, 1.0, 0.0).unwrap();
        assert_eq!(res.center_positions, vec![1]);
        assert_eq!(res.uncovered, vec![3]);
        assert_eq!(res.uncovered_weight, 1);
    }

    #[test]
    fn center_need_not_be_uncovered() {
        // position 1 is erased by the first center, then wins the second
        // round on a tie with the two points it still reaches
        let t = coreset(&[(0.0, 5), (3.0, 1), (3.1, 1), (3.9, 1)]);
        let res = outliers_cluster(&t, 2, 1.0, 0.0).unwrap();
        assert_eq!(res.center_positions, vec![0, 1]);
        assert!(res.uncovered.is_empty());
    }

    #[test]
    fn search_trivial_cases() {
        let r = find_min_radius(&coreset(&[(0.0, 1)]), 1, 0, 0.1).unwrap();
        assert_eq!(r.r_tilde, 0.0);
        assert_eq!(r.solution.uncovered_weight, 0);

        let r = find_min_radius(&coreset(&[(0.0, 1), (10.0, 1)]), 2, 0, 0.0).unwrap();
        assert_eq!(r.r_tilde, 0.0);
    }

    #[test]
    fn search_with_one_outlier() {
        let t = coreset(&[(0.0, 1), (1.0, 1), (2.0, 1), (100.0, 1)]);
        let r = find_min_radius(&t, 1, 1, 0.0).unwrap();
        // 0.5 is not a candidate; candidates below 1 are {0}, infeasible.
        assert_eq!(r.r_tilde, 1.0);
        assert_eq!(r.candidate_source, CandidateSource::ExactPairwise);
        assert!(r.solution.uncovered_weight <= 1);
    }

    #[test]
    fn geometric_refinement_goes_below_pairwise() {
        let t = coreset(&[(0.0, 1), (1.0, 1), (2.0, 1), (100.0, 1)]);
        let eps = 0.5;
        let r = find_min_radius(&t, 1, 1, eps).unwrap();
        let delta = eps / (3.0 + 4.0 * eps);
        assert!(r.r_tilde <= 1.0);
        assert!(r.solution.uncovered_weight <= 1);
        // one more step down must be infeasible
        let below = outliers_cluster(&t, 1, r.r_tilde / (1.0 + delta), eps).unwrap();
        assert!(below.uncovered_weight > 1);
    }

    #[test]
    fn solve_weighted_examples() {
        let t = coreset(&[(0.0, 1), (1.0, 1), (2.0, 1), (100.0, 1)]);
        let s = solve_weighted(&t, 1, 1, 0.0).unwrap();
        assert_eq!(s.center_origins.len(), 1);
        assert!(s.center_origins[0] <= 2);

        let s = solve_weighted(&t, 1, 3, 0.0).unwrap();
        assert_eq!(s.r_tilde, 0.0);

        let s = solve_weighted(&t, 4, 0, 0.0).unwrap();
        assert_eq!(s.r_tilde, 0.0);
        let mut c = s.center_origins.clone();
        c.sort();
        assert_eq!(c, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_bad_input() {
        let t = coreset(&[(0.0, 1)]);
        assert!(outliers_cluster(&t, 0, 1.0, 0.0).is_err());
        assert!(outliers_cluster(&t, 1, -1.0, 0.0).is_err());
        assert!(outliers_cluster(&t, 1, 1.0, -0.1).is_err());
        assert!(find_min_radius(&coreset(&[]), 1, 0, 0.0).is_err());
    }

    #[test]
    fn pivot_narrowing_lands_on_a_feasibility_boundary() {
        // Feasibility need not be monotone, so both search paths are only
        // guaranteed to stop at a feasible candidate whose predecessor fails.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let items: Vec<(f64, u64)> = (0..300)
            .map(|_| (rng.random_range(0.0..1000.0), rng.random_range(1..4)))
            .collect();
        let t = coreset(&items);
        let expected = find_min_radius(&t, 3, 20, 0.0).unwrap();

        let mut search = Search {
            flat: Flat::new(&t).unwrap(),
            k: 3,
            z: 20,
            eps_hat: 0.0,
            probes: 0,
            trail: Vec::new(),
        };
        let top = search.flat.max_pairwise();
        let (_, top_sol) = search.probe(top);
        let (_, zero_sol) = search.probe(0.0);
        let mut all = vec![0.0];
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                all.push((a.0 - b.0).abs());
            }
        }
        assert!(zero_sol.uncovered_weight > 20);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut lo, mut hi, mut hi_sol) = (0.0, top, top_sol);
        // narrow until at most 1000 candidates remain
        loop {
            let (count, mut found) = search.pairs_in(lo, hi, 1000);
            if count <= 1000 {
                Search::sort_unique(&mut found);
                let (r, _) = search.lowest_feasible(&found, hi, hi_sol);
                for r in [r, expected.r_tilde] {
                    assert!(search.probe(r).0);
                    let below = all.iter().copied().filter(|&c| c < r).fold(0.0, f64::max);
                    assert!(below < r && !search.probe(below).0);
                }
                break;
            }
            let pivot = search.sample_pivot(lo, hi, &mut rng).unwrap();
            let (ok, sol) = search.probe(pivot);
            if ok {
                hi = pivot;
                hi_sol = sol;
            } else {
                lo = pivot;
            }
        }
    }
}
