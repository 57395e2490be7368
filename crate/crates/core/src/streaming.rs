//! One-pass weighted doubling coreset and the streaming solvers built on it.
//!
//! The coreset keeps at most `tau` weighted centers that are pairwise more
//! than `4 phi` apart, where `phi` is a lower bound on the optimal
//! `tau`-center radius of the points seen so far. Every absorbed point lies
//! within `8 phi` of the center it is charged to.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmm::{gmm, Coreset, WeightedPoint};
use crate::metric::{dist, Dataset, Point};
use crate::outliers::solve_weighted;
use crate::scalar::Scalar;
use crate::solution::{Algorithm, ClusteringSolution, Params};

/// Capacity `ceil((k + z) * (16 / eps_hat)^D)` that makes the one-pass
/// coreset accurate in spaces of doubling dimension `D`.
pub fn choose_tau(k: usize, z: usize, eps_hat: f64, doubling_dim: f64) -> Result<usize> {
    if !(eps_hat > 0.0 && eps_hat <= 1.0) {
        return Err(Error::input(format!("eps_hat = {eps_hat} must lie in (0, 1]")));
    }
    if !(doubling_dim >= 0.0 && doubling_dim.is_finite()) {
        return Err(Error::input(format!("doubling dimension {doubling_dim} must be >= 0")));
    }
    if k + z == 0 {
        return Err(Error::input("k + z must be positive"));
    }
    let tau = ((k + z) as f64 * (16.0 / eps_hat).powf(doubling_dim)).ceil();
    // stay well inside the range where f64 represents every integer
    if !tau.is_finite() || tau > (1u64 << 52) as f64 {
        return Err(Error::input(format!(
            "capacity {tau:e} for D = {doubling_dim}, eps_hat = {eps_hat} is too large"
        )));
    }
    Ok(tau as usize)
}

/// What happened to a point handed to [`DoublingCoreset::push`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Absorption<F> {
    /// Held back until `tau + 1` points have arrived.
    Buffered,
    /// Charged to the center at `center` (position before any merge), which
    /// lies `distance <= 8 phi` away.
    Absorbed { center: usize, distance: F, phi: F },
    /// Became a new center; `phi` is the value it was compared against.
    Opened { phi: F },
}

/// Weighted doubling coreset over a stream.
#[derive(Debug, Clone)]
pub struct DoublingCoreset<F> {
    tau: usize,
    dim: Option<usize>,
    coords: Vec<F>,
    weights: Vec<u64>,
    origins: Vec<usize>,
    phi: F,
    points_seen: u64,
    in_init: bool,
    checked: bool,
    doublings: u64,
}

impl<F: Scalar> DoublingCoreset<F> {
    pub fn new(tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::input("capacity tau must be positive"));
        }
        Ok(DoublingCoreset {
            tau,
            dim: None,
            coords: Vec::new(),
            weights: Vec::new(),
            origins: Vec::new(),
            phi: F::zero(),
            points_seen: 0,
            in_init: true,
            checked: false,
            doublings: 0,
        })
    }

    /// Verify invariants after every update and panic on violation.
    pub fn with_checks(mut self, on: bool) -> Self {
        self.checked = on;
        self
    }

    /// Builds the state from exactly `tau + 1` points and restores the
    /// capacity and separation invariants.
    pub fn init(tau: usize, first: &[(&[F], usize)]) -> Result<Self> {
        if first.len() != tau + 1 {
            return Err(Error::input(format!(
                "initialization needs tau + 1 = {} points, got {}",
                tau + 1,
                first.len()
            )));
        }
        let mut state = Self::new(tau)?;
        for &(p, origin) in first {
            state.buffer(p, origin)?;
        }
        state.finish_init();
        Ok(state)
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn phi(&self) -> F {
        self.phi
    }

    pub fn points_seen(&self) -> u64 {
        self.points_seen
    }

    pub fn in_init(&self) -> bool {
        self.in_init
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of times `phi` was doubled.
    pub fn doublings(&self) -> u64 {
        self.doublings
    }

    #[inline]
    fn center(&self, i: usize) -> &[F] {
        let d = self.dim.unwrap_or(0);
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Current centers as a weighted coreset (buffered points while
    /// initializing).
    pub fn coreset(&self) -> Coreset<F> {
        Coreset {
            items: (0..self.len())
                .map(|i| WeightedPoint {
                    point: Point::from_slice(self.center(i)),
                    weight: self.weights[i],
                    origin_index: self.origins[i],
                })
                .collect(),
            source_size: self.points_seen as usize,
        }
    }

    fn check_dim(&mut self, p: &[F]) -> Result<()> {
        match self.dim {
            None if p.is_empty() => Err(Error::input("points need at least one coordinate")),
            None => {
                self.dim = Some(p.len());
                Ok(())
            }
            Some(d) if d != p.len() => Err(Error::input(format!(
                "point of dimension {} in a stream of dimension {d}",
                p.len()
            ))),
            Some(_) => Ok(()),
        }
    }

    fn buffer(&mut self, p: &[F], origin: usize) -> Result<()> {
        self.check_dim(p)?;
        self.points_seen += 1;
        // exact duplicates are merged right away so phi starts positive
        if let Some(i) = (0..self.len()).find(|&i| self.center(i) == p) {
            self.weights[i] += 1;
        } else {
            self.coords.extend_from_slice(p);
            self.weights.push(1);
            self.origins.push(origin);
        }
        Ok(())
    }

    fn finish_init(&mut self) {
        self.in_init = false;
        self.phi = self.min_pairwise() / F::of(2.0);
        self.restore_capacity();
        if self.phi > F::zero() {
            self.fold(F::of(4.0) * self.phi);
        }
        self.verify();
    }

    fn min_pairwise(&self) -> F {
        let mut best = F::infinity();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.min(dist(self.center(i), self.center(j)));
            }
        }
        if best.is_finite() {
            best
        } else {
            F::zero()
        }
    }

    /// Folds later centers into earlier ones whenever they are within `thr`.
    fn fold(&mut self, thr: F) {
        let n = self.len();
        let mut alive = vec![true; n];
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            for j in i + 1..n {
                if alive[j] && dist(self.center(i), self.center(j)) <= thr {
                    self.weights[i] += self.weights[j];
                    alive[j] = false;
                }
            }
        }
        if alive.iter().all(|&a| a) {
            return;
        }
        let d = self.dim.unwrap_or(0);
        let mut w = 0;
        for i in 0..n {
            if alive[i] {
                self.coords.copy_within(i * d..(i + 1) * d, w * d);
                self.weights[w] = self.weights[i];
                self.origins[w] = self.origins[i];
                w += 1;
            }
        }
        self.coords.truncate(w * d);
        self.weights.truncate(w);
        self.origins.truncate(w);
    }

    /// Merge rule: double `phi` and fold until at most `tau` centers remain.
    fn restore_capacity(&mut self) {
        while self.len() > self.tau {
            if self.phi == F::zero() {
                // first time two distinct points coexist beyond capacity
                self.phi = self.min_pairwise() / F::of(2.0);
            }
            self.phi = self.phi * F::of(2.0);
            self.doublings += 1;
            self.fold(F::of(4.0) * self.phi);
        }
    }

    /// Processes one point. Before `tau + 1` points have arrived they are
    /// only buffered.
    pub fn push(&mut self, p: &[F], origin: usize) -> Result<Absorption<F>> {
        if self.in_init {
            self.buffer(p, origin)?;
            if self.points_seen as usize == self.tau + 1 {
                self.finish_init();
            }
            return Ok(Absorption::Buffered);
        }
        self.check_dim(p)?;
        Ok(self.update(p, origin))
    }

    fn update(&mut self, p: &[F], origin: usize) -> Absorption<F> {
        self.points_seen += 1;
        let phi = self.phi;
        let mut nearest = (0usize, F::infinity());
        for i in 0..self.len() {
            let d = dist(p, self.center(i));
            if d < nearest.1 {
                nearest = (i, d);
            }
        }
        let outcome = if nearest.1 <= F::of(8.0) * phi {
            self.weights[nearest.0] += 1;
            Absorption::Absorbed {
                center: nearest.0,
                distance: nearest.1,
                phi,
            }
        } else {
            self.coords.extend_from_slice(p);
            self.weights.push(1);
            self.origins.push(origin);
            self.restore_capacity();
            Absorption::Opened { phi }
        };
        self.verify();
        outcome
    }

    fn verify(&self) {
        if self.checked {
            if let Err(e) = self.check_invariants() {
                panic!("doubling coreset invariant violated after {} points: {e}", self.points_seen);
            }
        }
    }

    /// Capacity, separation and weight conservation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.in_init {
            return Ok(());
        }
        if self.len() > self.tau {
            return Err(format!("{} centers exceed capacity {}", self.len(), self.tau));
        }
        let sep = F::of(4.0) * self.phi;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = dist(self.center(i), self.center(j));
                if d <= sep {
                    return Err(format!("centers {i} and {j} are {d} apart, need > {sep}"));
                }
            }
        }
        let total: u64 = self.weights.iter().sum();
        if total != self.points_seen {
            return Err(format!("weights sum to {total}, seen {}", self.points_seen));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub k: usize,
    pub z: usize,
    pub tau: usize,
    pub eps_hat: f64,
    /// Doubling dimension the capacity was derived from, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub doubling_dim: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

impl StreamConfig {
    pub fn new(k: usize, z: usize, tau: usize, eps_hat: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        if tau < k + z {
            return Err(Error::input(format!("tau = {tau} must be at least k + z = {}", k + z)));
        }
        if !(eps_hat >= 0.0 && eps_hat.is_finite()) {
            return Err(Error::input(format!("eps_hat = {eps_hat} must be >= 0")));
        }
        Ok(StreamConfig {
            k,
            z,
            tau,
            eps_hat,
            doubling_dim: None,
            mu: None,
        })
    }

    /// Capacity `ceil(mu * (k + z))`.
    pub fn with_mu(k: usize, z: usize, mu: f64, eps_hat: f64) -> Result<Self> {
        let tau = (mu * (k + z) as f64).ceil() as usize;
        let mut cfg = Self::new(k, z, tau, eps_hat)?;
        cfg.mu = Some(mu);
        Ok(cfg)
    }

    /// Capacity from [`choose_tau`].
    pub fn for_doubling_dim(k: usize, z: usize, eps_hat: f64, doubling_dim: f64) -> Result<Self> {
        let tau = choose_tau(k, z, eps_hat, doubling_dim)?;
        let mut cfg = Self::new(k, z, tau, eps_hat)?;
        cfg.doubling_dim = Some(doubling_dim);
        Ok(cfg)
    }

    fn params(&self) -> Params {
        Params {
            k: self.k,
            z: self.z,
            ell: None,
            eps: Some(self.eps_hat),
            tau: Some(self.tau),
            mu: self.mu,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamReport<F> {
    pub solution: ClusteringSolution<F>,
    /// The weighted set the final solve ran on.
    pub coreset: Coreset<F>,
    pub phi_final: F,
    /// Separation scale of the second pass, two-pass variant only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_hat: Option<F>,
    /// Wall-clock seconds of each pass over the data.
    pub pass_secs: Vec<f64>,
    pub finalize_secs: f64,
    /// Points per second of the coreset pass, data access excluded.
    pub throughput: f64,
}

fn check_order<F: Scalar>(s: &Dataset<F>, order: &[usize]) -> Result<()> {
    if order.is_empty() {
        return Err(Error::input("empty stream"));
    }
    if let Some(&i) = order.iter().find(|&&i| i >= s.len()) {
        return Err(Error::input(format!("stream index {i} out of range")));
    }
    Ok(())
}

fn doubling_pass<F: Scalar>(
    s: &Dataset<F>,
    order: &[usize],
    tau: usize,
) -> Result<(DoublingCoreset<F>, f64)> {
    let mut state = DoublingCoreset::new(tau)?;
    let start = Instant::now();
    for &i in order {
        state.push(s.point(i), i)?;
    }
    Ok((state, start.elapsed().as_secs_f64()))
}

fn throughput(n: usize, secs: f64) -> f64 {
    n as f64 / secs.max(1e-9)
}

/// One pass building the doubling coreset with capacity `cfg.tau`, then the
/// weighted outlier solve on it. `order` lists dataset indices in arrival
/// order.
pub fn stream_solve_outliers<F: Scalar>(
    s: &Dataset<F>,
    order: &[usize],
    cfg: &StreamConfig,
    seed: u64,
) -> Result<StreamReport<F>> {
    check_order(s, order)?;
    let (state, pass) = doubling_pass(s, order, cfg.tau)?;
    let start = Instant::now();
    let coreset = state.coreset();
    let sol = solve_weighted(&coreset, cfg.k, cfg.z as u64, F::of(cfg.eps_hat))?;
    let finalize_secs = start.elapsed().as_secs_f64();
    let solution = ClusteringSolution::score(
        s,
        Algorithm::OutliersStream,
        cfg.params(),
        seed,
        sol.center_origins,
    )?
    .with_r_tilde(sol.r_tilde);
    Ok(StreamReport {
        solution,
        coreset,
        phi_final: state.phi(),
        r_hat: None,
        pass_secs: vec![pass],
        finalize_secs,
        throughput: throughput(order.len(), pass),
    })
}

/// One pass with capacity `tau >= k`, then farthest-first traversal for `k`
/// centers over the coreset points (weights play no role in the k-center cost).
pub fn stream_kcenter_no_outliers<F: Scalar>(
    s: &Dataset<F>,
    order: &[usize],
    k: usize,
    tau: usize,
    seed: u64,
) -> Result<StreamReport<F>> {
    check_order(s, order)?;
    if k == 0 || tau < k {
        return Err(Error::input(format!("need 1 <= k <= tau, got k = {k}, tau = {tau}")));
    }
    let (state, pass) = doubling_pass(s, order, tau)?;
    let start = Instant::now();
    let coreset = state.coreset();
    let points = coreset.to_dataset()?;
    let trace = gmm(&points, k.min(points.len()), 0)?;
    let centers = trace
        .center_indices
        .iter()
        .map(|&c| coreset.items[c].origin_index)
        .collect();
    let finalize_secs = start.elapsed().as_secs_f64();
    let params = Params {
        k,
        z: 0,
        tau: Some(tau),
        ..Params::default()
    };
    let solution = ClusteringSolution::score(s, Algorithm::KcenterStream, params, seed, centers)?;
    Ok(StreamReport {
        solution,
        coreset,
        phi_final: state.phi(),
        r_hat: None,
        pass_secs: vec![pass],
        finalize_secs,
        throughput: throughput(order.len(), pass),
    })
}

/// Two passes without knowledge of the doubling dimension: a capacity-(k+z)
/// doubling pass bounds the optimum by `r_hat = 8 phi`; the second pass keeps
/// a maximal set of points pairwise farther than `(eps / 48) r_hat`, each
/// weighted by the points it stands in for; the weighted outlier solve then
/// runs with `eps_hat = eps / 6`.
pub fn two_pass_oblivious<F: Scalar>(
    s: &Dataset<F>,
    order: &[usize],
    k: usize,
    z: usize,
    eps: f64,
    seed: u64,
) -> Result<StreamReport<F>> {
    check_order(s, order)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::input(format!("eps = {eps} must lie in (0, 1]")));
    }
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let (first, pass1) = doubling_pass(s, order, k + z)?;
    let r_hat = F::of(8.0) * first.phi();
    let sep = F::of(eps / 48.0) * r_hat;

    let start = Instant::now();
    let dim = s.dim();
    let mut kept: Vec<F> = Vec::new();
    let mut weights: Vec<u64> = Vec::new();
    let mut origins: Vec<usize> = Vec::new();
    for &i in order {
        let p = s.point(i);
        let mut nearest = (usize::MAX, F::infinity());
        for (j, c) in kept.chunks_exact(dim).enumerate() {
            let d = dist(p, c);
            if d < nearest.1 {
                nearest = (j, d);
            }
        }
        if nearest.1 > sep {
            kept.extend_from_slice(p);
            weights.push(1);
            origins.push(i);
        } else {
            weights[nearest.0] += 1;
        }
    }
    let pass2 = start.elapsed().as_secs_f64();

    let coreset = Coreset {
        items: kept
            .chunks_exact(dim)
            .zip(weights.iter().zip(&origins))
            .map(|(c, (&weight, &origin_index))| WeightedPoint {
                point: Point::from_slice(c),
                weight,
                origin_index,
            })
            .collect(),
        source_size: order.len(),
    };
    let start = Instant::now();
    let sol = solve_weighted(&coreset, k, z as u64, F::of(eps / 6.0))?;
    let finalize_secs = start.elapsed().as_secs_f64();
    let params = Params {
        k,
        z,
        eps: Some(eps),
        ..Params::default()
    };
    let solution = ClusteringSolution::score(s, Algorithm::TwoPass, params, seed, sol.center_origins)?
        .with_r_tilde(sol.r_tilde);
    Ok(StreamReport {
        solution,
        coreset,
        phi_final: first.phi(),
        r_hat: Some(r_hat),
        pass_secs: vec![pass1, pass2],
        finalize_secs,
        throughput: throughput(order.len(), pass1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> Vec<[f64; 1]> {
        v.iter().map(|&x| [x]).collect()
    }

    fn init(tau: usize, v: &[f64]) -> DoublingCoreset<f64> {
        let p = pts(v);
        let first: Vec<(&[f64], usize)> = p.iter().enumerate().map(|(i, x)| (&x[..], i)).collect();
        DoublingCoreset::init(tau, &first).unwrap()
    }

    #[test]
    fn choose_tau_examples() {
        assert_eq!(choose_tau(2, 1, 1.0, 0.0).unwrap(), 3);
        assert_eq!(choose_tau(20, 200, 1.0, 1.0).unwrap(), 3520);
        assert_eq!(choose_tau(1, 0, 0.5, 2.0).unwrap(), 1024);
        assert!(choose_tau(1, 0, 0.001, 50.0).is_err());
        assert!(choose_tau(1, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn init_merges_to_one_center() {
        let s = init(2, &[0.0, 4.0, 10.0]);
        assert_eq!(s.phi(), 4.0);
        assert_eq!(s.len(), 1);
        assert_eq!(s.weights(), &[3]);
        assert_eq!(s.doublings(), 1);

        let s = init(2, &[0.0, 100.0, 200.0]);
        assert_eq!(s.phi(), 100.0);
        assert_eq!(s.weights(), &[3]);
        assert_eq!(s.coreset().items[0].point.coords(), &[0.0]);
    }

    #[test]
    fn init_with_identical_points() {
        let s = init(3, &[5.0; 4]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.weights(), &[4]);
        assert_eq!(s.phi(), 0.0);
        assert!(s.check_invariants().is_ok());
    }

    #[test]
    fn init_rejects_wrong_count() {
        let p = pts(&[0.0, 1.0]);
        let first: Vec<(&[f64], usize)> = p.iter().map(|x| (&x[..], 0)).collect();
        assert!(DoublingCoreset::init(2, &first).is_err());
    }

    #[test]
    fn update_absorbs_or_opens() {
        let mut s = init(2, &[0.0, 4.0, 10.0]);
        let a = s.push(&[1.0], 3).unwrap();
        assert_eq!(
            a,
            Absorption::Absorbed {
                center: 0,
                distance: 1.0,
                phi: 4.0
            }
        );
        assert_eq!(s.weights(), &[4]);

        let mut s = init(2, &[0.0, 4.0, 10.0]);
        assert_eq!(s.push(&[50.0], 3).unwrap(), Absorption::Opened { phi: 4.0 });
        assert_eq!(s.weights(), &[3, 1]);
        assert_eq!(s.phi(), 4.0);

        // an exact copy of a center only bumps its weight
        assert!(matches!(s.push(&[50.0], 4).unwrap(), Absorption::Absorbed { center: 1, .. }));
        assert_eq!(s.len(), 2);
        assert_eq!(s.weights(), &[3, 2]);
    }

    #[test]
    fn deferred_phi_after_duplicates() {
        let mut s = init(1, &[2.0, 2.0]);
        assert_eq!(s.phi(), 0.0);
        s.push(&[2.0], 2).unwrap();
        assert_eq!(s.phi(), 0.0);
        // a distinct point overflows capacity 1: phi = 3 / 2, doubled to 3
        assert!(matches!(s.push(&[5.0], 3).unwrap(), Absorption::Opened { .. }));
        assert_eq!(s.phi(), 3.0);
        assert_eq!(s.weights(), &[4]);
        assert!(s.check_invariants().is_ok());
    }

    #[test]
    fn push_buffers_then_initializes() {
        let mut s = DoublingCoreset::new(2).unwrap().with_checks(true);
        for (i, x) in [0.0, 4.0].iter().enumerate() {
            assert_eq!(s.push(&[*x], i).unwrap(), Absorption::Buffered);
            assert!(s.in_init());
        }
        s.push(&[10.0], 2).unwrap();
        assert!(!s.in_init());
        assert_eq!(s.phi(), 4.0);
        assert!(s.push(&[1.0, 2.0], 3).is_err());
    }

    #[test]
    fn stream_solve_small() {
        let s = Dataset::from_scalars(&[0.0, 1.0, 2.0, 100.0]).unwrap();
        let cfg = StreamConfig::new(1, 1, 3, 0.1).unwrap();
        let r = stream_solve_outliers(&s, &[0, 1, 2, 3], &cfg, 0).unwrap();
        assert!(r.solution.center_indices[0] <= 2);
        assert!(r.solution.radius <= 3.6);

        let same = Dataset::from_scalars(&[1.5; 30]).unwrap();
        let order: Vec<usize> = (0..30).collect();
        let r = stream_solve_outliers(&same, &order, &cfg, 0).unwrap();
        assert_eq!(r.coreset.len(), 1);
        assert_eq!(r.coreset.items[0].weight, 30);
        assert_eq!(r.solution.radius, 0.0);
    }

    #[test]
    fn kcenter_stream_large_capacity_equals_gmm() {
        let v = [0.0, 1.0, 2.0, 9.0, 10.0];
        let s = Dataset::from_scalars(&v).unwrap();
        let order: Vec<usize> = (0..5).collect();
        let r = stream_kcenter_no_outliers(&s, &order, 2, 5, 0).unwrap();
        assert_eq!(r.coreset.len(), 5);
        assert_eq!(r.solution.center_indices, gmm(&s, 2, 0).unwrap().center_indices);
    }

    #[test]
    fn two_pass_identical_points() {
        let s = Dataset::from_scalars(&[3.0; 10]).unwrap();
        let order: Vec<usize> = (0..10).collect();
        let r = two_pass_oblivious(&s, &order, 1, 1, 0.5, 0).unwrap();
        assert_eq!(r.solution.radius, 0.0);
        assert_eq!(r.r_hat, Some(0.0));
        assert_eq!(r.coreset.total_weight(), 10);
    }

    #[test]
    fn config_validation() {
        assert!(StreamConfig::new(2, 2, 3, 0.1).is_err());
        assert!(StreamConfig::new(0, 2, 3, 0.1).is_err());
        assert_eq!(StreamConfig::with_mu(2, 2, 4.0, 0.1).unwrap().tau, 16);
        assert_eq!(StreamConfig::for_doubling_dim(20, 200, 1.0, 1.0).unwrap().tau, 3520);
    }
}
