//! Farthest-first traversal (GMM) with fixed-size and adaptive stopping, and
//! extraction of weighted coresets through the proxy (nearest-center) map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{dist, Dataset, Point};
use crate::scalar::Scalar;

/// The state of a farthest-first traversal after its last selected center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmTrace<F> {
    /// Selected points, in selection order.
    pub center_indices: Vec<usize>,
    /// `radii[j]` is the radius of the dataset with respect to the first
    /// `j + 1` centers.
    pub radii: Vec<F>,
    /// For every point, the position in `center_indices` of its closest
    /// center (earliest selected among ties).
    pub assignment: Vec<usize>,
}

impl<F: Scalar> GmmTrace<F> {
    pub fn len(&self) -> usize {
        self.center_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.center_indices.is_empty()
    }

    /// Radius achieved by the full trace.
    pub fn radius(&self) -> F {
        *self.radii.last().expect("a trace has at least one center")
    }
}

/// Incremental traversal: one pass over the data per added center.
struct Traversal<'a, F> {
    data: &'a Dataset<F>,
    min_dist: Vec<F>,
    selected: Vec<bool>,
    trace: GmmTrace<F>,
    farthest: usize,
}

impl<'a, F: Scalar> Traversal<'a, F> {
    fn start(data: &'a Dataset<F>, first: usize) -> Self {
        let n = data.len();
        let mut t = Traversal {
            data,
            min_dist: vec![F::infinity(); n],
            selected: vec![false; n],
            trace: GmmTrace {
                center_indices: Vec::new(),
                radii: Vec::new(),
                assignment: vec![0; n],
            },
            farthest: first,
        };
        t.add(first);
        t
    }

    fn add(&mut self, c: usize) {
        let pos = self.trace.center_indices.len();
        self.trace.center_indices.push(c);
        self.selected[c] = true;
        let center = self.data.point(c);
        // Argmax over unselected points only, so duplicates in the data can
        // still be picked once every distinct location is a center.
        let mut best: Option<(usize, F)> = None;
        let mut radius = F::zero();
        for (i, p) in self.data.iter().enumerate() {
            let d = dist(p, center);
            if d < self.min_dist[i] {
                self.min_dist[i] = d;
                self.trace.assignment[i] = pos;
            }
            let m = self.min_dist[i];
            if m > radius {
                radius = m;
            }
            if !self.selected[i] && best.is_none_or(|(_, bd)| m > bd) {
                best = Some((i, m));
            }
        }
        // A center is always its own proxy, even when it duplicates an
        // earlier one.
        self.trace.assignment[c] = pos;
        self.trace.radii.push(radius);
        if let Some((i, _)) = best {
            self.farthest = i;
        }
    }

    fn exhausted(&self) -> bool {
        self.trace.center_indices.len() == self.data.len()
    }

    fn step(&mut self) {
        debug_assert!(!self.exhausted());
        self.add(self.farthest);
    }
}

fn check_first(x: &Dataset<impl Scalar>, first_center: usize) -> Result<()> {
    if first_center >= x.len() {
        return Err(Error::input(format!(
            "first center {first_center} out of range for {} points",
            x.len()
        )));
    }
    Ok(())
}

/// Runs farthest-first traversal for exactly `tau` centers.
pub fn gmm<F: Scalar>(x: &Dataset<F>, tau: usize, first_center: usize) -> Result<GmmTrace<F>> {
    if tau == 0 || tau > x.len() {
        return Err(Error::input(format!(
            "tau = {tau} must lie in [1, {}]",
            x.len()
        )));
    }
    check_first(x, first_center)?;
    let mut t = Traversal::start(x, first_center);
    while t.trace.len() < tau {
        t.step();
    }
    Ok(t.trace)
}

/// Runs farthest-first traversal until the first `tau >= base` whose radius is
/// at most `eps_hat / 2` times the radius reached with `base` centers.
///
/// Reaching every point of `x` always satisfies the rule (radius 0), so the
/// traversal never fails to stop.
pub fn gmm_adaptive<F: Scalar>(
    x: &Dataset<F>,
    base: usize,
    eps_hat: F,
    first_center: usize,
) -> Result<GmmTrace<F>> {
    if base == 0 || base > x.len() {
        return Err(Error::input(format!(
            "base = {base} must lie in [1, {}]",
            x.len()
        )));
    }
    if !(eps_hat > F::zero() && eps_hat <= F::one()) {
        return Err(Error::input(format!("eps_hat = {eps_hat} must lie in (0, 1]")));
    }
    check_first(x, first_center)?;
    let mut t = Traversal::start(x, first_center);
    while t.trace.len() < base {
        t.step();
    }
    let target = eps_hat / F::of(2.0) * t.trace.radius();
    while t.trace.radius() > target && !t.exhausted() {
        t.step();
    }
    Ok(t.trace)
}

/// A coreset point standing in for `weight` points of its source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint<F> {
    pub point: Point<F>,
    pub weight: u64,
    pub origin_index: usize,
}

/// Weighted summary of a set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coreset<F> {
    pub items: Vec<WeightedPoint<F>>,
    /// Number of points summarized; equals the total weight.
    pub source_size: usize,
}

impl<F: Scalar> Coreset<F> {
    /// Every point of `s` with weight one.
    pub fn unit(s: &Dataset<F>) -> Self {
        Coreset {
            items: (0..s.len())
                .map(|i| WeightedPoint {
                    point: s.to_point(i),
                    weight: 1,
                    origin_index: i,
                })
                .collect(),
            source_size: s.len(),
        }
    }

    /// Concatenates coresets in the given order.
    pub fn union(parts: impl IntoIterator<Item = Coreset<F>>) -> Self {
        let mut out = Coreset {
            items: Vec::new(),
            source_size: 0,
        };
        for part in parts {
            out.items.extend(part.items);
            out.source_size += part.source_size;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|w| w.weight).sum()
    }

    /// Rewrites origin indices, e.g. from partition-local to global indices.
    pub fn map_origins(mut self, f: impl Fn(usize) -> usize) -> Self {
        for item in &mut self.items {
            item.origin_index = f(item.origin_index);
        }
        self
    }

    pub fn origins(&self) -> Vec<usize> {
        self.items.iter().map(|w| w.origin_index).collect()
    }

    /// The coreset points as a dataset, in coreset order.
    pub fn to_dataset(&self) -> Result<Dataset<F>> {
        Dataset::from_rows(
            &self
                .items
                .iter()
                .map(|w| w.point.coords())
                .collect::<Vec<_>>(),
        )
    }
}

/// One weighted point per center of `trace`, weighted by the number of
/// points of `x` whose closest center it is.
pub fn build_weighted_coreset<F: Scalar>(x: &Dataset<F>, trace: &GmmTrace<F>) -> Coreset<F> {
    debug_assert_eq!(trace.assignment.len(), x.len());
    let mut weights = vec![0u64; trace.len()];
    for &a in &trace.assignment {
        weights[a] += 1;
    }
    Coreset {
        items: trace
            .center_indices
            .iter()
            .zip(weights)
            .map(|(&c, weight)| WeightedPoint {
                point: x.to_point(c),
                weight,
                origin_index: c,
            })
            .collect(),
        source_size: x.len(),
    }
}
