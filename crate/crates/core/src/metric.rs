//! Points, datasets, Euclidean distance and the radius functionals every
//! algorithm in the crate is scored with.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An owned point with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<F> {
    coords: Vec<F>,
}

impl<F: Scalar> Point<F> {
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("point must have at least one coordinate"));
        }
        if let Some(j) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!("coordinate {j} is not finite")));
        }
        Ok(Point { coords })
    }

    pub(crate) fn from_slice(coords: &[F]) -> Self {
        Point { coords: coords.to_vec() }
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<F> AsRef<[F]> for Point<F> {
    fn as_ref(&self) -> &[F] {
        &self.coords
    }
}

/// An immutable, non-empty collection of points sharing one dimension.
///
/// Coordinates are stored row-major in a single buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Scalar> Dataset<F> {
    /// Builds a dataset from row-major coordinates.
    pub fn from_flat(dim: usize, data: Vec<F>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        if data.is_empty() {
            return Err(Error::input("dataset is empty"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::input(format!(
                "{} coordinates do not split into rows of dimension {dim}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "point {} has a non-finite coordinate",
                pos / dim
            )));
        }
        Ok(Dataset { dim, data })
    }

    pub fn from_rows<R: AsRef<[F]>>(rows: &[R]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::input("dataset is empty"))?;
        let dim = first.as_ref().len();
        let mut data = Vec::with_capacity(dim * rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::input(format!(
                    "point {i} has dimension {}, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(dim, data)
    }

    /// One-dimensional dataset, handy for small hand-checked instances.
    pub fn from_scalars(values: &[F]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_point(&self, i: usize) -> Point<F> {
        Point::from_slice(self.point(i))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[F]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[F] {
        &self.data
    }

    /// Copies the listed points, in the listed order, into a new dataset.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::input(format!("index {i} out of range")));
            }
            data.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, data)
    }

    pub(crate) fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.is_empty() {
            return Err(Error::input("center set is empty"));
        }
        match indices.iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::input(format!(
                "center index {i} out of range for {} points",
                self.len()
            ))),
            None => Ok(()),
        }
    }
}

/// Euclidean distance between two coordinate slices of equal length.
///
/// Every distance in the crate goes through this function.
#[inline]
pub fn dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        acc = acc + d * d;
    }
    acc.sqrt()
}

/// Checked Euclidean distance between two points.
pub fn distance<F: Scalar>(a: &Point<F>, b: &Point<F>) -> Result<F> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(dist(a.coords(), b.coords()))
}

/// Result of evaluating a center set against a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport<F> {
    pub radius: F,
    /// Point attaining the radius (lowest index among ties).
    pub witness_index: usize,
    /// Points discarded as outliers, ascending.
    pub excluded_indices: Vec<usize>,
}

/// Distance from every point of `s` to its closest center in `centers`.
pub fn distances_to_centers<F: Scalar>(s: &Dataset<F>, centers: &[usize]) -> Vec<F> {
    s.iter()
        .map(|p| {
            centers
                .iter()
                .map(|&c| dist(p, s.point(c)))
                .fold(F::infinity(), F::min)
        })
        .collect()
}

/// Orders points farthest-first, lower index first among equal distances.
fn farther_first<F: Scalar>(d: &[F], a: usize, b: usize) -> Ordering {
    d[b].partial_cmp(&d[a])
        .expect("distances are finite")
        .then(a.cmp(&b))
}

/// Radius of `s` with respect to the centers `t` (indices into `s`).
pub fn radius<F: Scalar>(s: &Dataset<F>, t: &[usize]) -> Result<RadiusReport<F>> {
    radius_with_outliers(s, t, 0)
}

/// Radius of `s` with respect to `t` after discarding the `z` points farthest
/// from `t`. Ties in distance are resolved by discarding lower indices first.
pub fn radius_with_outliers<F: Scalar>(
    s: &Dataset<F>,
    t: &[usize],
    z: usize,
) -> Result<RadiusReport<F>> {
    s.check_indices(t)?;
    if z >= s.len() {
        return Err(Error::input(format!(
            "z = {z} outliers leaves no point of {} to cover",
            s.len()
        )));
    }
    let d = distances_to_centers(s, t);
    Ok(report_from_distances(&d, z))
}

pub(crate) fn report_from_distances<F: Scalar>(d: &[F], z: usize) -> RadiusReport<F> {
    debug_assert!(z < d.len());
    if z == 0 {
        let witness = (0..d.len())
            .min_by(|&a, &b| farther_first(d, a, b))
            .expect("non-empty");
        return RadiusReport {
            radius: d[witness],
            witness_index: witness,
            excluded_indices: Vec::new(),
        };
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.select_nth_unstable_by(z, |&a, &b| farther_first(d, a, b));
    let witness = order[z];
    let mut excluded = order[..z].to_vec();
    excluded.sort_unstable();
    RadiusReport {
        radius: d[witness],
        witness_index: witness,
        excluded_indices: excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[f64]) -> Dataset<f64> {
        Dataset::from_scalars(v).unwrap()
    }

    #[test]
    fn distance_examples() {
        let p = |c: Vec<f64>| Point::new(c).unwrap();
        assert_eq!(distance(&p(vec![1.0, 2.0]), &p(vec![1.0, 2.0])).unwrap(), 0.0);
        assert_eq!(distance(&p(vec![0.0, 0.0]), &p(vec![3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(distance(&p(vec![0.0]), &p(vec![7.0])).unwrap(), 7.0);
        assert!(matches!(
            distance(&p(vec![0.0]), &p(vec![1.0, 2.0])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn radius_examples() {
        let s = line(&[0.0, 1.0, 2.0, 9.0, 10.0]);
        let r = radius(&s, &[1, 3]).unwrap();
        assert_eq!(r.radius, 1.0);
        assert!([0, 2, 4].contains(&r.witness_index));
        assert!(r.excluded_indices.is_empty());
        assert_eq!(radius(&s, &[0, 1, 2, 3, 4]).unwrap().radius, 0.0);
        assert_eq!(radius(&s, &[0]).unwrap().radius, 10.0);
        assert!(matches!(radius(&s, &[]), Err(Error::Input(_))));
        assert!(matches!(radius(&s, &[5]), Err(Error::Input(_))));
    }

    #[test]
    fn radius_with_outliers_examples() {
        let s = line(&[0.0, 1.0, 2.0, 100.0]);
        let r = radius_with_outliers(&s, &[1], 1).unwrap();
        assert_eq!(r.radius, 1.0);
        assert_eq!(r.excluded_indices, vec![3]);
        assert_ne!(r.witness_index, 3);

        let r = radius_with_outliers(&s, &[3], 3).unwrap();
        assert_eq!(r.radius, 0.0);
        assert_eq!(r.excluded_indices, vec![0, 1, 2]);
        assert_eq!(r.witness_index, 3);

        assert_eq!(
            radius_with_outliers(&s, &[0], 0).unwrap(),
            radius(&s, &[0]).unwrap()
        );
        assert!(matches!(
            radius_with_outliers(&s, &[0], 4),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn outlier_ties_discard_lower_index() {
        // points 0 and 2 are both at distance 1 from the center
        let s = line(&[-1.0, 0.0, 1.0]);
        let r = radius_with_outliers(&s, &[1], 1).unwrap();
        assert_eq!(r.excluded_indices, vec![0]);
        assert_eq!(r.witness_index, 2);
        assert_eq!(r.radius, 1.0);
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::<f64>::from_flat(2, vec![]).is_err());
        assert!(Dataset::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(Dataset::from_flat(1, vec![1.0, f64::NAN]).is_err());
        assert!(Dataset::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        let d = Dataset::from_rows(&[vec![1.0f32, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.point(1), &[3.0, 4.0]);
    }
}
