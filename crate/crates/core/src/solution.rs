use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metric::{radius_with_outliers, Dataset, Point};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    KcenterMr,
    OutliersMrDet,
    OutliersMrRand,
    OutliersStream,
    KcenterStream,
    TwoPass,
    Sequential,
    Charikar,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::KcenterMr,
        Algorithm::OutliersMrDet,
        Algorithm::OutliersMrRand,
        Algorithm::OutliersStream,
        Algorithm::KcenterStream,
        Algorithm::TwoPass,
        Algorithm::Sequential,
        Algorithm::Charikar,
        Algorithm::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KcenterMr => "kcenter-mr",
            Algorithm::OutliersMrDet => "outliers-mr-det",
            Algorithm::OutliersMrRand => "outliers-mr-rand",
            Algorithm::OutliersStream => "outliers-stream",
            Algorithm::KcenterStream => "kcenter-stream",
            Algorithm::TwoPass => "two-pass",
            Algorithm::Sequential => "sequential",
            Algorithm::Charikar => "charikar",
            Algorithm::BruteForce => "brute-force",
        }
    }

    /// Whether the algorithm discards `z` outliers.
    pub fn handles_outliers(self) -> bool {
        !matches!(self, Algorithm::KcenterMr | Algorithm::KcenterStream)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Parameters a solution was produced with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub k: usize,
    pub z: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Precision: eps for plain k-center, eps_hat for the outlier variants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Explicit coreset size or stream capacity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

/// Centers chosen by some algorithm, scored against the full dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSolution<F> {
    pub algorithm: Algorithm,
    pub params: Params,
    pub seed: u64,
    /// Indices of the centers in the input dataset.
    pub center_indices: Vec<usize>,
    pub centers: Vec<Point<F>>,
    /// Radius after discarding the `z` farthest points.
    pub radius: F,
    pub z: usize,
    /// Radius the weighted search settled on, when one ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_tilde: Option<F>,
}

impl<F: Scalar> ClusteringSolution<F> {
    /// Scores `center_indices` on `s` from scratch.
    pub fn score(
        s: &Dataset<F>,
        algorithm: Algorithm,
        params: Params,
        seed: u64,
        center_indices: Vec<usize>,
    ) -> Result<Self> {
        let z = params.z;
        let report = radius_with_outliers(s, &center_indices, z)?;
        Ok(ClusteringSolution {
            algorithm,
            params,
            seed,
            centers: center_indices.iter().map(|&i| s.to_point(i)).collect(),
            center_indices,
            radius: report.radius,
            z,
            r_tilde: None,
        })
    }

    pub fn with_r_tilde(mut self, r: F) -> Self {
        self.r_tilde = Some(r);
        self
    }
}
