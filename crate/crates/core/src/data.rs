//! Dataset ingestion and the synthetic-data protocols: outlier injection
//! around an enclosing ball, noisy inflation, and seeded shuffling.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{dist, Dataset, Point};
use crate::rng::{rng_for, Substream};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub skip_header: bool,
    /// Keep only these columns, in this order.
    pub columns: Option<Vec<usize>>,
}

/// Parses a numeric table. Fields are separated by commas or whitespace;
/// blank lines and lines starting with `#` are ignored.
pub fn parse_dataset<F: Scalar>(text: &str, opts: &LoadOptions) -> Result<Dataset<F>> {
    let mut dim: Option<usize> = None;
    let mut data: Vec<F> = Vec::new();
    let mut skipped_header = !opts.skip_header;
    for (lineno, line) in text.lines().enumerate() {
        let row = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !skipped_header {
            skipped_header = true;
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let mut values = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::input(format!("row {row}: `{f}` is not a number")))?;
            if !v.is_finite() {
                return Err(Error::input(format!("row {row}: `{f}` is not finite")));
            }
            values.push(v);
        }
        let selected: Vec<f64> = match &opts.columns {
            Some(cols) => cols
                .iter()
                .map(|&c| {
                    values.get(c).copied().ok_or_else(|| {
                        Error::input(format!("row {row}: column {c} missing ({} fields)", values.len()))
                    })
                })
                .collect::<Result<_>>()?,
            None => values,
        };
        match dim {
            None => dim = Some(selected.len()),
            Some(d) if d != selected.len() => {
                return Err(Error::input(format!(
                    "row {row}: {} fields, expected {d}",
                    selected.len()
                )))
            }
            _ => {}
        }
        data.extend(selected.into_iter().map(F::of));
    }
    let dim = dim.ok_or_else(|| Error::input("no data rows"))?;
    Dataset::from_flat(dim, data)
}

pub fn load_dataset<F: Scalar>(path: &Path, opts: &LoadOptions) -> Result<Dataset<F>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    parse_dataset(&text, opts)
}

/// Writes one comma-separated row per point with shortest round-trip
/// formatting.
pub fn write_dataset<F: Scalar>(path: &Path, s: &Dataset<F>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for p in s.iter() {
        let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MebMethod {
    /// Center at the coordinate-wise mean; radius is the largest distance
    /// from it. Every point lies inside (tolerance 0) and the radius is at
    /// most twice the true minimum.
    MeanCentered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MebEstimate<F> {
    pub center: Point<F>,
    pub radius: F,
    pub method: MebMethod,
}

pub fn approx_meb<F: Scalar>(s: &Dataset<F>) -> MebEstimate<F> {
    let n = F::of(s.len() as f64);
    let mut mean = vec![F::zero(); s.dim()];
    for p in s.iter() {
        for (m, &c) in mean.iter_mut().zip(p) {
            *m = *m + c;
        }
    }
    for m in &mut mean {
        *m = *m / n;
    }
    let radius = s.iter().map(|p| dist(p, &mean)).fold(F::zero(), F::max);
    MebEstimate {
        center: Point::from_slice(&mean),
        radius,
        method: MebMethod::MeanCentered,
    }
}

const INJECTION_ATTEMPTS: usize = 100_000;

/// Appends `z` points at distance `100 r` from the enclosing-ball center `c`
/// along random directions, each at least `10 r` from the others injected.
/// Returns the augmented dataset and the indices of the injected points.
pub fn inject_outliers<F: Scalar>(s: &Dataset<F>, z: usize, seed: u64) -> Result<(Dataset<F>, Vec<usize>)> {
    if z == 0 {
        return Err(Error::input("z must be at least 1"));
    }
    let meb = approx_meb(s);
    if meb.radius <= F::zero() {
        return Err(Error::input("dataset has zero extent; cannot scale outliers"));
    }
    let d = s.dim();
    if d == 1 && z > 2 {
        return Err(Error::input("a 1-d dataset admits at most 2 separated outliers"));
    }
    let r = meb.radius;
    let far = F::of(100.0) * r;
    let sep = F::of(10.0) * r;
    let mut rng = rng_for(seed, Substream::Injection);
    let mut injected: Vec<Vec<F>> = Vec::with_capacity(z);
    let mut attempts = 0usize;
    while injected.len() < z {
        attempts += 1;
        if attempts > INJECTION_ATTEMPTS * z {
            return Err(Error::input(format!(
                "could not place {z} outliers {sep} apart in dimension {d}"
            )));
        }
        let dir: Vec<F> = (0..d)
            .map(|_| F::of(StandardNormal.sample(&mut rng)))
            .collect();
        let norm = dir.iter().map(|&x| x * x).sum::<F>().sqrt();
        if norm == F::zero() {
            continue;
        }
        let cand: Vec<F> = meb
            .center
            .coords()
            .iter()
            .zip(&dir)
            .map(|(&c, &u)| c + far * u / norm)
            .collect();
        if injected.iter().all(|q| dist(q, &cand) >= sep) {
            injected.push(cand);
        }
    }

    let floor = F::of(99.0) * r;
    for q in &injected {
        if let Some(i) = (0..s.len()).find(|&i| dist(s.point(i), q) < floor) {
            return Err(Error::Internal(format!(
                "injected point within 99 r_MEB of point {i}"
            )));
        }
    }
    let n = s.len();
    let mut data = s.as_flat().to_vec();
    for q in &injected {
        data.extend_from_slice(q);
    }
    Ok((Dataset::from_flat(d, data)?, (n..n + z).collect()))
}

/// `h * |S|` points, each a uniformly drawn input point plus Gaussian noise
/// whose per-coordinate deviation is a tenth of that coordinate's range.
pub fn inflate<F: Scalar>(s: &Dataset<F>, h: usize, seed: u64) -> Result<Dataset<F>> {
    inflate_traced(s, h, seed).map(|(out, _)| out)
}

/// [`inflate`], also returning the source index of every generated point.
pub fn inflate_traced<F: Scalar>(s: &Dataset<F>, h: usize, seed: u64) -> Result<(Dataset<F>, Vec<usize>)> {
    if h == 0 {
        return Err(Error::input("inflation factor must be at least 1"));
    }
    let d = s.dim();
    let mut lo = vec![F::infinity(); d];
    let mut hi = vec![F::neg_infinity(); d];
    for p in s.iter() {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let noise: Vec<Option<Normal<f64>>> = (0..d)
        .map(|j| {
            let sigma = 0.1 * (hi[j] - lo[j]).as_f64();
            (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("finite sigma"))
        })
        .collect();
    let mut rng = rng_for(seed, Substream::Inflation);
    let total = h * s.len();
    let mut data = Vec::with_capacity(total * d);
    let mut sources = Vec::with_capacity(total);
    for _ in 0..total {
        let i = rng.random_range(0..s.len());
        let src = s.point(i);
        for j in 0..d {
            let delta = noise[j].as_ref().map_or(0.0, |n| n.sample(&mut rng));
            data.push(src[j] + F::of(delta));
        }
        sources.push(i);
    }
    Ok((Dataset::from_flat(d, data)?, sources))
}

/// Seeded uniform permutation of `0..n`.
pub fn shuffled_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_for(seed, Substream::Shuffle));
    order
}
