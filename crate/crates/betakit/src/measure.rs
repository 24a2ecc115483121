//! Discrete measures, balls, and the mass queries everything else builds on.
//!
//! A [`DiscreteMeasure`] is a finite weighted point cloud in `R^d`. Balls are
//! closed; membership on the boundary counts.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spatial::SpatialIndex;

/// Finite atomic measure: points with nonnegative weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(dim: usize, points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight(i));
            }
        }
        Ok(Self { dim, points, weights })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, points: Vec::new(), weights: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Axis-aligned bounding box as (min corner, max corner). `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = self.points[0].clone();
        let mut hi = self.points[0].clone();
        for p in &self.points {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        Some((lo, hi))
    }

    /// Smallest pairwise distance between distinct atoms, by brute force.
    /// Intended for diagnostics on modest point counts.
    pub fn min_separation(&self) -> Option<f64> {
        let m = self.len();
        if m < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..m {
            for j in (i + 1)..m {
                let d = dist(&self.points[i], &self.points[j]);
                if d > 0.0 && d < best {
                    best = d;
                }
            }
        }
        best.is_finite().then_some(best)
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Closed ball: membership is `|y - center| <= radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite ball center".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        dist(&self.center, p) <= self.radius
    }

    /// Concentric ball with radius scaled by `k`.
    pub fn scaled(&self, k: f64) -> Ball {
        Ball { center: self.center.clone(), radius: self.radius * k }
    }
}

/// Total weight of the atoms in the closed ball. Exact.
pub fn mass(measure: &DiscreteMeasure, index: &SpatialIndex, ball: &Ball) -> f64 {
    index
        .ball_indices(&ball.center, ball.radius)
        .iter()
        .map(|&i| measure.weight(i))
        .sum()
}

/// Sub-measure of the atoms in the closed ball, in original index order.
pub fn restrict(measure: &DiscreteMeasure, index: &SpatialIndex, ball: &Ball) -> DiscreteMeasure {
    let ids = index.ball_indices(&ball.center, ball.radius);
    let points = ids.iter().map(|&i| measure.point(i).to_vec()).collect();
    let weights = ids.iter().map(|&i| measure.weight(i)).collect();
    DiscreteMeasure { dim: measure.dim, points, weights }
}

/// Grid maximal function: max over the radius grid of `mu(B(x,r)) / r^n`.
///
/// A lower bound for the true supremum over all radii; exact on the grid.
pub fn maximal_function(
    measure: &DiscreteMeasure,
    index: &SpatialIndex,
    x: &[f64],
    n: usize,
    radius_grid: &[f64],
) -> Result<f64> {
    if radius_grid.is_empty() {
        return Err(Error::EmptyScaleGrid);
    }
    let mut best = 0.0f64;
    for &r in radius_grid {
        let b = Ball { center: x.to_vec(), radius: r };
        let v = mass(measure, index, &b) / r.powi(n as i32);
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// CSV with header `x1,...,xd,w`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
        header.push("w".into());
        wtr.write_record(&header)?;
        for (p, wt) in self.points.iter().zip(&self.weights) {
            let mut rec: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
            rec.push(format!("{wt}"));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || &headers[headers.len() - 1] != "w" {
            return Err(Error::InvalidParameter(
                "expected CSV header x1,...,xd,w".into(),
            ));
        }
        let dim = headers.len() - 1;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != dim + 1 {
                return Err(Error::InvalidParameter(format!(
                    "CSV row has {} fields, expected {}",
                    rec.len(),
                    dim + 1
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad number {s:?}")))
            };
            let mut p = Vec::with_capacity(dim);
            for k in 0..dim {
                p.push(parse(&rec[k])?);
            }
            points.push(p);
            weights.push(parse(&rec[dim])?);
        }
        Self::new(dim, points, weights)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        let j = MeasureJson {
            dim: self.dim,
            points: self.points.clone(),
            weights: self.weights.clone(),
        };
        serde_json::to_writer(w, &j)?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        let j: MeasureJson = serde_json::from_reader(r)?;
        Self::new(j.dim, j.points, j.weights)
    }

    /// Load from a path, dispatching on extension (`.csv` or `.json`).
    pub fn read_path(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::read_json(f),
            _ => Self::read_csv(f),
        }
    }
}
