//! Jones square functions and Carleson-type packing sums.
//!
//! A [`JonesProfile`] discretizes `\int beta(x,r)^2 dr/r` (or the alpha
//! analogue) over a geometric [`ScaleGrid`]; the Carleson sums aggregate
//! per-cube coefficients over the decomposition hierarchies.

use serde::{Deserialize, Serialize};

use crate::decomp::gamma::GammaHierarchy;
use crate::decomp::stopping::{CubeLabel, StoppedTree};
use crate::dyadic::{cube_atoms, DyadicCube};
use crate::error::{Error, Result};
use crate::fit::{beta_ball, Normalization};
use crate::measure::{Ball, DiscreteMeasure};
use crate::spatial::SpatialIndex;
use crate::transport::{alpha, AlphaConfig};

/// Geometric radius grid `r_j = r_max * ratio^j`, truncated at `r_min`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub r_max: f64,
    pub r_min: f64,
    pub ratio: f64,
}

impl ScaleGrid {
    pub fn new(r_max: f64, r_min: f64, ratio: f64) -> Result<Self> {
        if !(r_max.is_finite() && r_min.is_finite() && r_max > 0.0 && r_min > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale grid needs positive finite radii, got r_max={r_max} r_min={r_min}"
            )));
        }
        if r_min > r_max {
            return Err(Error::InvalidParameter(format!(
                "scale grid needs r_min <= r_max, got r_min={r_min} > r_max={r_max}"
            )));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "scale grid ratio must lie in (0,1), got {ratio}"
            )));
        }
        Ok(Self { r_max, r_min, ratio })
    }

    /// Dyadic grid `r_max, r_max/2, ..., >= r_min`.
    pub fn dyadic(r_max: f64, r_min: f64) -> Result<Self> {
        Self::new(r_max, r_min, 0.5)
    }

    /// Strictly decreasing radii; the last one is the first `r_j < r_min`
    /// away, i.e. all `r_j >= r_min` up to roundoff.
    pub fn radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = self.r_max;
        while r >= self.r_min * (1.0 - 1e-12) {
            out.push(r);
            r *= self.ratio;
        }
        if out.is_empty() {
            out.push(self.r_max);
        }
        out
    }

    /// Riemann weight for `dr/r` per grid step: `ln(1/ratio)`.
    pub fn step_weight(&self) -> f64 {
        (1.0 / self.ratio).ln()
    }

    pub fn len(&self) -> usize {
        self.radii().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Beta,
    Alpha,
}

/// One scale of a profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub r: f64,
    pub value: f64,
    /// `S_k = sum_{j<=k} value_j^2 * ln(1/ratio)`.
    pub partial_sum: f64,
    /// Why this scale contributed 0, when it did not evaluate cleanly.
    pub flag: Option<String>,
}

/// Discrete Jones square function at a point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JonesProfile {
    pub x: Vec<f64>,
    pub kind: CoefficientKind,
    pub p: f64,
    pub records: Vec<ScaleRecord>,
}

impl JonesProfile {
    pub fn last_sum(&self) -> f64 {
        self.records.last().map_or(0.0, |rec| rec.partial_sum)
    }

    /// `(S_last - S_{last/2}) / S_last`; 0 for an identically zero profile.
    pub fn tail_fraction(&self) -> f64 {
        let last = self.last_sum();
        if last <= 0.0 {
            return 0.0;
        }
        let mid = self.records[self.records.len() / 2].partial_sum;
        (last - mid) / last
    }
}

/// Evaluate the chosen coefficient at `(x, r_j)` over the grid and
/// accumulate the square sum. Per-scale failures are flagged and count 0.
pub fn jones_function(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    x: &[f64],
    n: usize,
    p: f64,
    grid: &ScaleGrid,
    kind: CoefficientKind,
    alpha_config: &AlphaConfig,
) -> Result<JonesProfile> {
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: x.len() });
    }
    let w = grid.step_weight();
    let mut records = Vec::new();
    let mut sum = 0.0;
    for r in grid.radii() {
        let ball = Ball::new(x.to_vec(), r)?;
        let (value, flag) = match kind {
            CoefficientKind::Beta => match beta_ball(mu, index, &ball, n, p) {
                Ok(rec) => (rec.value, None),
                Err(e) => (0.0, Some(e.to_string())),
            },
            CoefficientKind::Alpha => match alpha(mu, index, &ball, n, alpha_config) {
                Ok(rec) => (rec.value, None),
                Err(e) => (0.0, Some(e.to_string())),
            },
        };
        sum += value * value * w;
        records.push(ScaleRecord { r, value, partial_sum: sum, flag });
    }
    Ok(JonesProfile { x: x.to_vec(), kind, p, records })
}

/// One cube's contribution to a Carleson sum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlesonTerm {
    pub level: i32,
    pub index: Vec<i64>,
    /// The coefficient (alpha of `B_Q`, or the cube beta).
    pub coefficient: f64,
    /// The packing weight (`l(Q)^n` or `mu(Q)`).
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CarlesonSum {
    pub total: f64,
    pub terms: Vec<CarlesonTerm>,
}

/// `sum over good graph cubes under root of alpha(B_Q)^2 l(Q)^n`.
pub fn carleson_sum_alpha(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    hierarchy: &GammaHierarchy,
    root: &DyadicCube,
    n: usize,
    config: &AlphaConfig,
) -> Result<CarlesonSum> {
    let mut terms = Vec::new();
    let mut total = 0.0;
    for cube in hierarchy.under(root) {
        if !cube.good {
            continue;
        }
        let rec = alpha(mu, index, &cube.b_q, n, config)?;
        let weight = cube.side.powi(n as i32);
        total += rec.value * rec.value * weight;
        terms.push(CarlesonTerm {
            level: cube.param.level,
            index: cube.param.index.clone(),
            coefficient: rec.value,
            weight,
        });
    }
    Ok(CarlesonSum { total, terms })
}

/// `sum over good cubes of the stopped tree of beta_{mu,2}(Q)^2 mu(Q)`,
/// with the side-length normalization of the cube beta.
pub fn carleson_sum_beta(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    tree: &StoppedTree,
) -> Result<CarlesonSum> {
    let mut terms = Vec::new();
    let mut total = 0.0;
    for cube in &tree.cubes {
        if cube.label != CubeLabel::Good {
            continue;
        }
        let rec = crate::fit::beta_cube(
            mu,
            index,
            &tree.lattice,
            &cube.cube,
            tree.params.plane_dim,
            2.0,
            Normalization::CubeLn,
        )?;
        let weight: f64 = cube_atoms(index, &tree.lattice, &cube.cube)
            .iter()
            .map(|&i| mu.weight(i))
            .sum();
        total += rec.value * rec.value * weight;
        terms.push(CarlesonTerm {
            level: cube.cube.level,
            index: cube.cube.index.clone(),
            coefficient: rec.value,
            weight,
        });
    }
    Ok(CarlesonSum { total, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_measure(k: usize) -> (DiscreteMeasure, SpatialIndex) {
        let points: Vec<Vec<f64>> = (0..k).map(|i| vec![i as f64 / (k - 1) as f64, 0.0]).collect();
        let w = 1.0 / k as f64;
        let mu = DiscreteMeasure::new(2, points, vec![w; k]).unwrap();
        let idx = SpatialIndex::build(&mu);
        (mu, idx)
    }

    #[test]
    fn grid_radii_geometric_and_decreasing() {
        let g = ScaleGrid::dyadic(1.0, 1.0 / 256.0).unwrap();
        let r = g.radii();
        assert_eq!(r.len(), 9);
        assert_eq!(r[0], 1.0);
        assert!((r[8] - 1.0 / 256.0).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(ScaleGrid::new(1.0, 2.0, 0.5).is_err());
        assert!(ScaleGrid::new(1.0, 0.5, 1.0).is_err());
        assert!(ScaleGrid::new(0.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn line_profile_is_identically_zero() {
        let (mu, idx) = line_measure(64);
        let g = ScaleGrid::dyadic(1.0, 1.0 / 16.0).unwrap();
        let prof = jones_function(
            &mu,
            &idx,
            &[0.5, 0.0],
            1,
            2.0,
            &g,
            CoefficientKind::Beta,
            &AlphaConfig::default(),
        )
        .unwrap();
        assert!(prof.last_sum() < 1e-18);
        assert_eq!(prof.tail_fraction(), 0.0);
        assert!(prof.records.iter().all(|r| r.flag.is_none()));
    }

    #[test]
    fn partial_sums_non_decreasing_on_bent_graph() {
        let k = 129;
        let points: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / (k - 1) as f64;
                vec![t, 0.5 * t.abs()]
            })
            .collect();
        let mu = DiscreteMeasure::new(2, points, vec![1.0 / k as f64; k]).unwrap();
        let idx = SpatialIndex::build(&mu);
        let g = ScaleGrid::dyadic(1.0, 1.0 / 8.0).unwrap();
        let prof = jones_function(
            &mu,
            &idx,
            &[0.0, 0.0],
            1,
            2.0,
            &g,
            CoefficientKind::Beta,
            &AlphaConfig::default(),
        )
        .unwrap();
        assert!(prof.last_sum() > 1e-6);
        assert!(prof
            .records
            .windows(2)
            .all(|w| w[1].partial_sum >= w[0].partial_sum));
    }
}
