//! Dyadic lattice of half-open cubes tied to a bounding cube of the data.
//!
//! Level `j` cubes have side `base_scale * 2^-j`; cubes at one level tile
//! space with disjoint half-open boxes `[a, a + l)^d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Ball, DiscreteMeasure};
use crate::spatial::SpatialIndex;

/// Origin and base side length of the lattice. By default the bounding cube
/// of the input measure: origin at the box corner, side the largest extent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicLattice {
    pub origin: Vec<f64>,
    pub base_scale: f64,
    pub dim: usize,
}

impl DyadicLattice {
    pub fn new(origin: Vec<f64>, base_scale: f64) -> Result<Self> {
        if !(base_scale > 0.0) || !base_scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "base_scale must be positive, got {base_scale}"
            )));
        }
        let dim = origin.len();
        Ok(Self { origin, base_scale, dim })
    }

    /// Lattice spanning the bounding cube of the measure. Errors on an empty
    /// measure. A single atom gets an arbitrary unit cube around it.
    pub fn fit(measure: &DiscreteMeasure) -> Result<Self> {
        let (lo, hi) = measure
            .bounding_box()
            .ok_or_else(|| Error::InvalidParameter("empty measure has no lattice".into()))?;
        let mut side = 0.0f64;
        for k in 0..measure.dim() {
            side = side.max(hi[k] - lo[k]);
        }
        if side == 0.0 {
            side = 1.0;
        }
        Self::new(lo, side)
    }

    pub fn root(&self) -> DyadicCube {
        DyadicCube { level: 0, index: vec![0; self.dim] }
    }

    pub fn side(&self, level: i32) -> f64 {
        self.base_scale * (2.0f64).powi(-level)
    }

    /// The level-`level` cube containing `p` (half-open convention).
    pub fn cube_containing(&self, p: &[f64], level: i32) -> DyadicCube {
        let side = self.side(level);
        let index = (0..self.dim)
            .map(|k| ((p[k] - self.origin[k]) / side).floor() as i64)
            .collect();
        DyadicCube { level, index }
    }
}

/// Half-open axis-aligned cube `[corner, corner + side)^d` in a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: i32,
    pub index: Vec<i64>,
}

impl DyadicCube {
    pub fn side(&self, lat: &DyadicLattice) -> f64 {
        lat.side(self.level)
    }

    pub fn diam(&self, lat: &DyadicLattice) -> f64 {
        self.side(lat) * (lat.dim as f64).sqrt()
    }

    pub fn corner(&self, lat: &DyadicLattice) -> Vec<f64> {
        let side = self.side(lat);
        (0..lat.dim)
            .map(|k| lat.origin[k] + self.index[k] as f64 * side)
            .collect()
    }

    pub fn center(&self, lat: &DyadicLattice) -> Vec<f64> {
        let side = self.side(lat);
        let mut c = self.corner(lat);
        for v in &mut c {
            *v += side / 2.0;
        }
        c
    }

    /// The `2^d` children, in lexicographic corner order.
    pub fn children(&self, lat: &DyadicLattice) -> Vec<DyadicCube> {
        let d = lat.dim;
        let mut out = Vec::with_capacity(1 << d);
        for mask in 0..(1u64 << d) {
            let index = (0..d)
                .map(|k| 2 * self.index[k] + ((mask >> k) & 1) as i64)
                .collect();
            out.push(DyadicCube { level: self.level + 1, index });
        }
        out
    }

    pub fn parent(&self) -> Option<DyadicCube> {
        if self.level == 0 {
            return None;
        }
        Some(DyadicCube {
            level: self.level - 1,
            index: self.index.iter().map(|&i| i.div_euclid(2)).collect(),
        })
    }

    pub fn contains_point(&self, lat: &DyadicLattice, p: &[f64]) -> bool {
        let side = self.side(lat);
        let corner = self.corner(lat);
        (0..lat.dim).all(|k| p[k] >= corner[k] && p[k] < corner[k] + side)
    }

    /// Is `self` contained in `other` (as cubes of the same lattice)?
    pub fn is_descendant_of(&self, other: &DyadicCube) -> bool {
        if self.level < other.level {
            return false;
        }
        let shift = (self.level - other.level) as u32;
        self.index
            .iter()
            .zip(&other.index)
            .all(|(&a, &b)| a.div_euclid(1 << shift) == b)
    }

    /// Closed concentric box with side `k * side`, as `(lo, hi)`.
    pub fn scaled_box(&self, lat: &DyadicLattice, k: f64) -> (Vec<f64>, Vec<f64>) {
        let side = self.side(lat);
        let c = self.center(lat);
        let half = k * side / 2.0;
        let lo = c.iter().map(|v| v - half).collect();
        let hi = c.iter().map(|v| v + half).collect();
        (lo, hi)
    }

    /// `B_Q`: closed ball about the cube center with radius `3 diam(Q)`.
    pub fn b_q(&self, lat: &DyadicLattice) -> Ball {
        Ball {
            center: self.center(lat),
            radius: 3.0 * self.diam(lat),
        }
    }
}

/// Mass of the closed concentric box `kQ`.
pub fn cube_mass(
    measure: &DiscreteMeasure,
    index: &SpatialIndex,
    lat: &DyadicLattice,
    cube: &DyadicCube,
    k: f64,
) -> f64 {
    let (lo, hi) = cube.scaled_box(lat, k);
    index
        .box_indices(&lo, &hi)
        .iter()
        .map(|&i| measure.weight(i))
        .sum()
}

/// Atom indices in the half-open cube itself.
pub fn cube_atoms(
    index: &SpatialIndex,
    lat: &DyadicLattice,
    cube: &DyadicCube,
) -> Vec<usize> {
    let side = cube.side(lat);
    let lo = cube.corner(lat);
    let hi: Vec<f64> = lo.iter().map(|v| v + side).collect();
    index.box_indices_half_open(&lo, &hi)
}
