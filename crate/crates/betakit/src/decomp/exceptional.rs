//! Exceptional sets of high-density balls along a sampled graph.
//!
//! A sample point `x` on the graph enters `H_0` when some ball satisfies
//! `mu(B(x,r)) >= M r^n`; `r_x` is the largest such grid radius, so every
//! larger grid radius is non-violating. A greedy Vitali pass (largest
//! radius first) keeps centers whose balls `B(x_i, r_i)` are pairwise
//! disjoint; the kept `Delta_i = B(x_i, 5 r_i)` then cover `H_0`.

use crate::measure::{dist, mass, Ball, DiscreteMeasure};
use crate::spatial::SpatialIndex;

use super::graph::GraphSamples;

#[derive(Debug, Clone)]
pub struct ExceptionalSet {
    /// Kept centers (on the sampled graph) and their `r_x`.
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub density_threshold: f64,
    pub plane_dim: usize,
}

impl ExceptionalSet {
    /// `Delta_i = B(x_i, 5 r_i)`.
    pub fn ball(&self, i: usize) -> Ball {
        Ball { center: self.centers[i].clone(), radius: 5.0 * self.radii[i] }
    }

    /// `(1/5) Delta_i = B(x_i, r_i)`; pairwise disjoint by construction.
    pub fn fifth_ball(&self, i: usize) -> Ball {
        Ball { center: self.centers[i].clone(), radius: self.radii[i] }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Membership in `H = union Delta_i`.
    pub fn in_h(&self, x: &[f64]) -> bool {
        self.in_hk(x, 1.0)
    }

    /// Membership in `H^k = union k Delta_i`.
    pub fn in_hk(&self, x: &[f64], k: f64) -> bool {
        (0..self.len()).any(|i| dist(x, &self.centers[i]) <= k * 5.0 * self.radii[i])
    }
}

pub fn exceptional_set(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    samples: &GraphSamples,
    density_threshold: f64,
    radius_grid: &[f64],
) -> ExceptionalSet {
    let n = samples.graph.n();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for (i, x) in samples.points.iter().enumerate() {
        let mut r_x = 0.0f64;
        for &r in radius_grid {
            let b = Ball { center: x.clone(), radius: r };
            if mass(mu, index, &b) >= density_threshold * r.powi(n as i32) {
                r_x = r_x.max(r);
            }
        }
        if r_x > 0.0 {
            candidates.push((i, r_x));
        }
    }
    // greedy Vitali: largest radius first, ties broken by sample order
    candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut centers: Vec<Vec<f64>> = Vec::new();
    let mut radii: Vec<f64> = Vec::new();
    for (i, r) in candidates {
        let x = &samples.points[i];
        let disjoint = centers
            .iter()
            .zip(&radii)
            .all(|(c, &rc)| dist(x, c) > r + rc);
        if disjoint {
            centers.push(x.clone());
            radii.push(r);
        }
    }
    ExceptionalSet { centers, radii, density_threshold, plane_dim: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::graph::LipschitzGraph;
    use crate::multiscale::ScaleGrid;

    #[test]
    fn low_density_measure_has_empty_h() {
        let g = LipschitzGraph::flat(1, 2);
        let s = g.sample(0.0, 1.0, 65);
        let pts: Vec<Vec<f64>> = s.points.clone();
        let n = pts.len();
        let mu = DiscreteMeasure::new(2, pts, vec![1.0 / n as f64; n]).unwrap();
        let idx = SpatialIndex::build(&mu);
        let grid = ScaleGrid::new(1.0, 1.0 / 64.0, 0.5).unwrap();
        // density is about 1 everywhere; threshold 10 is never hit
        let h = exceptional_set(&mu, &idx, &s, 10.0, &grid.radii());
        assert!(h.is_empty());
    }

    #[test]
    fn heavy_atom_is_captured_with_expected_radius() {
        let g = LipschitzGraph::flat(1, 2);
        let s = g.sample(0.0, 1.0, 65);
        // one atom of weight 1 at a graph sample; M = 4, n = 1:
        // violating radii satisfy r <= (W/M)^{1/n} = 0.25
        let mu = DiscreteMeasure::new(2, vec![vec![0.5, 0.0]], vec![1.0]).unwrap();
        let idx = SpatialIndex::build(&mu);
        let grid = ScaleGrid::new(1.0, 1.0 / 256.0, 0.5).unwrap();
        let h = exceptional_set(&mu, &idx, &s, 4.0, &grid.radii());
        assert!(!h.is_empty());
        let best = h
            .radii
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        assert!((best - 0.25).abs() <= 0.25 * 0.5 + 1e-12, "r_x = {best}");
        assert!(h.in_h(&[0.5, 0.0]));
    }

    #[test]
    fn fifth_balls_are_pairwise_disjoint() {
        let g = LipschitzGraph::flat(1, 2);
        let s = g.sample(0.0, 1.0, 129);
        // several heavy atoms close together force overlapping candidates
        let mu = DiscreteMeasure::new(
            2,
            vec![vec![0.3, 0.0], vec![0.32, 0.0], vec![0.7, 0.0]],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let idx = SpatialIndex::build(&mu);
        let grid = ScaleGrid::new(1.0, 1.0 / 256.0, 0.5).unwrap();
        let h = exceptional_set(&mu, &idx, &s, 4.0, &grid.radii());
        for i in 0..h.len() {
            for j in (i + 1)..h.len() {
                let bi = h.fifth_ball(i);
                let bj = h.fifth_ball(j);
                assert!(dist(&bi.center, &bj.center) > bi.radius + bj.radius);
            }
        }
        // H is contained in every H^k, k >= 1
        for p in &s.points {
            if h.in_h(p) {
                assert!(h.in_hk(p, 3.0));
                assert!(h.in_hk(p, 9.0));
            }
        }
    }
}
