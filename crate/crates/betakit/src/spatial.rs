//! Kd-tree over a measure's atoms for exact ball and box queries.

use crate::measure::{dist, DiscreteMeasure};

/// Immutable acceleration structure. Queries return indices into the measure
/// in ascending order, so downstream reductions are deterministic.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    dim: usize,
    points: Vec<Vec<f64>>,
    nodes: Vec<Node>,
    root: Option<usize>,
}

#[derive(Debug, Clone)]
struct Node {
    point: usize,
    left: Option<usize>,
    right: Option<usize>,
    // bounding box of the subtree
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl SpatialIndex {
    pub fn build(measure: &DiscreteMeasure) -> Self {
        let dim = measure.dim();
        let points: Vec<Vec<f64>> = measure.points().to_vec();
        let mut idx = Self { dim, points, nodes: Vec::new(), root: None };
        let mut ids: Vec<usize> = (0..idx.points.len()).collect();
        idx.root = idx.build_rec(&mut ids);
        idx
    }

    fn build_rec(&mut self, ids: &mut [usize]) -> Option<usize> {
        if ids.is_empty() {
            return None;
        }
        let (lo, hi) = self.bbox(ids);
        // split on the widest axis at the median
        let axis = (0..self.dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).partial_cmp(&(hi[b] - lo[b])).unwrap())
            .unwrap_or(0);
        let mid = ids.len() / 2;
        ids.sort_unstable_by(|&a, &b| {
            self.points[a][axis]
                .partial_cmp(&self.points[b][axis])
                .unwrap()
                .then(a.cmp(&b))
        });
        let point = ids[mid];
        let node_id = self.nodes.len();
        self.nodes.push(Node { point, left: None, right: None, lo, hi });
        let (left_ids, rest) = ids.split_at_mut(mid);
        let right_ids = &mut rest[1..];
        let left = self.build_rec(left_ids);
        let right = self.build_rec(right_ids);
        self.nodes[node_id].left = left;
        self.nodes[node_id].right = right;
        Some(node_id)
    }

    fn bbox(&self, ids: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.points[ids[0]].clone();
        let mut hi = lo.clone();
        for &i in ids {
            for k in 0..self.dim {
                lo[k] = lo[k].min(self.points[i][k]);
                hi[k] = hi[k].max(self.points[i][k]);
            }
        }
        (lo, hi)
    }

    /// Indices of atoms with `|p - center| <= radius`, ascending.
    pub fn ball_indices(&self, center: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(root) = self.root {
            self.ball_rec(root, center, radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn ball_rec(&self, node_id: usize, center: &[f64], radius: f64, out: &mut Vec<usize>) {
        let node = &self.nodes[node_id];
        // prune on the subtree bounding box
        let mut d2 = 0.0;
        for k in 0..self.dim {
            let c = center[k];
            let v = if c < node.lo[k] {
                node.lo[k] - c
            } else if c > node.hi[k] {
                c - node.hi[k]
            } else {
                0.0
            };
            d2 += v * v;
        }
        if d2 > radius * radius {
            return;
        }
        if dist(&self.points[node.point], center) <= radius {
            out.push(node.point);
        }
        if let Some(l) = node.left {
            self.ball_rec(l, center, radius, out);
        }
        if let Some(r) = node.right {
            self.ball_rec(r, center, radius, out);
        }
    }

    /// Indices of atoms in the closed axis-aligned box `[lo, hi]`, ascending.
    pub fn box_indices(&self, lo: &[f64], hi: &[f64]) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(root) = self.root {
            self.box_rec(root, lo, hi, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn box_rec(&self, node_id: usize, lo: &[f64], hi: &[f64], out: &mut Vec<usize>) {
        let node = &self.nodes[node_id];
        for k in 0..self.dim {
            if node.hi[k] < lo[k] || node.lo[k] > hi[k] {
                return;
            }
        }
        let p = &self.points[node.point];
        if (0..self.dim).all(|k| p[k] >= lo[k] && p[k] <= hi[k]) {
            out.push(node.point);
        }
        if let Some(l) = node.left {
            self.box_rec(l, lo, hi, out);
        }
        if let Some(r) = node.right {
            self.box_rec(r, lo, hi, out);
        }
    }

    /// Indices of atoms in the half-open box `[lo, hi)`, ascending.
    pub fn box_indices_half_open(&self, lo: &[f64], hi: &[f64]) -> Vec<usize> {
        self.box_indices(lo, hi)
            .into_iter()
            .filter(|&i| (0..self.dim).all(|k| self.points[i][k] < hi[k]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ball_query_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..500)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let mu = DiscreteMeasure::new(3, pts.clone(), vec![1.0; 500]).unwrap();
        let idx = SpatialIndex::build(&mu);
        for _ in 0..50 {
            let c = vec![rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
            let r = rng.gen::<f64>() * 0.5;
            let got = idx.ball_indices(&c, r);
            let want: Vec<usize> = (0..pts.len())
                .filter(|&i| dist(&pts[i], &c) <= r)
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn box_query_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vec<f64>> = (0..300)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let mu = DiscreteMeasure::new(2, pts.clone(), vec![1.0; 300]).unwrap();
        let idx = SpatialIndex::build(&mu);
        for _ in 0..50 {
            let lo = vec![rng.gen::<f64>() * 0.8, rng.gen::<f64>() * 0.8];
            let hi = vec![lo[0] + 0.3, lo[1] + 0.3];
            let got = idx.box_indices(&lo, &hi);
            let want: Vec<usize> = (0..pts.len())
                .filter(|&i| (0..2).all(|k| pts[i][k] >= lo[k] && pts[i][k] <= hi[k]))
                .collect();
            assert_eq!(got, want);
        }
    }
}
