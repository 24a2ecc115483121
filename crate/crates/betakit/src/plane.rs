//! Affine n-planes in R^d: base point plus orthonormal tangent frame.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePlane {
    base: Vec<f64>,
    /// `n` orthonormal d-vectors spanning the tangent directions.
    frame: Vec<Vec<f64>>,
}

impl AffinePlane {
    pub fn new(base: Vec<f64>, frame: Vec<Vec<f64>>) -> Result<Self> {
        let d = base.len();
        let n = frame.len();
        if n == 0 || n >= d {
            return Err(Error::BadPlaneDimension { n, d });
        }
        for v in &frame {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
        }
        for i in 0..n {
            for j in i..n {
                let dot: f64 = frame[i].iter().zip(&frame[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > ORTHO_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "frame not orthonormal: <v{i},v{j}> = {dot}"
                    )));
                }
            }
        }
        Ok(Self { base, frame })
    }

    /// Orthonormalize an arbitrary spanning set with QR and build the plane.
    pub fn from_spanning(base: Vec<f64>, spanning: Vec<Vec<f64>>) -> Result<Self> {
        let d = base.len();
        let n = spanning.len();
        if n == 0 || n >= d {
            return Err(Error::BadPlaneDimension { n, d });
        }
        let m = DMatrix::from_fn(d, n, |r, c| spanning[c][r]);
        let qr = m.qr();
        let q = qr.q();
        let frame = (0..n).map(|c| q.column(c).iter().copied().collect()).collect();
        Self::new(base, frame)
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    /// Orthogonal projection of `y` onto the plane.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let d = self.base.len();
        let mut out = self.base.clone();
        for v in &self.frame {
            let t: f64 = (0..d).map(|k| (y[k] - self.base[k]) * v[k]).sum();
            for k in 0..d {
                out[k] += t * v[k];
            }
        }
        out
    }

    /// Euclidean distance from `y` to the plane.
    pub fn distance(&self, y: &[f64]) -> f64 {
        let d = self.base.len();
        let mut residual: Vec<f64> = (0..d).map(|k| y[k] - self.base[k]).collect();
        for v in &self.frame {
            let t: f64 = (0..d).map(|k| residual[k] * v[k]).sum();
            for k in 0..d {
                residual[k] -= t * v[k];
            }
        }
        residual.iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    /// Plane with the same frame through a different base point.
    pub fn through(&self, base: Vec<f64>) -> AffinePlane {
        AffinePlane { base, frame: self.frame.clone() }
    }

    /// Point on the plane at tangent coordinates `t` (length n).
    pub fn point_at(&self, t: &[f64]) -> Vec<f64> {
        let d = self.base.len();
        let mut p = self.base.clone();
        for (ti, v) in t.iter().zip(&self.frame) {
            for k in 0..d {
                p[k] += ti * v[k];
            }
        }
        p
    }

    /// Tangent coordinates of the projection of `y`.
    pub fn tangent_coords(&self, y: &[f64]) -> Vec<f64> {
        let d = self.base.len();
        self.frame
            .iter()
            .map(|v| (0..d).map(|k| (y[k] - self.base[k]) * v[k]).sum())
            .collect()
    }

    /// An orthonormal basis of the normal space (d - n vectors).
    pub fn normal_frame(&self) -> Vec<Vec<f64>> {
        let d = self.base.len();
        let n = self.frame.len();
        // complete the tangent frame to a full basis via QR of [frame | I]
        let mut cols: Vec<Vec<f64>> = self.frame.clone();
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            cols.push(e);
        }
        let m = DMatrix::from_fn(d, cols.len(), |r, c| cols[c][r]);
        // Gram-Schmidt against the tangent frame, keeping the first d-n
        // independent remainders.
        let basis: Vec<DVector<f64>> = (0..n).map(|c| m.column(c).into_owned()).collect();
        let mut normals = Vec::new();
        for c in n..cols.len() {
            if normals.len() == d - n {
                break;
            }
            let mut v = m.column(c).into_owned();
            for b in basis.iter().chain(normals.iter()) {
                let t = b.dot(&v);
                v -= b * t;
            }
            let norm = v.norm();
            if norm > 1e-8 {
                normals.push(v / norm);
            }
        }
        normals.iter().map(|v| v.iter().copied().collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_zero_on_plane_positive_off() {
        let l = AffinePlane::new(vec![0.0, 0.0], vec![vec![1.0, 0.0]]).unwrap();
        assert_eq!(l.distance(&[5.0, 0.0]), 0.0);
        assert!((l.distance(&[5.0, 2.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_orthonormal_frame_and_n_eq_d() {
        assert!(AffinePlane::new(vec![0.0, 0.0], vec![vec![1.0, 1.0]]).is_err());
        assert!(AffinePlane::new(
            vec![0.0, 0.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        )
        .is_err());
    }

    #[test]
    fn from_spanning_orthonormalizes() {
        let l = AffinePlane::from_spanning(vec![0.0, 0.0, 0.0], vec![vec![2.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]])
            .unwrap();
        assert_eq!(l.dim(), 2);
        assert!(l.distance(&[3.0, -4.0, 0.0]) < 1e-10);
        assert!((l.distance(&[0.0, 0.0, 2.0]) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn normal_frame_is_orthonormal_complement() {
        let l = AffinePlane::new(vec![0.0, 0.0, 0.0], vec![vec![1.0, 0.0, 0.0]]).unwrap();
        let nf = l.normal_frame();
        assert_eq!(nf.len(), 2);
        for v in &nf {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-10);
            assert!(v[0].abs() < 1e-10);
        }
    }
}
