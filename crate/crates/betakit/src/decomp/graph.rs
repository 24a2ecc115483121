//! Lipschitz graphs `Gamma = {(u, A(u))}` handled through finite samples.
//!
//! The graph function is a shared closure; the Lipschitz bound converts
//! sample spacing into certified distance bounds: the true distance to
//! `Gamma` lies within `(1 + Lip) * spacing` below the sampled distance.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::dist;

#[derive(Clone)]
pub struct LipschitzGraph {
    n: usize,
    d: usize,
    lip: f64,
    func: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
}

impl std::fmt::Debug for LipschitzGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LipschitzGraph")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("lip", &self.lip)
            .finish()
    }
}

impl LipschitzGraph {
    pub fn new(
        n: usize,
        d: usize,
        lip: f64,
        func: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    ) -> Result<Self> {
        if n == 0 || n >= d {
            return Err(Error::BadPlaneDimension { n, d });
        }
        if !(lip >= 0.0) {
            return Err(Error::InvalidParameter(format!("bad Lipschitz bound {lip}")));
        }
        Ok(Self { n, d, lip, func })
    }

    /// The flat graph `A = 0`.
    pub fn flat(n: usize, d: usize) -> Self {
        let codim = d - n;
        Self::new(n, d, 0.0, Arc::new(move |_u: &[f64]| vec![0.0; codim]))
            .expect("flat graph parameters are valid")
    }

    /// Graph of `t -> c |t|` in the plane.
    pub fn abs_slope(c: f64) -> Self {
        Self::new(1, 2, c.abs(), Arc::new(move |u: &[f64]| vec![c * u[0].abs()]))
            .expect("abs graph parameters are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lip(&self) -> f64 {
        self.lip
    }

    /// The graph point `(u, A(u))`.
    pub fn point(&self, u: &[f64]) -> Vec<f64> {
        let mut p = u.to_vec();
        p.extend((self.func)(u));
        p
    }

    /// Spot-check the Lipschitz bound on sampled parameter pairs.
    pub fn check_lipschitz(&self, params: &[Vec<f64>], slack: f64) -> bool {
        for (i, u) in params.iter().enumerate() {
            for v in params.iter().skip(i + 1) {
                let du = dist(u, v);
                if du == 0.0 {
                    continue;
                }
                let pu = (self.func)(u);
                let pv = (self.func)(v);
                if dist(&pu, &pv) > (self.lip + slack) * du {
                    return false;
                }
            }
        }
        true
    }

    /// Sample the graph over the parameter box `[lo, hi]^n` at a grid of
    /// `per_axis` points per axis.
    pub fn sample(&self, lo: f64, hi: f64, per_axis: usize) -> GraphSamples {
        assert!(per_axis >= 2);
        let spacing = (hi - lo) / (per_axis - 1) as f64;
        let mut params = Vec::new();
        let mut idx = vec![0usize; self.n];
        loop {
            let u: Vec<f64> = idx.iter().map(|&k| lo + k as f64 * spacing).collect();
            params.push(u);
            let mut carry = 0;
            while carry < self.n {
                idx[carry] += 1;
                if idx[carry] < per_axis {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == self.n {
                break;
            }
        }
        let points = params.iter().map(|u| self.point(u)).collect();
        GraphSamples {
            graph: self.clone(),
            params,
            points,
            spacing: spacing * (self.n as f64).sqrt(),
        }
    }
}

/// Finite sample of a Lipschitz graph with its certified resolution.
#[derive(Debug, Clone)]
pub struct GraphSamples {
    pub graph: LipschitzGraph,
    /// Parameter-space grid points.
    pub params: Vec<Vec<f64>>,
    /// Corresponding points on the graph.
    pub points: Vec<Vec<f64>>,
    /// Parameter-space grid diameter per cell.
    pub spacing: f64,
}

impl GraphSamples {
    /// Distance from `x` to the nearest sample: an upper bound for
    /// `dist(x, Gamma)`.
    pub fn sampled_distance(&self, x: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|p| dist(p, x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Certified slack: `dist(x, Gamma) >= sampled_distance(x) - slack()`.
    pub fn slack(&self) -> f64 {
        (1.0 + self.graph.lip()) * self.spacing
    }

    /// Certified lower bound for `dist(x, Gamma)`.
    pub fn distance_lower_bound(&self, x: &[f64]) -> f64 {
        (self.sampled_distance(x) - self.slack()).max(0.0)
    }
}
