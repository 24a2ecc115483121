//! Carleson packing sums: `sum alpha(B_Q)^2 l(Q)^n` over good graph cubes
//! and `sum beta_2(Q)^2 mu(Q)` over good stopped cubes. Totals stabilize
//! as the tree deepens because fine scales contribute square-summably.

use betakit::decomp::gamma::gamma_cubes;
use betakit::decomp::graph::LipschitzGraph;
use betakit::decomp::stopping::{stopping_classify, StoppingParams};
use betakit::dyadic::DyadicLattice;
use betakit::multiscale::{carleson_sum_alpha, carleson_sum_beta, ScaleGrid};
use betakit::transport::AlphaConfig;
use betakit::{DiscreteMeasure, SpatialIndex};
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = std::f64::consts::TAU;
    let graph = LipschitzGraph::new(
        1,
        2,
        0.4,
        Arc::new(move |u: &[f64]| vec![0.4 * (tau * u[0]).sin() / tau]),
    )?;
    let samples = graph.sample(0.0, 1.0, 1025);
    let points = samples.points.clone();
    let k = points.len();
    let mu = DiscreteMeasure::new(2, points, vec![1.0 / k as f64; k])?;
    let idx = SpatialIndex::build(&mu);

    // alpha-sum over the dyadic graph cubes
    let param_lattice = DyadicLattice::new(vec![0.0], 1.0)?;
    let root = param_lattice.root();
    for depth in [3, 4] {
        let hierarchy = gamma_cubes(&samples, &param_lattice, &root, depth, None);
        let sum = carleson_sum_alpha(&mu, &idx, &hierarchy, &root, 1, &AlphaConfig::coarse())?;
        println!(
            "alpha Carleson sum, depth {depth}: total {:.6} over {} cubes",
            sum.total,
            sum.terms.len()
        );
    }

    // beta-sum over the good cubes of the stopped tree
    let ambient = DyadicLattice::new(vec![-0.5, -1.0], 2.0)?;
    for depth in [4, 5] {
        let params = StoppingParams {
            m: 100.0,
            n_threshold: f64::INFINITY,
            r0: 1e9,
            plane_dim: 1,
            depth,
            grid: ScaleGrid::dyadic(1.0, 0.125)?,
            alpha_config: AlphaConfig::coarse(),
        };
        let tree = stopping_classify(&mu, &idx, &ambient, &ambient.root(), &params)?;
        let sum = carleson_sum_beta(&mu, &idx, &tree)?;
        println!(
            "beta Carleson sum, depth {depth}: total {:.6} over {} cubes (normalized {:.6})",
            sum.total,
            sum.terms.len(),
            sum.total / mu.total_mass()
        );
    }
    Ok(())
}
