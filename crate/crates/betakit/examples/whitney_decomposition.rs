//! Whitney decomposition of the complement of a Lipschitz graph: dyadic
//! cubes certified to sit at distance comparable to their side length.

use betakit::decomp::graph::LipschitzGraph;
use betakit::decomp::whitney::{neighbor_stats, whitney_decompose, DEFAULT_BLOWUP};
use betakit::dyadic::DyadicLattice;
use std::sync::Arc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = std::f64::consts::TAU;
    let graph = LipschitzGraph::new(
        1,
        2,
        0.5,
        Arc::new(move |u: &[f64]| vec![0.5 * (tau * u[0]).sin() / tau]),
    )?;
    let samples = graph.sample(-1.0, 2.0, 4097);
    let lattice = DyadicLattice::new(vec![-2.0, -2.0], 4.0)?;

    for depth in [5, 6, 7] {
        let dec = whitney_decompose(&samples, &lattice, &lattice.root(), depth, DEFAULT_BLOWUP);
        let (max_neighbors, comparable) = neighbor_stats(&dec);
        let smallest = dec
            .cubes
            .iter()
            .map(|w| w.cube.side(&lattice))
            .fold(f64::INFINITY, f64::min);
        println!(
            "depth {depth}: {} certified cubes, {} unresolved, smallest side {:.5}, \
             max 10Q-neighbors {}, touching sides comparable: {}",
            dec.cubes.len(),
            dec.unresolved.len(),
            smallest,
            max_neighbors,
            comparable
        );
    }
    Ok(())
}
