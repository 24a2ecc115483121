//! High-density exceptional sets: graph points where some ball violates
//! the density bound `mu(B(x,r)) < M r^n`, covered by a Vitali family of
//! balls with pairwise-disjoint fifth parts.

use betakit::decomp::exceptional::exceptional_set;
use betakit::decomp::graph::LipschitzGraph;
use betakit::multiscale::ScaleGrid;
use betakit::{DiscreteMeasure, SpatialIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = LipschitzGraph::flat(1, 2);
    let samples = graph.sample(0.0, 1.0, 513);

    // arclength measure plus two heavy atoms on the graph
    let mut points = samples.points.clone();
    let k = points.len();
    let mut weights = vec![1.0 / k as f64; k];
    for (u, w) in [(0.25, 1.0), (0.8, 0.3)] {
        points.push(graph.point(&[u]));
        weights.push(w);
    }
    let mu = DiscreteMeasure::new(2, points, weights)?;
    let idx = SpatialIndex::build(&mu);
    let grid = ScaleGrid::new(0.5, 1.0 / 512.0, 0.5)?;

    for m in [5.0, 20.0, 80.0] {
        let h = exceptional_set(&mu, &idx, &samples, m, &grid.radii());
        let captured: f64 = (0..mu.len())
            .filter(|&i| h.in_h(mu.point(i)))
            .map(|i| mu.weight(i))
            .sum();
        println!("M = {m:<4}: {} balls, captured mass {:.4} of {:.4}", h.len(), captured, mu.total_mass());
        for i in 0..h.len() {
            let b = h.ball(i);
            println!("  Delta_{i}: center ({:.3}, {:.3}), radius {:.4}", b.center[0], b.center[1], b.radius);
        }
    }
    Ok(())
}
