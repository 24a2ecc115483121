//! Stopping-time classification of the dyadic tree of a measure: each cube
//! is inspected top-down and labeled good, high-density, low-density, or
//! big-alpha; descendants of stopped cubes are left unexplored.

use betakit::decomp::stopping::{stopping_classify, CubeLabel, StoppingParams};
use betakit::dyadic::DyadicLattice;
use betakit::generators::{generate, DensityProfile, GeneratorSpec};
use betakit::multiscale::ScaleGrid;
use betakit::transport::AlphaConfig;
use betakit::{DiscreteMeasure, SpatialIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a graph measure with a heavy eighth: the concentration trips the
    // high-density stopping test there
    let gen = generate(&GeneratorSpec::LipschitzGraph {
        atoms: 256,
        lip: 0.5,
        density: DensityProfile::Uniform,
    })?;
    let base = &gen.measure;
    let weights: Vec<f64> = (0..base.len())
        .map(|i| if i < base.len() / 8 { base.weight(i) * 40.0 } else { base.weight(i) })
        .collect();
    let mu = DiscreteMeasure::new(2, base.points().to_vec(), weights)?;
    let idx = SpatialIndex::build(&mu);
    let lattice = DyadicLattice::new(vec![-0.5, -1.0], 2.0)?;

    let params = StoppingParams {
        m: 8.0,
        n_threshold: f64::INFINITY,
        r0: 1e9,
        plane_dim: 1,
        depth: 5,
        grid: ScaleGrid::dyadic(1.0, 0.125)?,
        alpha_config: AlphaConfig::coarse(),
    };
    let tree = stopping_classify(&mu, &idx, &lattice, &lattice.root(), &params)?;

    let mut counts = std::collections::BTreeMap::new();
    for c in &tree.cubes {
        *counts.entry(format!("{:?}", c.label)).or_insert(0usize) += 1;
    }
    println!("label counts: {counts:?}");
    println!(
        "stopped mass: {:.4} of {:.4}",
        tree.stopped_mass(),
        mu.total_mass()
    );
    for c in tree.cubes.iter().filter(|c| c.label.is_stop()).take(8) {
        println!(
            "  {:?} at level {} index {:?} (mass {:.4})",
            c.label, c.cube.level, c.cube.index, c.mass
        );
    }
    let good = tree.cubes.iter().filter(|c| c.label == CubeLabel::Good).count();
    println!("good cubes: {good}");
    Ok(())
}
