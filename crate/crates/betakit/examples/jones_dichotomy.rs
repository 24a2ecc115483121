//! Discrete Jones square functions: the partial sums
//! `S_k = sum beta(x, r_j)^2 ln(1/rho)` plateau on rectifiable measures and
//! grow linearly in the scale index on the four-corner Cantor set.

use betakit::generators::{generate, DensityProfile, GeneratorSpec};
use betakit::multiscale::{jones_function, CoefficientKind, ScaleGrid};
use betakit::report::summarize_profile;
use betakit::transport::AlphaConfig;
use betakit::SpatialIndex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = ScaleGrid::new(0.5, 0.5 / 128.0, 0.5)?;
    let graph = generate(&GeneratorSpec::LipschitzGraph {
        atoms: 4096,
        lip: 0.5,
        density: DensityProfile::Uniform,
    })?;
    let cantor = generate(&GeneratorSpec::FourCornerCantor { depth: 7 })?;

    for (name, gen) in [("lipschitz graph", &graph), ("cantor", &cantor)] {
        let idx = SpatialIndex::build(&gen.measure);
        let x = gen.measure.point(gen.measure.len() / 3).to_vec();
        let profile = jones_function(
            &gen.measure,
            &idx,
            &x,
            1,
            2.0,
            &grid,
            CoefficientKind::Beta,
            &AlphaConfig::default(),
        )?;
        let summary = summarize_profile(&profile);
        println!("{name}:");
        for rec in &profile.records {
            println!("  r = {:<12.6} beta = {:<10.6} S = {:.6}", rec.r, rec.value, rec.partial_sum);
        }
        println!(
            "  plateau = {}  tail fraction = {:.4}  growth slope = {:.4} (R^2 = {:.3})",
            summary.plateau,
            summary.tail_fraction,
            summary.growth.slope,
            summary.growth.r_squared
        );
    }
    Ok(())
}
