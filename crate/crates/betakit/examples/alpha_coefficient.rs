//! The transport-based flatness coefficient `alpha_mu^n(B)`: distance from
//! `mu` to the nearest multiple of n-dimensional surface measure on an
//! affine plane, normalized by `r^{n+1}`.

use betakit::generators::{generate, DensityProfile, GeneratorSpec};
use betakit::transport::{alpha, alpha_trivial_bound, AlphaConfig};
use betakit::{Ball, SpatialIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let flat = generate(&GeneratorSpec::Segment {
        atoms: 512,
        d: 2,
        density: DensityProfile::Uniform,
    })?;
    let bent = generate(&GeneratorSpec::LipschitzGraph {
        atoms: 512,
        lip: 0.8,
        density: DensityProfile::Uniform,
    })?;
    let config = AlphaConfig::default();

    for (name, gen) in [("segment", &flat), ("bent graph", &bent)] {
        let idx = SpatialIndex::build(&gen.measure);
        let x = gen.measure.point(256).to_vec();
        println!("{name}: alpha about the midpoint atom");
        for r in [0.02, 0.05, 0.1] {
            let ball = Ball::new(x.clone(), r)?;
            let rec = alpha(&gen.measure, &idx, &ball, 1, &config)?;
            let bound = alpha_trivial_bound(&gen.measure, &idx, &ball, 1);
            println!(
                "  r = {r:<6} alpha = {:<10.6} amplitude = {:<8.4} trivial bound = {:.3}",
                rec.value, rec.amplitude, bound
            );
        }
    }
    Ok(())
}
