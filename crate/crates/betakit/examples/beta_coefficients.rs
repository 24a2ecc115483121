//! Ball-based flatness coefficients `beta_{mu,p}^n(x, r)` on two measures
//! with opposite behavior: a circle (flat at small scales) and the
//! four-corner Cantor set (never flat).

use betakit::fit::beta_ball;
use betakit::generators::{generate, DensityProfile, GeneratorSpec};
use betakit::{Ball, SpatialIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circle = generate(&GeneratorSpec::Circle {
        atoms: 2048,
        radius: 1.0,
        density: DensityProfile::Uniform,
    })?;
    let cantor = generate(&GeneratorSpec::FourCornerCantor { depth: 6 })?;

    for (name, gen) in [("circle", &circle), ("cantor", &cantor)] {
        let idx = SpatialIndex::build(&gen.measure);
        let x = gen.measure.point(0).to_vec();
        println!("{name}: beta_2 about the first atom");
        let mut r = 0.5;
        while r > 0.5 / 64.0 {
            let rec = beta_ball(&gen.measure, &idx, &Ball::new(x.clone(), r)?, 1, 2.0)?;
            println!("  r = {r:<10.6} beta_2 = {:.6}", rec.value);
            r *= 0.5;
        }
    }

    // the exponent p interpolates: beta_1 <= beta_1.5 <= beta_2 up to the
    // density factor in the Hoelder bound
    let idx = SpatialIndex::build(&circle.measure);
    let ball = Ball::new(circle.measure.point(0).to_vec(), 0.25)?;
    println!("circle at r = 0.25, varying p:");
    for p in [1.0, 1.5, 2.0] {
        let rec = beta_ball(&circle.measure, &idx, &ball, 1, p)?;
        println!("  p = {p}: beta = {:.6}", rec.value);
    }
    Ok(())
}
