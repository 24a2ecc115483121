//! The measure generators: every built-in family, serialized the same way
//! the CLI reads and writes them.

use betakit::generators::{generate, DensityProfile, GeneratorSpec, GraphComponent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs: Vec<(&str, GeneratorSpec)> = vec![
        (
            "segment",
            GeneratorSpec::Segment { atoms: 256, d: 2, density: DensityProfile::Uniform },
        ),
        (
            "circle",
            GeneratorSpec::Circle { atoms: 256, radius: 1.0, density: DensityProfile::Uniform },
        ),
        (
            "power-law graph",
            GeneratorSpec::LipschitzGraph {
                atoms: 256,
                lip: 0.7,
                density: DensityProfile::PowerLaw { exponent: 1.5, center: 0.5 },
            },
        ),
        (
            "plane patch",
            GeneratorSpec::PlanePatch { atoms_per_axis: 16, density: DensityProfile::Uniform },
        ),
        ("cantor", GeneratorSpec::FourCornerCantor { depth: 5 }),
        (
            "graph union",
            GeneratorSpec::GraphUnion {
                atoms_per_component: 128,
                components: vec![
                    GraphComponent { lip: 0.3, offset: 0.0 },
                    GraphComponent { lip: 0.5, offset: 0.5 },
                ],
            },
        ),
        (
            "perturbed graph",
            GeneratorSpec::PerturbedGraph { atoms: 256, lip: 0.5, noise: 0.01, seed: 7 },
        ),
    ];

    for (name, spec) in specs {
        let gen = generate(&spec)?;
        println!(
            "{name:<18} atoms = {:<6} mass = {:<8.4} graph = {:<5} plane = {}",
            gen.measure.len(),
            gen.measure.total_mass(),
            gen.graph.is_some(),
            gen.plane.is_some()
        );
        println!("  spec JSON: {}", serde_json::to_string(&spec)?);
    }
    Ok(())
}
