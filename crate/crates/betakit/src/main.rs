//! Batch front-end: generate corpora, evaluate coefficients and profiles,
//! build decompositions, and verify structural invariants.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use betakit::decomp::exceptional::exceptional_set;
use betakit::decomp::gamma::gamma_cubes;
use betakit::decomp::graph::GraphSamples;
use betakit::decomp::stopping::{stopping_classify, StoppingParams};
use betakit::decomp::whitney::{neighbor_stats, whitney_decompose, DEFAULT_BLOWUP};
use betakit::dyadic::DyadicLattice;
use betakit::error::Error;
use betakit::generators::{generate, Generated, GeneratorSpec};
use betakit::multiscale::{
    carleson_sum_alpha, carleson_sum_beta, jones_function, CoefficientKind, ScaleGrid,
};
use betakit::report::{summarize_profile, write_json, write_profile_csv};
use betakit::transport::AlphaConfig;
use betakit::{Ball, DiscreteMeasure, SpatialIndex};

#[derive(Parser, Debug)]
#[command(name = "betakit", version, about = "Multiscale geometry of discrete measures")]
struct Cli {
    /// Thread-pool size; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Where the measure comes from: a file or a generator spec.
#[derive(Args, Debug, Serialize)]
struct InputArgs {
    /// Measure file (.csv with header x1..xd,w, or .json).
    #[arg(long, conflicts_with = "spec")]
    input: Option<PathBuf>,
    /// Generator spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GridArgs {
    #[arg(long, default_value_t = 1.0)]
    rmax: f64,
    #[arg(long, default_value_t = 1.0 / 256.0)]
    rmin: f64,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the measure described by a generator spec.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Beta coefficients at sampled atom centers across a scale grid.
    Beta {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Plane dimension.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Number of atom centers to sample.
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Alpha coefficients at sampled atom centers across a scale grid.
    Alpha {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Flat-model grid spacing is r / resolution.
        #[arg(long, default_value_t = 16.0)]
        resolution: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Jones square-function profiles (partial sums and plateau verdicts).
    Jones {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// beta or alpha.
        #[arg(long, default_value = "beta")]
        kind: String,
        #[arg(long, default_value_t = 16.0)]
        resolution: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Whitney decomposition of the bounding cube relative to the spec's graph.
    Whitney {
        /// Generator spec of a graph-backed measure.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 7)]
        depth: i32,
        #[arg(long, default_value_t = DEFAULT_BLOWUP)]
        blowup: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// High-density exceptional set H and its covering balls.
    Exceptional {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Density threshold M.
        #[arg(long = "M", default_value_t = 10.0)]
        m: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Stopping-time classification of the dyadic tree.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "M", default_value_t = 100.0)]
        m: f64,
        /// Alpha-sum threshold defining F(N); inf accepts everything.
        #[arg(long = "N", default_value_t = f64::INFINITY)]
        n_threshold: f64,
        #[arg(long, default_value_t = 1e9)]
        r0: f64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Carleson packing sums over graph cubes and the stopped tree.
    Carleson {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value_t = 16.0)]
        resolution: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the structural invariant suites on a built-in corpus.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_spec(path: &Path) -> Result<GeneratorSpec, Error> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_input(input: &InputArgs) -> Result<Generated, Error> {
    match (&input.input, &input.spec) {
        (Some(path), None) => Ok(Generated {
            measure: DiscreteMeasure::read_path(path)?,
            graph: None,
            plane: None,
        }),
        (None, Some(path)) => generate(&load_spec(path)?),
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --input and --spec".into(),
        )),
    }
}

/// Evenly spread atom indices (deterministic).
fn sample_atoms(mu: &DiscreteMeasure, k: usize) -> Vec<usize> {
    let k = k.clamp(1, mu.len());
    (0..k).map(|i| i * mu.len() / k).collect()
}

fn write_out(out: &Path, name: &str, bytes: &[u8]) -> Result<(), Error> {
    fs::create_dir_all(out)?;
    fs::write(out.join(name), bytes)?;
    Ok(())
}

/// Graph sampled over its parameter domain [0,1]^n.
fn graph_samples(gen: &Generated) -> Result<GraphSamples, Error> {
    let graph = gen.graph.clone().ok_or_else(|| {
        Error::InvalidParameter("this command needs a graph-backed generator spec".into())
    })?;
    Ok(graph.sample(0.0, 1.0, 1025))
}

fn profiles_cmd(
    input: &InputArgs,
    grid: &GridArgs,
    n: usize,
    p: f64,
    kind: CoefficientKind,
    resolution: f64,
    points: usize,
    out: &Path,
    config_echo: serde_json::Value,
) -> Result<(), Error> {
    let gen = load_input(input)?;
    let mu = &gen.measure;
    let index = SpatialIndex::build(mu);
    let grid = ScaleGrid::new(grid.rmax, grid.rmin, grid.ratio)?;
    let alpha_config = AlphaConfig { resolution, ..AlphaConfig::default() };
    let profiles = sample_atoms(mu, points)
        .into_iter()
        .map(|i| jones_function(mu, &index, mu.point(i), n, p, &grid, kind, &alpha_config))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = Vec::new();
    write_profile_csv(&mut csv, &profiles)?;
    write_out(out, "profiles.csv", &csv)?;
    let summaries: Vec<_> = profiles.iter().map(summarize_profile).collect();
    let all_plateau = summaries.iter().all(|s| s.plateau);
    let mut json_out = Vec::new();
    write_json(
        &mut json_out,
        &json!({
            "config": config_echo,
            "profiles": summaries,
            "plateau": all_plateau,
        }),
    )?;
    write_out(out, "summary.json", &json_out)
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Generate { spec, out } => {
            let parsed = load_spec(&spec)?;
            let gen = generate(&parsed)?;
            let mut csv = Vec::new();
            gen.measure.write_csv(&mut csv)?;
            write_out(&out, "measure.csv", &csv)?;
            let mut summary = Vec::new();
            write_json(
                &mut summary,
                &json!({
                    "config": parsed,
                    "atoms": gen.measure.len(),
                    "total_mass": gen.measure.total_mass(),
                    "has_graph": gen.graph.is_some(),
                }),
            )?;
            write_out(&out, "summary.json", &summary)
        }
        Command::Beta { input, grid, n, p, points, out } => {
            let echo = json!({
                "command": "beta", "input": input, "grid": grid,
                "n": n, "p": p, "points": points,
            });
            // raw values only differ from jones in the summary; reuse it
            profiles_cmd(&input, &grid, n, p, CoefficientKind::Beta, 16.0, points, &out, echo)
        }
        Command::Alpha { input, grid, n, resolution, points, out } => {
            let echo = json!({
                "command": "alpha", "input": input, "grid": grid,
                "n": n, "resolution": resolution, "points": points,
            });
            profiles_cmd(
                &input,
                &grid,
                n,
                2.0,
                CoefficientKind::Alpha,
                resolution,
                points,
                &out,
                echo,
            )
        }
        Command::Jones { input, grid, n, p, kind, resolution, points, out } => {
            let kind = match kind.as_str() {
                "beta" => CoefficientKind::Beta,
                "alpha" => CoefficientKind::Alpha,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "kind must be beta or alpha, got {other}"
                    )))
                }
            };
            let echo = json!({
                "command": "jones", "input": input, "grid": grid, "n": n,
                "p": p, "kind": kind, "resolution": resolution, "points": points,
            });
            profiles_cmd(&input, &grid, n, p, kind, resolution, points, &out, echo)
        }
        Command::Whitney { spec, depth, blowup, out } => {
            let parsed = load_spec(&spec)?;
            let gen = generate(&parsed)?;
            let samples = graph_samples(&gen)?;
            let d = gen.measure.dim();
            // decompose the unit cube around the data, pushed off the graph
            let lat = DyadicLattice::new(vec![0.0; d], 1.0)?;
            let dec = whitney_decompose(&samples, &lat, &lat.root(), depth, blowup);
            let (max_degree, comparable) = neighbor_stats(&dec);
            let mut out_json = Vec::new();
            write_json(
                &mut out_json,
                &json!({
                    "config": {"command": "whitney", "spec": parsed, "depth": depth, "blowup": blowup},
                    "cubes": dec.cubes,
                    "unresolved": dec.unresolved,
                    "max_neighbor_degree": max_degree,
                    "neighbors_comparable": comparable,
                }),
            )?;
            write_out(&out, "whitney.json", &out_json)
        }
        Command::Exceptional { spec, grid, m, out } => {
            let parsed = load_spec(&spec)?;
            let gen = generate(&parsed)?;
            let samples = graph_samples(&gen)?;
            let index = SpatialIndex::build(&gen.measure);
            let radii = ScaleGrid::new(grid.rmax, grid.rmin, grid.ratio)?.radii();
            let h = exceptional_set(&gen.measure, &index, &samples, m, &radii);
            let balls: Vec<_> = (0..h.len())
                .map(|i| json!({"center": h.centers[i], "radius": h.radii[i]}))
                .collect();
            let mut out_json = Vec::new();
            write_json(
                &mut out_json,
                &json!({
                    "config": {"command": "exceptional", "spec": parsed, "grid": grid, "M": m},
                    "balls": balls,
                }),
            )?;
            write_out(&out, "exceptional.json", &out_json)
        }
        Command::Classify { input, grid, n, m, n_threshold, r0, depth, out } => {
            let gen = load_input(&input)?;
            let mu = &gen.measure;
            let index = SpatialIndex::build(mu);
            let lat = DyadicLattice::fit(mu)?;
            let params = StoppingParams {
                m,
                n_threshold,
                r0,
                plane_dim: n,
                depth,
                grid: ScaleGrid::new(grid.rmax, grid.rmin, grid.ratio)?,
                alpha_config: AlphaConfig::coarse(),
            };
            let tree = stopping_classify(mu, &index, &lat, &lat.root(), &params)?;
            let mut out_json = Vec::new();
            write_json(
                &mut out_json,
                &json!({
                    "config": {"command": "classify", "input": input, "params": params},
                    "cubes": tree.cubes,
                    "stopped_mass": tree.stopped_mass(),
                    "root_mass": tree.cubes.first().map_or(0.0, |c| c.mass),
                }),
            )?;
            write_out(&out, "classify.json", &out_json)
        }
        Command::Carleson { spec, n, depth, resolution, out } => {
            let parsed = load_spec(&spec)?;
            let gen = generate(&parsed)?;
            let samples = graph_samples(&gen)?;
            let mu = &gen.measure;
            let index = SpatialIndex::build(mu);
            let config = AlphaConfig { resolution, ..AlphaConfig::default() };
            let param_lat = DyadicLattice::new(vec![0.0; samples.graph.n()], 1.0)?;
            let hierarchy =
                gamma_cubes(&samples, &param_lat, &param_lat.root(), depth, None);
            let alpha_sum =
                carleson_sum_alpha(mu, &index, &hierarchy, &param_lat.root(), n, &config)?;
            let lat = DyadicLattice::fit(mu)?;
            let params = StoppingParams {
                m: 100.0,
                n_threshold: f64::INFINITY,
                r0: 1e9,
                plane_dim: n,
                depth,
                grid: ScaleGrid::new(1.0, 1.0 / 64.0, 0.5)?,
                alpha_config: AlphaConfig::coarse(),
            };
            let tree = stopping_classify(mu, &index, &lat, &lat.root(), &params)?;
            let beta_sum = carleson_sum_beta(mu, &index, &tree)?;
            let root_side = param_lat.root().side(&param_lat);
            let mut out_json = Vec::new();
            write_json(
                &mut out_json,
                &json!({
                    "config": {"command": "carleson", "spec": parsed, "n": n,
                               "depth": depth, "resolution": resolution},
                    "alpha_sum": alpha_sum.total,
                    "alpha_sum_normalized": alpha_sum.total / root_side.powi(n as i32),
                    "alpha_terms": alpha_sum.terms.len(),
                    "beta_sum": beta_sum.total,
                    "beta_terms": beta_sum.terms.len(),
                }),
            )?;
            write_out(&out, "carleson.json", &out_json)
        }
        Command::Verify => verify(),
    }
}

fn check(name: &str, ok: bool, failures: &mut usize) {
    println!("{} - {name}", if ok { "ok" } else { "FAIL" });
    if !ok {
        *failures += 1;
    }
}

/// Structural invariant suites on a small built-in corpus.
fn verify() -> Result<(), Error> {
    let mut failures = 0usize;

    // Whitney structural invariants against the exactly-known flat graph
    let samples = betakit::decomp::graph::LipschitzGraph::flat(1, 2).sample(-8.0, 8.0, 4097);
    let lat = DyadicLattice::new(vec![0.0, 0.0], 1.0)?;
    let dec = whitney_decompose(&samples, &lat, &lat.root(), 7, DEFAULT_BLOWUP);
    let mut whitney_ok = !dec.cubes.is_empty();
    for w in &dec.cubes {
        let side = w.cube.side(&lat);
        let dc = w.cube.center(&lat)[1].abs();
        whitney_ok &= dc > 5.0 * side * 2f64.sqrt();
        whitney_ok &= w.cube.diam(&lat) < (dc - side / 2.0).max(0.0);
        whitney_ok &= dc <= DEFAULT_BLOWUP * side / 2.0;
    }
    let (_, comparable) = neighbor_stats(&dec);
    check("whitney cubes satisfy (i), (ii), (eqeq29)", whitney_ok, &mut failures);
    check("overlapping whitney neighbors have comparable sides", comparable, &mut failures);

    // exceptional set: fifth-ball disjointness and the density sandwich
    let gen = generate(&GeneratorSpec::LipschitzGraph {
        atoms: 512,
        lip: 0.5,
        density: betakit::generators::DensityProfile::Uniform,
    })?;
    let heavy = {
        // add a heavy atom on the graph so H is nonempty
        let mut pts = gen.measure.points().to_vec();
        let mut w = gen.measure.weights().to_vec();
        pts.push(gen.graph.as_ref().unwrap().point(&[0.25]));
        w.push(2.0);
        DiscreteMeasure::new(2, pts, w)?
    };
    let index = SpatialIndex::build(&heavy);
    let g_samples = graph_samples(&gen)?;
    let radii = ScaleGrid::new(1.0, 1.0 / 64.0, 0.5)?.radii();
    let m = 20.0;
    let h = exceptional_set(&heavy, &index, &g_samples, m, &radii);
    let mut disjoint = true;
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            let a = h.fifth_ball(i);
            let b = h.fifth_ball(j);
            if betakit::measure::dist(&a.center, &b.center) < a.radius + b.radius {
                disjoint = false;
            }
        }
    }
    check("exceptional fifth-balls pairwise disjoint", h.len() > 0 && disjoint, &mut failures);
    let sandwich = (0..h.len()).all(|i| {
        let b = Ball::new(h.centers[i].clone(), h.radii[i]).unwrap();
        betakit::measure::mass(&heavy, &index, &b) >= m * h.radii[i]
    });
    check("exceptional balls satisfy the density lower bound", sandwich, &mut failures);

    // stopping: stop cubes pairwise disjoint
    let lat2 = DyadicLattice::fit(&heavy)?;
    let params = StoppingParams {
        m: 5.0,
        n_threshold: f64::INFINITY,
        r0: 1e9,
        plane_dim: 1,
        depth: 4,
        grid: ScaleGrid::new(1.0, 0.25, 0.5)?,
        alpha_config: AlphaConfig::coarse(),
    };
    let tree = stopping_classify(&heavy, &index, &lat2, &lat2.root(), &params)?;
    let stops: Vec<_> = tree.stop_cubes().collect();
    let mut stop_disjoint = true;
    for (i, a) in stops.iter().enumerate() {
        for b in &stops[i + 1..] {
            if a.cube.is_descendant_of(&b.cube) || b.cube.is_descendant_of(&a.cube) {
                stop_disjoint = false;
            }
        }
    }
    check("stop cubes pairwise disjoint", stop_disjoint, &mut failures);

    // determinism: identical runs produce identical bytes
    let grid = ScaleGrid::new(1.0, 1.0 / 16.0, 0.5)?;
    let mk = || -> Result<Vec<u8>, Error> {
        let gen = generate(&GeneratorSpec::PerturbedGraph {
            atoms: 128,
            lip: 0.5,
            noise: 0.01,
            seed: 11,
        })?;
        let idx = SpatialIndex::build(&gen.measure);
        let profiles = sample_atoms(&gen.measure, 5)
            .into_iter()
            .map(|i| {
                jones_function(
                    &gen.measure,
                    &idx,
                    gen.measure.point(i),
                    1,
                    2.0,
                    &grid,
                    CoefficientKind::Beta,
                    &AlphaConfig::default(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut csv = Vec::new();
        write_profile_csv(&mut csv, &profiles)?;
        Ok(csv)
    };
    check("identical config reproduces identical bytes", mk()? == mk()?, &mut failures);

    if failures > 0 {
        Err(Error::InvalidParameter(format!("{failures} invariant suite(s) failed")))
    } else {
        Ok(())
    }
}
