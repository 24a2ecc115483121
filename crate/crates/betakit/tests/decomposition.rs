//! Structural invariants of the geometric decompositions: Whitney cube
//! certificates, exceptional-set covering properties, and the stopping-time
//! tree partition laws.

mod common;

use betakit::decomp::exceptional::exceptional_set;
use betakit::decomp::gamma::gamma_cubes;
use betakit::decomp::graph::LipschitzGraph;
use betakit::decomp::stopping::{stopping_classify, CubeLabel, StoppingParams};
use betakit::decomp::whitney::{neighbor_stats, whitney_decompose, DEFAULT_BLOWUP};
use betakit::dyadic::DyadicLattice;
use betakit::measure::{dist, mass, Ball};
use betakit::multiscale::ScaleGrid;
use betakit::transport::AlphaConfig;
use betakit::{DiscreteMeasure, SpatialIndex};

fn sine_graph(lip: f64) -> LipschitzGraph {
    let tau = std::f64::consts::TAU;
    LipschitzGraph::new(
        1,
        2,
        lip,
        std::sync::Arc::new(move |u: &[f64]| vec![lip * (tau * u[0]).sin() / tau]),
    )
    .unwrap()
}

#[test]
fn whitney_cubes_satisfy_their_certificates() {
    let graph = sine_graph(0.5);
    let samples = graph.sample(-1.0, 2.0, 3072);
    let lat = DyadicLattice::new(vec![-2.0, -2.0], 4.0).unwrap();
    let dec = whitney_decompose(&samples, &lat, &lat.root(), 7, DEFAULT_BLOWUP);
    assert!(!dec.cubes.is_empty());
    let sqrt_d = (2.0f64).sqrt();
    for w in &dec.cubes {
        let side = w.cube.side(&lat);
        let diam = w.cube.diam(&lat);
        let center = w.cube.center(&lat);
        let d_hi = samples.sampled_distance(&center);
        let d_lo = (d_hi - samples.slack()).max(0.0);
        assert!(d_lo > 5.0 * side * sqrt_d, "property (i) fails at {:?}", w.cube);
        assert!(diam < (d_lo - diam / 2.0).max(0.0), "diameter bound fails at {:?}", w.cube);
        assert!(d_hi <= DEFAULT_BLOWUP * side / 2.0, "property (ii) fails at {:?}", w.cube);
        assert!(w.dist_lower > 0.0);
    }
    // emitted cubes are pairwise disjoint (no cube is an ancestor of another)
    for (i, a) in dec.cubes.iter().enumerate() {
        for b in dec.cubes.iter().skip(i + 1) {
            assert!(
                !a.cube.is_descendant_of(&b.cube) && !b.cube.is_descendant_of(&a.cube),
                "{:?} and {:?} overlap",
                a.cube,
                b.cube
            );
        }
    }
    let (max_neighbors, comparable) = neighbor_stats(&dec);
    assert!(comparable, "overlapping 10Q boxes must have comparable sides");
    assert!(max_neighbors > 0);
}

#[test]
fn exceptional_balls_disjoint_and_density_sandwich() {
    let graph = sine_graph(0.5);
    let samples = graph.sample(0.0, 1.0, 513);
    // graph arclength measure plus one heavy atom to create high density
    let mut points: Vec<Vec<f64>> = samples.points.clone();
    let k = points.len();
    let mut weights = vec![1.0 / k as f64; k];
    points.push(graph.point(&[0.25]));
    weights.push(2.0);
    let mu = DiscreteMeasure::new(2, points, weights).unwrap();
    let idx = SpatialIndex::build(&mu);
    let grid = ScaleGrid::new(0.5, 1.0 / 512.0, 0.5).unwrap();
    let m = 20.0;
    let h = exceptional_set(&mu, &idx, &samples, m, &grid.radii());
    assert!(!h.is_empty(), "the heavy atom must produce exceptional balls");

    // fifth balls pairwise disjoint
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            let (a, b) = (h.fifth_ball(i), h.fifth_ball(j));
            assert!(
                dist(&a.center, &b.center) > a.radius + b.radius,
                "fifth balls {i} and {j} intersect"
            );
        }
    }

    // density sandwich at each kept center: the selected radius violates
    // the density bound and every larger grid radius does not
    for i in 0..h.len() {
        let ball = h.fifth_ball(i);
        let hit = mass(&mu, &idx, &ball);
        assert!(
            hit >= m * ball.radius,
            "selected radius not violating: {} < {}",
            hit,
            m * ball.radius
        );
        for r in grid.radii() {
            if r > ball.radius {
                let bigger = Ball { center: ball.center.clone(), radius: r };
                assert!(
                    mass(&mu, &idx, &bigger) < m * r,
                    "radius {r} above the cutoff still violates at center {i}"
                );
            }
        }
    }

    // H is contained in every blown-up H^k
    for i in 0..h.len() {
        assert!(h.in_h(&h.centers[i]));
        assert!(h.in_hk(&h.centers[i], 9.0));
    }
}

#[test]
fn exceptional_mass_fraction_shrinks_with_threshold() {
    // Lemma-level surrogate: the mass captured by the 9-fold blow-up of the
    // exceptional set is non-increasing in the density threshold M.
    let graph = sine_graph(0.5);
    let samples = graph.sample(0.0, 1.0, 513);
    let mut points: Vec<Vec<f64>> = samples.points.clone();
    let k = points.len();
    let mut weights = vec![1.0 / k as f64; k];
    points.push(graph.point(&[0.25]));
    weights.push(0.5);
    let mu = DiscreteMeasure::new(2, points, weights).unwrap();
    let idx = SpatialIndex::build(&mu);
    let grid = ScaleGrid::new(0.5, 1.0 / 512.0, 0.5).unwrap();
    let mut fractions = Vec::new();
    for m in [10.0, 100.0, 1000.0] {
        let h = exceptional_set(&mu, &idx, &samples, m, &grid.radii());
        let captured: f64 = (0..mu.len())
            .filter(|&i| h.in_hk(mu.point(i), 9.0))
            .map(|i| mu.weight(i))
            .sum();
        fractions.push(captured / mu.total_mass());
    }
    assert!(
        fractions[0] >= fractions[1] && fractions[1] >= fractions[2],
        "mass fractions must be non-increasing in M: {fractions:?}"
    );
    assert!(fractions[2] < fractions[0] + 1e-12);
}

#[test]
fn gamma_leaves_partition_the_root() {
    let graph = sine_graph(0.3);
    let samples = graph.sample(0.0, 1.0, 1025);
    let lat = DyadicLattice::new(vec![0.0], 1.0).unwrap();
    let hierarchy = gamma_cubes(&samples, &lat, &lat.root(), 3, None);
    // at each level the parameter cubes tile [0,1): probe points land in
    // exactly one cube per level
    for level in 0..=3i32 {
        let at_level: Vec<_> = hierarchy.cubes.iter().filter(|c| c.param.level == level).collect();
        assert_eq!(at_level.len(), 1usize << level);
        for probe in [0.0, 0.1, 0.37, 0.5, 0.93] {
            let hits = at_level
                .iter()
                .filter(|c| c.param.contains_point(&lat, &[probe]))
                .count();
            assert_eq!(hits, 1, "probe {probe} at level {level}");
        }
    }
}

#[test]
fn stop_cubes_disjoint_and_maximal() {
    // corner-weighted graph: heavier on one side so some cubes stop
    let graph = sine_graph(0.5);
    let samples = graph.sample(0.0, 1.0, 257);
    let points: Vec<Vec<f64>> = samples.points.clone();
    let k = points.len();
    let weights: Vec<f64> = (0..k).map(|i| if i < k / 8 { 1.0 } else { 1.0 / k as f64 }).collect();
    let mu = DiscreteMeasure::new(2, points, weights).unwrap();
    let idx = SpatialIndex::build(&mu);
    let lat = DyadicLattice::new(vec![-0.5, -1.0], 2.0).unwrap();
    let params = StoppingParams {
        m: 3.0,
        n_threshold: f64::INFINITY,
        r0: 1e9,
        plane_dim: 1,
        depth: 5,
        grid: ScaleGrid::dyadic(1.0, 0.125).unwrap(),
        alpha_config: AlphaConfig::coarse(),
    };
    let tree = stopping_classify(&mu, &idx, &lat, &lat.root(), &params).unwrap();
    let stops: Vec<_> = tree.stop_cubes().collect();
    assert!(!stops.is_empty(), "the heavy corner must trigger stopping");

    for (i, a) in stops.iter().enumerate() {
        for b in stops.iter().skip(i + 1) {
            assert!(
                !a.cube.is_descendant_of(&b.cube) && !b.cube.is_descendant_of(&a.cube),
                "stop cubes are nested"
            );
        }
    }

    // maximality: the parent of every stop cube did not stop
    for s in &stops {
        if let Some(parent) = s.cube.parent() {
            if let Some(pc) = tree.cubes.iter().find(|c| c.cube == parent) {
                assert!(!pc.label.is_stop(), "parent of a stop cube also stopped");
            }
        }
    }

    // labels are consistent: below-stop cubes have a stopping ancestor
    for c in &tree.cubes {
        if c.label == CubeLabel::BelowStop {
            assert!(
                stops.iter().any(|s| c.cube.is_descendant_of(&s.cube)),
                "below-stop cube without stopping ancestor"
            );
        }
    }

    // stopped mass never exceeds the total
    assert!(tree.stopped_mass() <= mu.total_mass() + 1e-12);
}
