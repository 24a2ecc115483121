//! Independent oracles for the integration suites. Each one reaches the
//! quantity along a different route than the production code: random plane
//! sampling for beta, a generic LP for the bounded-Lipschitz distance, and
//! an exhaustive parameter grid for alpha.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use betakit::measure::{dist, mass, restrict};
use betakit::plane::AffinePlane;
use betakit::transport::discretize_plane_measure;
use betakit::{Ball, DiscreteMeasure, SpatialIndex};

/// Orthonormal n-frame in R^d from a seeded Gaussian matrix via QR.
pub fn random_frame(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Vec<f64>> {
    loop {
        let g = DMatrix::from_fn(d, n, |_, _| {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let qr = g.qr();
        let q = qr.q();
        if qr.r().diagonal().iter().all(|&r| r.abs() > 1e-8) {
            return (0..n)
                .map(|j| q.column(j).iter().copied().collect())
                .collect();
        }
    }
}

fn beta_objective(
    restricted: &DiscreteMeasure,
    plane: &AffinePlane,
    p: f64,
    r: f64,
    n: usize,
) -> f64 {
    let sum: f64 = (0..restricted.len())
        .map(|i| restricted.weight(i) * (plane.distance(restricted.point(i)) / r).powf(p))
        .sum();
    (sum / r.powi(n as i32)).powf(1.0 / p)
}

/// Monte-Carlo beta: random orthonormal frames through the weighted
/// centroid plus shrinking perturbations of base and frame around the
/// incumbent. Returns the smallest objective found.
pub fn beta_ball_oracle(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    ball: &Ball,
    n: usize,
    p: f64,
    seed: u64,
    rounds: usize,
) -> f64 {
    let restricted = restrict(mu, index, ball);
    if restricted.total_mass() == 0.0 {
        return 0.0;
    }
    let d = mu.dim();
    let total = restricted.total_mass();
    let centroid: Vec<f64> = (0..d)
        .map(|k| {
            (0..restricted.len())
                .map(|i| restricted.weight(i) * restricted.point(i)[k])
                .sum::<f64>()
                / total
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut best_plane: Option<AffinePlane> = None;
    // global phase: frames through the centroid
    for _ in 0..rounds {
        let frame = random_frame(&mut rng, d, n);
        if let Ok(plane) = AffinePlane::new(centroid.clone(), frame) {
            let v = beta_objective(&restricted, &plane, p, ball.radius, n);
            if v < best {
                best = v;
                best_plane = Some(plane);
            }
        }
    }
    // local phase: jitter the incumbent with shrinking amplitude
    let mut scale = 0.3 * ball.radius;
    for _ in 0..6 {
        for _ in 0..rounds / 2 {
            let incumbent = best_plane.clone().unwrap();
            let base: Vec<f64> = incumbent
                .base()
                .iter()
                .map(|&c| c + rng.gen_range(-scale..=scale))
                .collect();
            let mut spanning: Vec<Vec<f64>> = incumbent.frame().to_vec();
            for v in &mut spanning {
                for c in v.iter_mut() {
                    *c += rng.gen_range(-scale..=scale) / ball.radius;
                }
            }
            if let Ok(plane) = AffinePlane::from_spanning(base, spanning) {
                let v = beta_objective(&restricted, &plane, p, ball.radius, n);
                if v < best {
                    best = v;
                    best_plane = Some(plane);
                }
            }
        }
        scale *= 0.5;
    }
    best
}

/// Generic-LP route to `dist_B(sigma, mu)`: maximize `sum c_i f_i` over
/// `|f_i| <= dist(x_i, B^c)` and the pairwise Lipschitz constraints.
pub fn dist_b_lp_oracle(sigma: &DiscreteMeasure, mu: &DiscreteMeasure, ball: &Ball) -> f64 {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};
    // merge atoms: excess c_i = sigma_i - mu_i at each location
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut excess: Vec<f64> = Vec::new();
    for (m, sign) in [(sigma, 1.0), (mu, -1.0)] {
        for i in 0..m.len() {
            points.push(m.point(i).to_vec());
            excess.push(sign * m.weight(i));
        }
    }
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = points
        .iter()
        .zip(&excess)
        .map(|(x, &c)| {
            let b = (ball.radius - dist(x, &ball.center)).max(0.0);
            problem.add_var(c, (-b, b))
        })
        .collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let cij = dist(&points[i], &points[j]);
            problem.add_constraint(
                [(vars[i], 1.0), (vars[j], -1.0)],
                ComparisonOp::Le,
                cij,
            );
            problem.add_constraint(
                [(vars[j], 1.0), (vars[i], -1.0)],
                ComparisonOp::Le,
                cij,
            );
        }
    }
    problem.solve().expect("oracle LP is feasible").objective()
}

/// Analytic `dist_B` for one atom against one atom (equal weight w):
/// `w * min(|u - v|, b(u) + b(v))`.
pub fn two_atom_formula(u: &[f64], v: &[f64], w: f64, ball: &Ball) -> f64 {
    let bu = (ball.radius - dist(u, &ball.center)).max(0.0);
    let bv = (ball.radius - dist(v, &ball.center)).max(0.0);
    w * dist(u, v).min(bu + bv)
}

/// Exhaustive (angle, offset, amplitude) grid for alpha in the plane
/// (n = 1, d = 2). Lines are parametrized by direction angle and signed
/// offset from the ball center along the normal; the model measure uses the
/// same discretization as production, so this checks the search, with the
/// transport value itself covered by the LP oracle.
pub fn alpha_grid_oracle(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    ball: &Ball,
    resolution: f64,
    angles: usize,
    offsets: usize,
    amplitudes: usize,
) -> f64 {
    use betakit::transport::bounded_lipschitz_distance;
    assert_eq!(mu.dim(), 2);
    let tripled = ball.scaled(3.0);
    let region = restrict(mu, index, &tripled);
    let r = ball.radius;
    if region.total_mass() == 0.0 {
        return 0.0;
    }
    let h = r / resolution;
    let mass_3b = mass(mu, index, &tripled);
    let mut best = f64::INFINITY;
    for ai in 0..angles {
        let th = std::f64::consts::PI * ai as f64 / angles as f64;
        let dir = vec![th.cos(), th.sin()];
        let normal = vec![-th.sin(), th.cos()];
        for oi in 0..offsets {
            // offsets in (-r, r) keep the line meeting the ball
            let t = -r + 2.0 * r * (oi as f64 + 0.5) / offsets as f64;
            let base = vec![
                ball.center[0] + t * normal[0],
                ball.center[1] + t * normal[1],
            ];
            let plane = AffinePlane::new(base, vec![dir.clone()]).unwrap();
            let grid_one = discretize_plane_measure(&plane, ball, 1.0, h).unwrap();
            let unit_mass = grid_one.total_mass();
            if unit_mass == 0.0 {
                continue;
            }
            let a_hi = 4.0 * mass_3b / unit_mass;
            for ki in 0..amplitudes {
                let a = a_hi * ki as f64 / (amplitudes - 1) as f64;
                let model = discretize_plane_measure(&plane, ball, a, h).unwrap();
                let d = bounded_lipschitz_distance(&region, &model, &tripled).unwrap();
                if d < best {
                    best = d;
                }
            }
        }
    }
    best / r.powi(2)
}

/// Seeded random measure with atoms in the unit box and weights in (0, 1].
pub fn random_measure(rng: &mut ChaCha8Rng, d: usize, atoms: usize) -> DiscreteMeasure {
    let points: Vec<Vec<f64>> = (0..atoms)
        .map(|_| (0..d).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    let weights: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.01..1.0)).collect();
    DiscreteMeasure::new(d, points, weights).unwrap()
}
