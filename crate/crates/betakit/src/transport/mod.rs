//! Bounded-Lipschitz distance and the alpha flatness coefficients.
//!
//! `dist_B(sigma, mu)` is the supremum of `|∫f dsigma - ∫f dmu|` over
//! 1-Lipschitz `f` supported in the closed ball `B`. For atomic measures
//! this is an LP over the values `f_i`; its dual is an uncapacitated
//! min-cost transshipment between the atoms plus a boundary sink whose arc
//! prices are the distances to the complement of `B`. Costs are a metric,
//! so restricting flows to direct arcs loses nothing and the solver in
//! [`flow`] computes the exact optimum.

pub mod flow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{dist, mass, restrict, Ball, DiscreteMeasure};
use crate::plane::AffinePlane;
use crate::spatial::SpatialIndex;
use crate::fit;

use flow::Transshipment;

/// Exact bounded-Lipschitz distance between two atomic measures on a ball.
///
/// Atoms outside the closed ball carry `f = 0` and are dropped. Feasible
/// `f` values obey `|f_i - f_j| <= |x_i - x_j|` and
/// `|f_i| <= dist(x_i, complement of B)`; by McShane extension the optimum
/// equals the paper-level supremum over all admissible test functions.
pub fn bounded_lipschitz_distance(
    sigma: &DiscreteMeasure,
    mu: &DiscreteMeasure,
    ball: &Ball,
) -> Result<f64> {
    if sigma.dim() != mu.dim() {
        return Err(Error::DimensionMismatch { expected: sigma.dim(), got: mu.dim() });
    }
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut excess: Vec<f64> = Vec::new();
    for (m, sign) in [(sigma, 1.0f64), (mu, -1.0)] {
        for i in 0..m.len() {
            let slack = ball.radius - dist(m.point(i), &ball.center);
            if slack > 0.0 && m.weight(i) > 0.0 {
                points.push(m.point(i).to_vec());
                excess.push(sign * m.weight(i));
            }
        }
    }
    Ok(transship_value(&points, &excess, ball)?.0)
}

/// Solve the transshipment for signed atom excesses inside `ball`.
/// Returns `(value, f)` where `f` are optimal test-function values per atom.
fn transship_value(points: &[Vec<f64>], excess: &[f64], ball: &Ball) -> Result<(f64, Vec<f64>)> {
    let m = points.len();
    if m == 0 {
        return Ok((0.0, Vec::new()));
    }
    // node m is the boundary sink
    let n = m + 1;
    let mut cost = vec![0.0f64; n * n];
    for i in 0..m {
        for j in (i + 1)..m {
            let c = dist(&points[i], &points[j]);
            cost[i * n + j] = c;
            cost[j * n + i] = c;
        }
        let b = (ball.radius - dist(&points[i], &ball.center)).max(0.0);
        cost[i * n + m] = b;
        cost[m * n + i] = b;
    }
    let total: f64 = excess.iter().sum();
    let mut ex = excess.to_vec();
    ex.push(-total);
    let sol = Transshipment::new(n, cost, ex)
        .try_solve()
        .map_err(|e| Error::InvalidParameter(format!("transport solver: {e}")))?;
    let y_b = sol.duals[m];
    let f = (0..m).map(|i| sol.duals[i] - y_b).collect();
    Ok((sol.cost, f))
}

/// Atoms on a regular n-grid on `L ∩ 3B`, each of weight `a * h^n`.
///
/// The grid is centered at the projection of the ball center onto the
/// plane. Returns an empty measure (flagged by `is_empty`) when the plane
/// misses the tripled ball.
pub fn discretize_plane_measure(
    plane: &AffinePlane,
    ball: &Ball,
    a: f64,
    h: f64,
) -> Result<DiscreteMeasure> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("grid spacing must be positive, got {h}")));
    }
    if a < 0.0 {
        return Err(Error::InvalidParameter(format!("amplitude must be nonnegative, got {a}")));
    }
    let d = plane.ambient_dim();
    let n = plane.dim();
    let reach = 3.0 * ball.radius;
    if a == 0.0 || plane.distance(&ball.center) > reach {
        return Ok(DiscreteMeasure::empty(d));
    }
    let anchor = plane.project(&ball.center);
    let plane_at_anchor = plane.through(anchor);
    let k_max = (reach / h).floor() as i64 + 1;
    let weight = a * h.powi(n as i32);
    let mut points = Vec::new();
    let mut idx = vec![-k_max; n];
    loop {
        let t: Vec<f64> = idx.iter().map(|&k| k as f64 * h).collect();
        let p = plane_at_anchor.point_at(&t);
        if dist(&p, &ball.center) <= reach {
            points.push(p);
        }
        // odometer over [-k_max, k_max]^n
        let mut carry = 0;
        while carry < n {
            idx[carry] += 1;
            if idx[carry] <= k_max {
                break;
            }
            idx[carry] = -k_max;
            carry += 1;
        }
        if carry == n {
            break;
        }
    }
    let weights = vec![weight; points.len()];
    DiscreteMeasure::new(d, points, weights)
}

/// Search budgets and discretization for [`alpha`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaConfig {
    /// Grid spacing is `r(B) / resolution`.
    pub resolution: f64,
    /// Objective evaluations spent on the derivative-free plane search.
    pub plane_search_budget: usize,
    /// Bisection iterations for the amplitude search.
    pub amplitude_iters: usize,
    /// When more than this many atoms of `mu` land in the tripled ball,
    /// aggregate them into clusters before solving. Instances at or below
    /// the cap are solved on the raw atoms.
    #[serde(default = "default_max_exact_atoms")]
    pub max_exact_atoms: usize,
    /// Cluster spacing is `aggregation_factor * r(B)`. The transport
    /// perturbation from aggregation is bounded by the mass in the tripled
    /// ball times the cluster spacing.
    #[serde(default = "default_aggregation_factor")]
    pub aggregation_factor: f64,
}

fn default_max_exact_atoms() -> usize {
    192
}

fn default_aggregation_factor() -> f64 {
    0.125
}

impl Default for AlphaConfig {
    fn default() -> Self {
        Self {
            resolution: 16.0,
            plane_search_budget: 24,
            amplitude_iters: 14,
            max_exact_atoms: default_max_exact_atoms(),
            aggregation_factor: default_aggregation_factor(),
        }
    }
}

impl AlphaConfig {
    /// Cheap settings for inner loops (stopping-time F membership).
    pub fn coarse() -> Self {
        Self { resolution: 8.0, plane_search_budget: 6, amplitude_iters: 14, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct AlphaRecord {
    pub value: f64,
    pub plane: AffinePlane,
    pub amplitude: f64,
    /// Grid spacing used for the flat model.
    pub resolution: f64,
    /// No mass in the tripled ball; value 0 with amplitude 0.
    pub empty: bool,
    /// The atoms in the tripled ball exceeded the exact-solve cap and were
    /// aggregated into clusters.
    pub aggregated: bool,
}

struct AlphaProblem<'a> {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
    ball: &'a Ball,
    h: f64,
    amplitude_iters: usize,
}

impl AlphaProblem<'_> {
    /// `min_a dist_{3B}(mu, a * grid(L))` by golden-section search on the
    /// convex, piecewise-linear amplitude objective. The search compares
    /// objective values only: subgradients from optimal test functions are
    /// not unique on the regularly spaced grid, so a sign-driven search
    /// would branch on tie-breaks and lose rigid-motion invariance.
    /// Returns `(dist, a)`.
    fn eval_plane(&self, plane: &AffinePlane) -> Result<(f64, f64)> {
        let grid = discretize_plane_measure(plane, self.ball, 1.0, self.h)?;
        let mut points = self.atoms.clone();
        let mut base_excess: Vec<f64> = self.weights.clone();
        let reach = 3.0 * self.ball.radius;
        let boundary_ball = Ball { center: self.ball.center.clone(), radius: reach };
        let mut grid_ids = Vec::new();
        for i in 0..grid.len() {
            if reach - dist(grid.point(i), &boundary_ball.center) > 0.0 {
                grid_ids.push(points.len());
                points.push(grid.point(i).to_vec());
                base_excess.push(0.0);
            }
        }
        let unit = grid.weights().first().copied().unwrap_or(0.0);
        let mu_mass: f64 = self.weights.iter().sum();
        let grid_mass_at_one = unit * grid_ids.len() as f64;

        let mut best = f64::INFINITY;
        let mut best_a = 0.0;
        let mut history: Vec<(f64, f64)> = Vec::new();
        let mut eval = |a: f64, history: &mut Vec<(f64, f64)>| -> Result<f64> {
            let mut ex = base_excess.clone();
            for &g in &grid_ids {
                ex[g] = -a * unit;
            }
            let (v, _) = transship_value(&points, &ex, &boundary_ball)?;
            if v < best {
                best = v;
                best_a = a;
            }
            history.push((a, v));
            Ok(v)
        };

        eval(0.0, &mut history)?;
        if grid_mass_at_one == 0.0 {
            return Ok((best, best_a));
        }
        // beyond a_max the mass mismatch dominates and v is increasing
        let a_max = 4.0 * mu_mass / grid_mass_at_one;
        let phi = 0.5 * (5.0f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0f64, a_max);
        eval(a_max, &mut history)?;
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let mut fc = eval(c, &mut history)?;
        let mut fd = eval(d, &mut history)?;
        for _ in 0..self.amplitude_iters {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = eval(c, &mut history)?;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = eval(d, &mut history)?;
            }
        }
        // the objective is piecewise linear, so its minimum sits at a kink;
        // repeatedly intersect the secants flanking the incumbent to land on
        // it (exact once the flanking points share the kink's two segments)
        for _ in 0..10 {
            history.sort_by(|a, b| a.0.total_cmp(&b.0));
            history.dedup_by(|a, b| a.0 == b.0);
            let i = history
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .map(|(i, _)| i)
                .unwrap();
            if i == 0 || i + 1 == history.len() {
                break;
            }
            // secant through the two points left of the kink and through the
            // two points right of it; taking the pair beyond the immediate
            // neighbor keeps each secant on a single linear segment once the
            // bracket is tight
            let (al, vl) = history[i - 1];
            let (am, vm) = history[i];
            let (ar, vr) = history[i + 1];
            let s_left = (vm - vl) / (am - al);
            let (ar2, vr2) = if i + 2 < history.len() { history[i + 2] } else { (ar, vr) };
            let s_right =
                if ar2 > ar { (vr2 - vr) / (ar2 - ar) } else { (vr - vm) / (ar - am) };
            if !(s_left < 0.0 && s_right > 0.0) {
                break;
            }
            let kink = (vr - vm + s_left * am - s_right * ar) / (s_left - s_right);
            if !kink.is_finite() || kink <= al || kink >= ar || history.iter().any(|p| p.0 == kink)
            {
                break;
            }
            eval(kink, &mut history)?;
        }
        Ok((best, best_a))
    }
}

/// Move the plane so it intersects the closed ball, translating along the
/// normal direction by the smallest amount needed.
fn clamp_plane_to_ball(plane: &AffinePlane, ball: &Ball) -> AffinePlane {
    let d = plane.distance(&ball.center);
    if d <= ball.radius {
        return plane.clone();
    }
    let nearest = plane.project(&ball.center);
    let t = 1.0 - ball.radius / d; // fraction of the way from nearest to center
    let base: Vec<f64> = nearest
        .iter()
        .zip(&ball.center)
        .map(|(p, c)| p + t * (c - p))
        .collect();
    plane.through(base)
}

/// The alpha coefficient of a closed ball: normalized distance from `mu` to
/// the best flat model `a * H^n` on a plane meeting the ball.
///
/// The reported value is an upper bound on the true infimum: the plane
/// search is local (seeded at the L2-optimal plane of `mu` on `3B`) and the
/// flat model is discretized at spacing `r/resolution`.
pub fn alpha(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    ball: &Ball,
    n: usize,
    config: &AlphaConfig,
) -> Result<AlphaRecord> {
    let d = mu.dim();
    if n == 0 || n >= d {
        return Err(Error::BadPlaneDimension { n, d });
    }
    let tripled = ball.scaled(3.0);
    let region = restrict(mu, index, &tripled);
    let r = ball.radius;
    let h = r / config.resolution;
    if region.total_mass() == 0.0 {
        let plane = clamp_plane_to_ball(
            &axis_plane(&ball.center, n),
            ball,
        );
        return Ok(AlphaRecord {
            value: 0.0,
            plane,
            amplitude: 0.0,
            resolution: h,
            empty: true,
            aggregated: false,
        });
    }
    // drop atoms pinned to f = 0 on the boundary of 3B
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for i in 0..region.len() {
        if 3.0 * r - dist(region.point(i), &ball.center) > 0.0 && region.weight(i) > 0.0 {
            atoms.push(region.point(i).to_vec());
            weights.push(region.weight(i));
        }
    }
    let aggregated = atoms.len() > config.max_exact_atoms;
    if aggregated {
        let spacing = config.aggregation_factor * r;
        (atoms, weights) = aggregate_atoms(&atoms, &weights, spacing);
    }
    let problem = AlphaProblem {
        atoms,
        weights,
        ball,
        h,
        amplitude_iters: config.amplitude_iters,
    };

    let seed_fit = fit::fit_plane_l2(&region, n)?;
    let mut current = clamp_plane_to_ball(&seed_fit.plane, ball);
    let (mut current_val, mut current_a) = problem.eval_plane(&current)?;
    let mut evals = 1usize;

    // local search: translate along normals and rotate each tangent toward
    // each normal, accepting the best candidate of a full sweep. Whole
    // sweeps keep the result independent of candidate order, so sign
    // ambiguities in the seed frame cannot steer the search.
    let mut step = 0.25 * r;
    let mut angle = 0.25;
    while evals < config.plane_search_budget && (step > 1e-4 * r || angle > 1e-4) {
        let mut sweep_best: Option<(AffinePlane, f64, f64)> = None;
        let normals = current.normal_frame();
        let mut candidates = Vec::new();
        for sign in [1.0f64, -1.0] {
            for nv in &normals {
                let base: Vec<f64> = current
                    .base()
                    .iter()
                    .zip(nv)
                    .map(|(b, v)| b + sign * step * v)
                    .collect();
                candidates.push(clamp_plane_to_ball(&current.through(base), ball));
            }
            for ti in 0..current.dim() {
                for nv in &normals {
                    let mut frame = current.frame().to_vec();
                    let (s, c) = (sign * angle).sin_cos();
                    for k in 0..d {
                        frame[ti][k] = c * frame[ti][k] + s * nv[k];
                    }
                    if let Ok(rotated) = AffinePlane::from_spanning(current.base().to_vec(), frame) {
                        candidates.push(clamp_plane_to_ball(&rotated, ball));
                    }
                }
            }
        }
        for cand in candidates {
            let (v, a) = problem.eval_plane(&cand)?;
            evals += 1;
            if v < sweep_best.as_ref().map_or(f64::INFINITY, |b| b.1) {
                sweep_best = Some((cand, v, a));
            }
        }
        match sweep_best {
            Some((plane, v, a)) if v < current_val => {
                current = plane;
                current_val = v;
                current_a = a;
            }
            _ => {
                step *= 0.5;
                angle *= 0.5;
            }
        }
    }

    Ok(AlphaRecord {
        value: current_val / r.powi(n as i32 + 1),
        plane: current,
        amplitude: current_a,
        resolution: h,
        empty: false,
        aggregated,
    })
}

/// Greedy cluster aggregation: atoms join the first seed within `spacing`
/// (in index order) or start a new seed; each cluster is replaced by its
/// weighted centroid. Seeds end up pairwise `spacing`-separated, so the
/// cluster count is bounded by a packing number of the region independent
/// of the atom count. The rule uses only pairwise distances and atom
/// order, so it commutes with rigid motions and dilations of the input.
fn aggregate_atoms(atoms: &[Vec<f64>], weights: &[f64], spacing: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut seeds: Vec<&[f64]> = Vec::new();
    let mut sums: Vec<Vec<f64>> = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    for (p, &w) in atoms.iter().zip(weights) {
        match seeds.iter().position(|s| dist(s, p) <= spacing) {
            Some(k) => {
                for (acc, x) in sums[k].iter_mut().zip(p) {
                    *acc += w * x;
                }
                masses[k] += w;
            }
            None => {
                seeds.push(p);
                sums.push(p.iter().map(|x| w * x).collect());
                masses.push(w);
            }
        }
    }
    let centroids = sums
        .iter()
        .zip(&masses)
        .map(|(s, &m)| s.iter().map(|x| x / m).collect())
        .collect();
    (centroids, masses)
}

fn axis_plane(center: &[f64], n: usize) -> AffinePlane {
    let d = center.len();
    let frame = (0..n)
        .map(|i| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        })
        .collect();
    AffinePlane::new(center.to_vec(), frame).expect("axis frame is orthonormal")
}

/// Alpha with an index built on the fly.
pub fn alpha_standalone(
    mu: &DiscreteMeasure,
    ball: &Ball,
    n: usize,
    config: &AlphaConfig,
) -> Result<AlphaRecord> {
    let index = SpatialIndex::build(mu);
    alpha(mu, &index, ball, n, config)
}

/// Explicit constant in `beta_1(x,r) <= C alpha(x,2r)`.
///
/// With the cutoff `phi` equal to 1 on `B(x,r)`, vanishing outside
/// `B(x,2r)` and `Lip(phi) <= 1/r`, the test function `phi dist(.,L)` has
/// Lipschitz constant at most `(sup_B(x,2r) dist(.,L))/r + 1 <= 5` because
/// the optimal plane meets `B(x,2r)`. Unwinding the normalizations of
/// `beta_1(x,r)` and `alpha(x,2r)` multiplies that by `2^{n+1}`.
pub fn beta1_alpha_constant(n: usize) -> f64 {
    5.0 * (2.0f64).powi(n as i32 + 1)
}

/// A quick mass check: `alpha(B) <= 3 mu(3B)/r^n` because `a = 0` is
/// admissible and `|f| <= 3r` on the support of any test function.
pub fn alpha_trivial_bound(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    ball: &Ball,
    n: usize,
) -> f64 {
    3.0 * mass(mu, index, &ball.scaled(3.0)) / ball.radius.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_atoms(pts: Vec<Vec<f64>>) -> DiscreteMeasure {
        let n = pts.len();
        DiscreteMeasure::new(pts[0].len(), pts, vec![1.0; n]).unwrap()
    }

    #[test]
    fn dist_b_equal_measures_zero() {
        let mu = unit_atoms(vec![vec![0.1, 0.2], vec![-0.3, 0.4]]);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let v = bounded_lipschitz_distance(&mu, &mu, &b).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn dist_b_two_atom_formula() {
        // min(|u - v|, d_c(u) + d_c(v)) with u=(0.8,0), v=(-0.8,0), B(0,1)
        let u = unit_atoms(vec![vec![0.8, 0.0]]);
        let v = unit_atoms(vec![vec![-0.8, 0.0]]);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let got = bounded_lipschitz_distance(&u, &v, &b).unwrap();
        assert!((got - 0.4).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn dist_b_atom_vs_zero_saturates_support() {
        let u = unit_atoms(vec![vec![0.5, 0.0]]);
        let zero = DiscreteMeasure::empty(2);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let got = bounded_lipschitz_distance(&u, &zero, &b).unwrap();
        assert!((got - 0.5).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn dist_b_monotone_in_ball() {
        let u = unit_atoms(vec![vec![0.5, 0.0], vec![-0.2, 0.3]]);
        let v = unit_atoms(vec![vec![0.1, -0.4]]);
        let b1 = Ball::new(vec![0.0, 0.0], 0.8).unwrap();
        let b2 = Ball::new(vec![0.0, 0.0], 1.6).unwrap();
        let d1 = bounded_lipschitz_distance(&u, &v, &b1).unwrap();
        let d2 = bounded_lipschitz_distance(&u, &v, &b2).unwrap();
        assert!(d2 >= d1 - 1e-12);
    }

    #[test]
    fn discretize_line_in_unit_ball() {
        let l = axis_plane(&[0.0, 0.0], 1);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let grid = discretize_plane_measure(&l, &b, 1.0, 0.25).unwrap();
        assert_eq!(grid.len(), 25);
        assert!((grid.total_mass() - 6.25).abs() < 1e-12);
        let doubled = discretize_plane_measure(&l, &b, 2.0, 0.25).unwrap();
        assert!((doubled.total_mass() - 12.5).abs() < 1e-12);
    }

    #[test]
    fn discretize_zero_amplitude_or_missing_plane() {
        let l = axis_plane(&[0.0, 0.0], 1);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        assert!(discretize_plane_measure(&l, &b, 0.0, 0.25).unwrap().is_empty());
        let far = axis_plane(&[0.0, 10.0], 1);
        assert!(discretize_plane_measure(&far, &b, 1.0, 0.25).unwrap().is_empty());
    }

    #[test]
    fn alpha_zero_on_own_discretization() {
        let l = axis_plane(&[0.0, 0.0], 1);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let mu = discretize_plane_measure(&l, &b, 1.0, 1.0 / 16.0).unwrap();
        let rec = alpha_standalone(&mu, &b, 1, &AlphaConfig::default()).unwrap();
        assert!(rec.value < 1e-9, "alpha = {}", rec.value);
    }

    #[test]
    fn alpha_empty_region() {
        let mu = unit_atoms(vec![vec![100.0, 0.0]]);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let rec = alpha_standalone(&mu, &b, 1, &AlphaConfig::default()).unwrap();
        assert_eq!(rec.value, 0.0);
        assert_eq!(rec.amplitude, 0.0);
        assert!(rec.empty);
    }

    #[test]
    fn alpha_respects_trivial_mass_bound() {
        let mu = unit_atoms(vec![
            vec![0.1, 0.1],
            vec![-0.1, 0.1],
            vec![0.1, -0.1],
            vec![-0.1, -0.1],
        ]);
        let idx = SpatialIndex::build(&mu);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let rec = alpha(&mu, &idx, &b, 1, &AlphaConfig::default()).unwrap();
        let bound = alpha_trivial_bound(&mu, &idx, &b, 1);
        assert!(rec.value <= bound + 1e-9, "{} > {}", rec.value, bound);
    }

    #[test]
    fn aggregation_preserves_mass_and_separates_seeds() {
        let atoms: Vec<Vec<f64>> = (0..1000).map(|i| vec![i as f64 / 1000.0, 0.0]).collect();
        let weights = vec![1e-3; 1000];
        let (cl, masses) = aggregate_atoms(&atoms, &weights, 0.1);
        let total: f64 = masses.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(cl.len() <= 11, "got {} clusters", cl.len());
        // centroids of contiguous runs stay on the line
        for c in &cl {
            assert!(c[1].abs() < 1e-15);
        }
    }

    #[test]
    fn aggregated_alpha_close_to_exact_on_dense_segment() {
        // 400 atoms on a segment, small ball: solve once exactly (cap
        // lifted) and once aggregated; values agree to within the
        // displacement bound.
        let n = 400;
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![(i as f64 + 0.5) / n as f64, 0.0]).collect();
        let mu = DiscreteMeasure::new(2, pts, vec![1.0 / n as f64; n]).unwrap();
        let r = 0.05;
        let b = Ball::new(vec![0.5, 0.0], r).unwrap();
        let mut exact_cfg = AlphaConfig { max_exact_atoms: usize::MAX, ..AlphaConfig::default() };
        exact_cfg.plane_search_budget = 4;
        let exact = alpha_standalone(&mu, &b, 1, &exact_cfg).unwrap();
        assert!(!exact.aggregated);
        let mut agg_cfg = AlphaConfig { max_exact_atoms: 50, ..AlphaConfig::default() };
        agg_cfg.plane_search_budget = 4;
        let agg = alpha_standalone(&mu, &b, 1, &agg_cfg).unwrap();
        assert!(agg.aggregated);
        // mass(3B) * spacing / r^2 bounds the perturbation
        let slack = (6.0 * r) * (0.125 * r) / (r * r);
        assert!(
            (agg.value - exact.value).abs() <= slack,
            "exact {} aggregated {}",
            exact.value,
            agg.value
        );
    }

    #[test]
    fn plane_clamped_into_ball() {
        let l = axis_plane(&[0.0, 5.0], 1);
        let b = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let clamped = clamp_plane_to_ball(&l, &b);
        assert!(clamped.distance(&b.center) <= b.radius + 1e-12);
    }
}
