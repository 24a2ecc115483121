//! Stopping-time classification of a dyadic tree: high-density, low-density
//! and big-alpha-sum cubes, their maximal (stop) representatives, and the
//! surviving good family.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dyadic::{cube_atoms, cube_mass, DyadicCube, DyadicLattice};
use crate::error::Result;
use crate::measure::{mass, DiscreteMeasure};
use crate::multiscale::{jones_function, CoefficientKind, ScaleGrid};
use crate::spatial::SpatialIndex;
use crate::transport::AlphaConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeLabel {
    /// Too coarse: `diam(Q) > r_0 / 10`.
    Above,
    /// Stop cube: `mu(B_Q) >= M l(Q)^n`.
    HighDensity,
    /// Stop cube: `mu(3Q) <= l(Q)^n / M`.
    LowDensity,
    /// Stop cube: `Q` misses `F(N)`, the points with alpha square sum `<= N`.
    BigAlpha,
    /// Eligible and not stopped.
    Good,
    /// Strict descendant of a stop cube.
    BelowStop,
}

impl CubeLabel {
    pub fn is_stop(self) -> bool {
        matches!(
            self,
            CubeLabel::HighDensity | CubeLabel::LowDensity | CubeLabel::BigAlpha
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoppingParams {
    /// Density threshold `M` for the high/low tests.
    pub m: f64,
    /// Alpha-sum threshold `N` defining `F(N)`.
    pub n_threshold: f64,
    /// Eligibility radius: cubes enter the game once `diam(Q) <= r_0/10`.
    pub r0: f64,
    /// Plane dimension `n`.
    pub plane_dim: usize,
    /// Generations below the root to classify.
    pub depth: u32,
    /// Scale grid for the discrete alpha sums behind `F(N)`.
    pub grid: ScaleGrid,
    /// Budgets for the alpha evaluations behind `F(N)`.
    pub alpha_config: AlphaConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifiedCube {
    pub cube: DyadicCube,
    pub label: CubeLabel,
    /// `mu(Q)` (half-open cube).
    pub mass: f64,
    /// `mu(B_Q)` with `B_Q = closed ball(center, 3 diam)`.
    pub ball_mass: f64,
    /// `mu(3Q)`.
    pub tripled_mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StoppedTree {
    pub lattice: DyadicLattice,
    pub root: DyadicCube,
    pub params: StoppingParams,
    /// Breadth-first from the root.
    pub cubes: Vec<ClassifiedCube>,
}

impl StoppedTree {
    pub fn stop_cubes(&self) -> impl Iterator<Item = &ClassifiedCube> {
        self.cubes.iter().filter(|c| c.label.is_stop())
    }

    pub fn good_cubes(&self) -> impl Iterator<Item = &ClassifiedCube> {
        self.cubes.iter().filter(|c| c.label == CubeLabel::Good)
    }

    /// Mass of the root captured by stop cubes.
    pub fn stopped_mass(&self) -> f64 {
        self.stop_cubes().map(|c| c.mass).fold(0.0, |a, b| a + b)
    }
}

/// Lazily decides membership of atoms in `F(N)`, caching per atom.
struct FMembership<'a> {
    mu: &'a DiscreteMeasure,
    index: &'a SpatialIndex,
    params: &'a StoppingParams,
    cache: HashMap<usize, bool>,
}

impl FMembership<'_> {
    fn contains(&mut self, atom: usize) -> Result<bool> {
        // threshold infinity puts every atom in F without computing profiles
        if self.params.n_threshold.is_infinite() && self.params.n_threshold > 0.0 {
            return Ok(true);
        }
        if let Some(&hit) = self.cache.get(&atom) {
            return Ok(hit);
        }
        let profile = jones_function(
            self.mu,
            self.index,
            self.mu.point(atom),
            self.params.plane_dim,
            2.0,
            &self.params.grid,
            CoefficientKind::Alpha,
            &self.params.alpha_config,
        )?;
        let hit = profile.last_sum() <= self.params.n_threshold;
        self.cache.insert(atom, hit);
        Ok(hit)
    }
}

/// Classify one cube in isolation (fresh `F(N)` cache, no maximality).
pub fn classify_single(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    lattice: &DyadicLattice,
    q: &DyadicCube,
    params: &StoppingParams,
) -> Result<ClassifiedCube> {
    let mut f = FMembership { mu, index, params, cache: HashMap::new() };
    evaluate(mu, index, lattice, q, params, &mut f)
}

fn evaluate(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    lattice: &DyadicLattice,
    q: &DyadicCube,
    params: &StoppingParams,
    f: &mut FMembership<'_>,
) -> Result<ClassifiedCube> {
    let n = params.plane_dim;
    let side = q.side(lattice);
    let atoms = cube_atoms(index, lattice, q);
    let q_mass: f64 = atoms.iter().map(|&i| mu.weight(i)).sum();
    let tripled = cube_mass(mu, index, lattice, q, 3.0);
    let ball_mass = mass(mu, index, &q.b_q(lattice));
    let label = if q.diam(lattice) > params.r0 / 10.0 {
        CubeLabel::Above
    } else if ball_mass >= params.m * side.powi(n as i32) {
        CubeLabel::HighDensity
    } else if tripled <= side.powi(n as i32) / params.m {
        CubeLabel::LowDensity
    } else if misses_f(&atoms, f)? {
        CubeLabel::BigAlpha
    } else {
        CubeLabel::Good
    };
    Ok(ClassifiedCube {
        cube: q.clone(),
        label,
        mass: q_mass,
        ball_mass,
        tripled_mass: tripled,
    })
}

/// Top-down labeling. Stop cubes are the maximal eligible cubes hitting a
/// stopping condition; their strict descendants are below-stop, everything
/// eligible above them is good, and cubes coarser than `r_0/10` are above.
///
/// Only cubes carrying mass are enumerated: the dyadic tree of a measure is
/// its positive-mass cubes, so empty regions are skipped rather than
/// labeled low-density.
pub fn stopping_classify(
    mu: &DiscreteMeasure,
    index: &SpatialIndex,
    lattice: &DyadicLattice,
    root: &DyadicCube,
    params: &StoppingParams,
) -> Result<StoppedTree> {
    let mut f = FMembership { mu, index, params, cache: HashMap::new() };
    let mut cubes = Vec::new();
    // (cube, under a stop cube already?)
    let mut frontier = vec![(root.clone(), false)];
    for _ in 0..=params.depth {
        let mut next = Vec::new();
        for (q, below) in frontier {
            let mut classified = evaluate(mu, index, lattice, &q, params, &mut f)?;
            if classified.mass == 0.0 {
                continue;
            }
            if below {
                classified.label = CubeLabel::BelowStop;
            }
            let label = classified.label;
            cubes.push(classified);
            if q.level - root.level < params.depth as i32 {
                let child_below = below || label.is_stop();
                next.extend(q.children(lattice).into_iter().map(|c| (c, child_below)));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(StoppedTree {
        lattice: lattice.clone(),
        root: root.clone(),
        params: params.clone(),
        cubes,
    })
}

/// `Q ∩ F = ∅`: no atom of `Q` has a small alpha square sum. An empty cube
/// is handled earlier by the low-density test, but counts as missing `F`.
fn misses_f(atoms: &[usize], f: &mut FMembership<'_>) -> Result<bool> {
    for &i in atoms {
        if f.contains(i)? {
            return Ok(false);
        }
    }
    Ok(true)
}
