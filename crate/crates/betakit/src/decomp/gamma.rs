//! Dyadic graph cubes: slices `Gamma ∩ (Q_0 x R^{d-n})` over a dyadic
//! parameter cube, with their companion balls and good flags.

use crate::dyadic::{DyadicCube, DyadicLattice};
use crate::measure::Ball;

use super::exceptional::ExceptionalSet;
use super::graph::GraphSamples;

#[derive(Debug, Clone)]
pub struct GammaCube {
    /// The parameter cube `Q_0` in the n-dimensional lattice.
    pub param: DyadicCube,
    /// Center `(x_{Q_0}, A(x_{Q_0}))` on the graph.
    pub center: Vec<f64>,
    pub side: f64,
    /// Upper bound for `diam(Q)` from the Lipschitz constant.
    pub diam: f64,
    /// `B_Q`: closed ball about the center of radius `3 diam(Q)`.
    pub b_q: Ball,
    /// Not contained in `H^9`.
    pub good: bool,
}

#[derive(Debug, Clone)]
pub struct GammaHierarchy {
    pub lattice: DyadicLattice,
    /// Cubes in breadth-first order starting at the root.
    pub cubes: Vec<GammaCube>,
    pub levels: u32,
}

/// Build the dyadic hierarchy of graph cubes under `root` (a cube of the
/// n-dimensional parameter lattice), `levels` generations deep. A cube is
/// good unless every graph sample over its parameter cube lies in `H^9`.
pub fn gamma_cubes(
    samples: &GraphSamples,
    lattice: &DyadicLattice,
    root: &DyadicCube,
    levels: u32,
    exceptional: Option<&ExceptionalSet>,
) -> GammaHierarchy {
    let n = samples.graph.n();
    let lip = samples.graph.lip();
    debug_assert_eq!(lattice.dim, n);
    let mut cubes = Vec::new();
    let mut frontier = vec![root.clone()];
    for _ in 0..=levels {
        let mut next = Vec::new();
        for q in &frontier {
            cubes.push(make_cube(samples, lattice, q, n, lip, exceptional));
            if q.level - root.level < levels as i32 {
                next.extend(q.children(lattice));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    GammaHierarchy { lattice: lattice.clone(), cubes, levels }
}

fn make_cube(
    samples: &GraphSamples,
    lattice: &DyadicLattice,
    q: &DyadicCube,
    n: usize,
    lip: f64,
    exceptional: Option<&ExceptionalSet>,
) -> GammaCube {
    let side = q.side(lattice);
    let param_center = q.center(lattice);
    let center = samples.graph.point(&param_center);
    // diam of the graph over Q_0 is at most diam(Q_0) sqrt(1 + Lip^2)
    let diam = side * (n as f64).sqrt() * (1.0 + lip * lip).sqrt();
    let b_q = Ball { center: center.clone(), radius: 3.0 * diam };
    let good = match exceptional {
        None => true,
        Some(h) if h.is_empty() => true,
        Some(h) => {
            let corner = q.corner(lattice);
            let inside: Vec<&Vec<f64>> = samples
                .params
                .iter()
                .zip(&samples.points)
                .filter(|(u, _)| {
                    (0..n).all(|k| u[k] >= corner[k] && u[k] < corner[k] + side)
                })
                .map(|(_, p)| p)
                .collect();
            // no witness sample: cannot certify containment in H^9
            inside.is_empty() || inside.iter().any(|p| !h.in_hk(p, 9.0))
        }
    };
    GammaCube { param: q.clone(), center, side, diam, b_q, good }
}

impl GammaHierarchy {
    /// Cubes contained in `root` (including the root itself).
    pub fn under<'a>(&'a self, root: &'a DyadicCube) -> impl Iterator<Item = &'a GammaCube> + 'a {
        self.cubes.iter().filter(move |c| c.param.is_descendant_of(root))
    }
}
