//! Exact uncapacitated min-cost transshipment on a dense metric graph.
//!
//! Successive shortest paths with Johnson potentials. Every augmentation
//! zeroes the excess of at least one node, so the number of augmentations is
//! at most the node count; with nonnegative symmetric costs the reduced
//! costs stay nonnegative and the final flow is optimal. The final
//! potentials are optimal duals of the balance constraints, which is what
//! the Lipschitz test function is read off from.

/// Dense symmetric cost matrix plus per-node excess (positive = supply).
pub struct Transshipment {
    n: usize,
    cost: Vec<f64>,
    excess: Vec<f64>,
}

pub struct FlowSolution {
    /// Optimal transport cost (the LP value).
    pub cost: f64,
    /// Optimal dual value per node: `y_i - y_j <= c_ij` and
    /// `sum_i excess_i * y_i == cost`.
    pub duals: Vec<f64>,
}

impl Transshipment {
    /// `cost` is row-major `n x n`, symmetric, nonnegative, zero diagonal.
    /// `excess` must sum to ~0 (caller balances via a slack node).
    pub fn new(n: usize, cost: Vec<f64>, excess: Vec<f64>) -> Self {
        debug_assert_eq!(cost.len(), n * n);
        debug_assert_eq!(excess.len(), n);
        Self { n, cost, excess }
    }

    pub fn solve(self) -> FlowSolution {
        self.try_solve().expect("transshipment solve failed")
    }

    pub fn try_solve(mut self) -> Result<FlowSolution, String> {
        let n = self.n;
        let mut flow = vec![0.0f64; n * n];
        let mut pot = vec![0.0f64; n];
        let scale: f64 = self.excess.iter().map(|e| e.abs()).sum::<f64>().max(1.0);
        let tol = 1e-14 * scale;

        let mut dist = vec![0.0f64; n];
        let mut parent = vec![usize::MAX; n];
        let mut via_backward = vec![false; n];
        let mut settled = vec![false; n];

        let max_rounds = 50 * n + 100;
        let mut rounds = 0usize;
        loop {
            // largest remaining supply first: moves the most mass per
            // augmentation and keeps the augmentation count near the node
            // count in practice
            let mut src = usize::MAX;
            let mut src_excess = tol;
            for i in 0..n {
                if self.excess[i] > src_excess {
                    src_excess = self.excess[i];
                    src = i;
                }
            }
            if src == usize::MAX {
                break;
            }
            rounds += 1;
            if rounds > max_rounds {
                return Err(format!(
                    "no convergence after {rounds} augmentations ({n} nodes, residual excess {:.3e})",
                    self.excess.iter().map(|e| e.abs()).sum::<f64>()
                ));
            }
            // Dijkstra from src over residual arcs with reduced costs
            for i in 0..n {
                dist[i] = f64::INFINITY;
                parent[i] = usize::MAX;
                via_backward[i] = false;
                settled[i] = false;
            }
            dist[src] = 0.0;
            let mut sink = usize::MAX;
            loop {
                let mut u = usize::MAX;
                let mut best = f64::INFINITY;
                for i in 0..n {
                    if !settled[i] && dist[i] < best {
                        best = dist[i];
                        u = i;
                    }
                }
                if u == usize::MAX {
                    break;
                }
                settled[u] = true;
                if self.excess[u] < -tol {
                    sink = u;
                    break;
                }
                for v in 0..n {
                    if settled[v] || v == u {
                        continue;
                    }
                    // forward arc u->v always present; backward residual of
                    // flow v->u has cost -c(v,u) = -c(u,v)
                    let c_uv = self.cost[u * n + v];
                    let forward = c_uv + pot[u] - pot[v];
                    let mut w = forward;
                    let mut backward_arc = false;
                    if flow[v * n + u] > 0.0 {
                        let backward = -c_uv + pot[u] - pot[v];
                        if backward < w {
                            w = backward;
                            backward_arc = true;
                        }
                    }
                    let w = w.max(0.0); // clamp float dust
                    if dist[u] + w < dist[v] {
                        dist[v] = dist[u] + w;
                        parent[v] = u;
                        via_backward[v] = backward_arc;
                    }
                }
            }
            if sink == usize::MAX {
                // no reachable deficit: only possible when excesses are all
                // within tolerance of zero
                break;
            }
            let d_sink = dist[sink];
            for i in 0..n {
                pot[i] += dist[i].min(d_sink);
            }
            // path capacity: backward arcs are limited by the flow they cancel
            let mut delta = self.excess[src].min(-self.excess[sink]);
            let mut v = sink;
            while v != src {
                let u = parent[v];
                if via_backward[v] {
                    delta = delta.min(flow[v * n + u]);
                }
                v = u;
            }
            if !(delta > 0.0) {
                break;
            }
            let mut v = sink;
            while v != src {
                let u = parent[v];
                if via_backward[v] {
                    flow[v * n + u] -= delta;
                } else {
                    let cancel = flow[v * n + u].min(delta);
                    flow[v * n + u] -= cancel;
                    flow[u * n + v] += delta - cancel;
                }
                v = u;
            }
            if delta >= self.excess[src] {
                self.excess[src] = 0.0;
            } else {
                self.excess[src] -= delta;
            }
            if delta >= -self.excess[sink] {
                self.excess[sink] = 0.0;
            } else {
                self.excess[sink] += delta;
            }
        }

        let mut total = 0.0;
        for u in 0..n {
            for v in 0..n {
                if flow[u * n + v] > 0.0 {
                    total += flow[u * n + v] * self.cost[u * n + v];
                }
            }
        }
        // duals: y_i = -pot_i satisfies y_u - y_v <= c_uv on all arcs
        let duals = pot.iter().map(|p| -p).collect();
        Ok(FlowSolution { cost: total, duals })
    }
}
