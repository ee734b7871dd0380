//! Envy graphs and cycle elimination by bundle permutation.
//!
//! The envy graph has an edge `(i, j)` whenever agent `i` strictly prefers
//! agent `j`'s bundle to its own. Cycle elimination rotates bundles
//! backwards along a cycle (each agent on the cycle takes the bundle it
//! envies), which strictly increases every rotated agent's utility and so
//! terminates with an acyclic graph while preserving EF1.

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};

/// Directed agent-level graph encoding "who envies whom".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyGraph {
    n: usize,
    envies: Vec<Vec<bool>>,
}

impl EnvyGraph {
    /// Builds the graph from `values[i][b] = v_i(bundle of agent b)` where
    /// column index is the agent currently holding the bundle.
    pub fn from_agent_values(values: &[Vec<u128>]) -> EnvyGraph {
        let n = values.len();
        let mut envies = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && values[i][i] < values[i][j] {
                    envies[i][j] = true;
                }
            }
        }
        EnvyGraph { n, envies }
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.envies[i][j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.envies[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self).is_ok()
    }
}

/// Envy graph of an allocation (which may be partial; empty bundles are
/// worth zero to everyone and attract no envy edges from themselves).
pub fn build_envy_graph(instance: &Instance, allocation: &Allocation) -> EnvyGraph {
    let n = instance.agents();
    let bundles = allocation.bundles(n);
    let values: Vec<Vec<u128>> = (0..n)
        .map(|i| bundles.iter().map(|b| instance.bundle_value(i, b)).collect())
        .collect();
    EnvyGraph::from_agent_values(&values)
}

/// Kahn's algorithm with lowest-agent-id tie-breaking among sources, so
/// enviers pick earlier and runs are reproducible.
pub fn topological_order(graph: &EnvyGraph) -> Result<Vec<usize>> {
    let n = graph.agents();
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for (j, d) in indegree.iter_mut().enumerate() {
            if graph.has_edge(i, j) {
                *d += 1;
            }
        }
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n).find(|&i| !placed[i] && indegree[i] == 0);
        let Some(i) = next else {
            return Err(Error::EnvyGraphNotAcyclic);
        };
        placed[i] = true;
        order.push(i);
        for (j, d) in indegree.iter_mut().enumerate() {
            if graph.has_edge(i, j) {
                *d -= 1;
            }
        }
    }
    Ok(order)
}

/// Permutes bundle ownership until the envy graph is acyclic.
///
/// `values[i][b] = v_i(physical bundle b)`; `bundle_of_agent` and
/// `agent_of_bundle` are inverse permutations updated in place. Returns the
/// number of cycle rotations performed.
pub(crate) fn rotate_until_acyclic(
    values: &[Vec<u128>],
    bundle_of_agent: &mut [usize],
    agent_of_bundle: &mut [usize],
) -> Result<u64> {
    let n = values.len();
    let mut rotations = 0u64;
    // Each rotation strictly raises every rotated agent's utility, so the
    // multiset of utility profiles cannot repeat; n! caps the permutations.
    let mut guard = 1u64;
    for k in 1..=n as u64 {
        guard = guard.saturating_mul(k);
    }
    loop {
        let value_at = |i: usize, j: usize| values[i][bundle_of_agent[j]];
        let envies =
            |i: usize, j: usize| -> bool { i != j && value_at(i, i) < value_at(i, j) };
        match find_cycle(n, &envies) {
            None => return Ok(rotations),
            Some(cycle) => {
                // Agent cycle[k] takes the bundle held by cycle[k + 1].
                let first_bundle = bundle_of_agent[cycle[0]];
                for k in 0..cycle.len() {
                    let next_bundle = if k + 1 < cycle.len() {
                        bundle_of_agent[cycle[k + 1]]
                    } else {
                        first_bundle
                    };
                    bundle_of_agent[cycle[k]] = next_bundle;
                    agent_of_bundle[next_bundle] = cycle[k];
                }
                rotations += 1;
                if rotations > guard {
                    return Err(Error::Internal(
                        "envy cycle elimination failed to terminate".into(),
                    ));
                }
            }
        }
    }
}

/// DFS from the lowest-id unvisited agent, visiting neighbors in ascending
/// id order; returns the first directed cycle found.
fn find_cycle(n: usize, envies: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; n];
    let mut path: Vec<usize> = Vec::new();

    fn dfs(
        u: usize,
        n: usize,
        envies: &dyn Fn(usize, usize) -> bool,
        color: &mut [u8],
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[u] = GRAY;
        path.push(u);
        for v in 0..n {
            if !envies(u, v) {
                continue;
            }
            if color[v] == GRAY {
                let start = path.iter().position(|&x| x == v).expect("on path");
                return Some(path[start..].to_vec());
            }
            if color[v] == WHITE {
                if let Some(c) = dfs(v, n, envies, color, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        color[u] = BLACK;
        None
    }

    for start in 0..n {
        if color[start] == WHITE {
            if let Some(c) = dfs(start, n, envies, &mut color, &mut path) {
                return Some(c);
            }
        }
    }
    None
}

/// Returns an allocation whose bundles are a permutation of the input's
/// with an acyclic envy graph. Bundle contents never change, so violation
/// counts are untouched, and EF1 inputs stay EF1.
pub fn eliminate_envy_cycles(instance: &Instance, allocation: &Allocation) -> Result<Allocation> {
    let n = instance.agents();
    let bundles = allocation.bundles(n);
    let values: Vec<Vec<u128>> = (0..n)
        .map(|i| bundles.iter().map(|b| instance.bundle_value(i, b)).collect())
        .collect();
    let mut bundle_of_agent: Vec<usize> = (0..n).collect();
    let mut agent_of_bundle: Vec<usize> = (0..n).collect();
    rotate_until_acyclic(&values, &mut bundle_of_agent, &mut agent_of_bundle)?;
    Ok(allocation.permute_bundles(&agent_of_bundle))
}
