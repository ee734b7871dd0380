//! Problem instances, allocations, and the verification primitives.
//!
//! Valuations and edge weights are exact non-negative scaled integers: the
//! parser maps decimal input onto a common power-of-ten scale per instance,
//! and every comparison in the library (EF1 checks, violation bounds,
//! baselines) is performed on integers or reduced fractions. Nothing here
//! touches floating point.

use crate::error::{Error, Result};
use crate::ratio::Ratio;
use std::collections::HashSet;

/// An undirected conflict edge between two goods, with an exact weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

/// A fair-division instance: agents, goods, additive valuations, and a
/// simple conflict graph on goods. Agent and good ids are 0-based here;
/// the CLI layer translates from the 1-based wire format.
#[derive(Debug, Clone)]
pub struct Instance {
    n: usize,
    m: usize,
    valuations: Vec<Vec<u64>>,
    edges: Vec<Edge>,
    vscale: u64,
    wscale: u64,
    adjacency: Vec<Vec<(usize, u64)>>,
    identical: bool,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.valuations == other.valuations
            && self.edges == other.edges
            && self.vscale == other.vscale
            && self.wscale == other.wscale
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds and validates an instance with unit display scales.
    pub fn new(n: usize, valuations: Vec<Vec<u64>>, edges: Vec<Edge>) -> Result<Instance> {
        Instance::with_scales(n, valuations, edges, 1, 1)
    }

    /// Builds and validates an instance whose integer values represent
    /// decimals scaled by `vscale` (valuations) and `wscale` (weights).
    pub fn with_scales(
        n: usize,
        valuations: Vec<Vec<u64>>,
        edges: Vec<Edge>,
        vscale: u64,
        wscale: u64,
    ) -> Result<Instance> {
        if n == 0 {
            return Err(Error::InvalidInstance("agent count must be at least 1".into()));
        }
        if valuations.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {} valuation rows, got {}",
                n,
                valuations.len()
            )));
        }
        let m = valuations.first().map_or(0, Vec::len);
        if valuations.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidInstance("ragged valuation matrix".into()));
        }
        if vscale == 0 || wscale == 0 {
            return Err(Error::InvalidInstance("scale must be positive".into()));
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if e.u >= m || e.v >= m {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) references a good outside [1, {}]",
                    e.u + 1,
                    e.v + 1,
                    m
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("self-loop at good {}", e.u + 1)));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate edge ({}, {})",
                    key.0 + 1,
                    key.1 + 1
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); m];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        let identical = valuations.windows(2).all(|w| w[0] == w[1]);
        Ok(Instance {
            n,
            m,
            valuations,
            edges,
            vscale,
            wscale,
            adjacency,
            identical,
        })
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn goods(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `g` with edge weights.
    pub fn neighbors(&self, g: usize) -> &[(usize, u64)] {
        &self.adjacency[g]
    }

    pub fn degree(&self, g: usize) -> usize {
        self.adjacency[g].len()
    }

    /// Sum of weights of edges incident to `g`.
    pub fn weighted_degree(&self, g: usize) -> u128 {
        self.adjacency[g].iter().map(|&(_, w)| w as u128).sum()
    }

    pub fn value(&self, agent: usize, good: usize) -> u64 {
        self.valuations[agent][good]
    }

    pub fn valuation_row(&self, agent: usize) -> &[u64] {
        &self.valuations[agent]
    }

    pub fn bundle_value(&self, agent: usize, goods: &[usize]) -> u128 {
        goods.iter().map(|&g| self.valuations[agent][g] as u128).sum()
    }

    /// True when all agents share one valuation function.
    pub fn identical_valuations(&self) -> bool {
        self.identical
    }

    /// True when every edge weight equals one unweighted unit.
    pub fn is_unit_weighted(&self) -> bool {
        self.wscale == 1 && self.edges.iter().all(|e| e.w == 1)
    }

    pub fn total_edge_weight(&self) -> u128 {
        self.edges.iter().map(|e| e.w as u128).sum()
    }

    pub fn vscale(&self) -> u64 {
        self.vscale
    }

    pub fn wscale(&self) -> u64 {
        self.wscale
    }

    /// `|E| / n` (weighted: total weight over n), in display units.
    pub fn baseline(&self) -> Ratio {
        let total = self.total_edge_weight();
        Ratio::new(total as i128, self.n as i128 * self.wscale as i128)
    }

    /// Appends zero-valued, edge-free goods until the good count is
    /// divisible by the agent count. Returns the padded instance and the
    /// ids of the added dummies.
    pub fn pad_with_dummies(&self) -> (Instance, Vec<usize>) {
        let k = (self.n - self.m % self.n) % self.n;
        if k == 0 {
            return (self.clone(), Vec::new());
        }
        let mut valuations = self.valuations.clone();
        for row in &mut valuations {
            row.resize(self.m + k, 0);
        }
        let dummies: Vec<usize> = (self.m..self.m + k).collect();
        let padded = Instance::with_scales(
            self.n,
            valuations,
            self.edges.clone(),
            self.vscale,
            self.wscale,
        )
        .expect("padding preserves validity");
        (padded, dummies)
    }
}

/// A partition of goods into bundles, stored as good -> agent. Solvers
/// build these up incrementally; the public verifiers require them
/// complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    owner: Vec<Option<u32>>,
}

impl Allocation {
    pub fn unassigned(m: usize) -> Allocation {
        Allocation {
            owner: vec![None; m],
        }
    }

    /// A complete allocation from a good -> agent map.
    pub fn from_owners(owners: Vec<usize>) -> Allocation {
        Allocation {
            owner: owners.into_iter().map(|a| Some(a as u32)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, good: usize) -> Option<usize> {
        self.owner[good].map(|a| a as usize)
    }

    pub fn assign(&mut self, good: usize, agent: usize) {
        debug_assert!(self.owner[good].is_none(), "good assigned twice");
        self.owner[good] = Some(agent as u32);
    }

    pub fn is_complete(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    /// Drops the trailing goods `keep..` (used to strip appended dummies).
    pub fn truncated(&self, keep: usize) -> Allocation {
        Allocation {
            owner: self.owner[..keep].to_vec(),
        }
    }

    pub fn bundle_sizes(&self, n: usize) -> Vec<usize> {
        let mut sizes = vec![0; n];
        for o in self.owner.iter().flatten() {
            sizes[*o as usize] += 1;
        }
        sizes
    }

    /// Bundles as good-id lists, ascending within each bundle.
    pub fn bundles(&self, n: usize) -> Vec<Vec<usize>> {
        let mut bundles = vec![Vec::new(); n];
        for (g, o) in self.owner.iter().enumerate() {
            if let Some(a) = o {
                bundles[*a as usize].push(g);
            }
        }
        bundles
    }

    /// Applies an agent relabeling: the goods of bundle `b` go to
    /// `agent_of_bundle[b]`.
    pub fn permute_bundles(&self, agent_of_bundle: &[usize]) -> Allocation {
        Allocation {
            owner: self
                .owner
                .iter()
                .map(|o| o.map(|a| agent_of_bundle[a as usize] as u32))
                .collect(),
        }
    }
}

fn require_complete(instance: &Instance, allocation: &Allocation) -> Result<()> {
    if allocation.len() != instance.goods() || !allocation.is_complete() {
        return Err(Error::IncompleteAllocation);
    }
    Ok(())
}

/// Total weight of edges whose endpoints share an owner, in scaled units.
pub fn violation_count(instance: &Instance, allocation: &Allocation) -> Result<u128> {
    require_complete(instance, allocation)?;
    let mut total: u128 = 0;
    for e in instance.edges() {
        if allocation.owner(e.u) == allocation.owner(e.v) {
            total += e.w as u128;
        }
    }
    Ok(total)
}

/// Envy-freeness up to one good: for every ordered pair `(i, j)` either
/// `A_j` is empty or removing the best good (for `i`) from `A_j` kills the
/// envy. Uses the additive shortcut `v_i(A_i) + max_g v_i(g) >= v_i(A_j)`.
pub fn is_ef1(instance: &Instance, allocation: &Allocation) -> Result<bool> {
    require_complete(instance, allocation)?;
    let n = instance.agents();
    let bundles = allocation.bundles(n);
    for i in 0..n {
        let own = instance.bundle_value(i, &bundles[i]);
        for (j, bundle) in bundles.iter().enumerate() {
            if i == j || bundle.is_empty() {
                continue;
            }
            let other = instance.bundle_value(i, bundle);
            let best = bundle
                .iter()
                .map(|&g| instance.value(i, g) as u128)
                .max()
                .unwrap_or(0);
            if own + best < other {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff bundle sizes differ by at most one.
pub fn is_balanced(instance: &Instance, allocation: &Allocation) -> Result<bool> {
    require_complete(instance, allocation)?;
    let sizes = allocation.bundle_sizes(instance.agents());
    let max = sizes.iter().max().copied().unwrap_or(0);
    let min = sizes.iter().min().copied().unwrap_or(0);
    Ok(max - min <= 1)
}

/// Checks the clique-union balance band: for each complete component of
/// size `c`, every agent's share `x` of it must satisfy
/// `|x - c/n| <= sqrt(m)`, i.e. `(x*n - c)^2 <= m * n^2` exactly.
///
/// Errors with [`Error::NotCliqueUnion`] unless the conflict graph is a
/// disjoint union of complete components.
pub fn component_balance_check(instance: &Instance, allocation: &Allocation) -> Result<bool> {
    require_complete(instance, allocation)?;
    let components = clique_components(instance)?;
    let n = instance.agents() as i128;
    let m = instance.goods() as i128;
    for component in &components {
        let c = component.len() as i128;
        let mut counts = vec![0i128; instance.agents()];
        for &g in component {
            counts[allocation.owner(g).expect("complete")] += 1;
        }
        for &x in &counts {
            let dev = x * n - c;
            if dev * dev > m * n * n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Connected components of the conflict graph, each verified complete.
fn clique_components(instance: &Instance) -> Result<Vec<Vec<usize>>> {
    let m = instance.goods();
    let mut comp = vec![usize::MAX; m];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..m {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(g) = stack.pop() {
            members.push(g);
            for &(h, _) in instance.neighbors(g) {
                if comp[h] == usize::MAX {
                    comp[h] = id;
                    stack.push(h);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    // A component on c vertices is a clique iff it has c*(c-1)/2 edges;
    // simple graphs cannot exceed that.
    let mut edge_counts = vec![0usize; components.len()];
    for e in instance.edges() {
        edge_counts[comp[e.u]] += 1;
    }
    for (component, &count) in components.iter().zip(&edge_counts) {
        let c = component.len();
        if count != c * (c - 1) / 2 {
            return Err(Error::NotCliqueUnion);
        }
    }
    Ok(components)
}

/// The verifier-facing summary of a complete allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationReport {
    /// Violated edge weight in display units (a count when unweighted).
    pub violations: Ratio,
    /// `|E|/n` (weighted: total weight over n), display units.
    pub baseline: Ratio,
    pub ef1: bool,
    pub balanced: bool,
    pub bundle_sizes: Vec<usize>,
    /// `bundle_values[i][j] = v_i(A_j)` in display units.
    pub bundle_values: Vec<Vec<Ratio>>,
}

impl AllocationReport {
    pub fn build(instance: &Instance, allocation: &Allocation) -> Result<AllocationReport> {
        let n = instance.agents();
        let violations_scaled = violation_count(instance, allocation)?;
        let bundles = allocation.bundles(n);
        let bundle_values = (0..n)
            .map(|i| {
                bundles
                    .iter()
                    .map(|b| {
                        Ratio::new(instance.bundle_value(i, b) as i128, instance.vscale() as i128)
                    })
                    .collect()
            })
            .collect();
        Ok(AllocationReport {
            violations: Ratio::new(violations_scaled as i128, instance.wscale() as i128),
            baseline: instance.baseline(),
            ef1: is_ef1(instance, allocation)?,
            balanced: is_balanced(instance, allocation)?,
            bundle_sizes: allocation.bundle_sizes(n),
            bundle_values,
        })
    }
}
