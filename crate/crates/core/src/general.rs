//! General additive valuations: the category-constrained assignment round,
//! the profile-vector solver over a grid index, and the degree-bucketed
//! solver that achieves the near-baseline violation bound.
//!
//! Bundles are physical: their contents only grow, and envy-cycle
//! elimination swaps ownership pointers instead of moving goods. Profile
//! vectors are therefore defined against the fixed physical bundles and
//! survive rearrangements untouched.

use crate::envy::{rotate_until_acyclic, topological_order, EnvyGraph};
use crate::error::{Error, Result};
use crate::grid::GridIndex;
use crate::instance::{Allocation, Instance};
use crate::stats::SolveStats;

/// Maximum agent count accepted by the grid-based solvers; the bounds of
/// interest hold for constant n, and the grid dimension is n - 1.
pub const MAX_AGENTS: usize = 8;

/// Fixed bundles plus an agent-to-bundle pointer permutation and a cached
/// value matrix `v_i(A'_b)`.
#[derive(Debug, Clone)]
pub struct PhysicalBundles {
    n: usize,
    bundles: Vec<Vec<usize>>,
    bundle_of_good: Vec<Option<u32>>,
    bundle_of_agent: Vec<usize>,
    agent_of_bundle: Vec<usize>,
    value_cache: Vec<Vec<u128>>,
}

impl PhysicalBundles {
    pub fn new(instance: &Instance) -> PhysicalBundles {
        let n = instance.agents();
        PhysicalBundles {
            n,
            bundles: vec![Vec::new(); n],
            bundle_of_good: vec![None; instance.goods()],
            bundle_of_agent: (0..n).collect(),
            agent_of_bundle: (0..n).collect(),
            value_cache: vec![vec![0; n]; n],
        }
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn bundle_of_good(&self, good: usize) -> Option<usize> {
        self.bundle_of_good[good].map(|b| b as usize)
    }

    pub fn bundle_contents(&self, bundle: usize) -> &[usize] {
        &self.bundles[bundle]
    }

    pub fn agent_of_bundle(&self, bundle: usize) -> usize {
        self.agent_of_bundle[bundle]
    }

    pub fn bundle_of_agent(&self, agent: usize) -> usize {
        self.bundle_of_agent[agent]
    }

    /// Cached `v_agent(A'_bundle)`.
    pub fn cached_value(&self, agent: usize, bundle: usize) -> u128 {
        self.value_cache[agent][bundle]
    }

    fn add_good(&mut self, instance: &Instance, bundle: usize, good: usize) {
        debug_assert!(self.bundle_of_good[good].is_none());
        self.bundles[bundle].push(good);
        self.bundle_of_good[good] = Some(bundle as u32);
        for i in 0..self.n {
            self.value_cache[i][bundle] += instance.value(i, good) as u128;
        }
    }

    /// The allocation induced by the current pointers.
    pub fn to_allocation(&self) -> Allocation {
        let mut alloc = Allocation::unassigned(self.bundle_of_good.len());
        for (g, b) in self.bundle_of_good.iter().enumerate() {
            if let Some(b) = b {
                alloc.assign(g, self.agent_of_bundle[*b as usize]);
            }
        }
        alloc
    }

    /// Test hook: recomputes the value cache from bundle contents.
    pub fn audit_value_cache(&self, instance: &Instance) -> Result<()> {
        for i in 0..self.n {
            for b in 0..self.n {
                if instance.bundle_value(i, &self.bundles[b]) != self.value_cache[i][b] {
                    return Err(Error::Internal(format!("stale value cache at ({i}, {b})")));
                }
            }
        }
        Ok(())
    }
}

/// One category round: eliminate envy cycles by pointer permutation, then
/// let agents pick their favourite remaining category good in topological
/// order of the envy graph. Every physical bundle gains exactly one good,
/// and EF1 is preserved round to round.
pub fn bb_round(
    instance: &Instance,
    pb: &mut PhysicalBundles,
    category: &[usize],
    stats: &mut SolveStats,
) -> Result<()> {
    let n = pb.n;
    if category.len() != n {
        return Err(Error::BadCategory {
            expected: n,
            got: category.len(),
        });
    }
    for &g in category {
        if pb.bundle_of_good[g].is_some() {
            return Err(Error::GoodAlreadyAssigned(g));
        }
    }

    stats.envy_rotations += rotate_until_acyclic(
        &pb.value_cache,
        &mut pb.bundle_of_agent,
        &mut pb.agent_of_bundle,
    )?;
    let agent_values: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| pb.value_cache[i][pb.bundle_of_agent[j]]).collect())
        .collect();
    let order = topological_order(&EnvyGraph::from_agent_values(&agent_values))?;

    let mut taken = vec![false; category.len()];
    for agent in order {
        let mut pick = usize::MAX;
        for (idx, &g) in category.iter().enumerate() {
            if taken[idx] {
                continue;
            }
            stats.scalar_ops += 1;
            // Strict comparison with ascending-id preference on ties.
            if pick == usize::MAX
                || instance.value(agent, g) > instance.value(agent, category[pick])
                || (instance.value(agent, g) == instance.value(agent, category[pick])
                    && g < category[pick])
            {
                pick = idx;
            }
        }
        taken[pick] = true;
        let bundle = pb.bundle_of_agent[agent];
        pb.add_good(instance, bundle, category[pick]);
    }
    stats.rounds += 1;
    Ok(())
}

/// Profile vector of an unassigned good relative to the physical bundles:
/// component `j - 1` is the incident weight into `A'_j` minus the incident
/// weight into `A'_1`.
pub fn compute_profile_vector(
    instance: &Instance,
    pb: &PhysicalBundles,
    good: usize,
) -> Vec<i128> {
    let mut incident = vec![0i128; pb.n];
    for &(h, w) in instance.neighbors(good) {
        if let Some(b) = pb.bundle_of_good(h) {
            incident[b] += w as i128;
        }
    }
    (1..pb.n).map(|b| incident[b] - incident[0]).collect()
}

/// Per-round diagnostics emitted by the solvers for bound auditing.
#[derive(Debug, Clone)]
pub struct RoundTrace {
    /// True when the group came from a grid query (and `coords` holds the
    /// maintained profile vectors); false for the final remainder round.
    pub via_grid: bool,
    /// Goods assigned this round, ascending ids.
    pub group: Vec<usize>,
    /// Grid-maintained profile vectors of the group, per good.
    pub coords: Vec<Vec<i128>>,
    /// `z[i][b]`: incident weight of `group[i]` into physical bundle `b`
    /// at the start of the round.
    pub z: Vec<Vec<i128>>,
    /// Max per-dimension profile spread of the group.
    pub spread: i128,
    /// `(good, physical bundle)` pairs after the round.
    pub assigned: Vec<(usize, usize)>,
}

pub type RoundObserver<'a> = &'a mut dyn FnMut(&RoundTrace);

fn incident_matrix(instance: &Instance, pb: &PhysicalBundles, group: &[usize]) -> Vec<Vec<i128>> {
    group
        .iter()
        .map(|&g| {
            let mut row = vec![0i128; pb.n];
            for &(h, w) in instance.neighbors(g) {
                if let Some(b) = pb.bundle_of_good(h) {
                    row[b] += w as i128;
                }
            }
            row
        })
        .collect()
}

fn max_spread(vectors: &[Vec<i128>]) -> i128 {
    if vectors.is_empty() || vectors[0].is_empty() {
        return 0;
    }
    (0..vectors[0].len())
        .map(|d| {
            let max = vectors.iter().map(|v| v[d]).max().unwrap();
            let min = vectors.iter().map(|v| v[d]).min().unwrap();
            max - min
        })
        .max()
        .unwrap_or(0)
}

/// Assigns `goods` (a multiple of n of them) onto `pb`, picking each
/// round's category as n goods with near-identical profile vectors via a
/// grid over `[-half_width, half_width]^(n-1)`. Every profile coordinate
/// must stay within the cube throughout; the caller's schedule guarantees
/// this and a breach surfaces as [`Error::CoordinateOutOfRange`].
pub fn degree_ef1(
    instance: &Instance,
    pb: &mut PhysicalBundles,
    goods: &[usize],
    half_width: i128,
    stats: &mut SolveStats,
    mut observer: Option<RoundObserver<'_>>,
) -> Result<()> {
    degree_ef1_inner(instance, pb, goods, half_width, false, stats, &mut observer)
}

fn degree_ef1_inner(
    instance: &Instance,
    pb: &mut PhysicalBundles,
    goods: &[usize],
    half_width: i128,
    assert_round_bound: bool,
    stats: &mut SolveStats,
    observer: &mut Option<RoundObserver<'_>>,
) -> Result<()> {
    let n = pb.n;
    if n == 1 {
        for &g in goods {
            bb_round(instance, pb, &[g], stats)?;
        }
        return Ok(());
    }
    if !goods.len().is_multiple_of(n) {
        return Err(Error::BadCategory {
            expected: n,
            got: goods.len() % n,
        });
    }

    let mut points = Vec::with_capacity(goods.len());
    for &g in goods {
        stats.edge_scans += instance.degree(g) as u64;
        points.push((g as u64, compute_profile_vector(instance, pb, g)));
    }
    let mut grid = GridIndex::new(n - 1, n, half_width, points)?;

    let rounds = goods.len() / n;
    for round in 0..rounds {
        let ids = grid.find_group()?;
        let group: Vec<usize> = ids.iter().map(|&id| id as usize).collect();
        let coords: Vec<Vec<i128>> = ids
            .iter()
            .map(|&id| grid.coords(id).expect("group point exists").to_vec())
            .collect();
        let z = observer
            .is_some()
            .then(|| incident_matrix(instance, pb, &group));
        for &id in &ids {
            grid.remove(id)?;
        }

        bb_round(instance, pb, &group, stats)?;

        for &g in &group {
            let b = pb.bundle_of_good(g).expect("just assigned");
            for &(h, w) in instance.neighbors(g) {
                stats.edge_scans += 1;
                if !grid.contains(h as u64) {
                    continue;
                }
                let mut coords = grid.coords(h as u64).expect("present").to_vec();
                if b == 0 {
                    for c in coords.iter_mut() {
                        *c -= w as i128;
                    }
                } else {
                    coords[b - 1] += w as i128;
                }
                if assert_round_bound {
                    // With empty starting bundles, round r leaves every
                    // incident count at most r, so profile coordinates
                    // stay within the round index.
                    debug_assert!(
                        coords.iter().all(|c| c.abs() <= (round as i128 + 1)),
                        "profile coordinate escaped the round-index bound"
                    );
                }
                grid.move_point(h as u64, coords)?;
            }
        }
        grid.maybe_rebuild();

        if let Some(f) = observer.as_mut() {
            f(&RoundTrace {
                via_grid: true,
                spread: max_spread(&coords),
                assigned: group
                    .iter()
                    .map(|&g| (g, pb.bundle_of_good(g).expect("assigned")))
                    .collect(),
                group,
                coords,
                z: z.expect("computed when observed"),
            });
        }
    }

    stats.grid_ops += grid.query_ops() + grid.rebucket_ops();
    stats.grid_rebuilds += grid.rebuilds();
    Ok(())
}

fn remainder_round(
    instance: &Instance,
    pb: &mut PhysicalBundles,
    category: &[usize],
    stats: &mut SolveStats,
    observer: &mut Option<RoundObserver<'_>>,
) -> Result<()> {
    let z = observer
        .is_some()
        .then(|| incident_matrix(instance, pb, category));
    bb_round(instance, pb, category, stats)?;
    if let Some(f) = observer.as_mut() {
        let z = z.expect("computed when observed");
        let profiles: Vec<Vec<i128>> = z
            .iter()
            .map(|row| (1..row.len()).map(|b| row[b] - row[0]).collect())
            .collect();
        f(&RoundTrace {
            via_grid: false,
            group: category.to_vec(),
            coords: Vec::new(),
            spread: max_spread(&profiles),
            assigned: category
                .iter()
                .map(|&g| (g, pb.bundle_of_good(g).expect("assigned")))
                .collect(),
            z,
        });
    }
    Ok(())
}

/// Smallest `t >= 0` with `(t * div)^2 >= e`, i.e. `ceil(sqrt(e) / div)`.
fn ceil_sqrt_div(e: u128, div: u128) -> u128 {
    if e == 0 {
        return 0;
    }
    let reaches = |t: u128| -> bool {
        match t.checked_mul(div) {
            None => true,
            Some(p) => match p.checked_mul(p) {
                None => true,
                Some(sq) => sq >= e,
            },
        }
    };
    let mut hi = 1u128;
    while !reaches(hi) {
        hi *= 2;
    }
    let mut lo = 0u128;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Splits `goods` into degree buckets: the top `n * ceil(sqrt(|E|))`
/// highest-degree goods, the same again, then geometrically doubling
/// sizes. Degrees are non-increasing across bucket order; sorting is a
/// counting sort over degrees.
pub fn degree_bucket_partition(instance: &Instance, goods: &[usize]) -> Result<Vec<Vec<usize>>> {
    if instance.edge_count() == 0 {
        return Err(Error::InvalidInstance(
            "degree bucketing requires at least one edge".into(),
        ));
    }
    let max_degree = goods.iter().map(|&g| instance.degree(g)).max().unwrap_or(0);
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for &g in goods {
        by_degree[instance.degree(g)].push(g);
    }
    let mut sorted = Vec::with_capacity(goods.len());
    for bucket in by_degree.iter().rev() {
        // Goods were pushed in ascending id order; keep that within a degree.
        sorted.extend_from_slice(bucket);
    }

    let unit = instance.agents() * ceil_sqrt_div(instance.edge_count() as u128, 1) as usize;
    let mut buckets = Vec::new();
    let mut start = 0usize;
    let mut size = unit;
    while start < sorted.len() {
        let end = (start + size).min(sorted.len());
        buckets.push(sorted[start..end].to_vec());
        if buckets.len() >= 2 {
            size *= 2;
        }
        start = end;
    }
    Ok(buckets)
}

fn lowest_degree_goods(instance: &Instance, count: usize) -> Vec<usize> {
    let mut goods: Vec<usize> = (0..instance.goods()).collect();
    goods.sort_by_key(|&g| (instance.weighted_degree(g), g));
    goods.truncate(count);
    goods
}

/// Cube half-width for bucket `i`: `ceil(sqrt(|E|))` for the first bucket
/// (justified by the round-index bound), then `ceil(sqrt(|E|) / (2^(i-2) n))`
/// matching the degree guarantee of later buckets.
fn bucket_half_width(bucket: usize, edges: u128, n: usize) -> i128 {
    let delta = match bucket {
        0 => ceil_sqrt_div(edges, 1),
        1 => ceil_sqrt_div(4 * edges, n as u128),
        i => ceil_sqrt_div(edges, (1u128 << (i - 2)) * n as u128),
    };
    delta as i128
}

/// Balanced EF1 allocation for general additive valuations and unit edge
/// weights, with violations at most `|E|/n` plus a lower-order additive
/// term. Requires 3 to [`MAX_AGENTS`] agents; smaller instances route to
/// the cyclic or cut-and-choose solvers.
pub fn graph_ef1(instance: &Instance) -> Result<(Allocation, SolveStats)> {
    graph_ef1_traced(instance, None)
}

pub fn graph_ef1_traced(
    instance: &Instance,
    mut observer: Option<RoundObserver<'_>>,
) -> Result<(Allocation, SolveStats)> {
    let n = instance.agents();
    if n < 3 {
        return Err(Error::NotEnoughAgents { min: 3, got: n });
    }
    if n > MAX_AGENTS {
        return Err(Error::TooManyAgents {
            max: MAX_AGENTS,
            got: n,
        });
    }
    if !instance.is_unit_weighted() {
        return Err(Error::UnitWeightsRequired);
    }

    let mut stats = SolveStats::default();
    let m = instance.goods();
    let (padded, dummies) = instance.pad_with_dummies();
    let mut pb = PhysicalBundles::new(&padded);
    let edges = instance.edge_count() as u128;

    if edges == 0 {
        // Any EF1 allocation has zero violations; all profile vectors sit
        // at the origin, so one grid run over everything works and the
        // id-ordered group picks place the dummies in the final round.
        let all: Vec<usize> = (0..padded.goods()).collect();
        degree_ef1_inner(&padded, &mut pb, &all, 0, false, &mut stats, &mut observer)?;
        return Ok((pb.to_allocation().truncated(m), stats));
    }

    let tail = m % n;
    let last_goods = lowest_degree_goods(instance, tail);
    let mut in_tail = vec![false; m];
    for &g in &last_goods {
        in_tail[g] = true;
    }
    let core_goods: Vec<usize> = (0..m).filter(|&g| !in_tail[g]).collect();
    stats.scalar_ops += m as u64;

    for (i, bucket) in degree_bucket_partition(&padded, &core_goods)?
        .into_iter()
        .enumerate()
    {
        if bucket.len() % n != 0 {
            // Unreachable: the tail removal makes the core divisible by n
            // and every earlier bucket size is a multiple of n.
            return Err(Error::Internal("bucket size not divisible by n".into()));
        }
        let half_width = bucket_half_width(i, edges, n);
        degree_ef1_inner(
            &padded,
            &mut pb,
            &bucket,
            half_width,
            i == 0,
            &mut stats,
            &mut observer,
        )?;
    }

    if tail > 0 {
        let mut category = last_goods;
        category.extend_from_slice(&dummies);
        category.sort_unstable();
        remainder_round(&padded, &mut pb, &category, &mut stats, &mut observer)?;
    }
    Ok((pb.to_allocation().truncated(m), stats))
}

/// Single-run profile-vector solver exposed directly: works for weighted
/// conflict graphs with the cube half-width defaulting to the maximum
/// incident weight sum. Up to [`MAX_AGENTS`] agents.
pub fn degree_ef1_direct(
    instance: &Instance,
    half_width: Option<i128>,
) -> Result<(Allocation, SolveStats)> {
    degree_ef1_direct_traced(instance, half_width, None)
}

pub fn degree_ef1_direct_traced(
    instance: &Instance,
    half_width: Option<i128>,
    mut observer: Option<RoundObserver<'_>>,
) -> Result<(Allocation, SolveStats)> {
    let n = instance.agents();
    if n > MAX_AGENTS {
        return Err(Error::TooManyAgents {
            max: MAX_AGENTS,
            got: n,
        });
    }
    let mut stats = SolveStats::default();
    let m = instance.goods();
    let (padded, dummies) = instance.pad_with_dummies();
    let mut pb = PhysicalBundles::new(&padded);
    let delta = half_width.unwrap_or_else(|| {
        (0..m)
            .map(|g| instance.weighted_degree(g) as i128)
            .max()
            .unwrap_or(0)
    });

    let tail = m % n;
    if tail == 0 {
        let all: Vec<usize> = (0..m).collect();
        degree_ef1_inner(&padded, &mut pb, &all, delta, false, &mut stats, &mut observer)?;
    } else {
        let last_goods = lowest_degree_goods(instance, tail);
        let mut in_tail = vec![false; m];
        for &g in &last_goods {
            in_tail[g] = true;
        }
        let core_goods: Vec<usize> = (0..m).filter(|&g| !in_tail[g]).collect();
        degree_ef1_inner(
            &padded,
            &mut pb,
            &core_goods,
            delta,
            false,
            &mut stats,
            &mut observer,
        )?;
        let mut category = last_goods;
        category.extend_from_slice(&dummies);
        category.sort_unstable();
        remainder_round(&padded, &mut pb, &category, &mut stats, &mut observer)?;
    }
    Ok((pb.to_allocation().truncated(m), stats))
}
