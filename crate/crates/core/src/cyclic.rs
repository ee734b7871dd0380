//! Identical-valuations solver: round-robin over value-sorted blocks, with
//! the per-round assignment restricted to the n cyclic shifts and the
//! cheapest shift taken. Also hosts the two-agent cut-and-choose wrapper
//! for general valuations.

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::stats::SolveStats;

/// Goods sorted by descending shared value, ties broken by ascending id.
/// Requires identical valuations.
pub fn sort_goods_desc(instance: &Instance) -> Result<Vec<usize>> {
    let mut stats = SolveStats::default();
    sort_goods_desc_counted(instance, &mut stats)
}

fn sort_goods_desc_counted(instance: &Instance, stats: &mut SolveStats) -> Result<Vec<usize>> {
    if !instance.identical_valuations() {
        return Err(Error::IdenticalValuationsRequired);
    }
    let row = instance.valuation_row(0);
    let mut order: Vec<usize> = (0..instance.goods()).collect();
    let mut comparisons = 0u64;
    order.sort_by(|&a, &b| {
        comparisons += 1;
        row[b].cmp(&row[a]).then(a.cmp(&b))
    });
    stats.comparisons += comparisons;
    Ok(order)
}

/// Violation-weight increase if the block is placed with the given cyclic
/// shift: the good at block position `j` goes to agent `(j - shift) mod n`.
/// Scans only edges incident to the block; edges inside the block go to
/// distinct agents and never contribute.
///
/// `shift` is 0-based. Block goods must be unassigned in `allocation`.
pub fn round_violation_delta(
    instance: &Instance,
    allocation: &Allocation,
    block: &[usize],
    shift: usize,
) -> u128 {
    let n = instance.agents();
    assert!(shift < n, "shift out of range");
    let mut delta = 0u128;
    for (j, &g) in block.iter().enumerate() {
        debug_assert!(allocation.owner(g).is_none(), "block good already placed");
        for &(h, w) in instance.neighbors(g) {
            if let Some(o) = allocation.owner(h) {
                if (j + n - shift) % n == o {
                    delta += w as u128;
                }
            }
        }
    }
    delta
}

/// A full cyclic-shift round-robin run, including the padded intermediates
/// needed to audit round-robin structure.
#[derive(Debug, Clone)]
pub struct CyclicRun {
    /// Final allocation over the original goods, dummies stripped.
    pub allocation: Allocation,
    pub stats: SolveStats,
    pub padded_instance: Instance,
    /// Allocation over the padded instance, before dummy stripping.
    pub padded_allocation: Allocation,
    /// Goods of the padded instance in block order.
    pub sorted_order: Vec<usize>,
    pub dummy_ids: Vec<usize>,
}

/// Computes a balanced EF1 allocation with violated weight at most
/// `total edge weight / n` for identical additive valuations.
pub fn cyclic_shift_rr(instance: &Instance) -> Result<(Allocation, SolveStats)> {
    let run = cyclic_shift_rr_run(instance)?;
    Ok((run.allocation, run.stats))
}

/// As [`cyclic_shift_rr`], returning the padded intermediates.
pub fn cyclic_shift_rr_run(instance: &Instance) -> Result<CyclicRun> {
    if !instance.identical_valuations() {
        return Err(Error::IdenticalValuationsRequired);
    }
    let mut stats = SolveStats::default();
    let (padded, dummy_ids) = instance.pad_with_dummies();
    let order = sort_goods_desc_counted(&padded, &mut stats)?;
    let n = padded.agents();
    let m = padded.goods();
    debug_assert_eq!(m % n, 0);

    let mut alloc = Allocation::unassigned(m);
    let mut deltas = vec![0u128; n];
    for block in order.chunks_exact(n) {
        deltas.iter_mut().for_each(|d| *d = 0);
        for (j, &g) in block.iter().enumerate() {
            for &(h, w) in padded.neighbors(g) {
                stats.edge_scans += 1;
                if let Some(o) = alloc.owner(h) {
                    deltas[(j + n - o) % n] += w as u128;
                }
            }
        }
        // Smallest shift among minimizers.
        let mut best = 0;
        for s in 1..n {
            if deltas[s] < deltas[best] {
                best = s;
            }
        }
        for (j, &g) in block.iter().enumerate() {
            alloc.assign(g, (j + n - best) % n);
        }
        stats.rounds += 1;
        stats.scalar_ops += n as u64;
    }

    Ok(CyclicRun {
        allocation: alloc.truncated(instance.goods()),
        stats,
        padded_instance: padded,
        padded_allocation: alloc,
        sorted_order: order,
        dummy_ids,
    })
}

/// Two-agent general-valuations solver: split under agent 1's valuation
/// via [`cyclic_shift_rr`], then agent 2 takes the bundle it prefers
/// (keeping its own on a tie). Swapping bundles preserves violations, and
/// the split is EF1 in both directions under `v_1`, so the result is EF1
/// for both true valuations.
pub fn cut_and_choose(instance: &Instance) -> Result<(Allocation, SolveStats)> {
    if instance.agents() != 2 {
        return Err(Error::WrongAgentCount {
            expected: 2,
            got: instance.agents(),
        });
    }
    let row = instance.valuation_row(0).to_vec();
    let hypothetical = Instance::with_scales(
        2,
        vec![row.clone(), row],
        instance.edges().to_vec(),
        instance.vscale(),
        instance.wscale(),
    )?;
    let (alloc, mut stats) = cyclic_shift_rr(&hypothetical)?;
    let bundles = alloc.bundles(2);
    stats.scalar_ops += instance.goods() as u64;
    let keeps = instance.bundle_value(1, &bundles[1]) >= instance.bundle_value(1, &bundles[0]);
    let out = if keeps {
        alloc
    } else {
        alloc.permute_bundles(&[1, 0])
    };
    Ok((out, stats))
}
