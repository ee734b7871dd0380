/// Operation counters for runtime-scaling checks.
///
/// The complexity contracts are asserted on these counters, not on wall
/// clock: `edge_scans` counts per-edge-incidence work, `comparisons` counts
/// sort comparisons, `grid_ops` counts grid queries plus cell rebucketings,
/// and `scalar_ops` counts remaining linear passes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub edge_scans: u64,
    pub comparisons: u64,
    pub grid_ops: u64,
    pub scalar_ops: u64,
    pub rounds: u64,
    pub envy_rotations: u64,
    pub grid_rebuilds: u64,
}

impl SolveStats {
    pub fn total_ops(&self) -> u64 {
        self.edge_scans + self.comparisons + self.grid_ops + self.scalar_ops
    }
}
