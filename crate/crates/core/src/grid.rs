//! Bucketed point index over `[-half_width, half_width]^dim` answering
//! "give me `group_size` points in one cell".
//!
//! The cube is split into `q^dim` cells with `q` a power of two derived
//! from the point count; any cell holding `group_size` or more points is
//! "heavy". By pigeonhole, a heavy cell exists whenever the live count
//! reaches `group_size * q^dim`, and all points of one cell differ by at
//! most `2 * half_width / q` per dimension. The subdivision is only
//! recomputed when the count falls below the next power-of-two threshold,
//! so total rebucketing work stays linear in the initial count plus the
//! number of operations.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};

const MAX_DIM: usize = 8;

type CellKey = [u32; MAX_DIM];

#[derive(Debug)]
pub struct GridIndex {
    dim: usize,
    group_size: usize,
    half_width: i128,
    log2_q: u32,
    cells: HashMap<CellKey, BTreeSet<u64>>,
    // Heavy cells keyed by insertion sequence; the newest is served first.
    heavy_by_seq: BTreeMap<u64, CellKey>,
    heavy_seq_of: HashMap<CellKey, u64>,
    next_heavy_seq: u64,
    points: HashMap<u64, Vec<i128>>,
    rebucket_ops: u64,
    query_ops: u64,
    rebuilds: u64,
}

/// `2^floor(log2(k^(1/dim)))` expressed through the exponent:
/// the largest `t` with `2^(t*dim) <= k`.
fn log2_cells_per_axis(k: u64, dim: usize) -> u32 {
    if k <= 1 {
        return 0;
    }
    let log2_k = 63 - k.leading_zeros();
    log2_k / dim as u32
}

impl GridIndex {
    /// Buckets `points` (id, coordinates) with `q` derived from
    /// `ceil(count / group_size)`. Panics on a bad dimension or group
    /// size; returns an error if a coordinate falls outside the cube.
    pub fn new(
        dim: usize,
        group_size: usize,
        half_width: i128,
        points: Vec<(u64, Vec<i128>)>,
    ) -> Result<GridIndex> {
        assert!((1..=MAX_DIM).contains(&dim), "grid dimension out of range");
        assert!(group_size >= 1, "group size must be positive");
        assert!(half_width >= 0, "half width must be non-negative");
        let k = (points.len() as u64).div_ceil(group_size as u64);
        let mut grid = GridIndex {
            dim,
            group_size,
            half_width,
            log2_q: log2_cells_per_axis(k, dim),
            cells: HashMap::new(),
            heavy_by_seq: BTreeMap::new(),
            heavy_seq_of: HashMap::new(),
            next_heavy_seq: 0,
            points: HashMap::new(),
            rebucket_ops: 0,
            query_ops: 0,
            rebuilds: 0,
        };
        for (id, coords) in points {
            grid.insert(id, coords)?;
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cells_per_axis(&self) -> u64 {
        1u64 << self.log2_q
    }

    pub fn contains(&self, id: u64) -> bool {
        self.points.contains_key(&id)
    }

    pub fn coords(&self, id: u64) -> Option<&[i128]> {
        self.points.get(&id).map(Vec::as_slice)
    }

    pub fn heavy_cell_count(&self) -> usize {
        self.heavy_by_seq.len()
    }

    /// Cell rebucketings performed so far (initial placement, moves, and
    /// rebuild replacements all count).
    pub fn rebucket_ops(&self) -> u64 {
        self.rebucket_ops
    }

    pub fn query_ops(&self) -> u64 {
        self.query_ops
    }

    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    fn cell_key(&self, coords: &[i128]) -> Result<CellKey> {
        debug_assert_eq!(coords.len(), self.dim);
        let q = self.cells_per_axis() as i128;
        let width2 = 2 * self.half_width;
        let mut key = [0u32; MAX_DIM];
        for (axis, &c) in coords.iter().enumerate() {
            if c.abs() > self.half_width {
                return Err(Error::CoordinateOutOfRange);
            }
            if width2 == 0 || q == 1 {
                continue;
            }
            let idx = (c + self.half_width)
                .checked_mul(q)
                .expect("grid index overflow")
                / width2;
            key[axis] = idx.min(q - 1) as u32;
        }
        Ok(key)
    }

    fn place(&mut self, id: u64, key: CellKey) {
        let cell = self.cells.entry(key).or_default();
        cell.insert(id);
        self.rebucket_ops += 1;
        if cell.len() == self.group_size {
            let seq = self.next_heavy_seq;
            self.next_heavy_seq += 1;
            self.heavy_by_seq.insert(seq, key);
            self.heavy_seq_of.insert(key, seq);
        }
    }

    fn displace(&mut self, id: u64, key: CellKey) {
        let cell = self.cells.get_mut(&key).expect("cell exists");
        cell.remove(&id);
        if cell.len() + 1 == self.group_size {
            let seq = self.heavy_seq_of.remove(&key).expect("was heavy");
            self.heavy_by_seq.remove(&seq);
        }
        if cell.is_empty() {
            self.cells.remove(&key);
        }
    }

    pub fn insert(&mut self, id: u64, coords: Vec<i128>) -> Result<()> {
        if self.points.contains_key(&id) {
            return Err(Error::DuplicatePoint(id));
        }
        let key = self.cell_key(&coords)?;
        self.points.insert(id, coords);
        self.place(id, key);
        self.query_ops += 1;
        Ok(())
    }

    pub fn remove(&mut self, id: u64) -> Result<Vec<i128>> {
        let Some(coords) = self.points.remove(&id) else {
            return Err(Error::UnknownPoint(id));
        };
        let key = self.cell_key(&coords).expect("stored point in range");
        self.displace(id, key);
        self.query_ops += 1;
        Ok(coords)
    }

    pub fn move_point(&mut self, id: u64, coords: Vec<i128>) -> Result<()> {
        let Some(old) = self.points.get(&id) else {
            return Err(Error::UnknownPoint(id));
        };
        let old_key = self.cell_key(old).expect("stored point in range");
        let new_key = self.cell_key(&coords)?;
        self.points.insert(id, coords);
        if old_key != new_key {
            self.displace(id, old_key);
            self.place(id, new_key);
        }
        self.query_ops += 1;
        Ok(())
    }

    /// Ids of `group_size` points sharing one cell: the most recently
    /// heavy cell, lowest ids first. Fails only if no cell is heavy,
    /// which the pigeonhole precondition rules out.
    pub fn find_group(&mut self) -> Result<Vec<u64>> {
        self.query_ops += 1;
        let Some((_, key)) = self.heavy_by_seq.iter().next_back() else {
            return Err(Error::NoHeavyCell);
        };
        let cell = &self.cells[key];
        Ok(cell.iter().take(self.group_size).copied().collect())
    }

    /// Shrinks `q` and rebuckets everything once the count falls below the
    /// current `2^(t*dim)` group threshold. Returns whether it rebuilt.
    pub fn maybe_rebuild(&mut self) -> bool {
        self.query_ops += 1;
        if self.log2_q == 0 {
            return false;
        }
        let k = (self.points.len() as u64).div_ceil(self.group_size as u64);
        let threshold = 1u64 << (self.log2_q * self.dim as u32);
        if k >= threshold {
            return false;
        }
        self.log2_q = log2_cells_per_axis(k, self.dim);
        self.cells.clear();
        self.heavy_by_seq.clear();
        self.heavy_seq_of.clear();
        let ids: Vec<(u64, CellKey)> = self
            .points
            .iter()
            .map(|(&id, coords)| (id, self.cell_key(coords).expect("stored point in range")))
            .collect();
        for (id, key) in ids {
            self.place(id, key);
        }
        self.rebuilds += 1;
        true
    }

    /// Consistency audit for tests: recomputed keys match the cell map,
    /// the heavy set is exactly the cells with `group_size` or more
    /// points, and `q` matches the threshold schedule.
    pub fn audit(&self) -> Result<()> {
        let mut total = 0usize;
        for (key, cell) in &self.cells {
            total += cell.len();
            for id in cell {
                let coords = self.points.get(id).ok_or_else(|| {
                    Error::Internal(format!("cell holds unknown point {id}"))
                })?;
                if self.cell_key(coords)? != *key {
                    return Err(Error::Internal(format!("point {id} bucketed wrongly")));
                }
            }
            let heavy = cell.len() >= self.group_size;
            if heavy != self.heavy_seq_of.contains_key(key) {
                return Err(Error::Internal("heavy set out of sync".into()));
            }
        }
        if total != self.points.len() {
            return Err(Error::Internal("cell map lost points".into()));
        }
        if self.heavy_seq_of.len() != self.heavy_by_seq.len() {
            return Err(Error::Internal("heavy index out of sync".into()));
        }
        Ok(())
    }
}
