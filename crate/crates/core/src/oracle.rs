//! Exhaustive ground truth for small instances.
//!
//! Everything here is written against the raw definitions, deliberately
//! avoiding the shortcuts used by the production verifiers and solvers,
//! so the two code paths can cross-check each other in tests.

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::ratio::Ratio;

/// Hard cap on the number of allocations the oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// EF1 checked literally against the definition: for each ordered pair,
/// some single-good removal from the envied bundle kills the envy.
pub fn is_ef1_by_definition(instance: &Instance, allocation: &Allocation) -> Result<bool> {
    if allocation.len() != instance.goods() || !allocation.is_complete() {
        return Err(Error::IncompleteAllocation);
    }
    let n = instance.agents();
    let bundles = allocation.bundles(n);
    for i in 0..n {
        let own: u128 = instance.bundle_value(i, &bundles[i]);
        for (j, bundle) in bundles.iter().enumerate() {
            if i == j || bundle.is_empty() {
                continue;
            }
            let other: u128 = instance.bundle_value(i, bundle);
            let fine = bundle
                .iter()
                .any(|&g| own >= other - instance.value(i, g) as u128);
            if !fine {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn violations_direct(instance: &Instance, owners: &[usize]) -> u128 {
    let mut total = 0u128;
    for e in instance.edges() {
        if owners[e.u] == owners[e.v] {
            total += e.w as u128;
        }
    }
    total
}

/// Iterates all `n^m` complete allocations in lexicographic owner order.
fn enumerate_owners(n: usize, m: usize, mut visit: impl FnMut(&[usize])) {
    let mut owners = vec![0usize; m];
    loop {
        visit(&owners);
        // Increment the base-n counter, last good fastest.
        let mut pos = m;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            owners[pos] += 1;
            if owners[pos] < n {
                break;
            }
            owners[pos] = 0;
        }
    }
}

/// Minimum violated weight among all EF1 allocations, with the first
/// witness in enumeration order. Total for additive valuations since EF1
/// allocations always exist.
pub fn min_violations_ef1(instance: &Instance) -> Result<(u128, Allocation)> {
    let n = instance.agents();
    let m = instance.goods();
    let mut total: u128 = 1;
    for _ in 0..m {
        total = total.saturating_mul(n as u128);
        if total > ENUMERATION_LIMIT {
            return Err(Error::OracleSizeLimit);
        }
    }

    let mut best: Option<(u128, Vec<usize>)> = None;
    enumerate_owners(n, m, |owners| {
        let alloc = Allocation::from_owners(owners.to_vec());
        if !is_ef1_by_definition(instance, &alloc).expect("complete by construction") {
            return;
        }
        let v = violations_direct(instance, owners);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, owners.to_vec()));
        }
    });
    let (count, owners) = best.expect("EF1 allocations exist for additive valuations");
    Ok((count, Allocation::from_owners(owners)))
}

/// Exact min, max, and mean of `f_Z(sigma) = sum_i z[i][sigma(i)]` over
/// all permutations. Means the assignment-game identities can be asserted
/// without sampling. Up to 8 rows.
pub fn enumerate_assignment_extremes(z: &[Vec<i128>]) -> Result<(i128, i128, Ratio)> {
    let n = z.len();
    if n > 8 {
        return Err(Error::OracleSizeLimit);
    }
    if z.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("assignment matrix must be square".into()));
    }
    if n == 0 {
        return Ok((0, 0, Ratio::zero()));
    }

    let mut min = i128::MAX;
    let mut max = i128::MIN;
    let mut sum: i128 = 0;
    let mut count: i128 = 0;
    let mut cols: Vec<usize> = (0..n).collect();
    permute(&mut cols, 0, &mut |perm| {
        let f: i128 = perm.iter().enumerate().map(|(i, &j)| z[i][j]).sum();
        min = min.min(f);
        max = max.max(f);
        sum += f;
        count += 1;
    });
    Ok((min, max, Ratio::new(sum, count)))
}

fn permute(items: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, visit);
        items.swap(start, i);
    }
}
