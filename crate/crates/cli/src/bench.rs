//! Benchmark suite runner with machine-readable reports.
//!
//! One row per (instance, algo) cell, in suite order: agents, then goods,
//! then the family's density knob, then seed. `elapsed` is informational
//! wall clock in milliseconds; every other column is exact or derived from
//! counters.

use crate::gen::{self, Family, GnpParams, RegularParams};
use crate::solve::{solve, Algo, SolveOutcome};
use fairdiv_core::instance::{AllocationReport, Instance};
use fairdiv_core::Error;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub family: Family,
    pub algo: Algo,
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
    pub ps: Vec<(u32, u32)>,
    pub degs: Vec<usize>,
    pub seeds: Vec<u64>,
    pub sizes: Vec<usize>,
    pub identical: bool,
    pub weighted: bool,
    pub max_value: u64,
    pub max_weight: u64,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            family: Family::Gnp,
            algo: Algo::Auto,
            ns: vec![3],
            ms: vec![20],
            ps: vec![(1, 10)],
            degs: vec![4],
            seeds: (0..10).collect(),
            sizes: vec![3, 4],
            identical: false,
            weighted: false,
            max_value: 100,
            max_weight: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub edges: usize,
    pub violations: String,
    pub baseline: String,
    pub additive_term: f64,
    pub ef1: bool,
    pub balanced: bool,
    pub op_count: u64,
    pub elapsed_ms: f64,
}

fn run_cell(instance: &Instance, algo: Algo) -> Result<BenchRow, Error> {
    let start = Instant::now();
    let SolveOutcome {
        allocation,
        stats,
        additive_term,
        ..
    } = solve(instance, algo, None)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = AllocationReport::build(instance, &allocation)?;
    Ok(BenchRow {
        m: instance.goods(),
        n: instance.agents(),
        edges: instance.edge_count(),
        violations: report.violations.to_string(),
        baseline: report.baseline.to_string(),
        additive_term,
        ef1: report.ef1,
        balanced: report.balanced,
        op_count: stats.total_ops(),
        elapsed_ms,
    })
}

pub fn run_suite(spec: &BenchSpec) -> Result<Vec<BenchRow>, Error> {
    let mut rows = Vec::new();
    match spec.family {
        Family::Star => {
            for &n in &spec.ns {
                rows.push(run_cell(&gen::star(n), spec.algo)?);
            }
        }
        Family::Cliques => {
            for &n in &spec.ns {
                rows.push(run_cell(&gen::cliques(n, &spec.sizes), spec.algo)?);
            }
        }
        Family::Gnp => {
            for &n in &spec.ns {
                for &m in &spec.ms {
                    for &(p_num, p_den) in &spec.ps {
                        for &seed in &spec.seeds {
                            let inst = gen::gnp(&GnpParams {
                                n,
                                m,
                                p_num,
                                p_den,
                                seed,
                                identical: spec.identical,
                                weighted: spec.weighted,
                                max_value: spec.max_value,
                                max_weight: spec.max_weight,
                            });
                            rows.push(run_cell(&inst, spec.algo)?);
                        }
                    }
                }
            }
        }
        Family::RegularWeighted => {
            for &n in &spec.ns {
                for &m in &spec.ms {
                    for &deg in &spec.degs {
                        for &seed in &spec.seeds {
                            let inst = gen::regular_weighted(&RegularParams {
                                n,
                                m,
                                deg,
                                seed,
                                identical: spec.identical,
                                max_value: spec.max_value,
                                max_weight: spec.max_weight,
                            });
                            rows.push(run_cell(&inst, spec.algo)?);
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str =
    "m,n,edges,violations,baseline,additive_term,ef1,balanced,op_count,elapsed";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.3}",
            r.m,
            r.n,
            r.edges,
            r.violations,
            r.baseline,
            r.additive_term,
            r.ef1,
            r.balanced,
            r.op_count,
            r.elapsed_ms
        )
        .expect("write to string");
    }
    out
}

pub fn to_text(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    for r in rows {
        writeln!(
            out,
            "m={} n={} edges={} violations={} baseline={} additive_term={} ef1={} balanced={} op_count={} elapsed={:.3}ms",
            r.m, r.n, r.edges, r.violations, r.baseline, r.additive_term, r.ef1, r.balanced,
            r.op_count, r.elapsed_ms
        )
        .expect("write to string");
    }
    out
}
