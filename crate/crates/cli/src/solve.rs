//! Algorithm selection and the solver-side report fields.

use fairdiv_core::instance::{Allocation, Instance};
use fairdiv_core::{cyclic, general, Error, SolveStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    /// Pick by instance shape: 1 agent trivial, 2 agents cut-and-choose,
    /// identical valuations cyclic, unit weights graph, otherwise degree.
    Auto,
    Cyclic,
    Cutchoose,
    Graph,
    Degree,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub allocation: Allocation,
    pub stats: SolveStats,
    pub algo_used: &'static str,
    /// Additive slack budget of the dispatched solver's bound, in weight
    /// units; zero when the bound is exactly the baseline.
    pub additive_term: f64,
}

fn trivial(instance: &Instance) -> (Allocation, SolveStats) {
    let mut stats = SolveStats::default();
    stats.scalar_ops += instance.goods() as u64;
    (
        Allocation::from_owners(vec![0; instance.goods()]),
        stats,
    )
}

/// `10 n^2 |E|^(1 - 1/(2n-2))`: the slack budget of the bucketed solver.
pub fn graph_additive_term(edge_count: usize, n: usize) -> f64 {
    if edge_count == 0 {
        return 0.0;
    }
    let exponent = 1.0 - 1.0 / (2.0 * n as f64 - 2.0);
    10.0 * (n * n) as f64 * (edge_count as f64).powf(exponent)
}

/// `10 n^2 D m^(1 - 1/(n-1))` with `D` the maximum incident weight sum in
/// weight units: the slack budget of the direct profile-vector solver for
/// n >= 3.
pub fn degree_additive_term(instance: &Instance) -> f64 {
    let n = instance.agents();
    if n <= 1 || instance.edge_count() == 0 {
        return 0.0;
    }
    let max_incident = (0..instance.goods())
        .map(|g| instance.weighted_degree(g))
        .max()
        .unwrap_or(0) as f64
        / instance.wscale() as f64;
    let exponent = 1.0 - 1.0 / (n as f64 - 1.0);
    10.0 * (n * n) as f64 * max_incident * (instance.goods() as f64).powf(exponent)
}

pub fn solve(
    instance: &Instance,
    algo: Algo,
    delta: Option<i128>,
) -> Result<SolveOutcome, Error> {
    let n = instance.agents();
    let resolved = match algo {
        Algo::Auto => {
            if n == 1 {
                Algo::Auto // handled below
            } else if n == 2 {
                Algo::Cutchoose
            } else if instance.identical_valuations() {
                Algo::Cyclic
            } else if instance.is_unit_weighted() {
                Algo::Graph
            } else {
                Algo::Degree
            }
        }
        other => other,
    };
    match resolved {
        Algo::Auto => {
            let (allocation, stats) = trivial(instance);
            Ok(SolveOutcome {
                allocation,
                stats,
                algo_used: "trivial",
                additive_term: 0.0,
            })
        }
        Algo::Cyclic => {
            let (allocation, stats) = cyclic::cyclic_shift_rr(instance)?;
            Ok(SolveOutcome {
                allocation,
                stats,
                algo_used: "cyclic",
                additive_term: 0.0,
            })
        }
        Algo::Cutchoose => {
            let (allocation, stats) = cyclic::cut_and_choose(instance)?;
            Ok(SolveOutcome {
                allocation,
                stats,
                algo_used: "cutchoose",
                additive_term: 0.0,
            })
        }
        Algo::Graph => {
            let (allocation, stats) = general::graph_ef1(instance)?;
            Ok(SolveOutcome {
                allocation,
                stats,
                algo_used: "graph",
                additive_term: graph_additive_term(instance.edge_count(), n),
            })
        }
        Algo::Degree => {
            let (allocation, stats) = general::degree_ef1_direct(instance, delta)?;
            Ok(SolveOutcome {
                allocation,
                stats,
                algo_used: "degree",
                additive_term: degree_additive_term(instance),
            })
        }
    }
}

pub fn render_solver_block(outcome: &SolveOutcome) -> String {
    format!(
        "# solver: algo={} op_count={} additive_term={}\n",
        outcome.algo_used,
        outcome.stats.total_ops(),
        outcome.additive_term,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use fairdiv_core::instance::{is_ef1, Edge};

    #[test]
    fn auto_dispatch() {
        let one = Instance::new(1, vec![vec![1, 2]], vec![]).unwrap();
        assert_eq!(solve(&one, Algo::Auto, None).unwrap().algo_used, "trivial");

        let two = Instance::new(2, vec![vec![1, 2], vec![2, 1]], vec![]).unwrap();
        assert_eq!(solve(&two, Algo::Auto, None).unwrap().algo_used, "cutchoose");

        let identical = gen::star(4);
        assert_eq!(
            solve(&identical, Algo::Auto, None).unwrap().algo_used,
            "cyclic"
        );

        let general = Instance::new(
            3,
            vec![vec![1, 2, 3], vec![3, 2, 1], vec![2, 2, 2]],
            vec![Edge { u: 0, v: 1, w: 1 }],
        )
        .unwrap();
        assert_eq!(solve(&general, Algo::Auto, None).unwrap().algo_used, "graph");

        let weighted = Instance::new(
            3,
            vec![vec![1, 2, 3], vec![3, 2, 1], vec![2, 2, 2]],
            vec![Edge { u: 0, v: 1, w: 5 }],
        )
        .unwrap();
        assert_eq!(
            solve(&weighted, Algo::Auto, None).unwrap().algo_used,
            "degree"
        );
    }

    #[test]
    fn incompatible_pairings_error() {
        let two = Instance::new(2, vec![vec![1, 2], vec![2, 1]], vec![]).unwrap();
        assert!(matches!(
            solve(&two, Algo::Cyclic, None),
            Err(Error::IdenticalValuationsRequired)
        ));
        assert!(matches!(
            solve(&two, Algo::Graph, None),
            Err(Error::NotEnoughAgents { .. })
        ));
        let three = gen::star(3);
        assert!(matches!(
            solve(&three, Algo::Cutchoose, None),
            Err(Error::WrongAgentCount { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn every_algo_outputs_ef1_here() {
        let inst = gen::gnp(&gen::GnpParams {
            n: 3,
            m: 9,
            p_num: 3,
            p_den: 10,
            seed: 11,
            identical: true,
            ..Default::default()
        });
        for algo in [Algo::Auto, Algo::Cyclic, Algo::Graph, Algo::Degree] {
            let outcome = solve(&inst, algo, None).unwrap();
            assert!(is_ef1(&inst, &outcome.allocation).unwrap());
        }
    }
}
