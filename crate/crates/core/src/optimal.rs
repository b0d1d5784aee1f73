//! Exact coordinated optimum `C*` by binary search over a congestion cap
//! with a backtracking feasibility oracle.

use crate::budget::Budget;
use crate::error::{ArenaError, Result};
use crate::game::{Instance, Routing};
use crate::graph::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalResult {
    pub c_star: u64,
    pub witness: Routing,
    /// Longest path in the witness.
    pub longest_path: usize,
    /// `ceil(log2 L*)`.
    pub l_star: u64,
    /// `ceil(log2 (L* - 1))`, defined for `L* >= 2`.
    pub l_star_1: Option<u64>,
    pub nodes_explored: u64,
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2_usize(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as u64
    }
}

struct Search<'a> {
    sets: &'a [Vec<Path>],
    cap: u64,
    load: Vec<u64>,
    choice: Vec<Option<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn fits(&self, p: &Path) -> bool {
        p.edges().iter().all(|&e| self.load[e] < self.cap)
    }

    fn run(&mut self) -> Result<bool> {
        // Most constrained unassigned player first.
        let mut pick: Option<(usize, Vec<usize>)> = None;
        for (i, set) in self.sets.iter().enumerate() {
            if self.choice[i].is_some() {
                continue;
            }
            let feasible: Vec<usize> = (0..set.len()).filter(|&k| self.fits(&set[k])).collect();
            if feasible.is_empty() {
                return Ok(false);
            }
            if pick.as_ref().is_none_or(|(_, f)| feasible.len() < f.len()) {
                pick = Some((i, feasible));
            }
        }
        let Some((i, mut options)) = pick else {
            return Ok(true);
        };
        let set = &self.sets[i];
        let max_load = |p: &Path, load: &[u64]| p.edges().iter().map(|&e| load[e]).max().unwrap_or(0);
        options.sort_by_key(|&k| (max_load(&set[k], &self.load), k));
        for k in options {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(ArenaError::SearchBudgetExceeded { budget: self.budget });
            }
            for &e in set[k].edges() {
                self.load[e] += 1;
            }
            self.choice[i] = Some(k);
            if self.run()? {
                return Ok(true);
            }
            self.choice[i] = None;
            for &e in set[k].edges() {
                self.load[e] -= 1;
            }
        }
        Ok(false)
    }
}

fn feasible_in(inst: &Instance, sets: &[Vec<Path>], cap: u64, budget: &Budget) -> Result<(Option<Routing>, u64)> {
    let mut search = Search {
        sets,
        cap,
        load: vec![0; inst.graph().edge_count()],
        choice: vec![None; sets.len()],
        nodes: 0,
        budget: budget.search_nodes,
    };
    let found = search.run()?;
    let routing = found.then(|| {
        Routing::new(
            search
                .choice
                .iter()
                .enumerate()
                .map(|(i, k)| sets[i][k.expect("assigned")].clone())
                .collect(),
        )
    });
    Ok((routing, search.nodes))
}

/// A routing with every edge congestion at most `cap`, if one exists.
pub fn feasible_with_cap(inst: &Instance, cap: u64, budget: &Budget) -> Result<Option<Routing>> {
    if cap == 0 {
        return Err(ArenaError::Precondition("cap must be at least 1".into()));
    }
    let sets = inst.strategy_sets(budget)?;
    Ok(feasible_in(inst, &sets, cap, budget)?.0)
}

/// Minimum achievable bottleneck congestion and its canonical witness.
pub fn min_bottleneck_routing(inst: &Instance, budget: &Budget) -> Result<OptimalResult> {
    let n = inst.player_count() as u64;
    if n == 0 {
        return Err(ArenaError::Precondition("instance has no players".into()));
    }
    let sets = inst.strategy_sets(budget)?;
    let mut nodes = 0u64;
    let (mut lo, mut hi) = (1u64, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let (found, explored) = feasible_in(inst, &sets, mid, budget)?;
        nodes += explored;
        if found.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (witness, explored) = feasible_in(inst, &sets, lo, budget)?;
    nodes += explored;
    let witness = witness.expect("every routing has congestion at most N");
    let longest_path = witness.paths().iter().map(Path::len).max().unwrap_or(0);
    Ok(OptimalResult {
        c_star: lo,
        witness,
        longest_path,
        l_star: ceil_log2_usize(longest_path),
        l_star_1: (longest_path >= 2).then(|| ceil_log2_usize(longest_path - 1)),
        nodes_explored: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{congestion, social_cost, CostModel, Player};
    use crate::generators::{gen_linear_counterexample, gen_parallel_links};
    use crate::graph::Graph;

    #[test]
    fn parallel_pigeonhole() {
        let inst = gen_parallel_links(5, 2, CostModel::ExpSum).unwrap();
        let b = Budget::default();
        let r = feasible_with_cap(&inst, 3, &b).unwrap().unwrap();
        let mut loads = congestion(&inst, &r).unwrap().as_slice().to_vec();
        loads.sort();
        assert_eq!(loads, vec![2, 3]);
        assert!(feasible_with_cap(&inst, 2, &b).unwrap().is_none());
        let opt = min_bottleneck_routing(&inst, &b).unwrap();
        assert_eq!(opt.c_star, 3);
        assert_eq!(opt.longest_path, 1);
        assert_eq!(opt.l_star, 0);
        assert_eq!(opt.l_star_1, None);
    }

    #[test]
    fn counterexample_optimum_spreads() {
        let b = Budget::default();
        for k in 2..=6 {
            let inst = gen_linear_counterexample(k, CostModel::LinearSum).unwrap();
            let r = feasible_with_cap(&inst, 1, &b).unwrap().unwrap();
            assert!(congestion(&inst, &r).unwrap().as_slice().iter().all(|&c| c <= 1));
            let opt = min_bottleneck_routing(&inst, &b).unwrap();
            assert_eq!(opt.c_star, 1);
            assert_eq!(social_cost(&inst, &opt.witness).unwrap(), 1);
            assert_eq!(opt.longest_path, k);
        }
        let inst = gen_linear_counterexample(4, CostModel::ExpSum).unwrap();
        let opt = min_bottleneck_routing(&inst, &b).unwrap();
        // canonical witness: player 0 takes e, the others take long paths in order
        assert_eq!(opt.witness.path(0).edges(), &[0]);
        for j in 1..4 {
            assert_eq!(opt.witness.path(j).len(), 4);
        }
        assert_eq!(opt.l_star, 2);
        assert_eq!(opt.l_star_1, Some(2));
    }

    #[test]
    fn single_player_takes_a_path() {
        let g = Graph::new(3, [(0, 0, 1), (1, 1, 2), (2, 0, 2)]).unwrap();
        let inst = Instance::new(g, vec![Player::all_paths(0, 0, 2, 2)], CostModel::ExpSum).unwrap();
        let opt = min_bottleneck_routing(&inst, &Budget::default()).unwrap();
        assert_eq!(opt.c_star, 1);
        assert!(inst.allows(0, opt.witness.path(0)));
    }

    #[test]
    fn errors() {
        let inst = gen_parallel_links(6, 2, CostModel::ExpSum).unwrap();
        let tiny = Budget {
            search_nodes: 2,
            ..Budget::default()
        };
        assert_eq!(
            feasible_with_cap(&inst, 3, &tiny).unwrap_err().code(),
            "search.budget_exceeded"
        );
        assert!(feasible_with_cap(&inst, 0, &Budget::default()).is_err());
        let g = Graph::new(2, [(0, 0, 1)]).unwrap();
        let empty = Instance::new(g, vec![], CostModel::ExpSum).unwrap();
        assert!(min_bottleneck_routing(&empty, &Budget::default()).is_err());
    }

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2_usize(1), 0);
        assert_eq!(ceil_log2_usize(2), 1);
        assert_eq!(ceil_log2_usize(3), 2);
        assert_eq!(ceil_log2_usize(4), 2);
        assert_eq!(ceil_log2_usize(5), 3);
    }
}
