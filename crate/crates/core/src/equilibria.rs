//! Exhaustive pure-Nash enumeration and price of anarchy / stability.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::Result;
use crate::game::{CongestionMap, CostModel, Instance, Routing};
use crate::graph::Path;
use crate::optimal::{min_bottleneck_routing, OptimalResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    /// Nash routings in lexicographic profile order.
    pub nash: Vec<Routing>,
    /// Size of the full strategy-profile product (saturating).
    pub profile_space: u128,
    pub profiles_visited: u64,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriaReport {
    pub nash_routings: Vec<Routing>,
    pub worst_nash_cost: Option<u64>,
    pub best_nash_cost: Option<u64>,
    pub c_star: u64,
    pub poa: Option<Ratio<u64>>,
    pub pos: Option<Ratio<u64>>,
    pub truncated: bool,
    pub profiles_visited: u64,
    /// `L`, the longest strategy path.
    pub max_path_len: usize,
    pub edge_count: usize,
    /// `log2(2L) * log2(2|E|)`.
    pub bound_value: f64,
    /// `poa / bound_value`.
    pub bound_ratio: Option<f64>,
    pub optimal: OptimalResult,
}

/// Nash test of one profile given its congestion map, comparing every
/// player against each alternative in its (finite) strategy list.
fn profile_is_nash(model: CostModel, fast: bool, sets: &[Vec<Path>], digits: &[usize], map: &CongestionMap) -> bool {
    for (i, set) in sets.iter().enumerate() {
        let current = &set[digits[i]];
        if fast {
            let now = map.path_cost_u128(model, current).expect("fits");
            for (k, alt) in set.iter().enumerate() {
                if k != digits[i] && map.deviation_cost_u128(model, current, alt).expect("fits") < now {
                    return false;
                }
            }
        } else {
            let now = map.path_cost(model, current);
            for (k, alt) in set.iter().enumerate() {
                if k != digits[i] && map.deviation_cost(model, current, alt) < now {
                    return false;
                }
            }
        }
    }
    true
}

fn scan_chunk(
    model: CostModel,
    fast: bool,
    edge_count: usize,
    sets: &[Vec<Path>],
    start: u128,
    end: u128,
) -> Vec<Vec<usize>> {
    let n = sets.len();
    // Player 0 is the most significant digit.
    let mut digits = vec![0usize; n];
    let mut rest = start;
    for i in (0..n).rev() {
        let radix = sets[i].len() as u128;
        digits[i] = (rest % radix) as usize;
        rest /= radix;
    }
    let mut map = CongestionMap::from_paths(edge_count, digits.iter().enumerate().map(|(i, &k)| &sets[i][k]));
    let mut found = Vec::new();
    let mut index = start;
    while index < end {
        if profile_is_nash(model, fast, sets, &digits, &map) {
            found.push(digits.clone());
        }
        index += 1;
        if index == end {
            break;
        }
        for i in (0..n).rev() {
            map.remove(&sets[i][digits[i]]);
            digits[i] += 1;
            if digits[i] == sets[i].len() {
                digits[i] = 0;
                map.add(&sets[i][0]);
            } else {
                map.add(&sets[i][digits[i]]);
                break;
            }
        }
    }
    found
}

/// Every pure Nash routing among the first `budget.profile_cap` profiles of
/// the lexicographic product of strategy sets.
pub fn enumerate_nash(inst: &Instance, budget: &Budget) -> Result<Enumeration> {
    let sets = inst.strategy_sets(budget)?;
    let profile_space = sets
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    let limit = profile_space.min(budget.profile_cap as u128);
    let truncated = profile_space > limit;
    let model = inst.cost_model();
    let fast = model.fits_u128(inst.player_count(), inst.max_path_len());
    let edge_count = inst.graph().edge_count();

    let chunks = (rayon::current_num_threads() as u128 * 8).clamp(1, limit.max(1));
    let size = limit.div_ceil(chunks).max(1);
    let bounds: Vec<(u128, u128)> = (0..chunks)
        .map(|c| (c * size, ((c + 1) * size).min(limit)))
        .filter(|(a, b)| a < b)
        .collect();
    let found: Vec<Vec<Vec<usize>>> = bounds
        .par_iter()
        .map(|&(a, b)| scan_chunk(model, fast, edge_count, &sets, a, b))
        .collect();
    let nash = found
        .into_iter()
        .flatten()
        .map(|digits| Routing::new(digits.iter().enumerate().map(|(i, &k)| sets[i][k].clone()).collect()))
        .collect();
    Ok(Enumeration {
        nash,
        profile_space,
        profiles_visited: limit as u64,
        truncated,
    })
}

/// `log2(2L) * log2(2|E|)`, positive for every nonempty game.
pub fn bound_value(max_path_len: usize, edge_count: usize) -> f64 {
    (2.0 * max_path_len as f64).log2() * (2.0 * edge_count as f64).log2()
}

/// Enumerates equilibria and compares them with the coordinated optimum.
pub fn measure_poa(inst: &Instance, budget: &Budget) -> Result<EquilibriaReport> {
    let optimal = min_bottleneck_routing(inst, budget)?;
    let enumeration = enumerate_nash(inst, budget)?;
    let edge_count = inst.graph().edge_count();
    let costs: Vec<u64> = enumeration
        .nash
        .iter()
        .map(|r| CongestionMap::from_paths(edge_count, r.paths()).max())
        .collect();
    let worst = costs.iter().copied().max();
    let best = costs.iter().copied().min();
    let c_star = optimal.c_star;
    let poa = worst.map(|w| Ratio::new(w, c_star));
    let pos = best.map(|b| Ratio::new(b, c_star));
    let max_path_len = inst.max_path_len();
    let bound = bound_value(max_path_len, edge_count);
    Ok(EquilibriaReport {
        nash_routings: enumeration.nash,
        worst_nash_cost: worst,
        best_nash_cost: best,
        c_star,
        poa,
        pos,
        truncated: enumeration.truncated,
        profiles_visited: enumeration.profiles_visited,
        max_path_len,
        edge_count,
        bound_value: bound,
        bound_ratio: poa.map(|p| p.to_f64().unwrap_or(f64::NAN) / bound),
        optimal,
    })
}
