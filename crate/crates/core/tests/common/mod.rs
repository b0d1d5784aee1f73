//! Independent oracles and the shared fixture corpus for integration tests.
//!
//! Nothing here calls the library's search routines: paths are enumerated
//! by a separate DFS over node adjacency, costs are recomputed from edge
//! loads, and equilibria and optima come from plain profile enumeration.

#![allow(dead_code)]

use std::collections::BTreeMap;

use bottleneck_arena::game::{CostModel, Instance, Routing, Strategies};
use bottleneck_arena::generators::{gen_linear_counterexample, gen_parallel_links, generate, Family, GenSpec};
use bottleneck_arena::graph::Path;
use num_bigint::BigUint;

pub const MODELS: [CostModel; 6] = [
    CostModel::BottleneckMax,
    CostModel::ExpSum,
    CostModel::LogExpSum,
    CostModel::LinearSum,
    CostModel::PolySum(2),
    CostModel::PolySum(3),
];

/// Profiles above this count are left out of exhaustive checks.
pub const PROFILE_LIMIT: u128 = 1_000_000;

pub struct Fixture {
    pub name: String,
    pub inst: Instance,
}

fn base_instances() -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    for k in 2..=4 {
        out.push((format!("counterexample-k{k}"), gen_linear_counterexample(k, CostModel::ExpSum).unwrap()));
    }
    for (n, m) in [(3, 2), (4, 2), (3, 3), (5, 2)] {
        out.push((format!("parallel-{n}x{m}"), gen_parallel_links(n, m, CostModel::ExpSum).unwrap()));
    }
    for seed in 0..4 {
        let family = Family::RandomGrid {
            rows: 2,
            cols: 3,
            players: 3,
            seed,
        };
        out.push((format!("grid-2x3-s{seed}"), gen(family)));
    }
    for seed in 0..3 {
        let family = Family::RandomGrid {
            rows: 3,
            cols: 3,
            players: 2,
            seed,
        };
        out.push((format!("grid-3x3-s{seed}"), gen(family)));
    }
    for seed in 0..6 {
        let family = Family::RandomGraph {
            nodes: 5,
            edges: 8,
            players: 3,
            seed,
        };
        out.push((format!("random-5n8e-s{seed}"), gen(family)));
    }
    out
}

fn gen(family: Family) -> Instance {
    generate(&GenSpec {
        family,
        cost_model: CostModel::ExpSum,
    })
    .unwrap()
}

/// Every base instance under every cost model, limited to enumerable sizes.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for (name, inst) in base_instances() {
        let sets = strategy_sets(&inst);
        let space = sets.iter().fold(1u128, |a, s| a * s.len() as u128);
        if space > PROFILE_LIMIT {
            continue;
        }
        for model in MODELS {
            out.push(Fixture {
                name: format!("{name}/{model}"),
                inst: inst.with_cost_model(model).unwrap(),
            });
        }
    }
    out
}

/// Node-simple `s`–`t` paths with at most `max_len` edges, in no particular order.
pub fn simple_paths(inst: &Instance, s: usize, t: usize, max_len: usize) -> Vec<Path> {
    let g = inst.graph();
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for e in g.edges() {
        adj.entry(e.u).or_default().push((e.id, e.v));
        adj.entry(e.v).or_default().push((e.id, e.u));
    }
    let mut out = Vec::new();
    let mut visited = vec![false; g.node_count()];
    let mut stack = Vec::new();
    fn dfs(
        at: usize,
        t: usize,
        max_len: usize,
        adj: &BTreeMap<usize, Vec<(usize, usize)>>,
        visited: &mut [bool],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if at == t {
            out.push(stack.clone());
            return;
        }
        if stack.len() == max_len {
            return;
        }
        for &(e, w) in adj.get(&at).map(Vec::as_slice).unwrap_or(&[]) {
            if !visited[w] {
                visited[w] = true;
                stack.push(e);
                dfs(w, t, max_len, adj, visited, stack, out);
                stack.pop();
                visited[w] = false;
            }
        }
    }
    visited[s] = true;
    let mut raw = Vec::new();
    dfs(s, t, max_len, &adj, &mut visited, &mut stack, &mut raw);
    out.extend(raw.into_iter().map(|edges| Path::new(s, t, edges)));
    out
}

pub fn strategy_set(inst: &Instance, i: usize) -> Vec<Path> {
    let p = &inst.players()[i];
    match &p.strategies {
        Strategies::Explicit(paths) => paths.clone(),
        Strategies::AllPaths { max_len } => simple_paths(inst, p.source, p.destination, *max_len),
    }
}

pub fn strategy_sets(inst: &Instance) -> Vec<Vec<Path>> {
    (0..inst.player_count()).map(|i| strategy_set(inst, i)).collect()
}

pub fn loads(inst: &Instance, paths: &[&Path]) -> Vec<u64> {
    let mut c = vec![0u64; inst.graph().edge_count()];
    for p in paths {
        for &e in p.edges() {
            c[e] += 1;
        }
    }
    c
}

/// Player cost from first principles; `LogExpSum` shares the ExpSum integer.
pub fn cost(model: CostModel, load: &[u64], path: &Path) -> BigUint {
    let cs = path.edges().iter().map(|&e| load[e]);
    match model {
        CostModel::BottleneckMax => BigUint::from(cs.max().unwrap_or(0)),
        CostModel::ExpSum | CostModel::LogExpSum => cs.map(|c| BigUint::from(2u8).pow(c as u32)).sum(),
        CostModel::LinearSum => cs.map(BigUint::from).sum(),
        CostModel::PolySum(d) => cs.map(|c| BigUint::from(c).pow(d)).sum(),
    }
}

pub fn exp_cost(load: &[u64], path: &Path) -> BigUint {
    cost(CostModel::ExpSum, load, path)
}

/// Cost player `i` would pay on `alt` with every other player fixed.
pub fn deviation_cost(inst: &Instance, r: &Routing, i: usize, alt: &Path) -> BigUint {
    let paths: Vec<&Path> = (0..r.len()).map(|j| if j == i { alt } else { r.path(j) }).collect();
    cost(inst.cost_model(), &loads(inst, &paths), alt)
}

pub fn min_deviation(inst: &Instance, r: &Routing, i: usize) -> BigUint {
    strategy_set(inst, i)
        .iter()
        .map(|q| deviation_cost(inst, r, i, q))
        .min()
        .unwrap()
}

pub fn oracle_is_nash(inst: &Instance, r: &Routing) -> bool {
    (0..r.len()).all(|i| min_deviation(inst, r, i) >= deviation_cost(inst, r, i, r.path(i)))
}

pub fn potential(inst: &Instance, r: &Routing) -> BigUint {
    let paths: Vec<&Path> = r.paths().iter().collect();
    loads(inst, &paths).iter().map(|&c| BigUint::from(2u8).pow(c as u32)).sum()
}

pub fn bottleneck(inst: &Instance, r: &Routing) -> u64 {
    let paths: Vec<&Path> = r.paths().iter().collect();
    loads(inst, &paths).into_iter().max().unwrap_or(0)
}

/// Calls `f` on every profile of the product of strategy sets.
pub fn for_each_profile(sets: &[Vec<Path>], mut f: impl FnMut(&Routing)) {
    let mut idx = vec![0usize; sets.len()];
    loop {
        let r = Routing::new(idx.iter().enumerate().map(|(i, &k)| sets[i][k].clone()).collect());
        f(&r);
        let mut i = sets.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < sets[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

pub fn brute_c_star(inst: &Instance) -> u64 {
    let mut best = u64::MAX;
    for_each_profile(&strategy_sets(inst), |r| best = best.min(bottleneck(inst, r)));
    best
}

pub fn brute_nash(inst: &Instance) -> Vec<Routing> {
    let mut out = Vec::new();
    for_each_profile(&strategy_sets(inst), |r| {
        if oracle_is_nash(inst, r) {
            out.push(r.clone());
        }
    });
    out
}

pub fn all_on_e(inst: &Instance) -> Routing {
    Routing::new(vec![Path::new(0, 1, vec![0]); inst.player_count()])
}
