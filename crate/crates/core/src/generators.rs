//! Deterministic instance families.

use crate::error::{ArenaError, Result};
use crate::game::{CostModel, Instance, Player};
use crate::graph::{Graph, Path};
use crate::rng::ShiftRng;

const MAX_DRAWS: u32 = 1000;
/// Extra hops allowed beyond `rows + cols` for grid players.
pub const GRID_SLACK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    LinearCounterexample { k: usize },
    ParallelLinks { players: usize, links: usize },
    RandomGrid { rows: usize, cols: usize, players: usize, seed: u64 },
    RandomGraph { nodes: usize, edges: usize, players: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub cost_model: CostModel,
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    match spec.family {
        Family::LinearCounterexample { k } => gen_linear_counterexample(k, spec.cost_model),
        Family::ParallelLinks { players, links } => gen_parallel_links(players, links, spec.cost_model),
        Family::RandomGrid { .. } | Family::RandomGraph { .. } => gen_random(spec),
    }
}

/// `k` players from `u` to `v`, a direct edge `e = (u, v)` with id 0, and
/// `k - 1` node-disjoint `u`–`v` paths of exactly `k` edges each.
///
/// Node 0 is `u`, node 1 is `v`; long path `j` uses interior nodes
/// `2 + j(k-1) .. 2 + (j+1)(k-1)` and edge ids `1 + jk .. 1 + (j+1)k`.
/// Every player's strategy list is `[e, long_0, .., long_{k-2}]`.
pub fn gen_linear_counterexample(k: usize, cost_model: CostModel) -> Result<Instance> {
    if k < 2 {
        return Err(ArenaError::InvalidParameter("counterexample needs k >= 2".into()));
    }
    let (u, v) = (0usize, 1usize);
    let node_count = 2 + (k - 1) * (k - 1);
    let mut edges = vec![(0usize, u, v)];
    let mut strategies = vec![Path::new(u, v, vec![0])];
    for j in 0..k - 1 {
        let interior: Vec<usize> = (0..k - 1).map(|t| 2 + j * (k - 1) + t).collect();
        let mut hops = vec![u];
        hops.extend(&interior);
        hops.push(v);
        let mut ids = Vec::with_capacity(k);
        for w in hops.windows(2) {
            let id = edges.len();
            edges.push((id, w[0], w[1]));
            ids.push(id);
        }
        strategies.push(Path::new(u, v, ids));
    }
    let graph = Graph::new(node_count, edges)?;
    let players = (0..k).map(|i| Player::explicit(i, u, v, strategies.clone())).collect();
    Instance::new(graph, players, cost_model)
}

/// Two nodes joined by `links` parallel edges; every player may use any link.
pub fn gen_parallel_links(players: usize, links: usize, cost_model: CostModel) -> Result<Instance> {
    if players == 0 || links == 0 {
        return Err(ArenaError::InvalidParameter("parallel links need players >= 1 and links >= 1".into()));
    }
    let graph = Graph::new(2, (0..links).map(|e| (e, 0, 1)))?;
    let paths: Vec<Path> = (0..links).map(|e| Path::new(0, 1, vec![e])).collect();
    let players = (0..players).map(|i| Player::explicit(i, 0, 1, paths.clone())).collect();
    Instance::new(graph, players, cost_model)
}

/// Seeded grid or multigraph instance with implicit strategy sets.
pub fn gen_random(spec: &GenSpec) -> Result<Instance> {
    match spec.family {
        Family::RandomGrid {
            rows,
            cols,
            players,
            seed,
        } => {
            if rows == 0 || cols == 0 || players == 0 || rows * cols < 2 {
                return Err(ArenaError::InvalidParameter("grid needs >= 2 nodes and >= 1 player".into()));
            }
            let graph = grid_graph(rows, cols)?;
            let max_len = rows + cols + GRID_SLACK;
            let players = draw_players(&graph, players, max_len, &mut ShiftRng::new(seed).split(1))?;
            Instance::new(graph, players, spec.cost_model)
        }
        Family::RandomGraph {
            nodes,
            edges,
            players,
            seed,
        } => {
            if nodes < 2 || edges == 0 || players == 0 {
                return Err(ArenaError::InvalidParameter(
                    "random graph needs >= 2 nodes, >= 1 edge and >= 1 player".into(),
                ));
            }
            let root = ShiftRng::new(seed);
            let mut rng = root.split(0);
            let graph = (0..MAX_DRAWS)
                .find_map(|_| {
                    let list: Vec<(usize, usize, usize)> = (0..edges)
                        .map(|id| {
                            let a = rng.index(nodes);
                            let b = (a + 1 + rng.index(nodes - 1)) % nodes;
                            (id, a.min(b), a.max(b))
                        })
                        .collect();
                    let g = Graph::new(nodes, list).ok()?;
                    is_connected(&g).then_some(g)
                })
                .ok_or(ArenaError::RejectionFailure { draws: MAX_DRAWS })?;
            let players = draw_players(&graph, players, nodes - 1, &mut root.split(1))?;
            Instance::new(graph, players, spec.cost_model)
        }
        _ => generate(spec),
    }
}

/// `rows x cols` grid; node `(r, c)` is `r * cols + c`. Horizontal edges
/// come first in row-major order, then vertical ones.
pub fn grid_graph(rows: usize, cols: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            edges.push((edges.len(), r * cols + c, r * cols + c + 1));
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            edges.push((edges.len(), r * cols + c, (r + 1) * cols + c));
        }
    }
    Graph::new(rows * cols, edges)
}

fn draw_players(g: &Graph, count: usize, max_len: usize, rng: &mut ShiftRng) -> Result<Vec<Player>> {
    let n = g.node_count();
    let mut players = Vec::with_capacity(count);
    let mut draws = 0u32;
    while players.len() < count {
        draws += 1;
        if draws > MAX_DRAWS * count as u32 {
            return Err(ArenaError::RejectionFailure { draws });
        }
        let s = rng.index(n);
        let t = rng.index(n);
        if s == t {
            continue;
        }
        let candidate = Player::all_paths(players.len(), s, t, max_len);
        if crate::graph::first_simple_path(g, s, t, max_len)?.is_some() {
            players.push(candidate);
        }
    }
    Ok(players)
}

fn is_connected(g: &Graph) -> bool {
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(at) = stack.pop() {
        for &(_, next) in g.incident(at) {
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
