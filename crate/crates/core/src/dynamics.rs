//! Best responses, Nash verification and best-response dynamics.
//!
//! A player only moves on a strict improvement. Under `ExpSum` every such
//! move strictly lowers `sum_e 2^{C_e}`, so the dynamics terminate.

use num_bigint::BigUint;

use crate::error::Result;
use crate::game::{CongestionMap, CostModel, ExactCost, Instance, PlayerId, Routing, Strategies};
use crate::graph::{min_bottleneck_path_within, min_weight_path_within, Path};
use crate::rng::ShiftRng;

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Scan players cyclically; the first improver moves.
    #[default]
    RoundRobin,
    /// The improver whose move lowers the potential most moves (lowest id on ties).
    MaxGain,
    /// A uniformly drawn improver moves.
    RandomSeeded(u64),
}


#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrdStep {
    pub step_index: u64,
    pub player: PlayerId,
    pub old_path: Path,
    pub new_path: Path,
    pub old_cost: ExactCost,
    pub new_cost: ExactCost,
    pub potential_after: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrdTrace {
    pub initial_potential: BigUint,
    pub steps: Vec<BrdStep>,
    pub converged: bool,
    pub final_routing: Routing,
}

/// Outcome of one best-response query against a fixed congestion map.
#[derive(Debug, Clone)]
pub(crate) struct Response {
    pub path: Path,
    pub current: ExactCost,
    pub best: ExactCost,
}

impl Response {
    pub fn improves(&self) -> bool {
        self.best < self.current
    }
}

/// Best response of player `i` given `map`, the congestion of `r`.
pub(crate) fn respond(inst: &Instance, map: &CongestionMap, r: &Routing, i: PlayerId) -> Result<Response> {
    let model = inst.cost_model();
    let player = inst.player(i)?;
    let current_path = r.path(i);
    let current = map.path_cost(model, current_path);
    let (path, best) = match &player.strategies {
        Strategies::Explicit(paths) => {
            let mut best: Option<(ExactCost, &Path)> = None;
            for q in paths {
                let c = map.deviation_cost(model, current_path, q);
                let better = match &best {
                    None => true,
                    Some((bc, bp)) => (&c, q.len(), q.edges()) < (bc, bp.len(), bp.edges()),
                };
                if better {
                    best = Some((c, q));
                }
            }
            let (c, q) = best.expect("nonempty strategy set");
            (q.clone(), c)
        }
        Strategies::AllPaths { max_len } => {
            let g = inst.graph();
            let without: Vec<u64> = (0..g.edge_count())
                .map(|e| map.get(e) - current_path.contains(e) as u64)
                .collect();
            let q = if model.is_additive() {
                let w: Vec<BigUint> = without.iter().map(|&c| model.edge_term(c + 1)).collect();
                min_weight_path_within(g, player.source, player.destination, &w, *max_len)?
            } else {
                min_bottleneck_path_within(g, player.source, player.destination, &without, *max_len)?
            };
            let c = map.deviation_cost(model, current_path, &q);
            (q, c)
        }
    };
    if best >= current {
        return Ok(Response {
            path: current_path.clone(),
            best: current.clone(),
            current,
        });
    }
    Ok(Response { path, current, best })
}

/// A cheapest strategy for player `i` with everyone else fixed. Returns the
/// current path whenever it is already among the cheapest.
pub fn best_response(inst: &Instance, r: &Routing, i: PlayerId) -> Result<Path> {
    let map = crate::game::congestion(inst, r)?;
    Ok(respond(inst, &map, r, i)?.path)
}

/// Whether `r` is a Nash routing, with each improvable player's best
/// improving deviation.
pub fn is_nash(inst: &Instance, r: &Routing) -> Result<(bool, Vec<(PlayerId, Path)>)> {
    let map = crate::game::congestion(inst, r)?;
    let mut improvers = Vec::new();
    for i in 0..inst.player_count() {
        let resp = respond(inst, &map, r, i)?;
        if resp.improves() {
            improvers.push((i, resp.path));
        }
    }
    Ok((improvers.is_empty(), improvers))
}

/// Applies greedy moves chosen by `schedule` until no player can improve or
/// `max_steps` moves have been made.
pub fn run_brd(inst: &Instance, start: &Routing, schedule: Schedule, max_steps: u64) -> Result<BrdTrace> {
    let mut map = crate::game::congestion(inst, start)?;
    let mut routing = start.clone();
    let n = inst.player_count();
    let initial_potential = map.exp_potential();
    let mut steps = Vec::new();
    let mut rng = match schedule {
        Schedule::RandomSeeded(seed) => Some(ShiftRng::new(seed)),
        _ => None,
    };
    let mut cursor = 0usize;
    let mut converged = n == 0;

    while !converged && (steps.len() as u64) < max_steps {
        let chosen: Option<(PlayerId, Response)> = match schedule {
            Schedule::RoundRobin => {
                let mut found = None;
                for offset in 0..n {
                    let i = (cursor + offset) % n;
                    let resp = respond(inst, &map, &routing, i)?;
                    if resp.improves() {
                        found = Some((i, resp));
                        break;
                    }
                }
                found
            }
            Schedule::MaxGain => {
                let mut best: Option<(BigUint, PlayerId, Response)> = None;
                for i in 0..n {
                    let resp = respond(inst, &map, &routing, i)?;
                    if !resp.improves() {
                        continue;
                    }
                    let mut trial = map.clone();
                    trial.remove(routing.path(i));
                    trial.add(&resp.path);
                    let after = trial.exp_potential();
                    if best.as_ref().is_none_or(|(b, _, _)| after < *b) {
                        best = Some((after, i, resp));
                    }
                }
                best.map(|(_, i, resp)| (i, resp))
            }
            Schedule::RandomSeeded(_) => {
                let mut improvers = Vec::new();
                for i in 0..n {
                    let resp = respond(inst, &map, &routing, i)?;
                    if resp.improves() {
                        improvers.push((i, resp));
                    }
                }
                if improvers.is_empty() {
                    None
                } else {
                    let k = rng.as_mut().expect("seeded").index(improvers.len());
                    Some(improvers.swap_remove(k))
                }
            }
        };
        let Some((i, resp)) = chosen else {
            converged = true;
            break;
        };
        let old_path = routing.path(i).clone();
        map.remove(&old_path);
        map.add(&resp.path);
        routing = routing.with_choice(i, resp.path.clone());
        steps.push(BrdStep {
            step_index: steps.len() as u64,
            player: i,
            old_path,
            new_path: resp.path,
            old_cost: resp.current,
            new_cost: resp.best,
            potential_after: map.exp_potential(),
        });
        cursor = (i + 1) % n.max(1);
    }
    if !converged {
        converged = is_nash(inst, &routing)?.0;
    }
    Ok(BrdTrace {
        initial_potential,
        steps,
        converged,
        final_routing: routing,
    })
}

/// Whether the model's dynamics are guaranteed to converge.
pub fn has_potential_guarantee(model: CostModel) -> bool {
    matches!(model, CostModel::ExpSum | CostModel::LogExpSum)
}
