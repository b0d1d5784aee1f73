//! The routing game: players with strategy sets over a shared graph, pure
//! strategy profiles, congestion, player costs, the bottleneck social cost
//! and the exponential potential.

mod cost;

use std::borrow::Cow;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{ArenaError, Result};
use crate::graph::{all_simple_paths, first_simple_path, validate_path, EdgeId, Graph, NodeId, Path};
use crate::rng::ShiftRng;

pub use cost::{ceil_log2, log2_big, CostModel, ExactCost};

pub type PlayerId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategies {
    /// A fixed, nonempty list of paths.
    Explicit(Vec<Path>),
    /// Every node-simple path with at most `max_len` edges.
    AllPaths { max_len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    pub id: PlayerId,
    pub source: NodeId,
    pub destination: NodeId,
    pub strategies: Strategies,
}

impl Player {
    pub fn explicit(id: PlayerId, source: NodeId, destination: NodeId, paths: Vec<Path>) -> Self {
        Player {
            id,
            source,
            destination,
            strategies: Strategies::Explicit(paths),
        }
    }

    pub fn all_paths(id: PlayerId, source: NodeId, destination: NodeId, max_len: usize) -> Self {
        Player {
            id,
            source,
            destination,
            strategies: Strategies::AllPaths { max_len },
        }
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |reason: String| ArenaError::InvalidPlayer {
            player: self.id,
            reason,
        };
        if self.source >= g.node_count() || self.destination >= g.node_count() {
            return Err(bad("endpoint outside the graph".into()));
        }
        if self.source == self.destination {
            return Err(bad("source equals destination".into()));
        }
        match &self.strategies {
            Strategies::Explicit(paths) => {
                if paths.is_empty() {
                    return Err(bad("explicit strategy set is empty".into()));
                }
                for (k, p) in paths.iter().enumerate() {
                    if p.source() != self.source || p.destination() != self.destination || !validate_path(g, p) {
                        return Err(ArenaError::InvalidPath(format!(
                            "player {} strategy {k} ({:?}) is not a valid {}-{} path",
                            self.id,
                            p.edges(),
                            self.source,
                            self.destination
                        )));
                    }
                }
            }
            Strategies::AllPaths { max_len } => {
                if *max_len == 0 {
                    return Err(bad("all_paths max_len must be at least 1".into()));
                }
                if first_simple_path(g, self.source, self.destination, *max_len)?.is_none() {
                    return Err(bad(format!(
                        "no path from {} to {} within {max_len} edges",
                        self.source, self.destination
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A validated game: graph, players and the player cost model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    players: Vec<Player>,
    cost_model: CostModel,
}

impl Instance {
    pub fn new(graph: Graph, players: Vec<Player>, cost_model: CostModel) -> Result<Self> {
        if let CostModel::PolySum(0) = cost_model {
            return Err(ArenaError::InvalidInstance("poly_sum degree must be at least 1".into()));
        }
        for (idx, p) in players.iter().enumerate() {
            if p.id != idx {
                return Err(ArenaError::InvalidInstance(format!(
                    "player ids must be dense and ordered; position {idx} has id {}",
                    p.id
                )));
            }
            p.validate(&graph)?;
        }
        Ok(Instance {
            graph,
            players,
            cost_model,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn cost_model(&self) -> CostModel {
        self.cost_model
    }

    /// Same game under a different player cost.
    pub fn with_cost_model(&self, cost_model: CostModel) -> Result<Self> {
        Instance::new(self.graph.clone(), self.players.clone(), cost_model)
    }

    /// Longest path length over all strategy sets (`max_len` for implicit sets).
    pub fn max_path_len(&self) -> usize {
        self.players
            .iter()
            .map(|p| match &p.strategies {
                Strategies::Explicit(paths) => paths.iter().map(Path::len).max().unwrap_or(0),
                Strategies::AllPaths { max_len } => *max_len,
            })
            .max()
            .unwrap_or(0)
    }

    /// The finite strategy list of player `i`.
    pub fn strategy_set(&self, i: PlayerId, budget: &Budget) -> Result<Cow<'_, [Path]>> {
        let p = self.player(i)?;
        match &p.strategies {
            Strategies::Explicit(paths) => Ok(Cow::Borrowed(paths)),
            Strategies::AllPaths { max_len } => Ok(Cow::Owned(all_simple_paths(
                &self.graph,
                p.source,
                p.destination,
                *max_len,
                budget.path_cap,
            )?)),
        }
    }

    /// Materialized strategy lists for every player.
    pub fn strategy_sets(&self, budget: &Budget) -> Result<Vec<Vec<Path>>> {
        (0..self.players.len())
            .map(|i| self.strategy_set(i, budget).map(Cow::into_owned))
            .collect()
    }

    pub fn player(&self, i: PlayerId) -> Result<&Player> {
        self.players
            .get(i)
            .ok_or_else(|| ArenaError::Precondition(format!("player {i} out of range")))
    }

    /// True iff `path` is a pure strategy of player `i`.
    pub fn allows(&self, i: PlayerId, path: &Path) -> bool {
        let Some(p) = self.players.get(i) else { return false };
        if path.source() != p.source || path.destination() != p.destination {
            return false;
        }
        match &p.strategies {
            Strategies::Explicit(paths) => paths.iter().any(|q| q.edges() == path.edges()),
            Strategies::AllPaths { max_len } => {
                path.len() <= *max_len && validate_path(&self.graph, path) && path.is_node_simple(&self.graph)
            }
        }
    }

    /// Checks that `r` assigns every player one of its strategies.
    pub fn check_routing(&self, r: &Routing) -> Result<()> {
        if r.len() != self.players.len() {
            return Err(ArenaError::InvalidRouting(format!(
                "routing has {} paths for {} players",
                r.len(),
                self.players.len()
            )));
        }
        for (i, path) in r.paths().iter().enumerate() {
            if !self.allows(i, path) {
                return Err(ArenaError::InvalidRouting(format!(
                    "path {:?} is not in the strategy set of player {i}",
                    path.edges()
                )));
            }
        }
        Ok(())
    }

    /// Each player on the lexicographically first path of its strategy set.
    pub fn lex_first_routing(&self) -> Result<Routing> {
        self.players
            .iter()
            .map(|p| match &p.strategies {
                Strategies::Explicit(paths) => Ok(paths.iter().min_by(|a, b| a.edges().cmp(b.edges())).cloned().expect("nonempty")),
                Strategies::AllPaths { max_len } => first_simple_path(&self.graph, p.source, p.destination, *max_len)?
                    .ok_or(ArenaError::NoPath {
                        from: p.source,
                        to: p.destination,
                    }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Routing::new)
    }

    /// Each player on a uniformly drawn strategy.
    pub fn random_routing(&self, seed: u64, budget: &Budget) -> Result<Routing> {
        let mut rng = ShiftRng::new(seed);
        (0..self.players.len())
            .map(|i| {
                let set = self.strategy_set(i, budget)?;
                Ok(set[rng.index(set.len())].clone())
            })
            .collect::<Result<Vec<_>>>()
            .map(Routing::new)
    }
}

/// A pure strategy profile: one path per player, indexed by player id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Routing {
    choices: Vec<Path>,
}

impl Routing {
    pub fn new(choices: Vec<Path>) -> Self {
        Routing { choices }
    }

    pub fn paths(&self) -> &[Path] {
        &self.choices
    }

    pub fn path(&self, i: PlayerId) -> &Path {
        &self.choices[i]
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// `(p'_i; p_{-i})`.
    pub fn with_choice(&self, i: PlayerId, path: Path) -> Routing {
        let mut next = self.clone();
        next.choices[i] = path;
        next
    }
}

/// Edge congestion `C_e` for every edge of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionMap(Vec<u64>);

impl CongestionMap {
    pub fn zeros(edge_count: usize) -> Self {
        CongestionMap(vec![0; edge_count])
    }

    pub fn from_paths<'a>(edge_count: usize, paths: impl IntoIterator<Item = &'a Path>) -> Self {
        let mut map = CongestionMap::zeros(edge_count);
        for p in paths {
            map.add(p);
        }
        map
    }

    pub fn add(&mut self, p: &Path) {
        for &e in p.edges() {
            self.0[e] += 1;
        }
    }

    pub fn remove(&mut self, p: &Path) {
        for &e in p.edges() {
            self.0[e] -= 1;
        }
    }

    pub fn get(&self, e: EdgeId) -> u64 {
        self.0[e]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Cost of a player already counted on `path`.
    pub fn path_cost(&self, model: CostModel, path: &Path) -> ExactCost {
        model.cost_of_loads(path.edges().iter().map(|&e| self.0[e]))
    }

    /// Cost a player currently on `current` would pay after moving to `alt`.
    pub fn deviation_cost(&self, model: CostModel, current: &Path, alt: &Path) -> ExactCost {
        model.cost_of_loads(alt.edges().iter().map(|&e| self.0[e] + 1 - current.contains(e) as u64))
    }

    pub(crate) fn path_cost_u128(&self, model: CostModel, path: &Path) -> Option<u128> {
        model.cost_u128(path.edges().iter().map(|&e| self.0[e]))
    }

    pub(crate) fn deviation_cost_u128(&self, model: CostModel, current: &Path, alt: &Path) -> Option<u128> {
        model.cost_u128(alt.edges().iter().map(|&e| self.0[e] + 1 - current.contains(e) as u64))
    }

    /// `sum_e 2^{C_e}`.
    pub fn exp_potential(&self) -> BigUint {
        self.0.iter().fold(BigUint::zero(), |acc, &c| acc + (BigUint::one() << c))
    }
}

pub fn congestion(inst: &Instance, r: &Routing) -> Result<CongestionMap> {
    inst.check_routing(r)?;
    Ok(CongestionMap::from_paths(inst.graph().edge_count(), r.paths()))
}

/// Cost of player `i` under the instance cost model.
pub fn player_cost(inst: &Instance, r: &Routing, i: PlayerId) -> Result<ExactCost> {
    let map = congestion(inst, r)?;
    inst.player(i)?;
    Ok(map.path_cost(inst.cost_model(), r.path(i)))
}

/// Network congestion `C = max_e C_e`.
pub fn social_cost(inst: &Instance, r: &Routing) -> Result<u64> {
    Ok(congestion(inst, r)?.max())
}

/// The exponential potential `sum_e 2^{C_e}`.
pub fn potential(inst: &Instance, r: &Routing) -> Result<BigUint> {
    Ok(congestion(inst, r)?.exp_potential())
}
