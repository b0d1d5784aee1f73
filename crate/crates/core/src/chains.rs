//! Self-sufficient player sets, support sets, expansion chains and the
//! cost-band stage/type classification of a Nash routing.
//!
//! For a player set `S` and member `i`, `q_i` is the routing that keeps only
//! the players of `S` on their Nash paths and moves `i` onto its optimal
//! path. The deviating player counts itself in the congestion of that path.
//! Because every cost model is monotone in congestion, adding players to the
//! background can only raise `pc_i(q_i)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::dynamics::is_nash;
use crate::error::{ArenaError, Result};
use crate::game::{ceil_log2, CongestionMap, CostModel, ExactCost, Instance, PlayerId, Routing};
use crate::graph::EdgeId;
use crate::optimal::ceil_log2_usize;

pub type PlayerSet = BTreeSet<PlayerId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportMode {
    /// Smallest support set by subset enumeration, bounded by the budget.
    ExactMinimal,
    /// Add the player covering the most violated optimal-path edges until done.
    #[default]
    Greedy,
}

/// Checked inputs shared by the set-level routines.
struct Analysis<'a> {
    inst: &'a Instance,
    nash: &'a Routing,
    opt: &'a Routing,
    nash_costs: Vec<ExactCost>,
}

impl<'a> Analysis<'a> {
    fn new(inst: &'a Instance, nash: &'a Routing, opt: &'a Routing) -> Result<Self> {
        inst.check_routing(opt)?;
        let (ok, _) = is_nash(inst, nash)?;
        if !ok {
            return Err(ArenaError::Precondition(
                "routing is not a Nash routing under the instance cost model".into(),
            ));
        }
        let map = CongestionMap::from_paths(inst.graph().edge_count(), nash.paths());
        let model = inst.cost_model();
        let nash_costs = nash.paths().iter().map(|p| map.path_cost(model, p)).collect();
        Ok(Analysis {
            inst,
            nash,
            opt,
            nash_costs,
        })
    }

    fn check_set(&self, s: &PlayerSet) -> Result<()> {
        if s.is_empty() {
            return Err(ArenaError::Precondition("player set is empty".into()));
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= self.inst.player_count()) {
            return Err(ArenaError::Precondition(format!("player {bad} out of range")));
        }
        Ok(())
    }

    /// `pc_i(q_i)` with `background` on their Nash paths.
    fn deviation_cost(&self, background: &PlayerSet, i: PlayerId) -> ExactCost {
        let mut map = CongestionMap::zeros(self.inst.graph().edge_count());
        for &j in background {
            if j != i {
                map.add(self.nash.path(j));
            }
        }
        let opt_path = self.opt.path(i);
        map.add(opt_path);
        map.path_cost(self.inst.cost_model(), opt_path)
    }

    /// Members of `targets` for which `pc_i(q_i) < pc_i(p)` with only
    /// `background` present.
    fn violators(&self, background: &PlayerSet, targets: &PlayerSet) -> Vec<PlayerId> {
        let targets: Vec<PlayerId> = targets.iter().copied().collect();
        targets
            .par_iter()
            .filter(|&&i| self.deviation_cost(background, i) < self.nash_costs[i])
            .copied()
            .collect()
    }

    fn support_for(&self, s: &PlayerSet, mode: SupportMode, budget: &Budget) -> Result<PlayerSet> {
        let violators = self.violators(s, s);
        if violators.is_empty() {
            return Err(ArenaError::Precondition("player set is already self-sufficient".into()));
        }
        let expansion: BTreeSet<EdgeId> = violators
            .iter()
            .flat_map(|&i| self.opt.path(i).edges().iter().copied())
            .collect();
        // Only players touching a violated optimal path can raise its cost.
        let candidates: Vec<PlayerId> = (0..self.inst.player_count())
            .filter(|j| !s.contains(j))
            .filter(|&j| self.nash.path(j).edges().iter().any(|e| expansion.contains(e)))
            .collect();
        let everyone: PlayerSet = s.iter().copied().chain(candidates.iter().copied()).collect();
        if !self.violators(&everyone, s).is_empty() {
            return Err(ArenaError::NoSupportSet(format!(
                "even all {} relevant outside players leave {:?} unsupported; the routing is not a consistent Nash routing",
                candidates.len(),
                self.violators(&everyone, s)
            )));
        }
        match mode {
            SupportMode::Greedy => Ok(self.greedy_support(s, violators, &candidates)),
            SupportMode::ExactMinimal => self.exact_support(s, &candidates, budget),
        }
    }

    fn greedy_support(&self, s: &PlayerSet, mut violators: Vec<PlayerId>, candidates: &[PlayerId]) -> PlayerSet {
        let mut members = s.clone();
        let mut support = PlayerSet::new();
        while !violators.is_empty() {
            let score = |j: PlayerId| -> usize {
                let p = self.nash.path(j);
                violators
                    .iter()
                    .map(|&i| self.opt.path(i).edges().iter().filter(|&&e| p.contains(e)).count())
                    .sum()
            };
            let pick = candidates
                .iter()
                .copied()
                .filter(|j| !support.contains(j))
                .map(|j| (score(j), j))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .filter(|(sc, _)| *sc > 0)
                .map(|(_, j)| j)
                .expect("full candidate set was verified sufficient");
            support.insert(pick);
            members.insert(pick);
            violators = self.violators(&members, s);
        }
        support
    }

    fn exact_support(&self, s: &PlayerSet, candidates: &[PlayerId], budget: &Budget) -> Result<PlayerSet> {
        let mut examined = 0u64;
        for size in 1..=candidates.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                examined += 1;
                if examined > budget.support_subsets {
                    return Err(ArenaError::SearchBudgetExceeded {
                        budget: budget.support_subsets,
                    });
                }
                let support: PlayerSet = idx.iter().map(|&k| candidates[k]).collect();
                let members: PlayerSet = s.union(&support).copied().collect();
                if self.violators(&members, s).is_empty() {
                    return Ok(support);
                }
                // next combination in lexicographic order
                let mut pos = size;
                while pos > 0 && idx[pos - 1] == candidates.len() - size + pos - 1 {
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                for t in pos..size {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
        unreachable!("full candidate set was verified sufficient")
    }
}

/// Whether `s` is self-sufficient in `nash` relative to `opt`, with the
/// members that would prefer their optimal path.
pub fn is_self_sufficient(inst: &Instance, nash: &Routing, opt: &Routing, s: &PlayerSet) -> Result<(bool, Vec<PlayerId>)> {
    let a = Analysis::new(inst, nash, opt)?;
    a.check_set(s)?;
    let violators = a.violators(s, s);
    Ok((violators.is_empty(), violators))
}

/// A set of outside players whose Nash paths deter every member of `s`.
pub fn find_support_set(
    inst: &Instance,
    nash: &Routing,
    opt: &Routing,
    s: &PlayerSet,
    mode: SupportMode,
    budget: &Budget,
) -> Result<PlayerSet> {
    let a = Analysis::new(inst, nash, opt)?;
    a.check_set(s)?;
    a.support_for(s, mode, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStage {
    /// 1-based position in the chain.
    pub index: usize,
    pub players: PlayerSet,
    /// Smallest and largest exponential cost among the stage's players.
    pub cost_range: (BigUint, BigUint),
    /// Smallest and largest cost-band index among the stage's players.
    pub band_range: (usize, usize),
    /// Edges of the stage's Nash paths lying on optimal paths they deter.
    pub support_edges: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub root: PlayerSet,
    pub stages: Vec<ChainStage>,
    pub self_sufficient_at: usize,
    pub c_hat: u64,
    pub l_star: u64,
    pub mode: SupportMode,
}

impl ChainReport {
    pub fn union(&self) -> PlayerSet {
        self.stages.iter().flat_map(|s| s.players.iter().copied()).collect()
    }
}

/// Grows `root` by support sets until the union is self-sufficient. Stage
/// `t + 1` is the support set found for the union of stages `1..=t`.
pub fn build_expansion_chain(
    inst: &Instance,
    nash: &Routing,
    opt: &Routing,
    root: &PlayerSet,
    mode: SupportMode,
    budget: &Budget,
) -> Result<ChainReport> {
    let a = Analysis::new(inst, nash, opt)?;
    a.check_set(root)?;
    let costs = exp_costs(inst, nash);
    let c_hat = costs.iter().map(ceil_log2).max().unwrap_or(0);
    let l_star = ceil_log2_usize(opt.paths().iter().map(|p| p.len()).max().unwrap_or(0));

    let mut stages = vec![make_stage(1, root.clone(), BTreeSet::new(), &costs, c_hat)];
    let mut union = root.clone();
    loop {
        let violators = a.violators(&union, &union);
        if violators.is_empty() {
            break;
        }
        let support = a.support_for(&union, mode, budget)?;
        let expansion: BTreeSet<EdgeId> = violators
            .iter()
            .flat_map(|&i| opt.path(i).edges().iter().copied())
            .collect();
        let used: BTreeSet<EdgeId> = support
            .iter()
            .flat_map(|&j| nash.path(j).edges().iter().copied())
            .filter(|e| expansion.contains(e))
            .collect();
        union.extend(support.iter().copied());
        stages.push(make_stage(stages.len() + 1, support, used, &costs, c_hat));
    }
    Ok(ChainReport {
        root: root.clone(),
        self_sufficient_at: stages.len(),
        stages,
        c_hat,
        l_star,
        mode,
    })
}

fn make_stage(index: usize, players: PlayerSet, support_edges: BTreeSet<EdgeId>, costs: &[BigUint], c_hat: u64) -> ChainStage {
    let cs: Vec<&BigUint> = players.iter().map(|&i| &costs[i]).collect();
    let bands: Vec<usize> = cs.iter().map(|c| band_of(c, c_hat).0).collect();
    ChainStage {
        index,
        cost_range: (
            cs.iter().copied().min().cloned().unwrap_or_default(),
            cs.iter().copied().max().cloned().unwrap_or_default(),
        ),
        band_range: (
            bands.iter().copied().min().unwrap_or(0),
            bands.iter().copied().max().unwrap_or(0),
        ),
        players,
        support_edges,
    }
}

/// Exponential costs `sum_{e in p_i} 2^{C_e}` of every player.
fn exp_costs(inst: &Instance, r: &Routing) -> Vec<BigUint> {
    let map = CongestionMap::from_paths(inst.graph().edge_count(), r.paths());
    r.paths()
        .iter()
        .map(|p| map.path_cost(CostModel::ExpSum, p).raw().clone())
        .collect()
}

/// The highest-cost player under the instance cost model (lowest id on ties).
pub fn top_cost_player(inst: &Instance, r: &Routing) -> Result<PlayerId> {
    let map = crate::game::congestion(inst, r)?;
    let model = inst.cost_model();
    (0..inst.player_count())
        .map(|i| (map.path_cost(model, r.path(i)), i))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, i)| i)
        .ok_or_else(|| ArenaError::Precondition("instance has no players".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlayerType {
    A,
    B,
    D,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerStage {
    pub player: PlayerId,
    pub cost: BigUint,
    /// Stage index in `1..=c_hat`, or 0 when the cost is below every band.
    pub stage: usize,
    pub player_type: Option<PlayerType>,
    /// Cost equals `2^{c_hat - stage} + 1`, just under the band's lower end.
    pub gap: bool,
    pub max_congestion: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageClassification {
    pub c_hat: u64,
    pub l_star: u64,
    pub players: Vec<PlayerStage>,
}

impl StageClassification {
    /// Players in stage `i` (1-based).
    pub fn stage(&self, i: usize) -> impl Iterator<Item = &PlayerStage> {
        self.players.iter().filter(move |p| p.stage == i)
    }

    pub fn of_type(&self, i: usize, t: PlayerType) -> PlayerSet {
        self.stage(i).filter(|p| p.player_type == Some(t)).map(|p| p.player).collect()
    }

    pub fn untyped(&self) -> PlayerSet {
        self.players.iter().filter(|p| p.stage == 0).map(|p| p.player).collect()
    }

    pub fn gap_players(&self) -> PlayerSet {
        self.players.iter().filter(|p| p.gap).map(|p| p.player).collect()
    }
}

/// Stage of a cost relative to `c_hat`: the `i` with
/// `2^{c_hat - i} < cost <= 2^{c_hat - i + 1}`, and whether the cost sits at
/// `2^{c_hat - i} + 1`, below the band's lower end `2^{c_hat - i} + 2`.
fn band_of(cost: &BigUint, c_hat: u64) -> (usize, bool) {
    let level = ceil_log2(cost);
    if level == 0 || level > c_hat {
        return (0, false);
    }
    let stage = (c_hat - level + 1) as usize;
    let gap = *cost == (BigUint::one() << (level - 1)) + 1u32;
    (stage, gap)
}

/// Assigns every player of `nash` its cost stage and A/B/D type.
pub fn classify_stages(inst: &Instance, nash: &Routing, l_star: u64) -> Result<StageClassification> {
    if !matches!(inst.cost_model(), CostModel::ExpSum | CostModel::LogExpSum) {
        return Err(ArenaError::Precondition(format!(
            "stage classification needs exponential player costs, not {}",
            inst.cost_model()
        )));
    }
    let map = crate::game::congestion(inst, nash)?;
    let costs = exp_costs(inst, nash);
    let c_hat = costs.iter().map(ceil_log2).max().unwrap_or(0);
    let players = costs
        .into_iter()
        .enumerate()
        .map(|(i, cost)| {
            let path = nash.path(i);
            let loads: Vec<u64> = path.edges().iter().map(|&e| map.get(e)).collect();
            let max_congestion = loads.iter().copied().max().unwrap_or(0);
            let (stage, gap) = band_of(&cost, c_hat);
            let player_type = (stage > 0).then(|| {
                let level = c_hat as i64 - stage as i64 + 1;
                let top = level - 1;
                let floor = top - l_star as i64 - 1;
                let at_level = loads.iter().filter(|&&c| c as i64 == level).count();
                let mx = max_congestion as i64;
                if at_level == 1 {
                    PlayerType::A
                } else if top >= mx && mx > floor {
                    PlayerType::B
                } else {
                    PlayerType::D
                }
            });
            PlayerStage {
                player: i,
                cost,
                stage,
                player_type,
                gap,
                max_congestion,
            }
        })
        .collect();
    Ok(StageClassification {
        c_hat,
        l_star,
        players,
    })
}

/// Outcome of the early-stage non-self-sufficiency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EarlyStageCheck {
    /// `c_hat - l*_1 - 11 < 1`, or `L* < 2`: no stage qualifies.
    NotExercised { c_hat: u64, l_star_1: Option<u64> },
    /// Stage sets checked and the ones found self-sufficient.
    Checked { stages: Vec<usize>, self_sufficient: Vec<usize> },
}

/// Tests that each nonempty stage `i <= c_hat - l*_1 - 11` is not
/// self-sufficient on its own.
pub fn early_stage_check(
    inst: &Instance,
    nash: &Routing,
    opt: &Routing,
    classification: &StageClassification,
    l_star_1: Option<u64>,
) -> Result<EarlyStageCheck> {
    let not_exercised = EarlyStageCheck::NotExercised {
        c_hat: classification.c_hat,
        l_star_1,
    };
    let Some(l1) = l_star_1 else { return Ok(not_exercised) };
    let limit = classification.c_hat as i64 - l1 as i64 - 11;
    if limit < 1 {
        return Ok(not_exercised);
    }
    let a = Analysis::new(inst, nash, opt)?;
    let mut stages = Vec::new();
    let mut self_sufficient = Vec::new();
    for i in 1..=limit as usize {
        let set: PlayerSet = classification.stage(i).map(|p| p.player).collect();
        if set.is_empty() {
            continue;
        }
        stages.push(i);
        if a.violators(&set, &set).is_empty() {
            self_sufficient.push(i);
        }
    }
    if stages.is_empty() {
        return Ok(not_exercised);
    }
    Ok(EarlyStageCheck::Checked {
        stages,
        self_sufficient,
    })
}
