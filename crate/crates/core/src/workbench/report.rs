//! JSON payloads for run reports and the CSV emitters.
//!
//! Big integers are written as decimal strings. Reports never contain
//! wall-clock data unless timing is explicitly requested, so repeated runs
//! produce identical bytes.

use std::io::Write;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::chains::{ChainReport, EarlyStageCheck, PlayerType, StageClassification};
use crate::dynamics::BrdTrace;
use crate::equilibria::EquilibriaReport;
use crate::error::{ArenaError, Result};
use crate::game::{CongestionMap, ExactCost, Instance, Routing};
use crate::graph::Path;
use crate::optimal::OptimalResult;

pub fn path_json(p: &Path) -> Value {
    json!(p.edges())
}

pub fn routing_json(r: &Routing) -> Value {
    Value::Array(r.paths().iter().map(path_json).collect())
}

pub fn cost_json(c: &ExactCost) -> Value {
    json!({ "value": c.raw().to_string(), "reported": c.reported() })
}

fn ratio_json(r: &Option<Ratio<u64>>) -> Value {
    match r {
        Some(r) => json!({ "exact": format!("{}/{}", r.numer(), r.denom()), "value": r.to_f64() }),
        None => Value::Null,
    }
}

pub fn brd_json(inst: &Instance, trace: &BrdTrace) -> Value {
    let map = CongestionMap::from_paths(inst.graph().edge_count(), trace.final_routing.paths());
    json!({
        "converged": trace.converged,
        "step_count": trace.steps.len(),
        "initial_potential": trace.initial_potential.to_string(),
        "final_potential": map.exp_potential().to_string(),
        "final_social_cost": map.max(),
        "final_routing": routing_json(&trace.final_routing),
        "steps": trace.steps.iter().map(|s| json!({
            "step": s.step_index,
            "player": s.player,
            "old_path": path_json(&s.old_path),
            "new_path": path_json(&s.new_path),
            "old_cost": cost_json(&s.old_cost),
            "new_cost": cost_json(&s.new_cost),
            "potential_after": s.potential_after.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn optimal_json(opt: &OptimalResult) -> Value {
    json!({
        "c_star": opt.c_star,
        "witness": routing_json(&opt.witness),
        "longest_path": opt.longest_path,
        "l_star": opt.l_star,
        "l_star_1": opt.l_star_1,
        "nodes_explored": opt.nodes_explored,
    })
}

pub fn equilibria_json(rep: &EquilibriaReport) -> Value {
    json!({
        "nash_count": rep.nash_routings.len(),
        "nash_routings": rep.nash_routings.iter().map(routing_json).collect::<Vec<_>>(),
        "worst_nash_cost": rep.worst_nash_cost,
        "best_nash_cost": rep.best_nash_cost,
        "c_star": rep.c_star,
        "poa": ratio_json(&rep.poa),
        "pos": ratio_json(&rep.pos),
        "truncated": rep.truncated,
        "profiles_visited": rep.profiles_visited,
        "max_path_len": rep.max_path_len,
        "edge_count": rep.edge_count,
        "bound_value": rep.bound_value,
        "bound_ratio": rep.bound_ratio,
        "optimal": optimal_json(&rep.optimal),
    })
}

fn type_name(t: Option<PlayerType>) -> Value {
    match t {
        Some(PlayerType::A) => json!("A"),
        Some(PlayerType::B) => json!("B"),
        Some(PlayerType::D) => json!("D"),
        None => Value::Null,
    }
}

pub fn chain_json(chain: &ChainReport) -> Value {
    json!({
        "root": chain.root,
        "mode": format!("{:?}", chain.mode).to_lowercase(),
        "c_hat": chain.c_hat,
        "l_star": chain.l_star,
        "self_sufficient_at": chain.self_sufficient_at,
        "stages": chain.stages.iter().map(|s| json!({
            "index": s.index,
            "players": s.players,
            "cost_range": [s.cost_range.0.to_string(), s.cost_range.1.to_string()],
            "band_range": [s.band_range.0, s.band_range.1],
            "support_edges": s.support_edges,
        })).collect::<Vec<_>>(),
    })
}

pub fn classification_json(c: &StageClassification, early: &EarlyStageCheck) -> Value {
    let early = match early {
        EarlyStageCheck::NotExercised { c_hat, l_star_1 } => {
            json!({ "status": "not_exercised", "c_hat": c_hat, "l_star_1": l_star_1 })
        }
        EarlyStageCheck::Checked { stages, self_sufficient } => {
            json!({ "status": "checked", "stages": stages, "self_sufficient": self_sufficient })
        }
    };
    json!({
        "c_hat": c.c_hat,
        "l_star": c.l_star,
        "players": c.players.iter().map(|p| json!({
            "player": p.player,
            "cost": p.cost.to_string(),
            "stage": p.stage,
            "type": type_name(p.player_type),
            "gap": p.gap,
            "max_congestion": p.max_congestion,
        })).collect::<Vec<_>>(),
        "early_stage_check": early,
    })
}

pub const SWEEP_COLUMNS: [&str; 13] = [
    "family",
    "k",
    "model",
    "L",
    "E",
    "c_star",
    "worst_nash",
    "best_nash",
    "poa",
    "pos",
    "bound_value",
    "bound_ratio",
    "truncated",
];

fn opt_num<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row in [`SWEEP_COLUMNS`] order.
pub fn sweep_row(family: &str, k: usize, model: &str, rep: &EquilibriaReport) -> Vec<String> {
    vec![
        family.to_string(),
        k.to_string(),
        model.to_string(),
        rep.max_path_len.to_string(),
        rep.edge_count.to_string(),
        rep.c_star.to_string(),
        opt_num(rep.worst_nash_cost),
        opt_num(rep.best_nash_cost),
        opt_num(rep.poa.and_then(|r| r.to_f64())),
        opt_num(rep.pos.and_then(|r| r.to_f64())),
        rep.bound_value.to_string(),
        opt_num(rep.bound_ratio),
        rep.truncated.to_string(),
    ]
}

pub const BRD_COLUMNS: [&str; 5] = ["step", "player", "old_cost", "new_cost", "potential_after"];

pub fn brd_rows(trace: &BrdTrace) -> Vec<Vec<String>> {
    trace
        .steps
        .iter()
        .map(|s| {
            vec![
                s.step_index.to_string(),
                s.player.to_string(),
                s.old_cost.raw().to_string(),
                s.new_cost.raw().to_string(),
                s.potential_after.to_string(),
            ]
        })
        .collect()
}

/// Writes a header and rows as CSV.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| ArenaError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| ArenaError::Io(e.to_string()))
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}
