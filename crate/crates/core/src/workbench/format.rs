//! Canonical instance and routing files.
//!
//! Files are JSON objects with a mandatory `format_version` (currently 1).
//! Keys are emitted in sorted order with fixed formatting so the bytes, and
//! therefore the digest, are stable.
//!
//! ```json
//! {
//!   "cost_model": { "variant": "exp_sum" },
//!   "format_version": 1,
//!   "graph": { "edges": [[0, 0, 1], [1, 0, 1]], "nodes": 2 },
//!   "players": [
//!     { "dst": 1, "id": 0, "src": 0, "strategies": [[0], [1]] },
//!     { "dst": 1, "id": 1, "src": 0, "strategies": { "all_paths": 1 } }
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ArenaError, Result};
use crate::game::{CostModel, Instance, Player, Routing, Strategies};
use crate::graph::{Graph, Path};

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    cost_model: CostModelFile,
    format_version: i64,
    graph: GraphFile,
    players: Vec<PlayerFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    variant: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    edges: Vec<[usize; 3]>,
    nodes: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayerFile {
    dst: usize,
    id: usize,
    src: usize,
    strategies: StrategiesFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum StrategiesFile {
    Explicit(Vec<Vec<usize>>),
    AllPaths(AllPathsFile),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllPathsFile {
    all_paths: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoutingFile {
    choices: Vec<Vec<usize>>,
    format_version: i64,
}

/// Parses a model name: the canonical names from [`CostModel::name`] plus
/// the short forms `bottleneck`, `expsum`, `logexpsum`, `linear` and
/// `poly:D`.
pub fn parse_cost_model(name: &str, degree: Option<u32>) -> Result<CostModel> {
    let lower = name.trim().to_ascii_lowercase();
    let model = match lower.as_str() {
        "bottleneck_max" | "bottleneck" | "max" => CostModel::BottleneckMax,
        "exp_sum" | "expsum" | "exp" => CostModel::ExpSum,
        "log_exp_sum" | "logexpsum" | "logexp" => CostModel::LogExpSum,
        "linear_sum" | "linear" => CostModel::LinearSum,
        "poly_sum" | "poly" => CostModel::PolySum(
            degree.ok_or_else(|| ArenaError::InvalidParameter("poly_sum needs a degree".into()))?,
        ),
        other => match other.strip_prefix("poly:").or_else(|| other.strip_prefix("poly_sum:")) {
            Some(d) => CostModel::PolySum(
                d.parse()
                    .map_err(|_| ArenaError::InvalidParameter(format!("bad polynomial degree `{d}`")))?,
            ),
            None => return Err(ArenaError::InvalidParameter(format!("unknown cost model `{name}`"))),
        },
    };
    if model == CostModel::PolySum(0) {
        return Err(ArenaError::InvalidParameter("poly_sum degree must be at least 1".into()));
    }
    Ok(model)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Canonical text of an instance.
pub fn serialize_instance(inst: &Instance) -> String {
    let model = inst.cost_model();
    let file = InstanceFile {
        cost_model: CostModelFile {
            degree: model.degree(),
            variant: model.name().to_string(),
        },
        format_version: FORMAT_VERSION,
        graph: GraphFile {
            edges: inst.graph().edges().iter().map(|e| [e.id, e.u, e.v]).collect(),
            nodes: inst.graph().node_count(),
        },
        players: inst
            .players()
            .iter()
            .map(|p| PlayerFile {
                dst: p.destination,
                id: p.id,
                src: p.source,
                strategies: match &p.strategies {
                    Strategies::Explicit(paths) => {
                        StrategiesFile::Explicit(paths.iter().map(|q| q.edges().to_vec()).collect())
                    }
                    Strategies::AllPaths { max_len } => StrategiesFile::AllPaths(AllPathsFile { all_paths: *max_len }),
                },
            })
            .collect(),
    };
    pretty(&file)
}

/// Hex SHA-256 of the canonical instance text.
pub fn instance_digest(inst: &Instance) -> String {
    hex::encode(Sha256::digest(serialize_instance(inst).as_bytes()))
}

fn map_serde(err: serde_json::Error) -> ArenaError {
    let mut message = err.to_string();
    if let Some(at) = message.rfind(" at line ") {
        message.truncate(at);
    }
    let (line, column) = (err.line(), err.column());
    if message.contains("unknown field") {
        ArenaError::UnknownKey { line, column, message }
    } else {
        ArenaError::Parse { line, column, message }
    }
}

fn check_version(text: &str) -> Result<()> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(map_serde)?;
    let Some(obj) = value.as_object() else {
        return Err(ArenaError::Parse {
            line: 1,
            column: 1,
            message: "top level must be an object".into(),
        });
    };
    match obj.get("format_version").and_then(|v| v.as_i64()) {
        Some(FORMAT_VERSION) => Ok(()),
        Some(found) => Err(ArenaError::FormatVersion {
            found,
            expected: FORMAT_VERSION,
        }),
        None => Err(ArenaError::Parse {
            line: 1,
            column: 1,
            message: "missing integer `format_version`".into(),
        }),
    }
}

/// Parses and fully validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    check_version(text)?;
    let file: InstanceFile = serde_json::from_str(text).map_err(map_serde)?;
    let graph = Graph::new(file.graph.nodes, file.graph.edges.iter().map(|&[id, u, v]| (id, u, v)))?;
    let players = file
        .players
        .into_iter()
        .map(|p| {
            let strategies = match p.strategies {
                StrategiesFile::Explicit(list) => {
                    Strategies::Explicit(list.into_iter().map(|edges| Path::new(p.src, p.dst, edges)).collect())
                }
                StrategiesFile::AllPaths(a) => Strategies::AllPaths { max_len: a.all_paths },
            };
            Player {
                id: p.id,
                source: p.src,
                destination: p.dst,
                strategies,
            }
        })
        .collect();
    let model = parse_cost_model(&file.cost_model.variant, file.cost_model.degree)?;
    Instance::new(graph, players, model)
}

pub fn serialize_routing(r: &Routing) -> String {
    pretty(&RoutingFile {
        choices: r.paths().iter().map(|p| p.edges().to_vec()).collect(),
        format_version: FORMAT_VERSION,
    })
}

/// Parses a routing file against `inst`; endpoints come from the players.
pub fn parse_routing(inst: &Instance, text: &str) -> Result<Routing> {
    check_version(text)?;
    let file: RoutingFile = serde_json::from_str(text).map_err(map_serde)?;
    if file.choices.len() != inst.player_count() {
        return Err(ArenaError::InvalidRouting(format!(
            "routing file has {} paths for {} players",
            file.choices.len(),
            inst.player_count()
        )));
    }
    let r = Routing::new(
        file.choices
            .into_iter()
            .zip(inst.players())
            .map(|(edges, p)| Path::new(p.source, p.destination, edges))
            .collect(),
    );
    inst.check_routing(&r)?;
    Ok(r)
}
