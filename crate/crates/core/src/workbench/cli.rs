//! Command-line front end. Every command prints one JSON run report
//! (or CSV for `sweep`) and exits 0 on success, 1 on a domain error (with a
//! JSON error payload on stderr) and 2 on a usage error.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::chains::{build_expansion_chain, classify_stages, early_stage_check, top_cost_player, PlayerSet, SupportMode};
use crate::dynamics::{is_nash, run_brd, Schedule, DEFAULT_MAX_STEPS};
use crate::equilibria::{enumerate_nash, measure_poa};
use crate::error::{ArenaError, Result};
use crate::game::{CostModel, Instance, Routing};
use crate::generators::{generate, Family, GenSpec};
use crate::optimal::min_bottleneck_routing;

use super::format::{instance_digest, parse_cost_model, parse_instance, parse_routing, serialize_instance, FORMAT_VERSION};
use super::report::{
    brd_json, brd_rows, chain_json, classification_json, csv_string, equilibria_json, optimal_json, path_json,
    routing_json, sweep_row, BRD_COLUMNS, SWEEP_COLUMNS,
};

#[derive(Debug, Parser)]
#[command(
    name = "bottleneck-arena",
    version,
    about = "Atomic bottleneck routing games: dynamics, optimum, equilibria and expansion chains",
    after_help = "Environment: BOTTLENECK_ARENA_BUDGET overrides search caps \
                  (a bare integer, or paths=N,nodes=N,profiles=N,subsets=N)."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include elapsed wall-clock time in the report (breaks byte-identity).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance file.
    instance: PathBuf,
    /// Override the file's cost model (linear, expsum, logexpsum, bottleneck, poly:D).
    #[arg(long)]
    model: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Counterexample,
    Parallel,
    Grid,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SupportArg {
    Greedy,
    Exact,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an instance from a family and write it in the canonical format.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Counterexample size.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        players: Option<usize>,
        #[arg(long)]
        links: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "expsum")]
        model: String,
        #[command(flatten)]
        output: Output,
    },
    /// Parse and validate an instance file.
    Validate {
        #[command(flatten)]
        input: InstanceArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Run best-response dynamics.
    Brd {
        #[command(flatten)]
        input: InstanceArgs,
        /// roundrobin, maxgain or random:SEED
        #[arg(long, default_value = "roundrobin")]
        schedule: String,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        /// lexfirst or random:SEED
        #[arg(long, default_value = "lexfirst")]
        start: String,
        /// Also write the step trace as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the optimal bottleneck congestion and witness.
    Optimal {
        #[command(flatten)]
        input: InstanceArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Check whether a routing file is a Nash routing.
    Verify {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        routing: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate all pure Nash routings.
    Enumerate {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        profile_cap: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Price of anarchy and stability against the exact optimum.
    Poa {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        profile_cap: Option<u64>,
        /// Also write a one-row CSV with the sweep columns.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Build an expansion chain from a root player set.
    Chain {
        #[command(flatten)]
        input: InstanceArgs,
        /// Comma-separated player ids, or top-cost.
        #[arg(long, default_value = "top-cost")]
        root: String,
        #[arg(long, value_enum, default_value = "greedy")]
        support: SupportArg,
        /// Nash routing file (default: best-response dynamics from lexfirst).
        #[arg(long)]
        routing: Option<PathBuf>,
        /// Optimal routing file (default: canonical optimum witness).
        #[arg(long)]
        opt: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Classify the players of a Nash routing into cost stages and types.
    Classify {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        routing: Option<PathBuf>,
        #[arg(long)]
        opt: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run `poa` across a family range and emit CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Counterexample sizes, e.g. 3..8.
        #[arg(long)]
        k: Option<String>,
        /// Player counts for the parallel family, e.g. 2..6.
        #[arg(long)]
        players: Option<String>,
        #[arg(long, default_value_t = 2)]
        links: usize,
        /// Comma-separated cost models.
        #[arg(long, default_value = "linear,expsum")]
        models: String,
        #[arg(long)]
        profile_cap: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ArenaError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| ArenaError::Io(format!("{}: {e}", path.display())))
}

fn load(input: &InstanceArgs) -> Result<Instance> {
    let inst = parse_instance(&read(&input.instance)?)?;
    match &input.model {
        Some(m) => inst.with_cost_model(parse_cost_model(m, None)?),
        None => Ok(inst),
    }
}

fn parse_seeded(spec: &str, plain: &[&str]) -> Result<(String, Option<u64>)> {
    let lower = spec.trim().to_ascii_lowercase();
    if let Some(seed) = lower.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| ArenaError::InvalidParameter(format!("bad seed in `{spec}`")))?;
        return Ok(("random".into(), Some(seed)));
    }
    if plain.contains(&lower.as_str()) {
        Ok((lower, None))
    } else {
        Err(ArenaError::InvalidParameter(format!("unrecognized value `{spec}`")))
    }
}

fn parse_range(spec: &str) -> Result<Vec<usize>> {
    let bad = || ArenaError::InvalidParameter(format!("bad range `{spec}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match spec.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => spec.split(',').map(num).collect(),
    }
}

fn parse_root(spec: &str, inst: &Instance, nash: &Routing) -> Result<PlayerSet> {
    if spec.trim().eq_ignore_ascii_case("top-cost") {
        return Ok([top_cost_player(inst, nash)?].into_iter().collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| ArenaError::InvalidParameter(format!("bad player id `{s}`")))
        })
        .collect()
}

/// The Nash routing under study: from a file, or best-response dynamics
/// from the lexicographically first routing.
fn nash_routing(inst: &Instance, routing: &Option<PathBuf>) -> Result<Routing> {
    if let Some(path) = routing {
        return parse_routing(inst, &read(path)?);
    }
    let trace = run_brd(inst, &inst.lex_first_routing()?, Schedule::RoundRobin, DEFAULT_MAX_STEPS)?;
    if !trace.converged {
        return Err(ArenaError::Precondition(
            "best-response dynamics did not converge; supply --routing".into(),
        ));
    }
    Ok(trace.final_routing)
}

fn opt_routing(inst: &Instance, opt: &Option<PathBuf>, budget: &Budget) -> Result<(Routing, Option<u64>)> {
    let result = min_bottleneck_routing(inst, budget)?;
    match opt {
        Some(path) => Ok((parse_routing(inst, &read(path)?)?, result.l_star_1)),
        None => Ok((result.witness, result.l_star_1)),
    }
}

struct Outcome {
    digest: Option<String>,
    seed: Option<u64>,
    payload: Value,
}

fn budget_with(cap: Option<u64>) -> Result<Budget> {
    let mut b = Budget::from_env()?;
    if let Some(c) = cap {
        if c == 0 {
            return Err(ArenaError::InvalidParameter("profile cap must be positive".into()));
        }
        b.profile_cap = c;
    }
    Ok(b)
}

fn model_list(spec: &str) -> Result<Vec<CostModel>> {
    spec.split(',').map(|m| parse_cost_model(m, None)).collect()
}

fn execute(command: &Command) -> Result<Option<Outcome>> {
    let outcome = match command {
        Command::Generate {
            family,
            k,
            players,
            links,
            rows,
            cols,
            nodes,
            edges,
            seed,
            model,
            output,
        } => {
            let need = |v: &Option<usize>, name: &str| {
                v.ok_or_else(|| ArenaError::InvalidParameter(format!("--{name} is required for this family")))
            };
            let family = match family {
                FamilyArg::Counterexample => Family::LinearCounterexample { k: need(k, "k")? },
                FamilyArg::Parallel => Family::ParallelLinks {
                    players: need(players, "players")?,
                    links: need(links, "links")?,
                },
                FamilyArg::Grid => Family::RandomGrid {
                    rows: need(rows, "rows")?,
                    cols: need(cols, "cols")?,
                    players: need(players, "players")?,
                    seed: *seed,
                },
                FamilyArg::Random => Family::RandomGraph {
                    nodes: need(nodes, "nodes")?,
                    edges: need(edges, "edges")?,
                    players: need(players, "players")?,
                    seed: *seed,
                },
            };
            let inst = generate(&GenSpec {
                family,
                cost_model: parse_cost_model(model, None)?,
            })?;
            emit(output, &serialize_instance(&inst))?;
            return Ok(None);
        }
        Command::Validate { input, .. } => {
            let inst = load(input)?;
            let budget = Budget::from_env()?;
            let space = inst
                .strategy_sets(&budget)
                .map(|sets| sets.iter().fold(1u128, |a, s| a.saturating_mul(s.len() as u128)).to_string())
                .ok();
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: json!({
                    "valid": true,
                    "nodes": inst.graph().node_count(),
                    "edges": inst.graph().edge_count(),
                    "players": inst.player_count(),
                    "max_path_len": inst.max_path_len(),
                    "cost_model": inst.cost_model().to_string(),
                    "profile_space": space,
                }),
            }
        }
        Command::Brd {
            input,
            schedule,
            max_steps,
            start,
            csv,
            ..
        } => {
            let inst = load(input)?;
            let budget = Budget::from_env()?;
            let (sched, sched_seed) = parse_seeded(schedule, &["roundrobin", "maxgain"])?;
            let schedule = match (sched.as_str(), sched_seed) {
                ("maxgain", _) => Schedule::MaxGain,
                ("random", Some(s)) => Schedule::RandomSeeded(s),
                _ => Schedule::RoundRobin,
            };
            let (_, start_seed) = parse_seeded(start, &["lexfirst"])?;
            let start_routing = match start_seed {
                Some(s) => inst.random_routing(s, &budget)?,
                None => inst.lex_first_routing()?,
            };
            if *max_steps == 0 {
                return Err(ArenaError::InvalidParameter("--max-steps must be positive".into()));
            }
            let trace = run_brd(&inst, &start_routing, schedule, *max_steps)?;
            if let Some(path) = csv {
                write(path, &csv_string(&BRD_COLUMNS, &brd_rows(&trace))?)?;
            }
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: start_seed.or(sched_seed),
                payload: json!({
                    "schedule": format!("{schedule:?}"),
                    "start": routing_json(&start_routing),
                    "trace": brd_json(&inst, &trace),
                }),
            }
        }
        Command::Optimal { input, .. } => {
            let inst = load(input)?;
            let opt = min_bottleneck_routing(&inst, &Budget::from_env()?)?;
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: optimal_json(&opt),
            }
        }
        Command::Verify { input, routing, .. } => {
            let inst = load(input)?;
            let r = parse_routing(&inst, &read(routing)?)?;
            let (nash, improvers) = is_nash(&inst, &r)?;
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: json!({
                    "is_nash": nash,
                    "improving": improvers.iter().map(|(i, p)| json!({"player": i, "path": path_json(p)})).collect::<Vec<_>>(),
                }),
            }
        }
        Command::Enumerate { input, profile_cap, .. } => {
            let inst = load(input)?;
            let e = enumerate_nash(&inst, &budget_with(*profile_cap)?)?;
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: json!({
                    "nash_count": e.nash.len(),
                    "nash_routings": e.nash.iter().map(routing_json).collect::<Vec<_>>(),
                    "profile_space": e.profile_space.to_string(),
                    "profiles_visited": e.profiles_visited,
                    "truncated": e.truncated,
                }),
            }
        }
        Command::Poa {
            input,
            profile_cap,
            csv,
            ..
        } => {
            let inst = load(input)?;
            let rep = measure_poa(&inst, &budget_with(*profile_cap)?)?;
            if let Some(path) = csv {
                let name = input.instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let row = sweep_row(&name, inst.player_count(), &inst.cost_model().to_string(), &rep);
                write(path, &csv_string(&SWEEP_COLUMNS, &[row])?)?;
            }
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: equilibria_json(&rep),
            }
        }
        Command::Chain {
            input,
            root,
            support,
            routing,
            opt,
            ..
        } => {
            let inst = load(input)?;
            let budget = Budget::from_env()?;
            let nash = nash_routing(&inst, routing)?;
            let (opt, _) = opt_routing(&inst, opt, &budget)?;
            let root = parse_root(root, &inst, &nash)?;
            let mode = match support {
                SupportArg::Greedy => SupportMode::Greedy,
                SupportArg::Exact => SupportMode::ExactMinimal,
            };
            let chain = build_expansion_chain(&inst, &nash, &opt, &root, mode, &budget)?;
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: json!({
                    "nash": routing_json(&nash),
                    "opt": routing_json(&opt),
                    "chain": chain_json(&chain),
                }),
            }
        }
        Command::Classify { input, routing, opt, .. } => {
            let inst = load(input)?;
            let budget = Budget::from_env()?;
            let nash = nash_routing(&inst, routing)?;
            let (opt, l_star_1) = opt_routing(&inst, opt, &budget)?;
            let l_star = crate::optimal::ceil_log2_usize(opt.paths().iter().map(|p| p.len()).max().unwrap_or(0));
            let c = classify_stages(&inst, &nash, l_star)?;
            let early = early_stage_check(&inst, &nash, &opt, &c, l_star_1)?;
            Outcome {
                digest: Some(instance_digest(&inst)),
                seed: None,
                payload: json!({
                    "nash": routing_json(&nash),
                    "classification": classification_json(&c, &early),
                }),
            }
        }
        Command::Sweep {
            family,
            k,
            players,
            links,
            models,
            profile_cap,
            output,
        } => {
            let budget = budget_with(*profile_cap)?;
            let models = model_list(models)?;
            let (name, sizes) = match family {
                FamilyArg::Counterexample => (
                    "counterexample",
                    parse_range(k.as_deref().ok_or_else(|| ArenaError::InvalidParameter("--k is required".into()))?)?,
                ),
                FamilyArg::Parallel => (
                    "parallel",
                    parse_range(
                        players
                            .as_deref()
                            .ok_or_else(|| ArenaError::InvalidParameter("--players is required".into()))?,
                    )?,
                ),
                _ => {
                    return Err(ArenaError::InvalidParameter(
                        "sweep supports the counterexample and parallel families".into(),
                    ))
                }
            };
            let jobs: Vec<(usize, CostModel)> = sizes.iter().flat_map(|&k| models.iter().map(move |&m| (k, m))).collect();
            let rows: Vec<Vec<String>> = jobs
                .par_iter()
                .map(|&(size, model)| {
                    let fam = match family {
                        FamilyArg::Counterexample => Family::LinearCounterexample { k: size },
                        _ => Family::ParallelLinks {
                            players: size,
                            links: *links,
                        },
                    };
                    let inst = generate(&GenSpec { family: fam, cost_model: model })?;
                    let rep = measure_poa(&inst, &budget)?;
                    Ok(sweep_row(name, size, &model.to_string(), &rep))
                })
                .collect::<Result<_>>()?;
            emit(output, &csv_string(&SWEEP_COLUMNS, &rows)?)?;
            return Ok(None);
        }
    };
    Ok(Some(outcome))
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Generate { output, .. }
        | Command::Validate { output, .. }
        | Command::Brd { output, .. }
        | Command::Optimal { output, .. }
        | Command::Verify { output, .. }
        | Command::Enumerate { output, .. }
        | Command::Poa { output, .. }
        | Command::Chain { output, .. }
        | Command::Classify { output, .. }
        | Command::Sweep { output, .. } => output,
    }
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Assembles the canonical report document.
fn render_report(argv: &[String], outcome: Outcome, elapsed_ms: Option<u128>) -> String {
    let mut doc = json!({
        "command": argv,
        "format_version": FORMAT_VERSION,
        "instance_digest": outcome.digest,
        "payload": outcome.payload,
        "seed": outcome.seed,
    });
    if let Some(ms) = elapsed_ms {
        doc["timing"] = json!({ "elapsed_ms": ms as u64 });
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn error_payload(err: &ArenaError) -> String {
    json!({ "error": { "code": err.code(), "message": err.to_string() } }).to_string()
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let started = Instant::now();
    let output = output_of(&cli.command);
    let result = execute(&cli.command).and_then(|outcome| match outcome {
        Some(outcome) => {
            let elapsed = output.timing.then(|| started.elapsed().as_millis());
            emit(output, &render_report(&echo, outcome, elapsed))
        }
        None => Ok(()),
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", error_payload(&err));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..8").unwrap(), vec![3, 4, 5, 6, 7, 8]);
        assert_eq!(parse_range("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_range("2,5").unwrap(), vec![2, 5]);
        assert!(parse_range("8..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn seeded_flags() {
        assert_eq!(parse_seeded("random:9", &["lexfirst"]).unwrap(), ("random".into(), Some(9)));
        assert_eq!(parse_seeded("LexFirst", &["lexfirst"]).unwrap(), ("lexfirst".into(), None));
        assert!(parse_seeded("sideways", &["lexfirst"]).is_err());
        assert!(parse_seeded("random:x", &["lexfirst"]).is_err());
    }

    #[test]
    fn report_keys_sorted() {
        let text = render_report(
            &["optimal".into()],
            Outcome {
                digest: None,
                seed: Some(1),
                payload: json!({"b": 1, "a": 2}),
            },
            None,
        );
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"command\"") < pos("\"format_version\""));
        assert!(pos("\"payload\"") < pos("\"seed\""));
        assert!(pos("\"a\"") < pos("\"b\""));
        assert!(!text.contains("timing"));
    }
}
