//! Expansion chain from the highest-cost player of an equilibrium.

use bottleneck_arena::budget::Budget;
use bottleneck_arena::chains::{build_expansion_chain, is_self_sufficient, top_cost_player, SupportMode};
use bottleneck_arena::dynamics::{run_brd, Schedule, DEFAULT_MAX_STEPS};
use bottleneck_arena::game::CostModel;
use bottleneck_arena::generators::gen_linear_counterexample;
use bottleneck_arena::optimal::min_bottleneck_routing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::from_env()?;
    let inst = gen_linear_counterexample(5, CostModel::ExpSum)?;
    let nash = run_brd(&inst, &inst.lex_first_routing()?, Schedule::RoundRobin, DEFAULT_MAX_STEPS)?.final_routing;
    let opt = min_bottleneck_routing(&inst, &budget)?.witness;
    let root = [top_cost_player(&inst, &nash)?].into_iter().collect();

    for mode in [SupportMode::Greedy, SupportMode::ExactMinimal] {
        let chain = build_expansion_chain(&inst, &nash, &opt, &root, mode, &budget)?;
        println!("{mode:?}: c_hat = {}, l* = {}", chain.c_hat, chain.l_star);
        for s in &chain.stages {
            println!("  stage {}: players {:?}, bands {:?}, support edges {:?}", s.index, s.players, s.band_range, s.support_edges);
        }
        let (ok, _) = is_self_sufficient(&inst, &nash, &opt, &chain.union())?;
        println!("  union self-sufficient: {ok}");
    }
    Ok(())
}
