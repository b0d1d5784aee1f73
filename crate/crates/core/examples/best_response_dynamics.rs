use bottleneck_arena::budget::Budget;
use bottleneck_arena::dynamics::{is_nash, run_brd, Schedule, DEFAULT_MAX_STEPS};
use bottleneck_arena::game::{social_cost, CostModel};
use bottleneck_arena::generators::{generate, Family, GenSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = generate(&GenSpec {
        family: Family::RandomGrid {
            rows: 4,
            cols: 4,
            players: 8,
            seed: 2024,
        },
        cost_model: CostModel::ExpSum,
    })?;
    let start = inst.random_routing(1, &Budget::from_env()?)?;

    for schedule in [Schedule::RoundRobin, Schedule::MaxGain, Schedule::RandomSeeded(9)] {
        let trace = run_brd(&inst, &start, schedule, DEFAULT_MAX_STEPS)?;
        println!("{schedule:?}: {} moves, converged = {}", trace.steps.len(), trace.converged);
        println!("  potential {} -> {}", trace.initial_potential, trace.steps.last().map_or(trace.initial_potential.clone(), |s| s.potential_after.clone()));
        for s in trace.steps.iter().take(5) {
            println!("  step {:>3}: player {} cost {} -> {}", s.step_index, s.player, s.old_cost.raw(), s.new_cost.raw());
        }
        let (nash, _) = is_nash(&inst, &trace.final_routing)?;
        println!("  final bottleneck {}, Nash = {nash}", social_cost(&inst, &trace.final_routing)?);
    }
    Ok(())
}
