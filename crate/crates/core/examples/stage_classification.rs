use bottleneck_arena::budget::Budget;
use bottleneck_arena::chains::{classify_stages, early_stage_check};
use bottleneck_arena::dynamics::{run_brd, Schedule, DEFAULT_MAX_STEPS};
use bottleneck_arena::game::CostModel;
use bottleneck_arena::generators::{generate, Family, GenSpec};
use bottleneck_arena::optimal::min_bottleneck_routing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = generate(&GenSpec {
        family: Family::RandomGrid {
            rows: 3,
            cols: 4,
            players: 7,
            seed: 3,
        },
        cost_model: CostModel::ExpSum,
    })?;
    let nash = run_brd(&inst, &inst.lex_first_routing()?, Schedule::RoundRobin, DEFAULT_MAX_STEPS)?.final_routing;
    let opt = min_bottleneck_routing(&inst, &Budget::from_env()?)?;

    let c = classify_stages(&inst, &nash, opt.l_star)?;
    println!("c_hat = {}, l* = {}", c.c_hat, c.l_star);
    for p in &c.players {
        println!(
            "player {}: cost {:>4}, stage {}, type {:?}, max congestion {}{}",
            p.player,
            p.cost,
            p.stage,
            p.player_type,
            p.max_congestion,
            if p.gap { ", gap" } else { "" }
        );
    }
    println!("{:?}", early_stage_check(&inst, &nash, &opt.witness, &c, opt.l_star_1)?);
    Ok(())
}
