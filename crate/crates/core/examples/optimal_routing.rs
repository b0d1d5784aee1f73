//! Exact minimum bottleneck congestion by capped backtracking.

use bottleneck_arena::budget::Budget;
use bottleneck_arena::game::{congestion, CostModel};
use bottleneck_arena::generators::{gen_parallel_links, generate, Family, GenSpec};
use bottleneck_arena::optimal::{feasible_with_cap, min_bottleneck_routing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::from_env()?;

    let links = gen_parallel_links(7, 3, CostModel::ExpSum)?;
    for cap in 1..=3 {
        println!("7 players on 3 links, cap {cap}: feasible = {}", feasible_with_cap(&links, cap, &budget)?.is_some());
    }

    let grid = generate(&GenSpec {
        family: Family::RandomGrid {
            rows: 3,
            cols: 4,
            players: 6,
            seed: 11,
        },
        cost_model: CostModel::ExpSum,
    })?;
    let opt = min_bottleneck_routing(&grid, &budget)?;
    println!("grid: C* = {}, longest optimal path = {}, nodes explored = {}", opt.c_star, opt.longest_path, opt.nodes_explored);
    for (i, p) in opt.witness.paths().iter().enumerate() {
        println!("  player {i}: {:?}", p.edges());
    }
    println!("  loads: {:?}", congestion(&grid, &opt.witness)?.as_slice());
    Ok(())
}
