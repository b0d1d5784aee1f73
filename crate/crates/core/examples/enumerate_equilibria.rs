use bottleneck_arena::budget::Budget;
use bottleneck_arena::equilibria::enumerate_nash;
use bottleneck_arena::game::{social_cost, CostModel};
use bottleneck_arena::generators::{generate, Family, GenSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::from_env()?;
    for model in [CostModel::BottleneckMax, CostModel::LinearSum, CostModel::PolySum(2), CostModel::ExpSum] {
        let inst = generate(&GenSpec {
            family: Family::RandomGraph {
                nodes: 6,
                edges: 10,
                players: 3,
                seed: 5,
            },
            cost_model: model,
        })?;
        let e = enumerate_nash(&inst, &budget)?;
        let costs: Vec<u64> = e.nash.iter().map(|r| social_cost(&inst, r)).collect::<Result<_, _>>()?;
        println!(
            "{:>14}: {} of {} profiles are Nash, social costs {:?}{}",
            model.to_string(),
            e.nash.len(),
            e.profile_space,
            costs.iter().min().zip(costs.iter().max()),
            if e.truncated { " (truncated)" } else { "" }
        );
    }
    Ok(())
}
