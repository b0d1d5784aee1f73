//! The counterexample under linear and exponential player costs.
//!
//! With linear costs every player sitting on the direct edge is an
//! equilibrium with bottleneck `k`; with exponential costs that profile is
//! unstable and the worst equilibrium is much better.

use bottleneck_arena::budget::Budget;
use bottleneck_arena::dynamics::is_nash;
use bottleneck_arena::equilibria::measure_poa;
use bottleneck_arena::game::CostModel;
use bottleneck_arena::generators::gen_linear_counterexample;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::from_env()?;
    println!("{:>2} {:>12} {:>8} {:>6} {:>6} {:>8}", "k", "model", "all-on-e", "worst", "c*", "poa");
    for k in 3..=6 {
        for model in [CostModel::LinearSum, CostModel::ExpSum] {
            let inst = gen_linear_counterexample(k, model)?;
            let all_on_e = inst.lex_first_routing()?;
            let (stable, _) = is_nash(&inst, &all_on_e)?;
            let rep = measure_poa(&inst, &budget)?;
            println!(
                "{k:>2} {:>12} {:>8} {:>6} {:>6} {:>8}",
                model.to_string(),
                if stable { "Nash" } else { "unstable" },
                rep.worst_nash_cost.map_or("-".into(), |c| c.to_string()),
                rep.c_star,
                rep.poa.map_or("-".into(), |p| p.to_string()),
            );
        }
    }
    Ok(())
}
