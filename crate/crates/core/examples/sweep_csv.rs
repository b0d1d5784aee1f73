use bottleneck_arena::budget::Budget;
use bottleneck_arena::equilibria::measure_poa;
use bottleneck_arena::game::CostModel;
use bottleneck_arena::generators::gen_linear_counterexample;
use bottleneck_arena::workbench::report::{sweep_row, write_csv, SWEEP_COLUMNS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::from_env()?;
    let mut rows = Vec::new();
    for k in 3..=6 {
        for model in [CostModel::LinearSum, CostModel::PolySum(2), CostModel::ExpSum] {
            let rep = measure_poa(&gen_linear_counterexample(k, model)?, &budget)?;
            rows.push(sweep_row("counterexample", k, &model.to_string(), &rep));
        }
    }
    write_csv(std::io::stdout().lock(), &SWEEP_COLUMNS, &rows)?;
    Ok(())
}
