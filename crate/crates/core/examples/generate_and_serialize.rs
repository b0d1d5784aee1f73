//! Generates one instance per family, writes it in the canonical format and
//! reads it back.

use bottleneck_arena::game::CostModel;
use bottleneck_arena::generators::{generate, Family, GenSpec};
use bottleneck_arena::workbench::format::{instance_digest, parse_instance, serialize_instance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let families = [
        Family::LinearCounterexample { k: 4 },
        Family::ParallelLinks { players: 5, links: 3 },
        Family::RandomGrid {
            rows: 3,
            cols: 3,
            players: 4,
            seed: 1,
        },
        Family::RandomGraph {
            nodes: 7,
            edges: 11,
            players: 4,
            seed: 1,
        },
    ];
    let dir = std::env::temp_dir();
    for (n, family) in families.into_iter().enumerate() {
        let inst = generate(&GenSpec {
            family,
            cost_model: CostModel::ExpSum,
        })?;
        let text = serialize_instance(&inst);
        let path = dir.join(format!("bottleneck-arena-example-{n}.json"));
        std::fs::write(&path, &text)?;
        let back = parse_instance(&std::fs::read_to_string(&path)?)?;
        assert_eq!(back, inst);
        println!("{family:?}\n  {} bytes, sha256 {}\n  {}", text.len(), instance_digest(&inst), path.display());
    }
    Ok(())
}
