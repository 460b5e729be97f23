//! Seeded generators and the edge-list file format.
//!
//!     cargo run --example random_graphs

use rrobust::edge_list;
use rrobust::exhaustive::determine_robustness;
use rrobust::generators::{GenSpec, GraphModel, ModelParam};

fn main() -> rrobust::Result<()> {
    let dir = std::env::temp_dir().join("rrobust-example");
    std::fs::create_dir_all(&dir).map_err(|e| rrobust::Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    for model in GraphModel::ALL {
        let param = if model.uses_k() {
            ModelParam::K(3)
        } else {
            ModelParam::P(0.5)
        };
        let spec = GenSpec {
            model,
            n: 8,
            param,
            seed: 2024,
        };
        let g = spec.generate()?;
        let path = dir.join(format!("{model}.txt"));
        edge_list::write(&path, &g)?;
        let back = edge_list::read(&path)?;
        assert_eq!(back, g);
        println!(
            "{model:<8} param={:<4} edges={:<3} min in-degree={} r_max={}  -> {}",
            param.to_string(),
            g.edge_count(),
            g.min_in_degree()?,
            determine_robustness(&g)?.r_max,
            path.display()
        );
    }

    let text = "# a directed triangle with one chord\n3 4\n1 2\n2 3\n3 1\n1 3\n";
    let g = edge_list::parse(text)?;
    print!("\nparsed and re-rendered:\n{}", edge_list::render(&g));

    match edge_list::parse("3 1\n1 1\n") {
        Err(e) => println!("\nbad input is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
