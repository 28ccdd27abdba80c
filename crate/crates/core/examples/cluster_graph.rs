//! Cluster and graph state witnesses, including a seven-vertex graph with a
//! triangle that needs three colors.

use stabwit::states::{make_graph_state, mix_with_white_noise, Graph};
use stabwit::{oracle, stabilizer, witnesses};

pub fn main() -> stabwit::Result<()> {
    for n in 3..=8 {
        let comp = witnesses::cluster_composite(n)?;
        let gen = witnesses::cluster_genuine(n)?;
        println!(
            "N = {n}: composite p_limit {:.4} with {} settings; genuine p_limit {:.4}",
            oracle::noise_threshold_analytic(&comp)?,
            comp.claimed_settings,
            oracle::noise_threshold_analytic(&gen)?,
        );
    }

    let g = Graph::triangle7();
    let colors = g.greedy_coloring();
    println!("edges {:?}, coloring {:?}", g.edges(), colors);
    for s in stabilizer::graph_generators(&g)?.generators() {
        println!("  {s}");
    }
    let w = witnesses::graph_genuine(&g, Some(&colors))?;
    println!("{}: {} settings, p_limit {:.6}", w.name, w.claimed_settings, oracle::noise_threshold_analytic(&w)?);
    let pair = witnesses::graph_pair(&g, 3, 4)?;
    let rho = mix_with_white_noise(&make_graph_state(&g)?, 0.3)?;
    println!("pair witness on 30% noise: {:+.4}", pair.expectation(&rho)?);
    Ok(())
}
