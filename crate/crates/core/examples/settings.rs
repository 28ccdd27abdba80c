//! Grouping witness terms into local measurement settings.

use stabwit::stabilizer::{self, partition_into_settings};
use stabwit::witnesses;

pub fn main() -> stabwit::Result<()> {
    let list = [
        witnesses::ghz_two_term(4, 2)?,
        witnesses::ghz_three_term(4, 2)?,
        witnesses::ghz_genuine_two_settings(4)?,
        witnesses::cluster_genuine(5)?,
        witnesses::w3_witness()?,
        witnesses::w3_projector()?,
    ];
    for w in &list {
        let part = partition_into_settings(&w.operator);
        println!("{} ({} settings):", w.name, part.count());
        for (s, terms) in part.settings.iter().zip(&part.terms) {
            let names: Vec<String> = terms.iter().map(|(k, _)| k.to_string()).collect();
            println!("  {s}: {}", names.join(" "));
        }
    }

    let g = stabilizer::cluster_generators(6)?;
    let (size, subset) = stabilizer::max_one_setting_subgroup(&g);
    println!("largest one-setting subgroup of the 6-qubit cluster group: {size} elements, generators {subset:?}");
    Ok(())
}
