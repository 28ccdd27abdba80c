//! GHZ witnesses: values on the target, noise thresholds, and detection of
//! noisy GHZ states.

use stabwit::oracle;
use stabwit::states::{make_ghz, mix_with_white_noise};
use stabwit::witnesses;

pub fn main() -> stabwit::Result<()> {
    for n in 3..=6 {
        let list = [
            witnesses::ghz_two_term(n, 2)?,
            witnesses::ghz_three_term(n, 2)?,
            witnesses::ghz_projector_witness(n)?,
            witnesses::ghz_genuine_sum(n)?,
            witnesses::ghz_genuine_two_settings(n)?,
        ];
        println!("N = {n}");
        for w in &list {
            println!(
                "  {:<26} <W> = {:>8.4}  p_limit = {:.6}  ({}, {} settings)",
                w.name,
                w.expectation_on_target()?,
                oracle::noise_threshold_analytic(w)?,
                w.detection_class,
                w.claimed_settings,
            );
        }
    }

    let w = witnesses::ghz_genuine_two_settings(4)?;
    let ghz = make_ghz(4)?;
    for p in [0.1, 0.2, 0.3, 0.4] {
        let rho = mix_with_white_noise(&ghz, p)?;
        println!("p = {p}: <W> = {:+.4}, detected: {}", w.expectation(&rho)?, w.detects(&rho)?);
    }

    let m = witnesses::mermin_witness3()?;
    println!("{}: <W> = {:.4} on GHZ3", m.name, m.expectation_on_target()?);
    Ok(())
}
