//! The three-qubit W state: preparation unitary, stabilizing operators and
//! its three witnesses.

use stabwit::linalg;
use stabwit::states::{make_w3, zero_state};
use stabwit::{oracle, stabilizer, witnesses};

pub fn main() -> stabwit::Result<()> {
    let u = stabilizer::w3_preparation_unitary();
    let w3 = make_w3();
    let prepared = &u * zero_state(3)?.amplitudes();
    println!("|U|000> - |W3>| = {:.2e}", (prepared - w3.amplitudes()).norm());
    println!("stabilized: {}", stabilizer::verify_stabilizes(&stabilizer::w3_stabilizing_ops(), &w3)?);

    for w in [witnesses::w3_projector()?, witnesses::w3_witness()?, witnesses::w3_two_setting()?] {
        println!(
            "{:<16} <W> = {:+.6}  p_limit = {:.6}  settings {}",
            w.name,
            w.expectation_on_target()?,
            oracle::noise_threshold_analytic(&w)?,
            w.claimed_settings,
        );
    }

    let w = witnesses::w3_two_setting()?;
    println!("global minimum {:.6} (sqrt5 - 3 = {:.6})", oracle::global_minimum(&w.operator)?, 5f64.sqrt() - 3.0);
    println!("biseparable minimum {:.2e}", oracle::min_over_biseparable_w3(&w.operator)?);
    let f = oracle::w3_reduced_operator(0.3, -0.2)?;
    let dense = linalg::hermitian_eigen(&f.to_dense()?).0[0];
    println!("F(0.3, -0.2): eigensolver {dense:.6}, closed form {:.6}", oracle::w3_reduced_min_eigenvalue(0.3, -0.2));
    Ok(())
}
