//! Separable and biseparable optimization: the bounds behind the witnesses.

use stabwit::oracle::{self, OracleConfig};
use stabwit::{stabilizer, witnesses};

pub fn main() -> stabwit::Result<()> {
    let pcfg = OracleConfig::product();
    let bcfg = OracleConfig::biseparable();
    for n in 3..=5 {
        let ops = stabilizer::ghz_generators(n)?.generator_operators();
        let r = oracle::max_over_product_states(&(ops[0].clone() + ops[n - 1].clone()), &pcfg)?;
        let proj = witnesses::ghz_projector_as_stabilizer_product(n)?;
        let b = oracle::max_over_biseparable(&proj, &bcfg)?;
        let m = oracle::max_over_biseparable(&witnesses::mermin_operator(n)?, &bcfg)?;
        println!(
            "N = {n}: product max <S1+SN> = {:.6}, biseparable max fidelity = {:.6}, biseparable max M_N = {:.6}",
            r.value, b.value, m.value
        );
    }

    let w = witnesses::ghz_genuine_sum(4)?;
    let cert = oracle::witness_dominance(&w)?.expect("dominance certificate");
    println!("{}: W - {} W~ has min eigenvalue {:.2e}", w.name, cert.alpha, cert.min_eigenvalue);

    let r = oracle::max_over_product_states(&witnesses::ghz_two_term(3, 2)?.operator.scale(-1.0), &pcfg)?;
    println!("argmax: {}", serde_json::to_string(&r.argmax)?);
    Ok(())
}
