//! Entropic uncertainty criteria and their white-noise thresholds.

use stabwit::entropic::{eur_bound, eur_criterion};
use stabwit::oracle::noise_threshold_empirical;
use stabwit::witnesses::Family;
use stabwit::{HermitianOperator, PauliString};

pub fn main() -> stabwit::Result<()> {
    let x = HermitianOperator::term(PauliString::must("X"));
    let y = HermitianOperator::term(PauliString::must("Y"));
    println!("bound for X, Y: {:.6} (ln 2 = {:.6})", eur_bound(&x, &y)?, std::f64::consts::LN_2);

    for fam in [Family::Ghz, Family::Cluster] {
        for n in 3..=5 {
            let target = fam.state(n)?.to_density();
            let p = noise_threshold_empirical(|rho| Ok(eur_criterion(rho, fam, n)?.detected), &target)?;
            println!("{fam:?} N = {n}: entropic criterion tolerates p < {p:.4}");
        }
    }
    Ok(())
}
