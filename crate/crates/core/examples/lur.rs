//! Local uncertainty relations: a state the linear witness misses but the
//! variance correction catches.

use stabwit::nonlinear;
use stabwit::states::{make_ghz, DensityMatrix, PureState};
use stabwit::witnesses;

pub fn main() -> stabwit::Result<()> {
    let ghz = make_ghz(3)?.to_density();
    let flip = PureState::basis(3, 0b100)?.to_density();
    let rho = DensityMatrix::mixture(&[(0.6, &ghz), (0.4, &flip)])?;

    let linear = witnesses::ghz_two_term(3, 2)?.expectation(&rho)?;
    let lur = nonlinear::lur_ghz(&rho, 3, 1)?;
    println!("linear witness {linear:+.4}");
    println!("{}", serde_json::to_string_pretty(&lur)?);

    for k in 1..4 {
        let r = nonlinear::lur_cluster(&stabwit::states::make_cluster(4)?.to_density(), 4, k)?;
        println!("cluster LUR cut {k}: total {:+.4}", r.total);
    }
    Ok(())
}
