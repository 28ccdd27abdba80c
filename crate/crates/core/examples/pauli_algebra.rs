//! Pauli strings with exact phases, operators as Pauli sums, and their
//! dense forms.

use stabwit::{HermitianOperator, PauliString};

pub fn main() -> stabwit::Result<()> {
    let a = PauliString::must("XYZ");
    let b = PauliString::must("ZZI");
    println!("{a} * {b} = {}", a * b);
    println!("commute: {}, locally: {}", a.commutes(&b), a.commutes_locally(&b));

    let x = PauliString::must("X");
    let y = PauliString::must("Y");
    println!("X Y = {}, Y X = {}", x * y, y * x);

    let op = HermitianOperator::from_terms(2, [("II", 1.0), ("XX", -0.5), ("ZZ", -0.5)])?;
    println!("W = {op}");
    let sq = op.try_mul(&op)?;
    println!("W^2 = {sq}");
    let back = HermitianOperator::from_dense(&op.to_dense()?)?;
    println!("dense round trip: {back}");
    Ok(())
}
