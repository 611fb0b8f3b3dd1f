//! Graded pieces, socle and Milnor number of a weighted Jacobian ring.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::JacobianRing;

fn main() -> kuzalg::Result<()> {
    let omega = fixture_polynomial("veronese_double_cone_fermat")?;
    let jac = JacobianRing::new(&omega)?;
    let sigma = jac.socle_degree()?;
    println!("omega = {omega}");
    println!("weights {:?}, degree {}", omega.ring().weights(), jac.degree());
    println!("Hilbert function: {:?}", jac.hilbert_function(sigma));
    println!("socle degree {sigma}, Milnor number {}", jac.milnor_number()?);

    // products land back in the coset basis
    let piece = jac.piece(2);
    let a = piece.coset_monomial(0).clone();
    let square = jac.reduce_monomial(&a.mul(&a))?;
    println!("({:?})^2 has {} nonzero coordinates in degree 4", a.exponents(), square.len());
    Ok(())
}
