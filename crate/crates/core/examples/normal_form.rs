//! Completing a square, then checking that the square splits off the
//! Jacobian ring.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::normalform::{complete_power, jacobian_elimination_check};

fn main() -> kuzalg::Result<()> {
    let omega = fixture_polynomial("veronese_double_cone_generic")?;
    let (normalized, cert) = complete_power(&omega, 4, 2)?;
    println!("certificate: {cert}");
    println!("normalized:  {normalized}");
    let reduced = normalized.restrict_to_zero_locus(&[4]);
    println!("same Hilbert function without x4: {}", jacobian_elimination_check(&normalized, &reduced, 4)?);
    Ok(())
}
