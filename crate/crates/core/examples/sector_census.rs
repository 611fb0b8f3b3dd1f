//! Fixed loci of the diagonal mu_d action and their Jacobian rings.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::hs::HochschildSerre;

fn main() -> kuzalg::Result<()> {
    let omega = fixture_polynomial("cubic_fourfold_fermat")?;
    let hs = HochschildSerre::new(&omega)?;
    for s in hs.sectors() {
        let jac = s.jacobian();
        println!(
            "j = {}: moved {:?}, rank {}, k_g = {}, omega_g = {}, dims {:?}",
            s.j(),
            s.moved_variables(),
            s.rank(),
            s.k_g(),
            s.omega_g(),
            jac.hilbert_function(jac.socle_degree()?)
        );
    }
    Ok(())
}
