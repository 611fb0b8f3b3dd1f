//! The table of dim Hom(Delta, Delta(t)[m]) and the Hochschild invariants
//! read off from it.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::hs::HochschildSerre;

fn main() -> kuzalg::Result<()> {
    let omega = fixture_polynomial("cubic_fourfold_fermat")?;
    let hs = HochschildSerre::new(&omega)?;
    let table = hs.table(0, 9);
    for (t, m, e) in table.stored().filter(|(_, _, e)| e.total > 0) {
        println!("(t, m) = ({t}, {m}): {} = {:?}", e.total, e.breakdown);
    }
    println!("HH_0 = {}", hs.hochschild_homology(0));
    println!("HH^2 = {}", hs.hochschild_cohomology(2));

    let check = hs.verify_hypersurface_proposition()?;
    println!("exceptional slots {:?}, closed form holds: {}", check.exceptional_slots, check.holds());
    Ok(())
}
