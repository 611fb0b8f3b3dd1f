//! Hodge numbers, the IVHS fingerprint, and comparing two hypersurfaces.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::ivhs::{compare, compute_ivhs, fingerprint};

fn main() -> kuzalg::Result<()> {
    let fermat = fixture_polynomial("quintic_threefold_fermat")?;
    let data = compute_ivhs(&fermat)?;
    println!("primitive Hodge numbers {:?}", data.hodge_numbers());
    let fp = fingerprint(&data, 0);
    for d in &fp.deltas {
        println!("delta[{}] flattened rank {}, surjective {}", d.t, d.flattened_rank, d.surjective);
    }

    let dwork = fixture_polynomial("quintic_threefold_dwork")?;
    let report = compare(&fermat, &dwork, 0)?;
    println!("Fermat vs Dwork: {}", report.verdict);
    Ok(())
}
