//! Recovery-condition reports on a passing and a failing fixture, plus the
//! arithmetic criteria for the two families.

use kuzalg::fixtures::fixture_polynomial;
use kuzalg::hs::{check_recovery_conditions, KSheetedCriterion, VeroneseCriterion};

fn main() -> kuzalg::Result<()> {
    for name in ["veronese_double_cone_fermat", "k_sheeted_3_3_2", "cubic_fourfold_fermat", "sextic_p11122"] {
        let report = check_recovery_conditions(&fixture_polynomial(name)?)?;
        match report.failing_clause() {
            None => println!("{name}: passes (t0 = {})", report.t0),
            Some(c) => println!("{name}: fails: {c}"),
        }
    }
    let v = VeroneseCriterion::new(2, 1, 3)?;
    println!("Veronese (2, 1, 3): m = {}, recovers IVHS {}", v.m, v.recovers_ivhs);
    let k = KSheetedCriterion::new(3, 3, 2)?;
    println!("k-sheeted (3, 3, 2): n0 = {}, bound {}, holds {}", k.n0, k.bound, k.holds);
    Ok(())
}
