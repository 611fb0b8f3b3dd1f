//! Writing Delta(t) as a power of the Serre functor up to shift.

use kuzalg::hs::serre_twist;

fn main() -> kuzalg::Result<()> {
    let (weights, d) = ([1u32, 1, 1, 2, 3], 6);
    for t in -4..=8 {
        match serre_twist(&weights, d, t) {
            Ok(s) => println!("Delta({t}) = S^{} [{}]  (j = {})", s.k, s.l, s.j),
            Err(e) => println!("Delta({t}): {e}"),
        }
    }
    Ok(())
}
