//! nu_4 of Jac(y^3 + g y + h) on P(1, 1, 1, 2) against C[x, y]/(3y^2 + g).

use kuzalg::normalform::{truncate_presentation, TruncatedPresentation};
use kuzalg::{parse_polynomial, JacobianRing, WeightedRing};

fn main() -> kuzalg::Result<()> {
    let ring = WeightedRing::new(&[1, 1, 1, 2])?;
    let g = "x0^4 + x1^4 + x2^4 + x0*x1*x2^2";
    let h = "x0^6 + 2*x1^6 + 3*x2^6 - x0^2*x1^2*x2^2";
    let f = parse_polynomial(&ring, &format!("x3^3 + ({g})*x3 + {h}"))?;
    let jac = JacobianRing::new(&f)?;
    let nu = truncate_presentation(&jac, 4)?;
    println!("nu_4: generators of degrees {:?}", nu.generator_degrees());
    for r in nu.relations() {
        println!("  relation {r}");
    }
    let model = TruncatedPresentation::new(&ring, 4, vec![0, 1, 2, 3], vec![parse_polynomial(&ring, &format!("3*x3^2 + {g}"))?])?;
    let (a, b) = (nu.hilbert_function(20), model.hilbert_function(20));
    println!("nu_4 dims  {a:?}");
    println!("model dims {b:?}");
    println!("agree: {}", a == b);
    Ok(())
}
