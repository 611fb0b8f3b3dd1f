//! The elements `g = exp(2 pi i j / d)` of `mu_d` acting diagonally with
//! weights `a_i`, and the fixed-locus data each one contributes.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobian::JacobianRing;
use crate::wpoly::WPolynomial;

#[derive(Debug)]
pub struct Sector {
    j: i64,
    moved: Vec<usize>,
    k_g: i64,
    jac: Arc<JacobianRing>,
}

impl Sector {
    /// Index `j` of `g = exp(2 pi i j / d)`.
    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn is_identity(&self) -> bool {
        self.j == 0
    }

    /// `I_g`: the variables with `j a_i != 0 mod d`, ascending.
    pub fn moved_variables(&self) -> &[usize] {
        &self.moved
    }

    /// `rk W_g = |I_g|`.
    pub fn rank(&self) -> usize {
        self.moved.len()
    }

    /// `k_g = -sum_{i in I_g} a_i`.
    pub fn k_g(&self) -> i64 {
        self.k_g
    }

    /// Restriction of `omega` to the fixed locus `{x_i = 0, i in I_g}`.
    pub fn omega_g(&self) -> &WPolynomial {
        self.jac.omega()
    }

    pub fn jacobian(&self) -> &JacobianRing {
        &self.jac
    }

    /// Graded degree of `Jac(omega_g)` feeding the `(t, m)` slot, or `None`
    /// when the parity of `m` does not match the rank.
    pub fn degree_for(&self, t: i64, m: i64) -> Option<i64> {
        let rk = self.rank() as i64;
        if (m - rk).rem_euclid(2) != 0 {
            return None;
        }
        Some(t - self.k_g + self.jac.degree() * (m - rk) / 2)
    }

    /// `dim Jac(omega_g)` in degree `t - k_g + d (m - rk)/2`, or 0 on parity mismatch.
    pub fn contribution(&self, t: i64, m: i64) -> usize {
        self.degree_for(t, m)
            .map(|e| self.jac.dimension(e))
            .unwrap_or(0)
    }
}

pub fn sector_contribution(s: &Sector, t: i64, m: i64) -> usize {
    s.contribution(t, m)
}

/// Fixed-locus data for `j` in `[0, d)`, without building any Jacobian ring.
pub fn sector_shape(weights: &[u32], d: i64, j: i64) -> (Vec<usize>, i64) {
    let moved: Vec<usize> = (0..weights.len())
        .filter(|&i| (j * weights[i] as i64).rem_euclid(d) != 0)
        .collect();
    let k_g = -moved.iter().map(|&i| weights[i] as i64).sum::<i64>();
    (moved, k_g)
}

/// One sector per `j` in `[0, d)`. The identity sector reuses `jac`.
///
/// Each restriction is certified to have an isolated singularity on its
/// fixed locus (an empty fixed locus is a point, with `Jac = C`).
pub fn enumerate_sectors(jac: &Arc<JacobianRing>) -> Result<Vec<Sector>> {
    jac.require_isolated()?;
    let d = jac.degree();
    let weights = jac.ring().weights().to_vec();
    (0..d)
        .into_par_iter()
        .map(|j| {
            let (moved, k_g) = sector_shape(&weights, d, j);
            let sub = if j == 0 {
                jac.clone()
            } else {
                let active = (0..weights.len()).map(|i| !moved.contains(&i)).collect();
                Arc::new(JacobianRing::on_locus(jac.omega(), d, active)?)
            };
            if !sub.is_isolated_singularity() {
                let witness = sub.first_nonvanishing_in_window();
                return Err(Error::hypothesis(
                    format!("the restriction of omega to the fixed locus of sector j = {j} is not isolated"),
                    witness,
                ));
            }
            Ok(Sector {
                j,
                moved,
                k_g,
                jac: sub,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::{parse_polynomial, WeightedRing};

    fn sectors(weights: &[u32], s: &str) -> Vec<Sector> {
        let r = WeightedRing::new(weights).unwrap();
        let j = Arc::new(JacobianRing::new(&parse_polynomial(&r, s).unwrap()).unwrap());
        enumerate_sectors(&j).unwrap()
    }

    #[test]
    fn cubic_fourfold_census() {
        let s = sectors(&[1; 6], "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3");
        assert_eq!(s.len(), 3);
        assert!(s[0].is_identity() && s[0].rank() == 0 && s[0].k_g() == 0);
        for g in &s[1..] {
            assert_eq!(g.moved_variables(), &[0, 1, 2, 3, 4, 5]);
            assert_eq!((g.rank(), g.k_g()), (6, -6));
            assert!(g.omega_g().is_zero());
            assert_eq!(g.jacobian().dimension(0), 1);
            assert_eq!(g.jacobian().dimension(1), 0);
        }
        assert_eq!(s[1].contribution(3, 0), 1);
        assert_eq!(s[1].contribution(2, 0), 0);
        assert_eq!(s[1].contribution(3, 1), 0);
        assert_eq!(s[0].contribution(3, 0), 20);
    }

    #[test]
    fn veronese_double_cone_census() {
        let s = sectors(&[1, 1, 1, 2, 3], "x4^2 + x3^3 + x0^6 + x1^6 + x2^6");
        let census: Vec<_> = s.iter().map(|g| (g.moved_variables().to_vec(), g.k_g())).collect();
        assert_eq!(census[0], (vec![], 0));
        assert_eq!(census[1], (vec![0, 1, 2, 3, 4], -8));
        assert_eq!(census[2], (vec![0, 1, 2, 3], -5));
        assert_eq!(census[3], (vec![0, 1, 2, 4], -6));
        assert_eq!(census[4], census[2]);
        assert_eq!(census[5], census[1]);
        // x4 survives on the fixed locus of j = 2: Jac(x4^2) = C
        assert_eq!(s[2].jacobian().milnor_number().unwrap(), 1);
        // x3 survives on the fixed locus of j = 3: Jac(x3^3) = C + C x3
        assert_eq!(s[3].jacobian().milnor_number().unwrap(), 2);
    }

    #[test]
    fn shape_depends_only_on_weights() {
        for d in 2..7 {
            for n in 1..6 {
                let w = vec![1u32; n];
                for j in 1..d {
                    assert_eq!(sector_shape(&w, d, j), ((0..n).collect(), -(n as i64)));
                }
            }
        }
    }

    #[test]
    fn non_isolated_input_is_refused() {
        let r = WeightedRing::standard(3);
        let j = Arc::new(JacobianRing::new(&parse_polynomial(&r, "x0^2*x1").unwrap()).unwrap());
        assert!(matches!(enumerate_sectors(&j), Err(Error::Hypothesis { .. })));
    }
}
