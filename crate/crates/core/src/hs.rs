//! Dimensions of `Hom(Delta, Delta(t)[m])` from the sector formula
//!
//! ```text
//! Hom(Delta, Delta(t)[m]) = sum over g with rk W_g = m mod 2 of
//!                           Jac(omega_g) in degree t - k_g + d (m - rk W_g)/2
//! ```
//!
//! together with the Serre functor `S = Delta(-w)[n+1]`, the relation
//! `Delta(d) = [2]`, Hochschild (co)homology, and the checks that decide when
//! the identity sector alone carries the subalgebra `sum_i Jac_{i t0}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::{JacobianRing, MultiplicationTensor};
use crate::sectors::{enumerate_sectors, Sector};
use crate::wpoly::WPolynomial;

/// Total dimension of one slot together with each sector's summand,
/// indexed by `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomEntry {
    pub total: usize,
    pub breakdown: Vec<usize>,
}

/// `Delta(t) = S^k [l]`, witnessed by `-k w + d j = t` and `l = 2j - (n+1) k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SerreTwistDecomposition {
    pub t: i64,
    pub k: i64,
    pub l: i64,
    pub j: i64,
}

impl SerreTwistDecomposition {
    pub fn verify(&self, weights: &[u32], d: i64) -> bool {
        let w: i64 = weights.iter().map(|&a| a as i64).sum();
        let n1 = weights.len() as i64;
        -self.k * w + d * self.j == self.t && self.l == 2 * self.j - n1 * self.k
    }
}

/// The canonical decomposition takes the least `k >= 0`.
pub fn serre_twist(weights: &[u32], d: i64, t: i64) -> Result<SerreTwistDecomposition> {
    let w: i64 = weights.iter().map(|&a| a as i64).sum();
    let g = d.gcd(&w);
    if t.rem_euclid(g) != 0 {
        return Err(Error::Mismatch(format!(
            "Delta({t}) is not a power of the Serre functor up to shift: {t} is not divisible by gcd(d, w) = {g}"
        )));
    }
    let k = (0..d / g)
        .find(|k| (t + k * w).rem_euclid(d) == 0)
        .expect("a solution exists below d / gcd");
    let j = (t + k * w) / d;
    Ok(SerreTwistDecomposition {
        t,
        k,
        l: 2 * j - weights.len() as i64 * k,
        j,
    })
}

#[derive(Clone, Debug)]
pub struct HSTable {
    pub weights: Vec<u32>,
    pub degree: i64,
    pub total_weight: i64,
    pub t0: i64,
    pub socle_degree: i64,
    pub t_min: i64,
    pub t_max: i64,
    entries: BTreeMap<(i64, i64), HomEntry>,
}

impl HSTable {
    /// Stored slots: `t` in `[t_min, t_max]`, `m` in `{0, 1}`.
    pub fn stored(&self) -> impl Iterator<Item = (i64, i64, &HomEntry)> {
        self.entries.iter().map(|(&(t, m), e)| (t, m, e))
    }

    /// Any `(t, m)`, reduced to `m` in `{0, 1}` through `Delta(d) = [2]`.
    pub fn entry(&self, t: i64, m: i64) -> Option<&HomEntry> {
        let (q, m0) = (m.div_euclid(2), m.rem_euclid(2));
        self.entries.get(&(t + self.degree * q, m0))
    }

    pub fn total(&self, t: i64, m: i64) -> Option<usize> {
        self.entry(t, m).map(|e| e.total)
    }

    pub fn num_sectors(&self) -> usize {
        self.degree as usize
    }
}

/// A hypersurface together with its certified sector decomposition.
#[derive(Debug)]
pub struct HochschildSerre {
    jac: Arc<JacobianRing>,
    sectors: Vec<Sector>,
}

impl HochschildSerre {
    pub fn new(omega: &WPolynomial) -> Result<Self> {
        Self::from_jacobian(Arc::new(JacobianRing::new(omega)?))
    }

    pub fn from_jacobian(jac: Arc<JacobianRing>) -> Result<Self> {
        let sectors = enumerate_sectors(&jac)?;
        Ok(HochschildSerre { jac, sectors })
    }

    pub fn jacobian(&self) -> &JacobianRing {
        &self.jac
    }

    pub fn jacobian_arc(&self) -> &Arc<JacobianRing> {
        &self.jac
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn weights(&self) -> &[u32] {
        self.jac.ring().weights()
    }

    pub fn degree(&self) -> i64 {
        self.jac.degree()
    }

    pub fn total_weight(&self) -> i64 {
        self.jac.ring().total_weight()
    }

    pub fn num_vars(&self) -> i64 {
        self.jac.ring().num_vars() as i64
    }

    /// `gcd(d, w)`.
    pub fn t0(&self) -> i64 {
        self.degree().gcd(&self.total_weight())
    }

    pub fn socle_degree(&self) -> i64 {
        self.jac.expected_socle_degree()
    }

    /// `dim Hom(Delta, Delta(t)[m])` with its per-sector breakdown.
    pub fn hom(&self, t: i64, m: i64) -> HomEntry {
        let breakdown: Vec<usize> = self.sectors.iter().map(|s| s.contribution(t, m)).collect();
        HomEntry {
            total: breakdown.iter().sum(),
            breakdown,
        }
    }

    /// Table over `t` in `[t_min, t_max]` and `m` in `{0, 1}`.
    pub fn table(&self, t_min: i64, t_max: i64) -> HSTable {
        let slots: Vec<(i64, i64)> = (t_min..=t_max)
            .flat_map(|t| [(t, 0), (t, 1)])
            .collect();
        let mut degrees: Vec<(usize, i64)> = slots
            .iter()
            .flat_map(|&(t, m)| {
                self.sectors
                    .iter()
                    .enumerate()
                    .filter_map(move |(i, s)| s.degree_for(t, m).map(|e| (i, e)))
            })
            .filter(|&(_, e)| e >= 0)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        degrees.par_iter().for_each(|&(i, e)| {
            self.sectors[i].jacobian().dimension(e);
        });
        let entries = slots
            .par_iter()
            .map(|&(t, m)| ((t, m), self.hom(t, m)))
            .collect();
        HSTable {
            weights: self.weights().to_vec(),
            degree: self.degree(),
            total_weight: self.total_weight(),
            t0: self.t0(),
            socle_degree: self.socle_degree(),
            t_min,
            t_max,
            entries,
        }
    }

    /// The table over `t` in `[0, sigma + w]`.
    pub fn default_table(&self) -> HSTable {
        self.table(0, self.socle_degree() + self.total_weight())
    }

    /// `HH^m = Hom(Id, Id[m])`.
    pub fn hochschild_cohomology(&self, m: i64) -> usize {
        self.hom(0, m).total
    }

    /// `HH_m = Hom(Id, S[m])` with `S = Delta(-w)[n+1]`.
    pub fn hochschild_homology(&self, m: i64) -> usize {
        self.hom(-self.total_weight(), self.num_vars() + m).total
    }

    pub fn serre_twist(&self, t: i64) -> Result<SerreTwistDecomposition> {
        serre_twist(self.weights(), self.degree(), t)
    }

    pub fn check_recovery_conditions(&self) -> RecoveryReport {
        let (d, t0, sigma) = (self.degree(), self.t0(), self.socle_degree());
        let generated = sigma < t0 || self.jac.generated_in_degree(t0, sigma);
        let sector_checks: Vec<SectorCheck> = self.sectors[1..]
            .iter()
            .map(|s| {
                let degree = s.degree_for(t0, 0);
                let dim = s.contribution(t0, 0);
                SectorCheck {
                    j: s.j(),
                    rank: s.rank(),
                    degree,
                    dim,
                    ok: degree.is_none() || dim == 0,
                }
            })
            .collect();
        let sectors_vanish = sector_checks.iter().all(|c| c.ok);
        let weights = self.weights();
        let weights_at_most_half = weights.iter().all(|&a| 2 * a as i64 <= d);
        let unit_weights = weights.iter().filter(|&&a| a == 1).count();
        let sufficient = d > 2 && weights_at_most_half && (unit_weights as i64) * (d - 2) > 2 * t0;
        RecoveryReport {
            t0,
            socle_degree: sigma,
            generated_in_degree: generated,
            sectors_vanish,
            sector_checks,
            weights_at_most_half,
            unit_weights,
            sufficient_criterion: sufficient,
            passes: generated && sectors_vanish,
        }
    }

    /// Identity-sector dimensions of `sum_i Jac_{i t0}` and the generator
    /// products `Jac_{t0} x Jac_{(i-1) t0} -> Jac_{i t0}`.
    pub fn recovered_subalgebra(&self) -> Result<RecoveredSubalgebra> {
        let report = self.check_recovery_conditions();
        if let Some(clause) = report.failing_clause() {
            return Err(Error::Refused(format!(
                "the subalgebra in degrees divisible by {} is not recoverable: {clause}",
                report.t0
            )));
        }
        let t0 = report.t0;
        let top = self.socle_degree() / t0;
        self.jac.prefill((0..=top).map(|i| i * t0));
        let dims = (0..=top).map(|i| self.jac.dimension(i * t0)).collect();
        let generators = (1..=top)
            .into_par_iter()
            .map(|i| self.jac.multiplication_tensor(t0, (i - 1) * t0))
            .collect();
        Ok(RecoveredSubalgebra {
            step: t0,
            dims,
            generators,
        })
    }

    /// Compares the sector formula with the closed-form case split for
    /// weights all 1, over `t` in `[0, sigma + w]`.
    pub fn verify_hypersurface_proposition(&self) -> Result<HypersurfaceCheck> {
        if self.weights().iter().any(|&a| a != 1) {
            return Err(Error::Mismatch("the closed form needs all weights equal to 1".into()));
        }
        let (d, n1) = (self.degree(), self.num_vars());
        let special_even = (d - 2) * n1;
        let (special_t, special_m) = if n1 % 2 == 0 {
            (Some(special_even / 2), 0)
        } else if (special_even - d) % 2 == 0 {
            (Some((special_even - d) / 2), 1)
        } else {
            (None, 1)
        };
        let mut check = HypersurfaceCheck {
            exceptional_slots: Vec::new(),
            discrepancies: Vec::new(),
        };
        for t in 0..=self.socle_degree() + self.total_weight() {
            for m in 0..2 {
                let actual = self.hom(t, m).total;
                let jac = if m == 0 { self.jac.dimension(t) } else { 0 };
                let excess = if special_t == Some(t) && special_m == m { (d - 1) as usize } else { 0 };
                if actual != jac {
                    check.exceptional_slots.push(ExceptionalSlot {
                        t,
                        m,
                        excess: actual as i64 - jac as i64,
                    });
                }
                if actual != jac + excess {
                    check.discrepancies.push(Discrepancy {
                        t,
                        m,
                        expected: jac + excess,
                        actual,
                    });
                }
            }
        }
        Ok(check)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorCheck {
    pub j: i64,
    pub rank: usize,
    /// Degree of `Jac(omega_g)` examined; `None` when the rank is odd.
    pub degree: Option<i64>,
    pub dim: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub t0: i64,
    pub socle_degree: i64,
    /// `sum_i Jac_{i t0}` is generated in degree `t0`.
    pub generated_in_degree: bool,
    /// Every non-identity sector has odd rank or vanishes at `(t0, 0)`.
    pub sectors_vanish: bool,
    pub sector_checks: Vec<SectorCheck>,
    pub weights_at_most_half: bool,
    pub unit_weights: usize,
    /// `a_i <= d/2` and `#{a_i = 1} > 2 t0 / (d - 2)`; implies `sectors_vanish`.
    pub sufficient_criterion: bool,
    pub passes: bool,
}

impl RecoveryReport {
    pub fn failing_clause(&self) -> Option<String> {
        if !self.generated_in_degree {
            return Some(format!("Jac in degrees divisible by {} is not generated in degree {}", self.t0, self.t0));
        }
        if let Some(c) = self.sector_checks.iter().find(|c| !c.ok) {
            return Some(format!(
                "sector j = {} has even rank {} and Jac(omega_g) in degree {} has dimension {}",
                c.j,
                c.rank,
                c.degree.unwrap_or_default(),
                c.dim
            ));
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct RecoveredSubalgebra {
    pub step: i64,
    /// `dims[i] = dim Jac_{i step}`.
    pub dims: Vec<usize>,
    /// `generators[i - 1]`: `Jac_step x Jac_{(i-1) step} -> Jac_{i step}`.
    pub generators: Vec<MultiplicationTensor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalSlot {
    pub t: i64,
    pub m: i64,
    pub excess: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub t: i64,
    pub m: i64,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypersurfaceCheck {
    /// Slots where the table differs from `Jac_t` (for `m = 0`) or from 0.
    pub exceptional_slots: Vec<ExceptionalSlot>,
    /// Slots where the table differs from the closed form.
    pub discrepancies: Vec<Discrepancy>,
}

impl HypersurfaceCheck {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn hom_delta_delta(omega: &WPolynomial, t: i64, m: i64) -> Result<HomEntry> {
    Ok(HochschildSerre::new(omega)?.hom(t, m))
}

pub fn hs_table(omega: &WPolynomial, t_range: Option<(i64, i64)>) -> Result<HSTable> {
    let hs = HochschildSerre::new(omega)?;
    Ok(match t_range {
        Some((a, b)) => hs.table(a, b),
        None => hs.default_table(),
    })
}

pub fn hochschild_cohomology(omega: &WPolynomial, m: i64) -> Result<usize> {
    Ok(HochschildSerre::new(omega)?.hochschild_cohomology(m))
}

pub fn hochschild_homology(omega: &WPolynomial, m: i64) -> Result<usize> {
    Ok(HochschildSerre::new(omega)?.hochschild_homology(m))
}

pub fn check_recovery_conditions(omega: &WPolynomial) -> Result<RecoveryReport> {
    Ok(HochschildSerre::new(omega)?.check_recovery_conditions())
}

/// Parameters of `P(1^{r+1}, 2n, kn)` in degree `2kn`, `k >= 3` odd, `r >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VeroneseCriterion {
    pub r: i64,
    pub n: i64,
    pub k: i64,
    /// `m = gcd((k+2) n + r + 1, 2kn)`.
    pub m: i64,
    /// `m | 2n`: the IVHS is recovered.
    pub recovers_ivhs: bool,
    /// Additionally `m < 2n`: generic reconstruction.
    pub generic_torelli: bool,
}

impl VeroneseCriterion {
    pub fn new(r: i64, n: i64, k: i64) -> Result<Self> {
        if r < 2 || n < 1 || k < 3 || k % 2 == 0 {
            return Err(Error::Mismatch(format!(
                "need r >= 2, n >= 1 and odd k >= 3, got (r, n, k) = ({r}, {n}, {k})"
            )));
        }
        let m = ((k + 2) * n + r + 1).gcd(&(2 * k * n));
        let recovers_ivhs = (2 * n) % m == 0;
        Ok(VeroneseCriterion {
            r,
            n,
            k,
            m,
            recovers_ivhs,
            generic_torelli: recovers_ivhs && m < 2 * n,
        })
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut w = vec![1; self.r as usize + 1];
        w.push((2 * self.n) as u32);
        w.push((self.k * self.n) as u32);
        w
    }

    pub fn degree(&self) -> i64 {
        2 * self.k * self.n
    }
}

/// Parameters of `P(1^{r+1}, s)` in degree `ks`, `r, s, k >= 2`, not `(2, 2, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KSheetedCriterion {
    pub r: i64,
    pub s: i64,
    pub k: i64,
    /// `n0 = gcd(r + 1 + s, ks)`.
    pub n0: i64,
    pub bound: i64,
    pub holds: bool,
}

impl KSheetedCriterion {
    pub fn new(r: i64, s: i64, k: i64) -> Result<Self> {
        if r < 2 || s < 2 || k < 2 || (r, s, k) == (2, 2, 2) {
            return Err(Error::Mismatch(format!(
                "need r, s, k >= 2 and (r, s, k) != (2, 2, 2), got ({r}, {s}, {k})"
            )));
        }
        let n0 = (r + 1 + s).gcd(&(k * s));
        let bound = (2 * s)
            .min(((r + 2) * k - 2) * s - 2 * (r + 1))
            .min((k * s - 2) * (r + 1));
        Ok(KSheetedCriterion {
            r,
            s,
            k,
            n0,
            bound,
            holds: 2 * n0 < bound && s % n0 == 0,
        })
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut w = vec![1; self.r as usize + 1];
        w.push(self.s as u32);
        w
    }

    pub fn degree(&self) -> i64 {
        self.k * self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::{parse_polynomial, WeightedRing};

    fn hs(weights: &[u32], s: &str) -> HochschildSerre {
        let r = WeightedRing::new(weights).unwrap();
        HochschildSerre::new(&parse_polynomial(&r, s).unwrap()).unwrap()
    }

    const CUBIC4: &str = "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3";

    #[test]
    fn serre_twists() {
        let t = serre_twist(&[1; 6], 3, 3).unwrap();
        assert_eq!((t.k, t.l), (0, 2));
        let v = serre_twist(&[1, 1, 1, 2, 3], 6, 2).unwrap();
        assert_eq!((v.k, v.l), (2, -4));
        assert!(v.verify(&[1, 1, 1, 2, 3], 6));
        assert_eq!(serre_twist(&[1, 1, 1, 2, 3], 6, 0).unwrap().k, 0);
        assert!(serre_twist(&[1, 1, 1, 2, 3], 6, 3).is_err());
    }

    #[test]
    fn cubic_fourfold_slots() {
        let h = hs(&[1; 6], CUBIC4);
        let e = h.hom(3, 0);
        assert_eq!(e.total, 22);
        assert_eq!(e.breakdown, vec![20, 1, 1]);
        assert_eq!(h.hom(0, 0).total, 1);
        assert_eq!(h.hochschild_cohomology(2), 22);
        assert_eq!(h.hochschild_cohomology(1), 0);
        assert_eq!(h.hochschild_homology(0), 22);
        assert_eq!(h.hochschild_homology(2), 1);
        assert_eq!(h.hochschild_homology(-2), 1);
        assert_eq!(h.hochschild_homology(1), 0);
    }

    #[test]
    fn table_normalization() {
        let h = hs(&[1; 6], CUBIC4);
        let table = h.default_table();
        assert_eq!((table.t_min, table.t_max), (0, 12));
        assert!(table.stored().filter(|s| s.1 == 1).all(|s| s.2.total == 0));
        for t in 3..=12 {
            for m in 0..2 {
                assert_eq!(table.total(t - 3, m + 2), table.total(t, m));
                assert_eq!(h.hom(t - 3, m + 2), h.hom(t, m));
            }
        }
    }

    #[test]
    fn recovery_report_for_the_cubic_fourfold_fails_on_sectors() {
        let r = hs(&[1; 6], CUBIC4).check_recovery_conditions();
        assert_eq!(r.t0, 3);
        assert!(r.generated_in_degree);
        assert!(!r.sectors_vanish);
        assert!(!r.sufficient_criterion);
        assert!(r.failing_clause().unwrap().contains("j = 1"));
    }

    #[test]
    fn family_arithmetic() {
        let v = VeroneseCriterion::new(2, 1, 3).unwrap();
        assert_eq!((v.m, v.recovers_ivhs, v.generic_torelli), (2, true, false));
        assert_eq!(v.weights(), vec![1, 1, 1, 2, 3]);
        let g = VeroneseCriterion::new(2, 2, 3).unwrap();
        assert_eq!((g.m, g.generic_torelli), (1, true));
        let k = KSheetedCriterion::new(3, 3, 2).unwrap();
        assert_eq!((k.n0, k.bound, k.holds), (1, 6, true));
        assert!(KSheetedCriterion::new(2, 2, 2).is_err());
        assert!(VeroneseCriterion::new(2, 1, 4).is_err());
    }
}
