//! Infinitesimal variation of Hodge structure of a quasi-smooth weighted
//! hypersurface `Y = {omega = 0}` of dimension `N = #vars - 2`, read off the
//! Jacobian ring:
//!
//! ```text
//! T = Jac_d,   H^{p, N-p}_prim = Jac_{(N-p+1) d - w},
//! delta: Jac_d x Jac_{t d - w} -> Jac_{(t+1) d - w},   t = 1..N
//! ```
//!
//! Deciding whether two IVHS are isomorphic is not attempted. Two tools are
//! offered instead: verification of an explicit coordinate change, and
//! comparison of basis-free invariants, which can only ever distinguish.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobian::{CosetVector, JacobianRing, MultiplicationTensor};
use crate::linalg::modp;
use crate::wpoly::{CoordinateChange, WPolynomial};

/// Number of pseudorandom tangent vectors in a fingerprint.
pub const SAMPLE_SIZE: usize = 32;
/// Cap on the basis pairs checked when verifying an isomorphism certificate.
pub const CERTIFICATE_PAIRS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HodgePiece {
    /// `p` in `H^{p, N-p}`.
    pub p: i64,
    pub jacobian_degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct IVHSData {
    jac: Arc<JacobianRing>,
    /// `N`, the dimension of `Y`.
    pub dimension: i64,
    pub tangent_dim: usize,
    /// Ordered by increasing Jacobian degree, i.e. decreasing `p`.
    pub pieces: Vec<HodgePiece>,
    /// `deltas[t - 1]`: `Jac_d x Jac_{t d - w} -> Jac_{(t+1) d - w}`.
    pub deltas: Vec<MultiplicationTensor>,
}

impl IVHSData {
    pub fn jacobian(&self) -> &JacobianRing {
        &self.jac
    }

    /// `h^{p, N-p}_prim` for `p = N, N-1, ..., 0`.
    pub fn hodge_numbers(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.dim).collect()
    }

    /// Pieces whose Jacobian degree lies in `[0, sigma]`.
    pub fn nonzero_range_pieces(&self) -> impl Iterator<Item = &HodgePiece> {
        let sigma = self.jac.expected_socle_degree();
        self.pieces
            .iter()
            .filter(move |p| (0..=sigma).contains(&p.jacobian_degree))
    }
}

fn dimension_of_y(jac: &JacobianRing) -> Result<i64> {
    let n = jac.ring().num_vars() as i64 - 2;
    if n < 3 {
        return Err(Error::Refused(format!(
            "the Jacobian ring computes primitive Hodge numbers only when dim Y >= 3, here dim Y = {n}"
        )));
    }
    Ok(n)
}

pub fn compute_ivhs(omega: &WPolynomial) -> Result<IVHSData> {
    ivhs_of(Arc::new(JacobianRing::new(omega)?))
}

pub fn ivhs_of(jac: Arc<JacobianRing>) -> Result<IVHSData> {
    let n = dimension_of_y(&jac)?;
    jac.require_isolated()?;
    let (d, w) = (jac.degree(), jac.ring().total_weight());
    let degrees: Vec<i64> = (1..=n + 1).map(|t| t * d - w).collect();
    jac.prefill(degrees.iter().copied().chain([d]).filter(|&e| e >= 0));
    let pieces = (0..=n)
        .rev()
        .map(|p| {
            let e = (n - p + 1) * d - w;
            HodgePiece {
                p,
                jacobian_degree: e,
                dim: jac.dimension(e),
            }
        })
        .collect();
    let deltas = (1..=n)
        .into_par_iter()
        .map(|t| jac.multiplication_tensor(d, t * d - w))
        .collect();
    Ok(IVHSData {
        tangent_dim: jac.dimension(d),
        jac,
        dimension: n,
        pieces,
        deltas,
    })
}

/// `h^{p, N-p}_prim` for `p = N, ..., 0`.
pub fn hodge_numbers_primitive(omega: &WPolynomial) -> Result<Vec<usize>> {
    let jac = JacobianRing::new(omega)?;
    let n = dimension_of_y(&jac)?;
    jac.require_isolated()?;
    let (d, w) = (jac.degree(), jac.ring().total_weight());
    Ok((0..=n).rev().map(|p| jac.dimension((n - p + 1) * d - w)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaFingerprint {
    pub t: i64,
    pub source_degree: i64,
    pub target_degree: i64,
    pub dims: (usize, usize, usize),
    pub flattened_rank: usize,
    pub surjective: bool,
    /// Sorted ranks over `F_p`, `p = 2^61 - 1`, of `delta(v, -)` for the
    /// sampled `v`, whose coordinates are uniform in `F_p`.
    pub sampled_ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IVHSFingerprint {
    pub seed: u64,
    pub tangent_dim: usize,
    pub piece_dims: Vec<usize>,
    pub deltas: Vec<DeltaFingerprint>,
}

fn sample_vectors(dim: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLE_SIZE)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..modp::P)).collect())
        .collect()
}

/// Ranks over `F_p` of `delta(v, -)` for each sampled `v`.
fn sampled_ranks(tensor: &MultiplicationTensor, samples: &[Vec<u64>]) -> Vec<usize> {
    let (n1, n2, n3) = tensor.dims();
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return vec![0; samples.len()];
    }
    let reduced: Vec<Vec<(usize, u64)>> = (0..n1 * n2)
        .map(|ij| {
            tensor
                .product(ij / n2, ij % n2)
                .iter()
                .map(|(k, q)| (*k, modp::of_rational(q).expect("structure constants are p-integral")))
                .collect()
        })
        .collect();
    let mut ranks: Vec<usize> = samples
        .iter()
        .map(|v| {
            let mut m = vec![vec![0u64; n3]; n2];
            for (i, &vi) in v.iter().enumerate().filter(|(_, x)| **x != 0) {
                for (j, row) in m.iter_mut().enumerate() {
                    for &(k, c) in &reduced[i * n2 + j] {
                        row[k] = modp::add(row[k], modp::mul(vi, c));
                    }
                }
            }
            modp::rank(m)
        })
        .collect();
    ranks.sort_unstable();
    ranks
}

/// Deterministic in `(data, seed)`. Every delta uses the same sample of
/// tangent vectors.
pub fn fingerprint(data: &IVHSData, seed: u64) -> IVHSFingerprint {
    let samples = sample_vectors(data.tangent_dim, seed);
    let deltas = data
        .deltas
        .par_iter()
        .enumerate()
        .map(|(i, tensor)| {
            let dims = tensor.dims();
            let flattened_rank = tensor.flattened_rank();
            let sampled_ranks = sampled_ranks(tensor, &samples);
            DeltaFingerprint {
                t: i as i64 + 1,
                source_degree: tensor.source_degrees().1,
                target_degree: tensor.target_degree(),
                dims,
                flattened_rank,
                surjective: flattened_rank == dims.2,
                sampled_ranks,
            }
        })
        .collect();
    IVHSFingerprint {
        seed,
        tangent_dim: data.tangent_dim,
        piece_dims: data.hodge_numbers(),
        deltas,
    }
}

/// Matrix of `Jac(omega)_e -> Jac(omega')_e`, `p -> p o g`; column `k` is
/// the image of coset basis element `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PieceMap {
    pub degree: i64,
    pub columns: Vec<CosetVector>,
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    /// `omega o g = lambda omega'`.
    pub lambda: Option<BigRational>,
    /// Induced maps on `T` and on every Hodge piece, present when `lambda` is.
    pub piece_maps: Vec<PieceMap>,
    /// Basis pairs on which `g*(delta(a, b)) = delta'(g* a, g* b)` was checked.
    pub pairs_checked: usize,
    pub compatible: bool,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.lambda.is_some() && self.compatible
    }
}

fn piece_map(source: &JacobianRing, target: &JacobianRing, g: &CoordinateChange, e: i64) -> Result<PieceMap> {
    let ring = source.ring();
    let columns = if e < 0 {
        Vec::new()
    } else {
        let piece = source.piece(e);
        (0..source.dimension(e))
            .into_par_iter()
            .map(|k| {
                let m = WPolynomial::monomial(ring, piece.coset_monomial(k).clone(), BigRational::one());
                target.reduce_in(&m.substitute(g), e)
            })
            .collect::<Result<_>>()?
    };
    Ok(PieceMap { degree: e, columns })
}

fn apply_map(map: &PieceMap, v: &CosetVector, target_dim: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); target_dim];
    for (k, c) in v {
        for (i, q) in &map.columns[*k] {
            out[*i] += c * q;
        }
    }
    out
}

fn sparse(v: Vec<BigRational>) -> CosetVector {
    v.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).collect()
}

/// Checks `omega o g = lambda omega'` and, when it holds, that pullback by
/// `g` carries each delta of `omega` to the corresponding delta of `omega'`.
pub fn verify_isomorphism_certificate(
    omega: &WPolynomial,
    omega_prime: &WPolynomial,
    g: &CoordinateChange,
) -> Result<CertificateReport> {
    if omega.ring() != omega_prime.ring() || g.ring() != omega.ring() {
        return Err(Error::structural("certificate, source and target must share one weighted ring"));
    }
    let lambda = omega.substitute(g).proportionality(omega_prime);
    let mut report = CertificateReport {
        lambda,
        piece_maps: Vec::new(),
        pairs_checked: 0,
        compatible: false,
    };
    if report.lambda.is_none() {
        return Ok(report);
    }
    let a = ivhs_of(Arc::new(JacobianRing::new(omega)?))?;
    let b = ivhs_of(Arc::new(JacobianRing::new(omega_prime)?))?;
    let (ja, jb) = (a.jacobian(), b.jacobian());
    let d = ja.degree();
    let mut degrees: Vec<i64> = vec![d];
    degrees.extend(a.pieces.iter().map(|p| p.jacobian_degree));
    degrees.sort_unstable();
    degrees.dedup();
    let maps: BTreeMap<i64, PieceMap> = degrees
        .iter()
        .map(|&e| Ok((e, piece_map(ja, jb, g, e)?)))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for (ta, tb) in a.deltas.iter().zip(&b.deltas) {
        let (n1, n2, _) = ta.dims();
        for i in 0..n1 {
            for j in 0..n2 {
                pairs.push((ta, tb, i, j));
            }
        }
    }
    let stride = pairs.len().div_ceil(CERTIFICATE_PAIRS).max(1);
    let chosen: Vec<_> = pairs.into_iter().step_by(stride).collect();
    report.pairs_checked = chosen.len();
    report.compatible = chosen.par_iter().all(|&(ta, tb, i, j)| {
        let (e1, e2) = ta.source_degrees();
        let (m1, m2, mt) = (&maps[&e1], &maps[&e2], &maps[&ta.target_degree()]);
        let target_dim = tb.dims().2;
        let lhs = apply_map(mt, ta.product(i, j), target_dim);
        let unit = |k: usize| vec![(k, BigRational::one())];
        let rhs = tb.apply(
            &apply_map(m1, &unit(i), tb.dims().0),
            &apply_map(m2, &unit(j), tb.dims().1),
        );
        sparse(lhs) == sparse(rhs)
    });
    report.piece_maps = maps.into_values().collect();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldComparison {
    pub field: String,
    pub equal: bool,
    /// Sampled ranks depend on the sample; they are compared only between
    /// runs with the same seed.
    pub heuristic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub seed: u64,
    pub fields: Vec<FieldComparison>,
    pub distinguished: bool,
    pub verdict: String,
    pub left: IVHSFingerprint,
    pub right: IVHSFingerprint,
}

pub const VERDICT_DISTINGUISHED: &str = "distinguished";
pub const VERDICT_NOT_DISTINGUISHED: &str = "not distinguished by these invariants";

pub fn compare_fingerprints(left: IVHSFingerprint, right: IVHSFingerprint) -> CompareReport {
    let mut fields = vec![
        FieldComparison {
            field: "tangent_dim".into(),
            equal: left.tangent_dim == right.tangent_dim,
            heuristic: false,
        },
        FieldComparison {
            field: "piece_dims".into(),
            equal: left.piece_dims == right.piece_dims,
            heuristic: false,
        },
    ];
    for (a, b) in left.deltas.iter().zip(&right.deltas) {
        let t = a.t;
        fields.push(FieldComparison {
            field: format!("delta[{t}].flattened_rank"),
            equal: a.flattened_rank == b.flattened_rank,
            heuristic: false,
        });
        fields.push(FieldComparison {
            field: format!("delta[{t}].surjective"),
            equal: a.surjective == b.surjective,
            heuristic: false,
        });
        fields.push(FieldComparison {
            field: format!("delta[{t}].sampled_ranks"),
            equal: a.sampled_ranks == b.sampled_ranks,
            heuristic: true,
        });
    }
    let distinguished = fields.iter().any(|f| !f.equal);
    CompareReport {
        seed: left.seed,
        fields,
        distinguished,
        verdict: if distinguished { VERDICT_DISTINGUISHED } else { VERDICT_NOT_DISTINGUISHED }.into(),
        left,
        right,
    }
}

pub fn compare(omega: &WPolynomial, omega_prime: &WPolynomial, seed: u64) -> Result<CompareReport> {
    if omega.ring() != omega_prime.ring() {
        return Err(Error::Mismatch(format!(
            "weights differ: {:?} vs {:?}",
            omega.ring().weights(),
            omega_prime.ring().weights()
        )));
    }
    if omega.degree() != omega_prime.degree() {
        return Err(Error::Mismatch(format!(
            "degrees differ: {:?} vs {:?}",
            omega.degree(),
            omega_prime.degree()
        )));
    }
    let (a, b) = rayon::join(|| compute_ivhs(omega), || compute_ivhs(omega_prime));
    let (a, b) = (a?, b?);
    let (fa, fb) = rayon::join(|| fingerprint(&a, seed), || fingerprint(&b, seed));
    Ok(compare_fingerprints(fa, fb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::{parse_polynomial, WeightedRing};

    fn poly(weights: &[u32], s: &str) -> WPolynomial {
        parse_polynomial(&WeightedRing::new(weights).unwrap(), s).unwrap()
    }

    const CUBIC4: &str = "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3";
    const VDC: &str = "x4^2 + x3^3 + x0^6 + x1^6 + x2^6";

    #[test]
    fn cubic_fourfold_pieces() {
        let data = compute_ivhs(&poly(&[1; 6], CUBIC4)).unwrap();
        assert_eq!(data.dimension, 4);
        assert_eq!(data.tangent_dim, 20);
        assert_eq!(data.hodge_numbers(), vec![0, 1, 20, 1, 0]);
        let degrees: Vec<i64> = data.nonzero_range_pieces().map(|p| p.jacobian_degree).collect();
        assert_eq!(degrees, vec![0, 3, 6]);
        let f = fingerprint(&data, 0);
        assert_eq!(f.deltas[0].flattened_rank, 0);
        assert_eq!(f.deltas[1].flattened_rank, 20);
        assert_eq!(f.deltas[1].dims, (20, 1, 20));
        assert_eq!(f, fingerprint(&data, 0));
    }

    #[test]
    fn veronese_double_cone_pieces() {
        let data = compute_ivhs(&poly(&[1, 1, 1, 2, 3], VDC)).unwrap();
        assert_eq!(data.dimension, 3);
        let degrees: Vec<i64> = data.pieces.iter().map(|p| p.jacobian_degree).collect();
        assert_eq!(degrees, vec![-2, 4, 10, 16]);
        assert_eq!(data.hodge_numbers(), vec![0, 21, 21, 0]);
    }

    #[test]
    fn low_dimension_is_refused() {
        let q = poly(&[1; 4], "x0^4+x1^4+x2^4+x3^4");
        assert!(matches!(compute_ivhs(&q), Err(Error::Refused(_))));
        assert!(hodge_numbers_primitive(&q).is_err());
    }

    #[test]
    fn certificates() {
        let f = poly(&[1; 5], "x0^3+x1^3+x2^3+x3^3+x4^3");
        let id = CoordinateChange::identity(f.ring());
        let r = verify_isomorphism_certificate(&f, &f, &id).unwrap();
        assert!(r.holds());
        assert_eq!(r.lambda, Some(BigRational::one()));
        let perturbed = poly(&[1; 5], "x0^3+x1^3+x2^3+x3^3+x4^3 + x0*x1*x2");
        assert!(!verify_isomorphism_certificate(&f, &perturbed, &id).unwrap().holds());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = CoordinateChange::random(f.ring(), &mut rng);
        let r = verify_isomorphism_certificate(&f, &f.substitute(&g), &g).unwrap();
        assert!(r.holds() && r.pairs_checked > 0);
    }

    #[test]
    fn compare_is_reflexive() {
        let f = poly(&[1; 5], "x0^3+x1^3+x2^3+x3^3+x4^3");
        let r = compare(&f, &f, 0).unwrap();
        assert!(!r.distinguished);
        assert_eq!(r.verdict, VERDICT_NOT_DISTINGUISHED);
        let other = poly(&[1; 6], CUBIC4);
        assert!(matches!(compare(&f, &other, 0), Err(Error::Mismatch(_))));
    }
}
