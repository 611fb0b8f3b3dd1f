//! Weighted normal forms: completing a pure power, comparing Jacobian rings
//! before and after eliminating a variable, tangent spans
//! `<x_i dF/dx_j : a_i = a_j>`, and the truncation `nu_cap` of a Jacobian
//! ring to generators and relations of degree at most `cap`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jacobian::JacobianRing;
use crate::linalg::{integer_row, rank_of, EchelonBasis, SparseVec};
use crate::wpoly::{monomials_of_degree, monomials_of_degree_in, CoordinateChange, Monomial, WPolynomial, WeightedRing};

/// Substitutes `x_v -> x_v - Phi / (e alpha)` where `alpha x_v^e + Phi x_v^(e-1)`
/// are the terms of `omega` of `x_v`-degree at least `e - 1`. Afterwards no
/// term has `x_v`-degree exactly `e - 1`.
pub fn complete_power(omega: &WPolynomial, var: usize, exponent: u32) -> Result<(WPolynomial, CoordinateChange)> {
    let ring = omega.ring();
    if var >= ring.num_vars() {
        return Err(Error::structural(format!("no variable x{var}")));
    }
    let d = omega
        .degree()
        .ok_or_else(|| Error::structural("complete_power needs a homogeneous polynomial"))?;
    if exponent < 2 || exponent as i64 * ring.weight(var) != d {
        return Err(Error::Mismatch(format!(
            "x{var}^{exponent} has degree {}, not {d}",
            exponent as i64 * ring.weight(var)
        )));
    }
    let mut pure = vec![0; ring.num_vars()];
    pure[var] = exponent;
    let alpha = omega.coefficient(&Monomial::new(pure));
    if alpha.is_zero() {
        return Err(Error::hypothesis(
            format!("non-normalizable: the coefficient of x{var}^{exponent} vanishes, so the hypersurface is singular"),
            None,
        ));
    }
    let mut phi = WPolynomial::zero(ring);
    for (m, c) in omega.terms() {
        if m.exponent(var) == exponent - 1 {
            let mut e = m.exponents().to_vec();
            e[var] = 0;
            phi.add_term(Monomial::new(e), c.clone());
        }
    }
    if phi.is_zero() {
        return Ok((omega.clone(), CoordinateChange::identity(ring)));
    }
    let shift = phi.scale(&-(alpha * BigRational::from_integer(exponent.into())).recip());
    let image = &WPolynomial::var(ring, var) + &shift;
    let cert = CoordinateChange::single(ring, var, image)?;
    Ok((omega.substitute(&cert), cert))
}

/// Whether `Jac(omega)` and `Jac(omega_reduced)` have the same Hilbert
/// function, the latter taken on the locus `x_var = 0`.
pub fn jacobian_elimination_check(omega: &WPolynomial, omega_reduced: &WPolynomial, var: usize) -> Result<bool> {
    if omega.ring() != omega_reduced.ring() {
        return Err(Error::structural("both polynomials must live in one ring"));
    }
    if omega_reduced.involves(var) {
        return Ok(false);
    }
    let full = JacobianRing::new(omega)?;
    let mut active = vec![true; omega.ring().num_vars()];
    active[var] = false;
    let reduced = JacobianRing::on_locus(omega_reduced, full.degree(), active)?;
    let top = full.expected_socle_degree().max(reduced.expected_socle_degree()) + omega.ring().max_weight();
    Ok(full.hilbert_function(top) == reduced.hilbert_function(top))
}

/// Row-reduced span of `x_i dF/dx_j` over pairs with `a_i = a_j`, inside
/// the degree-`D` forms.
#[derive(Clone, Debug)]
pub struct TangentSpan {
    ring: WeightedRing,
    degree: i64,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: EchelonBasis,
}

impl TangentSpan {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Basis vectors as polynomials, in echelon order.
    pub fn basis(&self) -> Vec<WPolynomial> {
        self.echelon
            .rows()
            .iter()
            .map(|r| {
                let mut p = WPolynomial::zero(&self.ring);
                for (c, v) in r.entries() {
                    p.add_term(self.basis[*c].clone(), BigRational::from_integer(v.clone()));
                }
                p
            })
            .collect()
    }

    fn row(&self, p: &WPolynomial) -> Result<SparseVec> {
        if !p.is_zero() && p.degree() != Some(self.degree) {
            return Err(Error::Mismatch(format!("expected a form of degree {}", self.degree)));
        }
        Ok(p.to_sparse_row(&self.index)?.0)
    }

    pub fn contains(&self, p: &WPolynomial) -> Result<bool> {
        Ok(self.echelon.contains(&self.row(p)?))
    }

    /// Subspace equality by equal rank plus containment.
    pub fn equals(&self, other: &TangentSpan) -> Result<bool> {
        if self.ring != other.ring || self.degree != other.degree {
            return Err(Error::Mismatch("spans live in different graded pieces".into()));
        }
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for p in other.basis() {
            if !self.contains(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn span_of(ring: &WeightedRing, degree: i64, generators: impl IntoIterator<Item = WPolynomial>) -> Result<TangentSpan> {
    let basis = monomials_of_degree(ring, degree);
    let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut echelon = EchelonBasis::new(basis.len());
    for g in generators {
        if !g.is_zero() {
            echelon.insert(g.to_sparse_row(&index)?.0);
        }
    }
    Ok(TangentSpan {
        ring: ring.clone(),
        degree,
        basis,
        index,
        echelon,
    })
}

fn tangent_generators(f: &WPolynomial) -> Vec<WPolynomial> {
    let ring = f.ring();
    let n = ring.num_vars();
    let partials: Vec<WPolynomial> = (0..n).map(|j| f.partial_derivative(j)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for (j, pj) in partials.iter().enumerate() {
            if ring.weight(i) == ring.weight(j) {
                out.push(&WPolynomial::var(ring, i) * pj);
            }
        }
    }
    out
}

pub fn tangent_space_span(f: &WPolynomial) -> Result<TangentSpan> {
    let degree = f
        .degree()
        .ok_or_else(|| Error::structural("tangent span needs a nonzero homogeneous form"))?;
    span_of(f.ring(), degree, tangent_generators(f))
}

pub fn spans_equal(f: &WPolynomial, g: &WPolynomial) -> Result<bool> {
    if f.ring() != g.ring() || f.degree() != g.degree() {
        return Err(Error::Mismatch("forms must share ring and degree".into()));
    }
    tangent_space_span(f)?.equals(&tangent_space_span(g)?)
}

/// `span(F o g) = g*(span(F))` for a weight-class-preserving linear `g`.
pub fn pullback_identity(f: &WPolynomial, g: &CoordinateChange) -> Result<bool> {
    let pulled = span_of(
        f.ring(),
        f.degree().ok_or_else(|| Error::structural("tangent span needs a nonzero homogeneous form"))?,
        tangent_generators(f).iter().map(|p| p.substitute(g)),
    )?;
    tangent_space_span(&f.substitute(g))?.equals(&pulled)
}

/// `nu_cap(Jac)`: the variables of weight at most `cap`, modulo the
/// Jacobian relations of degree at most `cap`.
#[derive(Clone, Debug)]
pub struct TruncatedPresentation {
    ring: WeightedRing,
    cap: i64,
    generators: Vec<usize>,
    relations: Vec<WPolynomial>,
}

impl TruncatedPresentation {
    /// Presentation with explicit generators and relations, all of degree at most `cap`.
    pub fn new(ring: &WeightedRing, cap: i64, generators: Vec<usize>, relations: Vec<WPolynomial>) -> Result<Self> {
        if generators.iter().any(|&i| i >= ring.num_vars() || ring.weight(i) > cap) {
            return Err(Error::structural(format!("generators must be variables of weight <= {cap}")));
        }
        let active: Vec<bool> = (0..ring.num_vars()).map(|i| generators.contains(&i)).collect();
        for r in &relations {
            match r.degree() {
                Some(e) if e <= cap => {}
                _ => return Err(Error::structural(format!("relation {r} is not homogeneous of degree <= {cap}"))),
            }
            if r.terms().any(|(m, _)| !m.supported_on(&active)) {
                return Err(Error::structural(format!("relation {r} uses a variable that is not a generator")));
            }
        }
        Ok(TruncatedPresentation {
            ring: ring.clone(),
            cap,
            generators,
            relations,
        })
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|&i| self.ring.weight(i)).collect()
    }

    pub fn relations(&self) -> &[WPolynomial] {
        &self.relations
    }

    fn active(&self) -> Vec<bool> {
        (0..self.ring.num_vars()).map(|i| self.generators.contains(&i)).collect()
    }

    /// Rank of the degree-`e` piece of the ideal generated by `relations`.
    fn ideal_rank(&self, e: i64, relations: &[WPolynomial], active: &[bool]) -> usize {
        let basis = monomials_of_degree_in(&self.ring, e, active);
        let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let rows = relations.iter().flat_map(|r| {
            let shift = e - r.degree().expect("relations are homogeneous");
            monomials_of_degree_in(&self.ring, shift, active).into_iter().map(|m| {
                let entries: Vec<_> = r.terms().map(|(t, c)| (index[&t.mul(&m)], c.clone())).collect();
                integer_row(&entries).0
            })
        });
        rank_of(basis.len(), rows)
    }

    /// Dimension of the presented algebra in degree `e`.
    pub fn dimension(&self, e: i64) -> usize {
        if e < 0 {
            return 0;
        }
        let active = self.active();
        monomials_of_degree_in(&self.ring, e, &active).len() - self.ideal_rank(e, &self.relations, &active)
    }

    /// Dimensions in degrees `0..=bound`.
    pub fn hilbert_function(&self, bound: i64) -> Vec<usize> {
        use rayon::prelude::*;
        (0..=bound).into_par_iter().map(|e| self.dimension(e)).collect()
    }
}

/// Relations in degree `e` are the partials of degree `e` that are not
/// already in the span of lower relations times monomials.
pub fn truncate_presentation(jac: &JacobianRing, cap: i64) -> Result<TruncatedPresentation> {
    jac.require_isolated()?;
    let ring = jac.ring();
    let generators: Vec<usize> = (0..ring.num_vars()).filter(|&i| ring.weight(i) <= cap).collect();
    let mut pres = TruncatedPresentation::new(ring, cap, generators, Vec::new())?;
    let active = pres.active();
    let mut by_degree: Vec<&WPolynomial> = jac.partials().iter().filter(|p| !p.is_zero()).collect();
    by_degree.sort_by_key(|p| p.degree());
    for p in by_degree {
        let e = p.degree().expect("partials of a form are homogeneous");
        if e > cap {
            break;
        }
        let before = pres.ideal_rank(e, &pres.relations, &active);
        let mut trial = pres.relations.clone();
        trial.push(p.clone());
        if pres.ideal_rank(e, &trial, &active) > before {
            pres.relations = trial;
        }
    }
    Ok(pres)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::parse_polynomial;
    use rand::SeedableRng;

    fn ring(w: &[u32]) -> WeightedRing {
        WeightedRing::new(w).unwrap()
    }

    fn p(r: &WeightedRing, s: &str) -> WPolynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn completing_the_square() {
        let r = ring(&[1, 1, 1, 2, 3]);
        let f = p(&r, "x4^2 + (x3*x0 + x1^3)*x4 + x3^3 + x0^6 + x1^6 + x2^6");
        let (g, cert) = complete_power(&f, 4, 2).unwrap();
        assert!(g.terms().all(|(m, _)| m.exponent(4) != 1));
        assert_eq!(g, f.substitute(&cert));
        let expected = p(&r, "x4^2 + x3^3 + x0^6 + x1^6 + x2^6 - 1/4*(x3*x0 + x1^3)^2");
        assert_eq!(g, expected);
        let (same, id) = complete_power(&expected, 4, 2).unwrap();
        assert_eq!(same, expected);
        assert!(id.is_identity());
    }

    #[test]
    fn completing_the_cube() {
        let r = ring(&[1, 1, 1, 2]);
        let f = p(&r, "x3^3 + (x0^2 + x1*x2)*x3^2 + x0^4*x3 + x1^6 + x2^6 + x0^6");
        let (g, _) = complete_power(&f, 3, 3).unwrap();
        assert!(g.terms().all(|(m, _)| m.exponent(3) != 2));
        let bad = p(&r, "x0^2*x3^2 + x1^6");
        assert!(matches!(complete_power(&bad, 3, 3), Err(Error::Hypothesis { .. })));
        assert!(matches!(complete_power(&f, 3, 2), Err(Error::Mismatch(_))));
    }

    #[test]
    fn elimination_of_a_square() {
        let r = ring(&[1, 1, 1, 2, 3]);
        let f = p(&r, "x4^2 + x3^3 + x0^6 + x1^6 + x2^6");
        let fb = p(&r, "x3^3 + x0^6 + x1^6 + x2^6");
        assert!(jacobian_elimination_check(&f, &fb, 4).unwrap());
        let corrupted = p(&r, "x3^3 + x0^6 + x1^6 + x0^3*x2^3");
        assert!(!jacobian_elimination_check(&f, &corrupted, 4).unwrap());
        assert!(!jacobian_elimination_check(&f, &f, 4).unwrap());
    }

    #[test]
    fn tangent_spans() {
        let r1 = ring(&[1]);
        assert_eq!(tangent_space_span(&p(&r1, "x0^3")).unwrap().dim(), 1);
        let r = ring(&[1; 6]);
        let f = p(&r, "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3");
        assert_eq!(tangent_space_span(&f).unwrap().dim(), 36);
        assert!(spans_equal(&f, &f.scale(&BigRational::from_integer(7.into()))).unwrap());
        assert!(!spans_equal(&f, &(&f + &p(&r, "x0*x1*x2 + x3*x4*x5"))).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = CoordinateChange::random_linear(&r, &mut rng);
        assert!(pullback_identity(&f, &g).unwrap());
    }

    #[test]
    fn nu_truncations() {
        let r = ring(&[1, 1, 1, 2]);
        let f = p(&r, "x3^3 + (x0^4 + x1^4 + x2^4)*x3 + x0^6 + x1^6 + x2^6");
        let jac = JacobianRing::new(&f).unwrap();
        assert!(jac.is_isolated_singularity());
        let nu2 = truncate_presentation(&jac, 2).unwrap();
        assert!(nu2.relations().is_empty());
        assert_eq!(nu2.generators(), &[0, 1, 2, 3]);
        let nu4 = truncate_presentation(&jac, 4).unwrap();
        assert_eq!(nu4.relations(), &[p(&r, "3*x3^2 + x0^4 + x1^4 + x2^4")]);
        let nu1 = truncate_presentation(&jac, 1).unwrap();
        assert_eq!(nu1.generator_degrees(), vec![1, 1, 1]);
        let hf = nu4.hilbert_function(8);
        assert_eq!(&hf[..5], &jac.hilbert_function(4)[..]);
    }
}
