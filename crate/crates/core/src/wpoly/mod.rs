//! Exact weighted multivariate polynomials over the rationals.
//!
//! Variables are `x0..xn`, variable `i` has positive weight `a_i`. Monomials
//! of a fixed weighted degree are ordered lexicographically with `x0`
//! highest; [`monomials_of_degree`] lists them in descending order and every
//! graded-piece basis in the crate uses that order for its columns.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, SparseVec};

pub use parse::parse_polynomial;

/// The ambient graded ring `Q[x0..xn]` with `deg xi = weights[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedRing {
    weights: Arc<[u32]>,
}

impl WeightedRing {
    /// All weights must be positive with gcd 1.
    pub fn new(weights: &[u32]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::structural("a weighted ring needs at least one variable"));
        }
        if weights.contains(&0) {
            return Err(Error::structural("weights must be positive"));
        }
        let g = weights.iter().fold(0u32, |g, &a| g.gcd(&a));
        if g != 1 {
            return Err(Error::structural(format!(
                "weights {weights:?} have common divisor {g}; normalise to gcd 1"
            )));
        }
        Ok(WeightedRing {
            weights: weights.into(),
        })
    }

    pub fn standard(num_vars: usize) -> Self {
        WeightedRing::new(&vec![1; num_vars]).expect("unit weights are valid")
    }

    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i] as i64
    }

    pub fn max_weight(&self) -> i64 {
        self.weights.iter().copied().max().unwrap_or(1) as i64
    }

    /// `w = a_0 + ... + a_n`.
    pub fn total_weight(&self) -> i64 {
        self.weights.iter().map(|&a| a as i64).sum()
    }
}

impl fmt::Debug for WeightedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:?}", &*self.weights)
    }
}

/// Exponent vector. The derived `Ord` is plain lexicographic with `x0`
/// most significant, which is the fixed monomial order inside a degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Weighted degree without arity checking; callers guarantee lengths match.
    pub(crate) fn degree_in(&self, weights: &[u32]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &a)| e as i64 * a as i64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Whether every variable with a positive exponent lies in `active`.
    pub fn supported_on(&self, active: &[bool]) -> bool {
        self.0.iter().zip(active).all(|(&e, &a)| e == 0 || a)
    }
}

/// `sum exponents[i] * weights[i]`.
pub fn weighted_degree(m: &Monomial, ring: &WeightedRing) -> Result<i64> {
    if m.len() != ring.num_vars() {
        return Err(Error::structural(format!(
            "monomial has {} exponents but the ring has {} variables",
            m.len(),
            ring.num_vars()
        )));
    }
    Ok(m.degree_in(ring.weights()))
}

/// Every monomial of weighted degree exactly `e`, in descending monomial order.
pub fn monomials_of_degree(ring: &WeightedRing, e: i64) -> Vec<Monomial> {
    monomials_of_degree_in(ring, e, &vec![true; ring.num_vars()])
}

/// Like [`monomials_of_degree`] but only over the variables flagged in `active`.
pub fn monomials_of_degree_in(ring: &WeightedRing, e: i64, active: &[bool]) -> Vec<Monomial> {
    let mut out = Vec::new();
    if e < 0 {
        return out;
    }
    let n = ring.num_vars();
    let mut exps = vec![0u32; n];
    enumerate(ring.weights(), active, 0, e, &mut exps, &mut out);
    out
}

fn enumerate(
    weights: &[u32],
    active: &[bool],
    i: usize,
    remaining: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if i == weights.len() {
        if remaining == 0 {
            out.push(Monomial(exps.clone()));
        }
        return;
    }
    if !active[i] {
        exps[i] = 0;
        enumerate(weights, active, i + 1, remaining, exps, out);
        return;
    }
    let a = weights[i] as i64;
    let mut k = remaining / a;
    loop {
        exps[i] = k as u32;
        enumerate(weights, active, i + 1, remaining - k * a, exps, out);
        if k == 0 {
            break;
        }
        k -= 1;
    }
    exps[i] = 0;
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct WPolynomial {
    ring: WeightedRing,
    terms: BTreeMap<Monomial, BigRational>,
}

impl WPolynomial {
    pub fn zero(ring: &WeightedRing) -> Self {
        WPolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &WeightedRing, c: BigRational) -> Self {
        Self::monomial(ring, Monomial::one(ring.num_vars()), c)
    }

    pub fn var(ring: &WeightedRing, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.num_vars(), i), BigRational::one())
    }

    pub fn monomial(ring: &WeightedRing, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(ring: &WeightedRing, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            if m.len() != ring.num_vars() {
                return Err(Error::structural("monomial arity does not match the ring"));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True iff all monomials share one weighted degree (the zero polynomial counts).
    pub fn is_homogeneous(&self) -> bool {
        let w = self.ring.weights();
        let mut degs = self.terms.keys().map(|m| m.degree_in(w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The common weighted degree, or `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<i64> {
        if !self.is_homogeneous() {
            return None;
        }
        self.terms.keys().next().map(|m| m.degree_in(self.ring.weights()))
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i) > 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        WPolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.ring, BigRational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[i] -= 1;
            out.add_term(Monomial(ex), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Replaces every variable by its image under `change`.
    pub fn substitute(&self, change: &CoordinateChange) -> Self {
        let mut powers: Vec<Vec<WPolynomial>> = change
            .images
            .iter()
            .map(|img| vec![Self::constant(&self.ring, BigRational::one()), img.clone()])
            .collect();
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut prod = Self::constant(&self.ring, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &change.images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
            }
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Drops every term divisible by some `x_i`, `i` in `vars`; the result
    /// stays in the same ring.
    pub fn restrict_to_zero_locus(&self, vars: &[usize]) -> Self {
        WPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&i| m.exponent(i) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Is `self = lambda * other` for some nonzero rational `lambda`?
    pub fn proportionality(&self, other: &WPolynomial) -> Option<BigRational> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = self.terms.iter().next()?;
        let lambda = c0 / other.terms.get(m0)?;
        for (m, c) in &self.terms {
            match other.terms.get(m) {
                Some(k) if &(k * &lambda) == c => {}
                _ => return None,
            }
        }
        Some(lambda)
    }

    /// Coefficients as a dense integer row over `basis`, scaled by the lcm of
    /// the denominators. Returns the row and the scale.
    pub(crate) fn to_sparse_row(
        &self,
        index: &std::collections::HashMap<Monomial, usize>,
    ) -> Result<(SparseVec, BigInt)> {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut entries = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let col = *index.get(m).ok_or_else(|| {
                Error::structural("polynomial has a monomial outside the requested graded piece")
            })?;
            entries.push((col, c.numer() * (&den / c.denom())));
        }
        Ok((SparseVec::from_unsorted(entries), den))
    }
}

impl fmt::Debug for WPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WPolynomial {
    /// Writes in the text grammar accepted by [`parse_polynomial`]; terms
    /// by descending degree then descending monomial order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let w = self.ring.weights();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.degree_in(w).cmp(&a.degree_in(w)).then_with(|| b.cmp(a))
        });
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a WPolynomial> for &'a WPolynomial {
    type Output = WPolynomial;
    fn add(self, rhs: &WPolynomial) -> WPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a WPolynomial> for &'a WPolynomial {
    type Output = WPolynomial;
    fn sub(self, rhs: &WPolynomial) -> WPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a WPolynomial> for &'a WPolynomial {
    type Output = WPolynomial;
    fn mul(self, rhs: &WPolynomial) -> WPolynomial {
        let mut out = WPolynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &WPolynomial {
    type Output = WPolynomial;
    fn neg(self) -> WPolynomial {
        self.scale(&-BigRational::one())
    }
}

/// A graded ring endomorphism `x_i -> images[i]`, each image homogeneous of
/// weight `a_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateChange {
    ring: WeightedRing,
    images: Vec<WPolynomial>,
}

impl CoordinateChange {
    pub fn new(ring: &WeightedRing, images: Vec<WPolynomial>) -> Result<Self> {
        if images.len() != ring.num_vars() {
            return Err(Error::structural(format!(
                "coordinate change needs {} images, got {}",
                ring.num_vars(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.ring() != ring {
                return Err(Error::structural("image lives in a different ring"));
            }
            if img.is_zero() || img.degree() != Some(ring.weight(i)) {
                return Err(Error::structural(format!(
                    "image of x{i} must be homogeneous of degree {}",
                    ring.weight(i)
                )));
            }
        }
        Ok(CoordinateChange {
            ring: ring.clone(),
            images,
        })
    }

    pub fn identity(ring: &WeightedRing) -> Self {
        CoordinateChange {
            ring: ring.clone(),
            images: (0..ring.num_vars()).map(|i| WPolynomial::var(ring, i)).collect(),
        }
    }

    /// Identity except `x_i -> image`.
    pub fn single(ring: &WeightedRing, i: usize, image: WPolynomial) -> Result<Self> {
        let mut images: Vec<_> = (0..ring.num_vars()).map(|k| WPolynomial::var(ring, k)).collect();
        images[i] = image;
        Self::new(ring, images)
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn images(&self) -> &[WPolynomial] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, img)| *img == WPolynomial::var(&self.ring, i))
    }

    /// `p.substitute(&a.then(&b)) == p.substitute(&a).substitute(&b)`.
    pub fn then(&self, next: &CoordinateChange) -> CoordinateChange {
        CoordinateChange {
            ring: self.ring.clone(),
            images: self.images.iter().map(|img| img.substitute(next)).collect(),
        }
    }

    /// The change is an automorphism iff it is bijective on every graded
    /// piece of degree at most `max a_i` (these pieces contain the generators).
    pub fn is_invertible(&self) -> bool {
        for e in 1..=self.ring.max_weight() {
            let basis = monomials_of_degree(&self.ring, e);
            if basis.is_empty() {
                continue;
            }
            let index: std::collections::HashMap<_, _> =
                basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
            let mut ech = EchelonBasis::new(basis.len());
            for m in &basis {
                let img = WPolynomial::monomial(&self.ring, m.clone(), BigRational::one())
                    .substitute(self);
                let (row, _) = img.to_sparse_row(&index).expect("images are homogeneous");
                ech.insert(row);
            }
            if ech.rank() != basis.len() {
                return false;
            }
        }
        true
    }

    /// Random automorphism: within each weight class a permutation, nonzero
    /// scalings and one elementary shear; every variable of weight above one
    /// may also pick up a monomial in strictly lighter variables.
    pub fn random<R: Rng + ?Sized>(ring: &WeightedRing, rng: &mut R) -> Self {
        Self::random_with(ring, rng, true)
    }

    /// Random automorphism that is linear and preserves each weight class.
    pub fn random_linear<R: Rng + ?Sized>(ring: &WeightedRing, rng: &mut R) -> Self {
        Self::random_with(ring, rng, false)
    }

    fn random_with<R: Rng + ?Sized>(ring: &WeightedRing, rng: &mut R, nonlinear: bool) -> Self {
        let n = ring.num_vars();
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &a) in ring.weights().iter().enumerate() {
            classes.entry(a).or_default().push(i);
        }
        let small = |rng: &mut R| -> BigRational {
            let v: i64 = loop {
                let v = rng.gen_range(-3i64..=3);
                if v != 0 {
                    break v;
                }
            };
            BigRational::from_integer(v.into())
        };
        let mut images: Vec<WPolynomial> = (0..n).map(|i| WPolynomial::var(ring, i)).collect();
        for (&a, members) in &classes {
            // permutation and scaling
            let mut perm = members.clone();
            for k in (1..perm.len()).rev() {
                let j = rng.gen_range(0..=k);
                perm.swap(k, j);
            }
            for (&src, &dst) in members.iter().zip(&perm) {
                images[src] = WPolynomial::var(ring, dst).scale(&small(rng));
            }
            if members.len() >= 2 {
                let i = members[rng.gen_range(0..members.len())];
                let j = loop {
                    let j = members[rng.gen_range(0..members.len())];
                    if j != i {
                        break j;
                    }
                };
                // shear by the permuted image so the change stays triangular
                let shear = images[j].scale(&small(rng));
                images[i] = &images[i] + &shear;
            }
            if nonlinear && a > 1 {
                let lighter: Vec<bool> = ring.weights().iter().map(|&b| b < a).collect();
                let candidates = monomials_of_degree_in(ring, a as i64, &lighter);
                for &i in members {
                    if !candidates.is_empty() && rng.gen_bool(0.5) {
                        let m = candidates[rng.gen_range(0..candidates.len())].clone();
                        images[i] = &images[i] + &WPolynomial::monomial(ring, m, small(rng));
                    }
                }
            }
        }
        CoordinateChange {
            ring: ring.clone(),
            images,
        }
    }
}

impl fmt::Display for CoordinateChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| format!("x{i} -> {img}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `n / d` as an exact rational.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
