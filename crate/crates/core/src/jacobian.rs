//! The graded Milnor algebra `Jac(w) = Q[x]/(dw/dx_0, ..., dw/dx_n)`.
//!
//! Pieces are built in increasing degree. Since `Q[x]_e = sum_i x_i Q[x]_{e-a_i}`
//! with kernel spanned by the Koszul relations `x_j e_i - x_i e_j`, the piece
//! `Jac_e` is the quotient of `V = sum_i x_i Jac_{e-a_i}` by the images of
//! those relations and of the partials of degree `e`. The columns of `V` are
//! ordered by the monomial `x_i m` they stand for (descending, ties by `i`);
//! the free columns of the reduced echelon form of the relations are then
//! exactly the monomials that are not leading terms of the degree-`e` part
//! of the Jacobian ideal, and they form the coset basis. Matrices stay of
//! size about `(n+1) dim Jac` rather than `dim Q[x]_e`.
//!
//! A Jacobian ring may live on a subset of the variables (the fixed locus of
//! a sector). Inactive variables are simply absent from every basis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{exact_span, integer_row, rank_of, EchelonBasis, SparseVec};
use crate::wpoly::{monomials_of_degree_in, weighted_degree, Monomial, WPolynomial, WeightedRing};

/// Sparse coordinates over a coset basis, ascending by position.
pub type CosetVector = Vec<(usize, BigRational)>;

/// `num / den` over a coset basis; `den > 0` and the fraction is in lowest
/// terms.
struct Scaled {
    num: SparseVec,
    den: BigInt,
}

impl Scaled {
    fn to_coset_vector(&self) -> CosetVector {
        self.num.to_rationals(&self.den)
    }
}

/// Integer multiple of `sum scalar * x_i * v` as a row over the presentation
/// columns of a piece.
fn presented_row(
    column_of: &HashMap<(usize, usize), usize>,
    terms: &[(usize, &Scaled, &BigRational)],
) -> (SparseVec, BigInt) {
    let mut den = BigInt::one();
    for (_, v, q) in terms {
        den = den.lcm(&(q.denom() * &v.den));
    }
    let mut entries = Vec::new();
    for (i, v, q) in terms {
        let factor = q.numer() * (&den / (q.denom() * &v.den));
        entries.extend(v.num.entries().iter().map(|(k, x)| (column_of[&(*i, *k)], &factor * x)));
    }
    (SparseVec::from_unsorted(entries), den)
}

/// One graded piece `Jac_e` with its presentation as a quotient of
/// `sum_i x_i Jac_{e-a_i}`.
pub struct GradedPiece {
    degree: i64,
    coset: Vec<Monomial>,
    coset_position: HashMap<Monomial, usize>,
    /// Column `c` of the presentation is `x_i` times coset element `k` of
    /// `Jac_{e-a_i}`, stored as `(i, k)`.
    column_of: HashMap<(usize, usize), usize>,
    relations: EchelonBasis,
    free_position: HashMap<usize, usize>,
    normal_forms: Mutex<HashMap<Monomial, Arc<Scaled>>>,
}

impl GradedPiece {
    fn empty(degree: i64) -> Self {
        GradedPiece::new(degree, Vec::new(), HashMap::new(), EchelonBasis::new(0))
    }

    fn new(
        degree: i64,
        columns: Vec<Monomial>,
        column_of: HashMap<(usize, usize), usize>,
        relations: EchelonBasis,
    ) -> Self {
        let free = relations.free_columns();
        let free_position = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let coset: Vec<Monomial> = free.iter().map(|&c| columns[c].clone()).collect();
        let coset_position = coset.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        GradedPiece {
            degree,
            coset,
            coset_position,
            column_of,
            relations,
            free_position,
            normal_forms: Mutex::new(HashMap::new()),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coset.len()
    }

    /// Monomials whose classes form the basis of `Jac_e`, descending.
    pub fn coset_basis(&self) -> &[Monomial] {
        &self.coset
    }

    pub fn coset_monomial(&self, k: usize) -> &Monomial {
        &self.coset[k]
    }

    /// Rank of the relations among the generators `x_i Jac_{e-a_i}`.
    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// Reduces `row / den` over the presentation columns to coset coordinates.
    fn reduce_presented(&self, row: &SparseVec, den: &BigInt) -> Scaled {
        let (nf, den) = self.relations.normal_form(row, den);
        // free columns map to positions monotonically
        let num = SparseVec::from_unsorted(
            nf.entries().iter().map(|(c, x)| (self.free_position[c], x.clone())).collect(),
        );
        Scaled { num, den }
    }
}

pub struct JacobianRing {
    ring: WeightedRing,
    omega: WPolynomial,
    degree: i64,
    active: Vec<bool>,
    partials: Vec<WPolynomial>,
    pieces: RwLock<HashMap<i64, Arc<GradedPiece>>>,
    isolated: OnceLock<bool>,
}

impl std::fmt::Debug for JacobianRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JacobianRing")
            .field("ring", &self.ring)
            .field("omega", &self.omega)
            .field("degree", &self.degree)
            .field("active", &self.active)
            .finish()
    }
}

impl JacobianRing {
    /// `omega` must be a nonzero weighted-homogeneous polynomial.
    pub fn new(omega: &WPolynomial) -> Result<Self> {
        let degree = omega.degree().ok_or_else(|| {
            Error::structural("the Jacobian ring needs a nonzero weighted-homogeneous polynomial")
        })?;
        Ok(Self::build(omega.clone(), degree, vec![true; omega.ring().num_vars()]))
    }

    /// Jacobian ring of `omega` restricted to the coordinate subspace spanned
    /// by the `active` variables; `degree` is the ambient degree `d` (the
    /// restriction may be zero).
    pub fn on_locus(omega: &WPolynomial, degree: i64, active: Vec<bool>) -> Result<Self> {
        if active.len() != omega.ring().num_vars() {
            return Err(Error::structural("active mask has the wrong length"));
        }
        let dead: Vec<usize> = (0..active.len()).filter(|&i| !active[i]).collect();
        let restricted = omega.restrict_to_zero_locus(&dead);
        if !restricted.is_zero() && restricted.degree() != Some(degree) {
            return Err(Error::structural("restriction is not homogeneous of the stated degree"));
        }
        Ok(Self::build(restricted, degree, active))
    }

    fn build(omega: WPolynomial, degree: i64, active: Vec<bool>) -> Self {
        let partials = (0..omega.ring().num_vars())
            .map(|i| omega.partial_derivative(i))
            .collect();
        JacobianRing {
            ring: omega.ring().clone(),
            omega,
            degree,
            active,
            partials,
            pieces: RwLock::new(HashMap::new()),
            isolated: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn omega(&self) -> &WPolynomial {
        &self.omega
    }

    /// The degree `d` of `omega`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn partials(&self) -> &[WPolynomial] {
        &self.partials
    }

    fn active_weights(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.ring.num_vars())
            .filter(|&i| self.active[i])
            .map(|i| self.ring.weight(i))
    }

    fn max_active_weight(&self) -> i64 {
        self.active_weights().max().unwrap_or(1)
    }

    /// `sigma = sum (d - 2 a_i)` over the active variables; the top degree of
    /// `Jac` whenever the singularity is isolated.
    pub fn expected_socle_degree(&self) -> i64 {
        self.active_weights().map(|a| self.degree - 2 * a).sum()
    }

    /// The graded piece in degree `e`, computed on first use.
    pub fn piece(&self, e: i64) -> Arc<GradedPiece> {
        if let Some(p) = self.pieces.read().unwrap().get(&e) {
            return p.clone();
        }
        let p = Arc::new(self.compute_piece(e));
        // Concurrent writers compute identical pieces; keep whichever landed first.
        self.pieces
            .write()
            .unwrap()
            .entry(e)
            .or_insert(p)
            .clone()
    }

    /// Computes pieces for all of `degrees`, lowest first; each piece is
    /// built from the pieces below it.
    pub fn prefill(&self, degrees: impl IntoIterator<Item = i64>) {
        let mut todo: Vec<i64> = degrees.into_iter().collect();
        todo.sort_unstable();
        for e in todo {
            self.piece(e);
        }
    }

    fn active_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ring.num_vars()).filter(|&i| self.active[i])
    }

    fn compute_piece(&self, e: i64) -> GradedPiece {
        if e < 0 {
            return GradedPiece::empty(e);
        }
        let n = self.ring.num_vars();
        if e == 0 {
            // a nonzero constant partial kills everything
            let unit = self.active_vars().any(|i| self.degree == self.ring.weight(i) && !self.partials[i].is_zero());
            let columns = vec![Monomial::one(n)];
            let relations = if unit {
                EchelonBasis::identity(1)
            } else {
                EchelonBasis::new(1)
            };
            return GradedPiece::new(0, columns, HashMap::new(), relations);
        }
        let mut generators: Vec<(Monomial, usize, usize)> = Vec::new();
        for i in self.active_vars() {
            let low = self.piece(e - self.ring.weight(i));
            let xi = Monomial::var(n, i);
            for (k, c) in low.coset_basis().iter().enumerate() {
                generators.push((c.mul(&xi), i, k));
            }
        }
        generators.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let column_of: HashMap<(usize, usize), usize> = generators
            .iter()
            .enumerate()
            .map(|(c, g)| ((g.1, g.2), c))
            .collect();
        let columns: Vec<Monomial> = generators.into_iter().map(|g| g.0).collect();
        let one = BigRational::one();
        let minus_one = -BigRational::one();
        let mut rows: Vec<SparseVec> = Vec::new();
        let vars: Vec<usize> = self.active_vars().collect();
        for (p, &i) in vars.iter().enumerate() {
            for &j in &vars[p + 1..] {
                let (ai, aj) = (self.ring.weight(i), self.ring.weight(j));
                let low = self.piece(e - ai - aj);
                let (xi, xj) = (Monomial::var(n, i), Monomial::var(n, j));
                for c in low.coset_basis() {
                    let a = self.scaled_form(e - ai, &c.mul(&xj));
                    let b = self.scaled_form(e - aj, &c.mul(&xi));
                    rows.push(presented_row(&column_of, &[(i, &a, &one), (j, &b, &minus_one)]).0);
                }
            }
        }
        for &i in &vars {
            let partial = &self.partials[i];
            if partial.is_zero() || self.degree - self.ring.weight(i) != e {
                continue;
            }
            let mut parts = Vec::new();
            for (m, coef) in partial.terms() {
                let v = vars.iter().copied().find(|&v| m.exponent(v) > 0).expect("positive degree");
                let rest = m.div(&Monomial::var(n, v)).expect("divisible");
                parts.push((v, self.scaled_form(e - self.ring.weight(v), &rest), coef));
            }
            let terms: Vec<_> = parts.iter().map(|(v, s, q)| (*v, &**s, *q)).collect();
            rows.push(presented_row(&column_of, &terms).0);
        }
        rows.retain(|r| !r.is_zero());
        rows.sort_by_key(|r| r.len());
        let relations = exact_span(&rows, columns.len());
        GradedPiece::new(e, columns, column_of, relations)
    }

    /// Coordinates over the coset basis of `Jac_e` of the class of a monomial
    /// of degree `e` in the active variables.
    fn normal_form(&self, e: i64, m: &Monomial) -> Arc<CosetVector> {
        Arc::new(self.scaled_form(e, m).to_coset_vector())
    }

    fn scaled_form(&self, e: i64, m: &Monomial) -> Arc<Scaled> {
        let piece = self.piece(e);
        if let Some(&k) = piece.coset_position.get(m) {
            return Arc::new(Scaled {
                num: SparseVec::unit(k),
                den: BigInt::one(),
            });
        }
        if piece.dim() == 0 || e == 0 {
            return Arc::new(Scaled {
                num: SparseVec::new(),
                den: BigInt::one(),
            });
        }
        if let Some(v) = piece.normal_forms.lock().unwrap().get(m) {
            return v.clone();
        }
        let n = self.ring.num_vars();
        let v = self.active_vars().find(|&v| m.exponent(v) > 0).expect("positive degree");
        let rest = m.div(&Monomial::var(n, v)).expect("divisible");
        let low = self.scaled_form(e - self.ring.weight(v), &rest);
        let (row, den) = presented_row(&piece.column_of, &[(v, &low, &BigRational::one())]);
        let out = Arc::new(piece.reduce_presented(&row, &den));
        piece.normal_forms.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    /// Coordinates of the class of the monomial `m` over the coset basis of
    /// its degree.
    pub fn reduce_monomial(&self, m: &Monomial) -> Result<Arc<CosetVector>> {
        if m.len() != self.ring.num_vars() || !m.supported_on(&self.active) {
            return Err(Error::structural("monomial is not in this Jacobian ring"));
        }
        Ok(self.normal_form(weighted_degree(m, &self.ring)?, m))
    }

    /// Rank of the degree-`e` part of the Jacobian ideal inside `Q[x]_e`.
    pub fn ideal_piece_rank(&self, e: i64) -> usize {
        if e < 0 {
            return 0;
        }
        monomials_of_degree_in(&self.ring, e, &self.active).len() - self.piece(e).dim()
    }

    /// `dim Jac_e`.
    pub fn dimension(&self, e: i64) -> usize {
        if e < 0 {
            return 0;
        }
        if e > self.expected_socle_degree() && self.isolated.get() == Some(&true) {
            return 0;
        }
        self.piece(e).dim()
    }

    /// `dim Jac_e` for `e = 0..=top`.
    pub fn hilbert_function(&self, top: i64) -> Vec<usize> {
        self.prefill(0..=top);
        (0..=top).map(|e| self.dimension(e)).collect()
    }

    /// First degree in the window `(sigma, sigma + max a_i]` where `Jac` does
    /// not vanish, or `None` when the whole window vanishes.
    pub fn first_nonvanishing_in_window(&self) -> Option<i64> {
        let sigma = self.expected_socle_degree();
        let window = (sigma + 1).max(0)..=sigma + self.max_active_weight();
        self.prefill(window.clone());
        window.into_iter().find(|&e| self.piece(e).dim() > 0)
    }

    /// Vanishing on a window of length `max a_i` above `sigma` propagates to
    /// every higher degree, so this certifies `dim Jac < infinity`.
    pub fn is_isolated_singularity(&self) -> bool {
        *self
            .isolated
            .get_or_init(|| self.first_nonvanishing_in_window().is_none())
    }

    /// Errors with the witnessing window degree unless the singularity is isolated.
    pub fn require_isolated(&self) -> Result<()> {
        if self.is_isolated_singularity() {
            return Ok(());
        }
        let degree = self.first_nonvanishing_in_window();
        Err(Error::hypothesis(
            format!(
                "{} does not have an isolated singularity at the origin: Jac is nonzero above the socle degree {}",
                self.omega,
                self.expected_socle_degree()
            ),
            degree,
        ))
    }

    /// Top nonzero degree `sigma`, checked to be one-dimensional.
    pub fn socle_degree(&self) -> Result<i64> {
        self.require_isolated()?;
        let sigma = self.expected_socle_degree();
        let top = self.dimension(sigma);
        if top != 1 {
            return Err(Error::Inconsistent(format!(
                "Jac in the socle degree {sigma} has dimension {top}, expected 1"
            )));
        }
        Ok(sigma)
    }

    /// `prod (d - a_i) / a_i` over the active variables.
    pub fn milnor_product_formula(&self) -> BigRational {
        self.active_weights()
            .map(|a| BigRational::new((self.degree - a).into(), a.into()))
            .fold(BigRational::one(), |acc, q| acc * q)
    }

    /// Total dimension of `Jac`, cross-checked against the product formula.
    pub fn milnor_number(&self) -> Result<u64> {
        let sigma = self.socle_degree()?;
        let total: u64 = self.hilbert_function(sigma).iter().map(|&d| d as u64).sum();
        let expected = self.milnor_product_formula();
        if BigRational::from_integer(total.into()) != expected {
            return Err(Error::Inconsistent(format!(
                "sum of graded dimensions is {total} but the product formula gives {expected}"
            )));
        }
        Ok(total)
    }

    /// Coordinates of the class of a homogeneous polynomial over the coset
    /// basis of its degree. The zero polynomial maps to the empty vector.
    pub fn reduce(&self, p: &WPolynomial) -> Result<CosetVector> {
        if p.is_zero() {
            return Ok(Vec::new());
        }
        let e = p
            .degree()
            .ok_or_else(|| Error::structural("cannot reduce an inhomogeneous polynomial"))?;
        self.reduce_in(p, e)
    }

    pub fn reduce_in(&self, p: &WPolynomial, e: i64) -> Result<CosetVector> {
        if p.is_zero() {
            return Ok(Vec::new());
        }
        if e < 0 || p.degree() != Some(e) {
            return Err(Error::structural(format!("polynomial is not homogeneous of degree {e}")));
        }
        let mut acc: HashMap<usize, BigRational> = HashMap::new();
        for (m, c) in p.terms() {
            if !m.supported_on(&self.active) {
                return Err(Error::structural("polynomial involves variables off the locus"));
            }
            for (k, q) in self.normal_form(e, m).iter() {
                *acc.entry(*k).or_insert_with(BigRational::zero) += q * c;
            }
        }
        let mut out: CosetVector = acc.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// Dense version of [`reduce`](Self::reduce) over the full coset basis.
    pub fn reduce_dense(&self, p: &WPolynomial, e: i64) -> Result<Vec<BigRational>> {
        let piece = self.piece(e.max(0));
        let mut out = vec![BigRational::zero(); if e < 0 { 0 } else { piece.dim() }];
        for (k, q) in self.reduce_in(p, e)? {
            out[k] = q;
        }
        Ok(out)
    }

    /// Lift of a coset vector to a polynomial in the coset monomials.
    pub fn lift(&self, e: i64, v: &CosetVector) -> WPolynomial {
        let piece = self.piece(e);
        let mut p = WPolynomial::zero(&self.ring);
        for (k, q) in v {
            p.add_term(piece.coset_monomial(*k).clone(), q.clone());
        }
        p
    }

    /// Structure constants of `Jac_e1 x Jac_e2 -> Jac_{e1+e2}`.
    pub fn multiplication_tensor(&self, e1: i64, e2: i64) -> MultiplicationTensor {
        let (p1, p2) = (self.piece(e1.max(0)), self.piece(e2.max(0)));
        let (n1, n2) = (self.dimension(e1), self.dimension(e2));
        let target_dim = self.dimension(e1 + e2);
        let mut products = Vec::with_capacity(n1 * n2);
        if target_dim == 0 {
            products.resize(n1 * n2, Vec::new());
        } else {
            for i in 0..n1 {
                for j in 0..n2 {
                    let m = p1.coset_monomial(i).mul(p2.coset_monomial(j));
                    products.push((*self.normal_form(e1 + e2, &m)).clone());
                }
            }
        }
        MultiplicationTensor {
            degrees: (e1, e2),
            dims: (n1, n2, target_dim),
            products,
        }
    }

    /// Whether `Jac_{it}` is spanned by `i`-fold products from `Jac_t` for
    /// every `i` with `it <= cap`.
    pub fn generated_in_degree(&self, t: i64, cap: i64) -> bool {
        assert!(t > 0 && cap >= t, "need t > 0 and cap >= t");
        let mut i = 2;
        while i * t <= cap {
            if !self.products_span(t, (i - 1) * t) {
                return false;
            }
            i += 1;
        }
        true
    }

    /// Does `Jac_a * Jac_b` span `Jac_{a+b}`?
    pub fn products_span(&self, a: i64, b: i64) -> bool {
        let target_dim = self.dimension(a + b);
        if target_dim == 0 {
            return true;
        }
        let (pa, pb) = (self.piece(a), self.piece(b));
        let rows = (0..pa.dim()).flat_map(|i| {
            let (pa, pb) = (pa.clone(), pb.clone());
            (0..pb.dim()).map(move |j| {
                let m = pa.coset_monomial(i).mul(pb.coset_monomial(j));
                self.scaled_form(a + b, &m).num.clone()
            })
        });
        rank_of(target_dim, rows) == target_dim
    }
}

/// `T[i][j]` is the product of coset basis element `i` of `Jac_e1` with
/// element `j` of `Jac_e2`, written in the coset basis of `Jac_{e1+e2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicationTensor {
    degrees: (i64, i64),
    dims: (usize, usize, usize),
    products: Vec<CosetVector>,
}

impl MultiplicationTensor {
    pub fn source_degrees(&self) -> (i64, i64) {
        self.degrees
    }

    pub fn target_degree(&self) -> i64 {
        self.degrees.0 + self.degrees.1
    }

    /// `(dim Jac_e1, dim Jac_e2, dim Jac_{e1+e2})`.
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn product(&self, i: usize, j: usize) -> &CosetVector {
        &self.products[i * self.dims.1 + j]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> BigRational {
        self.product(i, j)
            .iter()
            .find(|e| e.0 == k)
            .map(|e| e.1.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.products.iter().all(|v| v.is_empty())
    }

    /// Bilinear evaluation on dense coordinate vectors.
    pub fn apply(&self, u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dims.2];
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let c = ui * vj;
                for (k, q) in self.product(i, j) {
                    out[*k] += &c * q;
                }
            }
        }
        out
    }

    /// Rows `T[i][*][*]` contracted with `u`: the matrix of `v -> T(u, v)`.
    pub fn left_action(&self, u: &[BigRational]) -> Vec<CosetVector> {
        (0..self.dims.1)
            .map(|j| {
                let mut acc: Vec<BigRational> = vec![BigRational::zero(); self.dims.2];
                for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (k, q) in self.product(i, j) {
                        acc[*k] += ui * q;
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .collect()
            })
            .collect()
    }

    /// Rank of the flattening `Jac_e1 (x) Jac_e2 -> Jac_{e1+e2}`.
    pub fn flattened_rank(&self) -> usize {
        rank_of(
            self.dims.2,
            self.products.iter().filter(|v| !v.is_empty()).map(|v| integer_row(v).0),
        )
    }
}
