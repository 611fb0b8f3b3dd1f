//! Fraction-free sparse row echelon forms over the integers.
//!
//! Rows are kept primitive (content 1, positive leading entry). Eliminating
//! an entry `t` against a pivot row with leading entry `l` replaces the row by
//! `(l/g)*row - (t/g)*pivot` with `g = gcd(l, t)`, so no rational arithmetic
//! happens inside the elimination. Rational vectors are carried as an integer
//! numerator vector plus a common denominator.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub mod multimodular;

pub use multimodular::exact_span;

const NO_PIVOT: u32 = u32::MAX;

/// Sparse integer vector, entries sorted by column, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, BigInt)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// Sorts, merges duplicate columns and drops zeros.
    pub fn from_unsorted(mut entries: Vec<(usize, BigInt)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn unit(col: usize) -> Self {
        SparseVec {
            entries: vec![(col, BigInt::one())],
        }
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn get(&self, col: usize) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, v) in &self.entries {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading entry positive.
    pub fn make_primitive(&mut self) {
        if self.entries.is_empty() {
            return;
        }
        let mut g = self.content();
        if self.entries[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, v) in &mut self.entries {
                *v /= &g;
            }
        }
    }

    /// `a*self - b*other`, where entries of `self` before index `from` are
    /// known not to meet `other`'s support.
    fn combine(&self, a: &BigInt, b: &BigInt, other: &SparseVec, from: usize) -> SparseVec {
        let unit_a = a.is_one();
        let scale = |v: &BigInt| if unit_a { v.clone() } else { v * a };
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        out.extend(self.entries[..from].iter().map(|(c, v)| (*c, scale(v))));
        let (mut i, mut j) = (from, 0);
        let (x, y) = (&self.entries, &other.entries);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push((x[i].0, scale(&x[i].1)));
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            } else {
                let v = scale(&x[i].1) - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    /// Exact rational entries `numerator / den`.
    pub fn to_rationals(&self, den: &BigInt) -> Vec<(usize, BigRational)> {
        self.entries
            .iter()
            .map(|(c, v)| (*c, BigRational::new(v.clone(), den.clone())))
            .collect()
    }
}

/// Incrementally built reduced row echelon basis of a subspace of `Q^ncols`,
/// with primitive integer rows.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot: Vec<u32>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis {
            ncols,
            rows: Vec::new(),
            pivot: vec![NO_PIVOT; ncols],
        }
    }

    /// The whole of `Q^ncols`.
    pub fn identity(ncols: usize) -> Self {
        EchelonBasis {
            ncols,
            rows: (0..ncols).map(SparseVec::unit).collect(),
            pivot: (0..ncols as u32).collect(),
        }
    }

    /// Rows already in reduced echelon form: primitive, distinct leading
    /// columns, zero in every other row's leading column.
    pub(crate) fn from_reduced_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        let mut pivot = vec![NO_PIVOT; ncols];
        for (k, r) in rows.iter().enumerate() {
            let lead = r.lead().expect("nonzero row");
            debug_assert_eq!(pivot[lead], NO_PIVOT);
            pivot[lead] = k as u32;
        }
        EchelonBasis { ncols, rows, pivot }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot[col] != NO_PIVOT
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Reduces `v` (representing `v / den`) until no entry sits in a pivot
    /// column. Returns the scale factor applied to `v`.
    fn reduce_scaled(&self, v: &mut SparseVec) -> BigInt {
        let mut scale = BigInt::one();
        let mut pos = 0;
        let mut steps = 0u32;
        while pos < v.entries.len() {
            let col = v.entries[pos].0;
            let r = self.pivot[col];
            if r == NO_PIVOT {
                pos += 1;
                continue;
            }
            let prow = &self.rows[r as usize];
            let l = &prow.entries[0].1;
            let t = &v.entries[pos].1;
            let g = l.gcd(t);
            let (a, b) = (l / &g, t / &g);
            *v = v.combine(&a, &b, prow, pos);
            scale *= a;
            steps += 1;
            if steps.is_multiple_of(16) {
                let c = v.content();
                if !c.is_one() && !c.is_zero() {
                    let g2 = c.gcd(&scale);
                    if !g2.is_one() {
                        for (_, x) in &mut v.entries {
                            *x /= &g2;
                        }
                        scale /= &g2;
                    }
                }
            }
        }
        scale
    }

    /// Adds `row` to the span. Returns the new pivot column if the rank grew.
    ///
    /// Rows stay fully reduced: each pivot column is zero in every other row.
    pub fn insert(&mut self, mut row: SparseVec) -> Option<usize> {
        if self.is_full() {
            return None;
        }
        self.reduce_scaled(&mut row);
        let lead = row.lead()?;
        row.make_primitive();
        let l = &row.entries[0].1;
        for other in &mut self.rows {
            let Ok(pos) = other.entries.binary_search_by_key(&lead, |e| e.0) else {
                continue;
            };
            let t = &other.entries[pos].1;
            let g = l.gcd(t);
            let (a, b) = (l / &g, t / &g);
            *other = other.combine(&a, &b, &row, pos);
            other.make_primitive();
        }
        self.pivot[lead] = self.rows.len() as u32;
        self.rows.push(row);
        Some(lead)
    }

    pub fn contains(&self, row: &SparseVec) -> bool {
        let mut v = row.clone();
        self.reduce_scaled(&mut v);
        v.is_zero()
    }

    /// Unique representative of `v / den` modulo the span supported on free
    /// columns, as `(numerator, denominator)` in lowest terms.
    pub fn normal_form(&self, v: &SparseVec, den: &BigInt) -> (SparseVec, BigInt) {
        // rows are reduced, so one combined subtraction clears every pivot
        let hits: Vec<(&SparseVec, &BigInt)> = v
            .entries
            .iter()
            .filter(|(c, _)| self.pivot[*c] != NO_PIVOT)
            .map(|(c, t)| (&self.rows[self.pivot[*c] as usize], t))
            .collect();
        if hits.is_empty() {
            return normalized(v.clone(), den.clone());
        }
        let mut scale = BigInt::one();
        for (row, t) in &hits {
            let l = &row.entries[0].1;
            scale = scale.lcm(&(l / l.gcd(t)));
        }
        let mut acc: BTreeMap<usize, BigInt> = v
            .entries
            .iter()
            .filter(|(c, _)| self.pivot[*c] == NO_PIVOT)
            .map(|(c, x)| (*c, x * &scale))
            .collect();
        for (row, t) in &hits {
            let factor = &scale * *t / &row.entries[0].1;
            for (c, x) in &row.entries[1..] {
                *acc.entry(*c).or_default() -= &factor * x;
            }
        }
        let out = SparseVec {
            entries: acc.into_iter().filter(|(_, x)| !x.is_zero()).collect(),
        };
        normalized(out, den * scale)
    }
}

/// `v / den` in lowest terms with a positive denominator; zero is `0 / 1`.
fn normalized(mut out: SparseVec, mut den: BigInt) -> (SparseVec, BigInt) {
    if out.is_zero() {
        return (out, BigInt::one());
    }
    let g = out.content().gcd(&den);
    if !g.is_one() {
        for (_, x) in &mut out.entries {
            *x /= &g;
        }
        den /= &g;
    }
    if den.is_negative() {
        den = -den;
        for (_, x) in &mut out.entries {
            *x = -&*x;
        }
    }
    (out, den)
}

/// Rank of the span of `rows`, stopping early once it is full.
pub fn rank_of<I: IntoIterator<Item = SparseVec>>(ncols: usize, rows: I) -> usize {
    let mut ech = EchelonBasis::new(ncols);
    for r in rows {
        ech.insert(r);
        if ech.is_full() {
            break;
        }
    }
    ech.rank()
}

/// Integer row from rationals: numerators over the lcm of the denominators.
pub fn integer_row(entries: &[(usize, BigRational)]) -> (SparseVec, BigInt) {
    let mut den = BigInt::one();
    for (_, c) in entries {
        den = den.lcm(c.denom());
    }
    let row = entries
        .iter()
        .map(|(k, c)| (*k, c.numer() * (&den / c.denom())))
        .collect();
    (SparseVec::from_unsorted(row), den)
}

/// Arithmetic in `F_p`, `p = 2^61 - 1`.
pub mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    pub const P: u64 = (1 << 61) - 1;

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64) -> u64 {
        debug_assert!(a != 0);
        pow(a, P - 2)
    }

    fn of_int(n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below p")
    }

    /// `None` when `p` divides the denominator.
    pub fn of_rational(q: &BigRational) -> Option<u64> {
        let den = of_int(q.denom());
        (den != 0).then(|| mul(of_int(q.numer()), inv(den)))
    }

    /// Rank of a dense matrix over `F_p`; rows are consumed.
    pub fn rank(mut rows: Vec<Vec<u64>>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let scale = inv(rows[rank][col]);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            for row in tail.iter_mut() {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                let f = mul(f, scale);
                for (x, &y) in row[col..].iter_mut().zip(&prow[col..]) {
                    *x = sub(*x, mul(f, y));
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseVec {
        SparseVec::from_unsorted(
            v.iter()
                .enumerate()
                .map(|(c, &x)| (c, BigInt::from(x)))
                .collect(),
        )
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank_of(3, vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]), 2);
        assert_eq!(rank_of(2, vec![row(&[0, 0])]), 0);
        assert_eq!(rank_of(3, vec![row(&[2, 0, 0]), row(&[0, 3, 0]), row(&[0, 0, 5])]), 3);
    }

    #[test]
    fn normal_form_is_unique_representative() {
        let mut e = EchelonBasis::new(3);
        e.insert(row(&[2, 1, 0]));
        e.insert(row(&[0, 3, 1]));
        // e0 = -1/2 e1 = 1/6 e2 modulo the span
        let (nf, den) = e.normal_form(&row(&[1, 0, 0]), &BigInt::one());
        assert_eq!(nf.entries(), &[(2, BigInt::from(1))]);
        assert_eq!(den, BigInt::from(6));
        assert!(e.contains(&row(&[4, 5, 1])));
        assert!(!e.contains(&row(&[0, 0, 1])));
        assert_eq!(e.free_columns(), vec![2]);
    }

    #[test]
    fn modular_rank() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, modp::P - 1]];
        assert_eq!(modp::rank(m), 2);
        let half = modp::of_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(modp::mul(half, 2), 1);
        assert_eq!(modp::of_rational(&BigRational::from_integer((-1).into())), Some(modp::P - 1));
    }

    #[test]
    fn rows_are_primitive() {
        let mut e = EchelonBasis::new(2);
        e.insert(row(&[-4, 6]));
        assert_eq!(e.rows()[0], row(&[2, -3]));
    }
}
