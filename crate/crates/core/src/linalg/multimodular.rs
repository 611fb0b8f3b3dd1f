//! Exact reduced echelon forms recovered from residues modulo word-sized
//! primes.
//!
//! One sparse elimination modulo a prime picks an independent subset of the
//! input rows and its pivot columns. The reduced echelon form of that subset
//! is computed modulo further primes, combined by CRT and lifted by rational
//! reconstruction. A lift is accepted only once every input row reduces to
//! zero against it; independence modulo a prime bounds the rank over `Q` from
//! below, so an accepted lift spans exactly the input rows.
//!
//! When a few primes do not suffice and the pivot block is small enough to
//! hold densely, the free part `B^{-1} C` is lifted p-adically instead
//! (Dixon): one LU factorization modulo the first prime, then one cheap
//! solve per digit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{EchelonBasis, SparseVec};

const NONE: u32 = u32::MAX;
const PRIME_COUNT: usize = 2048;
/// Largest pivot block factored densely.
const DENSE_LIMIT: usize = 1200;
/// Entries compared between successive digits before a full lift.
const PROBES: usize = 8;
/// Bits of headroom below the reconstruction bound for accepting a lift
/// from a single modulus.
const MARGIN_BITS: u64 = 12;
/// Entry bound for the machine-word residual of p-adic lifting.
const SMALL_ENTRY: u64 = 1 << 40;

fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for `n < 2^32`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 7, 61] {
        if a % n == 0 {
            continue;
        }
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The largest primes below `2^32`, descending.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut n = u32::MAX as u64;
        while out.len() < PRIME_COUNT {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn residue(x: &BigInt, p: u64) -> u64 {
    match x.to_i64() {
        Some(v) => v.rem_euclid(p as i64) as u64,
        None => x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced below p"),
    }
}

fn reduce_row(row: &SparseVec, p: u64) -> Vec<(usize, u64)> {
    row.entries()
        .iter()
        .map(|(c, x)| (*c, residue(x, p)))
        .filter(|e| e.1 != 0)
        .collect()
}

/// Row echelon form over `F_p`; rows have leading entry 1.
struct ModEchelon {
    p: u64,
    rows: Vec<Vec<(usize, u64)>>,
    pivot: Vec<u32>,
    origin: Vec<usize>,
    acc: Vec<u64>,
    heap: BinaryHeap<Reverse<usize>>,
    /// Multiply-adds performed so far.
    work: u64,
}

impl ModEchelon {
    fn new(ncols: usize, p: u64) -> Self {
        ModEchelon {
            p,
            rows: Vec::new(),
            pivot: vec![NONE; ncols],
            origin: Vec::new(),
            acc: vec![0; ncols],
            heap: BinaryHeap::new(),
            work: 0,
        }
    }

    fn is_full(&self) -> bool {
        self.rows.len() == self.pivot.len()
    }

    /// Reduces `v` against every pivot row; the result has no pivot column.
    fn reduce(&mut self, v: &[(usize, u64)]) -> Vec<(usize, u64)> {
        let p = self.p;
        for &(c, x) in v {
            self.acc[c] = x;
            self.heap.push(Reverse(c));
        }
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            while self.heap.peek() == Some(&Reverse(c)) {
                self.heap.pop();
            }
            let x = std::mem::take(&mut self.acc[c]);
            if x == 0 {
                continue;
            }
            let r = self.pivot[c];
            if r == NONE {
                out.push((c, x));
                continue;
            }
            let tail = &self.rows[r as usize][1..];
            self.work += tail.len() as u64;
            for &(k, y) in tail {
                let old = self.acc[k];
                self.acc[k] = (old + p - mul(x, y, p)) % p;
                if old == 0 {
                    self.heap.push(Reverse(k));
                }
            }
        }
        out
    }

    fn insert(&mut self, v: &[(usize, u64)], origin: usize) -> bool {
        let mut v = self.reduce(v);
        let Some(&(lead, l)) = v.first() else {
            return false;
        };
        let s = inv(l, self.p);
        for e in &mut v {
            e.1 = mul(e.1, s, self.p);
        }
        self.pivot[lead] = self.rows.len() as u32;
        self.rows.push(v);
        self.origin.push(origin);
        true
    }

    /// Pivot columns ascending.
    fn pivots(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.rows.iter().map(|r| r[0].0).collect();
        out.sort_unstable();
        out
    }

    /// Back-substitutes into reduced form and returns rows in pivot order.
    fn into_reduced(mut self) -> Vec<Vec<(usize, u64)>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&r| Reverse(self.rows[r][0].0));
        for r in order.iter().copied() {
            let row = std::mem::take(&mut self.rows[r]);
            let mut tail = self.reduce(&row[1..]);
            tail.insert(0, row[0]);
            self.rows[r] = tail;
        }
        order.reverse();
        order.into_iter().map(|r| std::mem::take(&mut self.rows[r])).collect()
    }
}

/// `x` with `x = a mod m`, `x = r mod p`, in `[0, m p)`.
fn crt(a: &BigInt, m: &BigInt, r: u64, p: u64, m_inv: u64) -> BigInt {
    let t = mul((r + p - residue(a, p)) % p, m_inv, p);
    a + m * BigInt::from(t)
}

/// Smallest fraction `n / d` congruent to `u` modulo `m` with
/// `|n|, d <= sqrt(m / 2)`.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(if t1.is_negative() { (-r1, -t1) } else { (r1, t1) })
}

/// Lifted rows, or `None` when some entry has no reconstruction yet.
///
/// Entries tend to share denominators, so each one is first tried against
/// the running common denominator before a full reconstruction. The flag
/// reports whether every fraction sits far below the reconstruction bound,
/// where a spurious lift is unlikely enough to be worth verifying at once.
fn lift(pivots: &[usize], acc: &[Vec<(usize, BigInt)>], m: &BigInt) -> Option<(Vec<SparseVec>, bool)> {
    let half: BigInt = m >> 1usize;
    let bound = half.sqrt();
    let margin = bound.bits().saturating_sub(MARGIN_BITS);
    let mut widest = 0;
    let mut den = BigInt::one();
    let rows = pivots
        .iter()
        .zip(acc)
        .map(|(&c, row)| {
            let mut fracs = Vec::with_capacity(row.len());
            let mut row_den = BigInt::one();
            for (k, u) in row {
                if u.is_zero() {
                    continue;
                }
                let mut t = (u * &den).mod_floor(m);
                if t > half {
                    t -= m;
                }
                let (n, d) = if t.abs() <= bound && den <= bound {
                    (t, den.clone())
                } else {
                    let (n, d) = rational_reconstruction(u, m)?;
                    den = den.lcm(&d);
                    (n, d)
                };
                row_den = row_den.lcm(&d);
                widest = widest.max(n.bits()).max(d.bits());
                fracs.push((*k, n, d));
            }
            let mut entries = Vec::with_capacity(fracs.len() + 1);
            entries.push((c, row_den.clone()));
            for (k, n, d) in fracs {
                entries.push((k, n * (&row_den / d)));
            }
            let mut v = SparseVec::from_unsorted(entries);
            v.make_primitive();
            Some(v)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((rows, widest <= margin))
}

/// Independent rows and pivot columns found modulo the first prime.
struct Selection {
    chosen: Vec<usize>,
    pivots: Vec<usize>,
}

/// The basis spanned by `candidate` if every input row lies in it.
///
/// With `L` the lcm of the leading entries, `v` lies in the span exactly when
/// `L v_k = sum_c v_c (L / l_c) R_c[k]` at every non-pivot column `k`.
fn accept(rows: &[SparseVec], ncols: usize, candidate: Vec<SparseVec>) -> Option<EchelonBasis> {
    let mut lcm = BigInt::one();
    for r in &candidate {
        lcm = lcm.lcm(&r.entries()[0].1);
    }
    let mut scaled: Vec<Option<Vec<(usize, BigInt)>>> = vec![None; ncols];
    for r in &candidate {
        let (c, l) = &r.entries()[0];
        let f = &lcm / l;
        scaled[*c] = Some(r.entries()[1..].iter().map(|(k, x)| (*k, x * &f)).collect());
    }
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); ncols];
    let mut touched: Vec<usize> = Vec::new();
    for v in rows {
        for (c, x) in v.entries() {
            match &scaled[*c] {
                Some(tail) => {
                    for (k, y) in tail {
                        if acc[*k].is_zero() {
                            touched.push(*k);
                        }
                        acc[*k] += x * y;
                    }
                }
                None => {
                    touched.push(*c);
                    acc[*c] -= x * &lcm;
                }
            }
        }
        let ok = touched.iter().all(|&k| acc[k].is_zero());
        for k in touched.drain(..) {
            acc[k].set_zero();
        }
        if !ok {
            return None;
        }
    }
    Some(EchelonBasis::from_reduced_rows(ncols, candidate))
}

enum Crt {
    Done(EchelonBasis),
    /// p-adic lifting is predicted to be cheaper from here on.
    Switch,
    Exhausted,
}

/// Multiply-adds of one dense LU factorization and of one lifting digit.
fn dixon_cost(r: usize, f: usize) -> (u64, u64) {
    let (r, f) = (r as u64, f as u64);
    (r * r * r / 3, f * r * r)
}

/// Whether every entry of the chosen rows fits the lifting residuals.
fn small_entries(rows: &[SparseVec], chosen: &[usize]) -> bool {
    chosen.iter().all(|&i| {
        rows[i]
            .entries()
            .iter()
            .all(|(_, x)| x.to_i64().is_some_and(|v| v.unsigned_abs() < SMALL_ENTRY))
    })
}

/// CRT over successive primes, starting from the first prime's echelon form.
///
/// Each prime and each lifting digit yield the same number of bits, so after
/// `k` unsuccessful primes lifting is preferred once refactoring and `2k`
/// digits cost less than `k` more primes. Modular reductions are weighted
/// against plain multiply-adds.
fn by_crt(rows: &[SparseVec], ncols: usize, sel: &mut Selection, first: ModEchelon) -> Crt {
    const REDUCTION_WEIGHT: u64 = 4;
    let r = sel.pivots.len();
    let (lu_cost, digit_cost) = dixon_cost(r, ncols - r);
    let liftable = r <= DENSE_LIMIT && small_entries(rows, &sel.chosen);
    let mut acc: Vec<Vec<(usize, BigInt)>> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<SparseVec>> = None;
    let mut pending = Some(first);
    let mut used = 0u64;
    for &p in primes() {
        let ech = match pending.take() {
            Some(e) => e,
            None => {
                let mut e = ModEchelon::new(ncols, p);
                for &i in &sel.chosen {
                    if !e.insert(&reduce_row(&rows[i], p), i) {
                        break;
                    }
                }
                e
            }
        };
        let prime_cost = REDUCTION_WEIGHT * ech.work.max(1);
        if ech.rows.len() < sel.chosen.len() {
            continue;
        }
        let piv = ech.pivots();
        if piv != sel.pivots {
            if piv > sel.pivots {
                continue;
            }
            // the reference prime was unlucky
            sel.pivots = piv;
            acc.clear();
            modulus = BigInt::one();
            previous = None;
            used = 0;
        }
        let reduced = ech.into_reduced();
        if acc.is_empty() {
            acc = reduced
                .iter()
                .map(|r| r[1..].iter().map(|&(k, x)| (k, BigInt::from(x))).collect())
                .collect();
        } else {
            let m_inv = inv(residue(&modulus, p), p);
            for (a, r) in acc.iter_mut().zip(&reduced) {
                let mut merged = Vec::with_capacity(a.len().max(r.len()));
                let (mut i, mut j) = (0, 1);
                let zero = BigInt::zero();
                while i < a.len() || j < r.len() {
                    let (k, old, new) = if j == r.len() || (i < a.len() && a[i].0 < r[j].0) {
                        i += 1;
                        (a[i - 1].0, &a[i - 1].1, 0)
                    } else if i == a.len() || r[j].0 < a[i].0 {
                        j += 1;
                        (r[j - 1].0, &zero, r[j - 1].1)
                    } else {
                        i += 1;
                        j += 1;
                        (a[i - 1].0, &a[i - 1].1, r[j - 1].1)
                    };
                    merged.push((k, crt(old, &modulus, new, p, m_inv)));
                }
                *a = merged;
            }
        }
        modulus *= p;
        used += 1;
        match lift(&sel.pivots, &acc, &modulus) {
            Some((candidate, roomy)) => {
                if roomy || previous.as_ref() == Some(&candidate) {
                    if let Some(basis) = accept(rows, ncols, candidate.clone()) {
                        return Crt::Done(basis);
                    }
                }
                previous = Some(candidate);
            }
            None => previous = None,
        }
        if liftable && lu_cost + 2 * used * digit_cost < used * prime_cost {
            return Crt::Switch;
        }
    }
    Crt::Exhausted
}

/// Dense LU factorization modulo `p` of an invertible `n x n` matrix, `L`
/// unit lower triangular below the diagonal, `U` on and above it.
struct Lu {
    n: usize,
    p: u64,
    a: Vec<u64>,
    perm: Vec<usize>,
    diag_inv: Vec<u64>,
}

/// `(x - sum) mod p` for a dot product accumulated without reduction.
fn sub_acc(x: u64, sum: u128, p: u64) -> u64 {
    let s = (sum % p as u128) as u64;
    (x + p - s) % p
}

/// Sum of `a[k] * b[k]`; each product is below `2^64`, so `n < 2^64` terms fit.
fn dot<I: Iterator<Item = u64>>(a: &[u64], b: I) -> u128 {
    a.iter().zip(b).map(|(&x, y)| x as u128 * y as u128).sum()
}

impl Lu {
    /// Left-looking elimination; `None` when the matrix is singular mod `p`.
    fn new(mut a: Vec<u64>, n: usize, p: u64) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut diag_inv = Vec::with_capacity(n);
        let mut col = vec![0u64; n];
        let mut ucol = vec![0u64; n];
        for k in 0..n {
            for (m, u) in ucol[..k].iter_mut().enumerate() {
                *u = a[m * n + k];
            }
            for i in k..n {
                col[i] = sub_acc(a[i * n + k], dot(&a[i * n..i * n + k], ucol[..k].iter().copied()), p);
            }
            let piv = (k..n).find(|&i| col[i] != 0)?;
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                col.swap(k, piv);
            }
            let s = inv(col[k], p);
            diag_inv.push(s);
            a[k * n + k] = col[k];
            for i in k + 1..n {
                a[i * n + k] = mul(col[i], s, p);
            }
            for j in k + 1..n {
                let sum = dot(&a[k * n..k * n + k], (0..k).map(|m| a[m * n + j]));
                a[k * n + j] = sub_acc(a[k * n + j], sum, p);
            }
        }
        Some(Lu { n, p, a, perm, diag_inv })
    }

    /// Solves `A x = b`.
    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let (n, p, a) = (self.n, self.p, &self.a);
        let mut x: Vec<u64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            x[i] = sub_acc(x[i], dot(&a[i * n..i * n + i], x[..i].iter().copied()), p);
        }
        for i in (0..n).rev() {
            let s = sub_acc(x[i], dot(&a[i * n + i + 1..(i + 1) * n], x[i + 1..].iter().copied()), p);
            x[i] = mul(s, self.diag_inv[i], p);
        }
        x
    }
}

/// `sum_i digits[i][at] p^i`.
fn horner(digits: &[Vec<u64>], at: usize, p: u64) -> BigInt {
    let mut v = BigInt::zero();
    for d in digits.iter().rev() {
        v = v * p + d[at];
    }
    v
}

/// Lifts `X = B^{-1} C` digit by digit modulo the first prime, where `B` and
/// `C` are the chosen rows restricted to pivot and free columns.
fn by_dixon(rows: &[SparseVec], ncols: usize, sel: &Selection) -> Option<EchelonBasis> {
    let p = primes()[0];
    let r = sel.pivots.len();
    let mut slot = vec![usize::MAX; ncols];
    for (j, &c) in sel.pivots.iter().enumerate() {
        slot[c] = j;
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| slot[c] == usize::MAX).collect();
    for (k, &c) in free.iter().enumerate() {
        slot[c] = k;
    }
    let f = free.len();
    let mut b_dense = vec![0u64; r * r];
    let mut b_sparse: Vec<Vec<(usize, i128)>> = vec![Vec::new(); r];
    // residual, column-major: rhs[k][s]; stays below max |entry| * (row length + 1)
    let mut rhs = vec![vec![0i128; r]; f];
    for (s, &i) in sel.chosen.iter().enumerate() {
        for (c, x) in rows[i].entries() {
            let v = x.to_i64().filter(|v| v.unsigned_abs() < SMALL_ENTRY)? as i128;
            if sel.pivots.binary_search(c).is_ok() {
                b_dense[s * r + slot[*c]] = residue(x, p);
                b_sparse[s].push((slot[*c], v));
            } else {
                rhs[slot[*c]][s] = v;
            }
        }
    }
    let lu = Lu::new(b_dense, r, p)?;
    // digits[step][k * r + j]
    let mut digits: Vec<Vec<u64>> = Vec::new();
    let probes: Vec<usize> = (0..PROBES.min(r * f)).map(|t| (t * 7919) % (r * f)).collect();
    let mut last_probe: Option<Vec<(BigInt, BigInt)>> = None;
    let mut power = BigInt::one();
    for _ in 0..100_000 {
        let mut step = Vec::with_capacity(r * f);
        for col in rhs.iter_mut() {
            let digit = lu.solve(&col.iter().map(|x| x.rem_euclid(p as i128) as u64).collect::<Vec<_>>());
            for (s, brow) in b_sparse.iter().enumerate() {
                let t = &mut col[s];
                for &(j, bj) in brow {
                    *t -= bj * digit[j] as i128;
                }
                debug_assert_eq!(*t % p as i128, 0);
                *t /= p as i128;
            }
            step.extend(digit);
        }
        digits.push(step);
        power *= p;
        let probe: Option<Vec<_>> = probes
            .iter()
            .map(|&at| rational_reconstruction(&horner(&digits, at, p), &power))
            .collect();
        let stable = probe.is_some() && probe == last_probe;
        last_probe = probe;
        if !stable {
            continue;
        }
        let acc: Vec<Vec<(usize, BigInt)>> = (0..r)
            .map(|j| (0..f).map(|k| (free[k], horner(&digits, k * r + j, p))).collect())
            .collect();
        if let Some((candidate, _)) = lift(&sel.pivots, &acc, &power) {
            if let Some(basis) = accept(rows, ncols, candidate) {
                return Some(basis);
            }
        }
        if rhs.iter().all(|col| col.iter().all(|&x| x == 0)) {
            // the expansion terminated; a failed lift means a bad selection
            return None;
        }
    }
    None
}

/// Reduced echelon basis of the span of `rows` inside `Q^ncols`.
pub fn exact_span(rows: &[SparseVec], ncols: usize) -> EchelonBasis {
    let p0 = primes()[0];
    let mut first = ModEchelon::new(ncols, p0);
    for (i, r) in rows.iter().enumerate() {
        first.insert(&reduce_row(r, p0), i);
        if first.is_full() {
            break;
        }
    }
    if first.is_full() {
        return EchelonBasis::identity(ncols);
    }
    if first.rows.is_empty() {
        return EchelonBasis::new(ncols);
    }
    let mut sel = Selection {
        chosen: first.origin.clone(),
        pivots: first.pivots(),
    };
    let reference = sel.pivots.clone();
    match by_crt(rows, ncols, &mut sel, first) {
        Crt::Done(basis) => return basis,
        // lifting needs the pivot block invertible modulo the first prime
        Crt::Switch if sel.pivots == reference => {
            if let Some(basis) = by_dixon(rows, ncols, &sel) {
                return basis;
            }
        }
        _ => {}
    }
    let mut basis = EchelonBasis::new(ncols);
    for r in rows {
        basis.insert(r.clone());
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseVec {
        SparseVec::from_unsorted(v.iter().enumerate().map(|(c, &x)| (c, BigInt::from(x))).collect())
    }

    #[test]
    fn primes_are_prime_and_descending() {
        let ps = primes();
        assert_eq!(ps[0], 4294967291);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        for &p in &ps[..20] {
            assert!((2..=65535u64).take_while(|q| q * q <= p).all(|q| p % q != 0));
        }
        assert!(!is_prime(4294967295) && !is_prime(1) && is_prime(2));
    }

    #[test]
    fn reconstruction_round_trips() {
        let m = BigInt::from(primes()[0]) * BigInt::from(primes()[1]);
        for (n, d) in [(3i64, 7i64), (-22, 9), (0, 1), (123456, 1)] {
            let u = (BigInt::from(n) * BigInt::from(d).modinv(&m).unwrap()).mod_floor(&m);
            let got = rational_reconstruction(&u, &m).unwrap();
            assert_eq!(got, (BigInt::from(n), BigInt::from(d)));
        }
    }

    #[test]
    fn agrees_with_direct_elimination() {
        let rows = vec![
            row(&[3, 1, 4, 1, 5, 9]),
            row(&[2, 6, 5, 3, 5, 8]),
            row(&[5, 7, 9, 4, 10, 17]),
            row(&[9, 7, 9, 3, 2, 3]),
            row(&[0, 0, 0, 0, 0, 0]),
        ];
        let fast = exact_span(&rows, 6);
        let mut slow = EchelonBasis::new(6);
        for r in &rows {
            slow.insert(r.clone());
        }
        assert_eq!(fast.rank(), 3);
        assert_eq!(fast.free_columns(), slow.free_columns());
        let probe = row(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(fast.normal_form(&probe, &BigInt::one()), slow.normal_form(&probe, &BigInt::one()));
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let big: BigInt = BigInt::from(10).pow(40u32) + 7;
        let rows = vec![
            SparseVec::from_unsorted(vec![(0, big.clone()), (2, BigInt::from(1))]),
            SparseVec::from_unsorted(vec![(1, BigInt::from(3)), (2, big.clone() * 5)]),
        ];
        let fast = exact_span(&rows, 3);
        assert_eq!(fast.rank(), 2);
        assert!(rows.iter().all(|r| fast.contains(r)));
        assert!(!fast.contains(&row(&[0, 0, 1])));
    }

    #[test]
    fn dense_small_entries_lift_p_adically() {
        // reduced form entries run to hundreds of bits
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64 % 199 - 99
        };
        let rows: Vec<SparseVec> = (0..30)
            .map(|_| SparseVec::from_unsorted((0..34).map(|j| (j, BigInt::from(next()))).collect()))
            .collect();
        let mut sel = Selection {
            chosen: (0..30).collect(),
            pivots: (0..30).collect(),
        };
        let p0 = primes()[0];
        let mut first = ModEchelon::new(34, p0);
        for (i, r) in rows.iter().enumerate() {
            first.insert(&reduce_row(r, p0), i);
        }
        assert!(matches!(by_crt(&rows, 34, &mut sel, first), Crt::Switch));
        let fast = by_dixon(&rows, 34, &sel).unwrap();
        let mut slow = EchelonBasis::new(34);
        for r in &rows {
            slow.insert(r.clone());
        }
        assert_eq!(fast.rank(), 30);
        assert_eq!(fast.rows(), slow.rows());
        assert_eq!(exact_span(&rows, 34).rows(), slow.rows());
    }

    #[test]
    fn full_rank_short_circuits() {
        let rows = vec![row(&[1, 1]), row(&[1, -1])];
        let b = exact_span(&rows, 2);
        assert!(b.is_full());
        assert!(b.free_columns().is_empty());
    }
}
