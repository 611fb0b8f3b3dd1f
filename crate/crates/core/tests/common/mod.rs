//! Independent oracles shared by the integration suites. Nothing here calls
//! into the library's linear algebra.
#![allow(dead_code)]

use kuzalg::{parse_polynomial, WPolynomial, WeightedRing};
use rand::Rng;

/// Coefficients up to `top` of `prod_i (1 - t^(d - a_i)) / (1 - t^(a_i))`,
/// the Hilbert series of the Milnor algebra of any isolated
/// quasi-homogeneous singularity.
pub fn jacobian_series(weights: &[u32], d: i64, top: usize) -> Vec<i64> {
    let mut s = vec![0i64; top + 1];
    s[0] = 1;
    for &a in weights {
        let k = (d - a as i64) as usize;
        for e in (k..=top).rev() {
            s[e] -= s[e - k];
        }
    }
    for &a in weights {
        let a = a as usize;
        for e in a..=top {
            s[e] += s[e - a];
        }
    }
    s
}

/// `((1 - x^(d-1)) / (1 - x))^(n+1)` by repeated convolution with
/// `1 + x + ... + x^(d-2)`.
pub fn complete_intersection_series(num_vars: usize, d: usize) -> Vec<i64> {
    let block = vec![1i64; d - 1];
    let mut acc = vec![1i64];
    for _ in 0..num_vars {
        let mut next = vec![0i64; acc.len() + block.len() - 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in block.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    acc
}

/// `prod (d - a_i) / a_i`, required to be an integer.
pub fn milnor_product(weights: &[u32], d: i64) -> u64 {
    let num: i128 = weights.iter().map(|&a| (d - a as i64) as i128).product();
    let den: i128 = weights.iter().map(|&a| a as i128).product();
    assert_eq!(num % den, 0, "product formula is not an integer for {weights:?}, d = {d}");
    (num / den) as u64
}

pub fn socle_degree(weights: &[u32], d: i64) -> i64 {
    weights.iter().map(|&a| d - 2 * a as i64).sum()
}

/// Least `k >= 0` with `d | t + k w`, by search.
pub fn least_serre_power(weights: &[u32], d: i64, t: i64) -> Option<i64> {
    let w: i64 = weights.iter().map(|&a| a as i64).sum();
    (0..=d).find(|k| (t + k * w) % d == 0)
}

/// Hilbert series of `C[generators] / (one form of degree r)`.
pub fn hypersurface_ring_series(generator_degrees: &[i64], r: i64, top: usize) -> Vec<i64> {
    let mut s = vec![0i64; top + 1];
    s[0] = 1;
    for &a in generator_degrees {
        let a = a as usize;
        for e in a..=top {
            s[e] += s[e - a];
        }
    }
    let r = r as usize;
    for e in (r..=top).rev() {
        s[e] -= s[e - r];
    }
    s
}

pub fn as_i64(v: &[usize]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

/// Weight systems with a Fermat-type smooth member `sum x_i^(d / a_i)`.
pub const WEIGHT_SYSTEMS: &[(&[u32], i64)] = &[
    (&[1, 1, 1], 4),
    (&[1, 1, 1, 1], 3),
    (&[1, 1, 2], 4),
    (&[1, 1, 1, 2, 3], 6),
    (&[1, 1, 2, 2], 6),
    (&[1, 2, 3], 6),
];

pub fn fermat(ring: &WeightedRing, d: i64) -> WPolynomial {
    let terms: Vec<String> = ring
        .weights()
        .iter()
        .enumerate()
        .map(|(i, &a)| format!("x{i}^{}", d / a as i64))
        .collect();
    parse_polynomial(ring, &terms.join(" + ")).unwrap()
}

/// All monomials of weighted degree `d`, as exponent vectors.
pub fn monomials(weights: &[u32], d: i64) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], d: i64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == weights.len() {
            if d == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let a = weights[prefix.len()] as i64;
        for e in 0..=(d / a) {
            prefix.push(e as u32);
            go(weights, d - e * a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, d, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_text(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Fermat form plus `extra` random monomials with small integer coefficients.
pub fn perturbed_fermat<R: Rng>(weights: &[u32], d: i64, extra: usize, rng: &mut R) -> WPolynomial {
    let ring = WeightedRing::new(weights).unwrap();
    let all = monomials(weights, d);
    let mut text = fermat(&ring, d).to_string();
    for _ in 0..extra {
        let m = &all[rng.gen_range(0..all.len())];
        let c: i64 = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
        text.push_str(&format!(" + {c}*{}", monomial_text(m)));
    }
    parse_polynomial(&ring, &text).unwrap()
}

/// Random form of degree `d` with `terms` monomials and small coefficients.
pub fn random_form<R: Rng>(weights: &[u32], d: i64, terms: usize, rng: &mut R) -> String {
    let all = monomials(weights, d);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let m = &all[rng.gen_range(0..all.len())];
        let c: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
        parts.push(format!("{c}*{}", monomial_text(m)));
    }
    parts.join(" + ")
}

#[test]
fn oracles_agree_on_known_values() {
    // cubic fourfold: the complete-intersection form and the product form
    let ci = complete_intersection_series(6, 3);
    assert_eq!(ci, vec![1, 6, 15, 20, 15, 6, 1]);
    assert_eq!(jacobian_series(&[1; 6], 3, 6), ci);
    assert_eq!(milnor_product(&[1, 1, 1, 2, 3], 6), 250);
    assert_eq!(jacobian_series(&[1, 1, 1, 2, 3], 6, 14).iter().sum::<i64>(), 250);
    assert_eq!(least_serre_power(&[1, 1, 1, 2, 3], 6, 2), Some(2));
    assert_eq!(hypersurface_ring_series(&[1, 2], 2, 4), vec![1, 1, 1, 1, 1]);
}
