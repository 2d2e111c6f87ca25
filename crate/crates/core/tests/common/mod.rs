//! Independent oracles for integration tests.
//!
//! Nothing here calls into the library's numeric code: triangle counts come
//! from enumerating permutations and set partitions, filtered sums from a
//! plain loop over `0..=n` with a membership test and closed-form weights.
//! [`harness`] runs the library against them.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    cycles
}

/// `counts[k]` = permutations of an n-set with k cycles.
pub fn cycle_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for p in permutations(n) {
        counts[cycle_count(&p)] += 1;
    }
    counts
}

/// `counts[k]` = permutations of an n-set with k ascents; length n (1 for n = 0).
pub fn ascent_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n.max(1)];
    for p in permutations(n) {
        let asc = p.windows(2).filter(|w| w[0] < w[1]).count();
        counts[asc] += 1;
    }
    counts
}

/// `counts[k]` = partitions of an n-set into k blocks, via restricted growth strings.
pub fn partition_counts(n: usize) -> Vec<u64> {
    fn go(pos: usize, n: usize, blocks: usize, counts: &mut [u64]) {
        if pos == n {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            go(pos + 1, n, blocks.max(b + 1), counts);
        }
    }
    let mut counts = vec![0u64; n + 1];
    go(0, n, 0, &mut counts);
    counts
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `C(x, k)` for integer `x` by the falling-product formula; 0 for `k < 0`.
pub fn choose(x: &BigInt, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - big(i);
        den *= big(i + 1);
    }
    num / den
}

pub fn power(a: &BigInt, e: u64) -> BigInt {
    (0..e).fold(BigInt::one(), |acc, _| acc * a)
}

pub fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Unsigned first-kind Stirling numbers by expanding `x(x+1)...(x+n-1)`.
pub fn stirling1_row(n: u64) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for i in 0..n {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * BigInt::from(i);
        }
        poly = next;
    }
    poly
}

/// `S(n, k)` from the inclusion-exclusion formula.
pub fn stirling2(n: u64, k: u64) -> BigInt {
    let mut total = BigInt::zero();
    for j in 0..=k {
        let term = choose(&BigInt::from(k), j as i64) * power(&BigInt::from(j), n);
        if (k - j).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total / fact(k)
}

/// Eulerian `<n, k>` from `sum_j (-1)^j C(n+1, j) (k+1-j)^n`.
pub fn eulerian(n: u64, k: u64) -> BigInt {
    if n == 0 {
        return if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    let mut total = BigInt::zero();
    for j in 0..=k + 1 {
        let term = choose(&BigInt::from(n + 1), j as i64) * power(&BigInt::from(k + 1 - j), n);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// True when `k = r (mod d)` for any integers.
pub fn member(k: i64, r: i64, d: i64) -> bool {
    (k - r).rem_euclid(d) == 0
}

/// Naive filtered sum `sum_{0<=k<=hi, k = r mod d} weight(k)`.
pub fn naive_sum(hi: i64, r: i64, d: i64, weight: impl Fn(i64) -> BigInt) -> BigInt {
    (0..=hi).filter(|&k| member(k, r, d)).map(weight).sum()
}

pub fn signed(k: i64) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Polynomial value from low-to-high coefficients.
pub fn eval(coeffs: &[i64], x: i64) -> BigInt {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| big(c) * power(&big(x), i as u64))
        .sum()
}

pub fn ord(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut e = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        e += 1;
    }
    Some(e)
}

pub mod harness;
