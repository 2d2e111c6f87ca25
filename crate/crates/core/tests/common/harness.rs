//! Random comparison of the library's filtered sums against the naive loops.

use congruence_lab::exactmath::checked_power;
use congruence_lab::filtered_sums::{self, FleckVariant};
use congruence_lab::{ExactInt, ExactTables, Poly, ResidueClass};
use num_bigint::BigInt;
use rand::{rngs::StdRng, RngExt, SeedableRng};

use super::*;

/// Row limit the random tuples stay within.
pub const MAX_N: u64 = 40;

/// Evaluate `count` random tuples over every sum family; returns a
/// description of each mismatch.
pub fn random_sum_mismatches(tables: &ExactTables, count: usize, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..count {
        let kind = rng.random_range(0..6u32);
        let n = rng.random_range(1..=MAX_N);
        let p = [2u64, 3, 5, 7][rng.random_range(0..4)];
        let max_alpha = (1..=3).rev().find(|&e| p.pow(e) <= 125).unwrap();
        let alpha = rng.random_range(1..=max_alpha) as u64;
        let l = rng.random_range(0..=4u64);
        let a = rng.random_range(-5i64..=5);
        let r = rng.random_range(-30i64..=30);
        let p_alpha = checked_power(p, alpha).unwrap();
        let (ni, pa) = (n as i64, p_alpha as i64);

        let (label, got, want): (String, ExactInt, BigInt) = match kind {
            0 => {
                let beta = rng.random_range(0..=alpha + 1);
                if beta > alpha {
                    let cls = ResidueClass::new(p_alpha, r).unwrap();
                    let r0 = r.rem_euclid(pa);
                    let got = filtered_sums::fleck_sum(n, p, alpha, &cls, l, FleckVariant::Exact)
                        .unwrap();
                    let want = naive_sum(ni, r, pa, |k| {
                        signed(k) * choose(&big(ni), k) * choose(&big((k - r0) / pa), l as i64)
                    });
                    (
                        format!("fleck n={n} p={p} alpha={alpha} r={r} l={l}"),
                        got,
                        want,
                    )
                } else {
                    let d = p.pow(beta as u32) as i64;
                    let cls = ResidueClass::new(d as u64, r).unwrap();
                    let r0 = r.rem_euclid(d);
                    let got = filtered_sums::fleck_sum(
                        n,
                        p,
                        alpha,
                        &cls,
                        l,
                        FleckVariant::Floor { beta },
                    )
                    .unwrap();
                    let want = naive_sum(ni, r, d, |k| {
                        signed(k)
                            * choose(&big(ni), k)
                            * choose(&big((k - r0).div_euclid(pa)), l as i64)
                    });
                    (
                        format!("fleck-floor n={n} p={p} alpha={alpha} beta={beta} r={r} l={l}"),
                        got,
                        want,
                    )
                }
            }
            1 => {
                let cls = ResidueClass::new(p_alpha, r).unwrap();
                let got = filtered_sums::binom_power_sum(n, p, alpha, &cls, &big(a)).unwrap();
                let want = naive_sum(ni, r, pa, |k| {
                    choose(&big(ni), k) * power(&big(-a), k as u64)
                });
                (
                    format!("binom-power n={n} p={p} alpha={alpha} r={r} a={a}"),
                    got,
                    want,
                )
            }
            2 => {
                let cls = ResidueClass::new(p_alpha, r).unwrap();
                let r0 = r.rem_euclid(pa);
                let got = filtered_sums::eulerian_wan_sum(tables, n, p, alpha, &cls, l).unwrap();
                let want = naive_sum(ni - 1, r, pa, |k| {
                    eulerian(n, k as u64) * choose(&big((k - r0) / pa), l as i64)
                });
                (
                    format!("eulerian-wan n={n} p={p} alpha={alpha} r={r} l={l}"),
                    got,
                    want,
                )
            }
            3 => {
                let cls = ResidueClass::new(p_alpha, r).unwrap();
                let got =
                    filtered_sums::eulerian_power_sum(tables, n, p, alpha, &cls, &big(a)).unwrap();
                let want = naive_sum(ni - 1, r, pa, |k| {
                    eulerian(n, k as u64) * power(&big(a), k as u64)
                });
                (
                    format!("eulerian-power n={n} p={p} alpha={alpha} r={r} a={a}"),
                    got,
                    want,
                )
            }
            4 => {
                let d = rng.random_range(1..=12i64);
                let m = rng.random_range(1..=n + 2);
                let cls = ResidueClass::new(d as u64, r).unwrap();
                let s1 = stirling1_row(n);
                let got = filtered_sums::stirling_product_sum(tables, n, m, &cls, &big(a)).unwrap();
                let want = naive_sum(ni, r, d, |k| {
                    &s1[k as usize] * stirling2(k as u64, m) * power(&big(a), k as u64)
                });
                (format!("cdr n={n} m={m} d={d} r={r} a={a}"), got, want)
            }
            _ => {
                let d = rng.random_range(1..=12i64);
                let deg = rng.random_range(0..=3usize);
                let coeffs: Vec<i64> = (0..=deg).map(|_| rng.random_range(-4i64..=4)).collect();
                let text = coeffs
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let f = Poly::parse_coeff_list(&text).unwrap();
                let cls = ResidueClass::new(d as u64, r).unwrap();
                let s1 = stirling1_row(n);
                let got = filtered_sums::stirling_poly_sum(tables, n, &f, &cls, &big(a)).unwrap();
                let want = naive_sum(ni, r, d, |k| {
                    &s1[k as usize] * eval(&coeffs, k) * power(&big(a), k as u64)
                });
                (
                    format!("stirling-poly n={n} f={text} d={d} r={r} a={a}"),
                    got,
                    want,
                )
            }
        };
        if got != want {
            bad.push(format!("{label}: library {got}, oracle {want}"));
        }
    }
    bad
}
