//! Executable checks of the supporting identities and lemmas.
//!
//! Each `check_*` function tests one parameter tuple and returns an
//! [`IdentityCheckResult`]. [`run_identity`] sweeps an identity over a range,
//! and [`IdentityRanges`] fixes the default desk-scale grids.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{rngs::StdRng, RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    binom, check_prime, checked_power, factorial, floor_div, is_prime, ord_p_factorial,
    ord_p_unchecked, pow,
};
use crate::{ExactInt, ExactTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    E1,
    E2,
    S3,
    SS3,
    S4,
    SCL3E,
    L31,
    L32,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::E1,
        IdentityId::E2,
        IdentityId::S3,
        IdentityId::SS3,
        IdentityId::S4,
        IdentityId::SCL3E,
        IdentityId::L31,
        IdentityId::L32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::E1 => "E1",
            IdentityId::E2 => "E2",
            IdentityId::S3 => "S3",
            IdentityId::SS3 => "SS3",
            IdentityId::S4 => "S4",
            IdentityId::SCL3E => "SCL3E",
            IdentityId::L31 => "L31",
            IdentityId::L32 => "L32",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace(['_', '-', '.'], "");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::param(format!("unknown identity {s:?}")))
    }
}

/// Outcome of one identity check. `pass` holds exactly when `witness` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheckResult {
    pub identity_id: IdentityId,
    pub params: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl IdentityCheckResult {
    fn new(identity_id: IdentityId, params: String, failure: Option<String>) -> Self {
        let witness = failure.map(|why| format!("{params}: {why}"));
        IdentityCheckResult {
            identity_id,
            params,
            pass: witness.is_none(),
            witness,
        }
    }
}

fn big(v: u64) -> ExactInt {
    ExactInt::from(v)
}

fn sign(e: u64) -> ExactInt {
    if e.is_multiple_of(2) {
        ExactInt::one()
    } else {
        -ExactInt::one()
    }
}

fn mismatch(lhs: &[ExactInt], rhs: &[ExactInt]) -> Option<String> {
    let len = lhs.len().max(rhs.len());
    let zero = ExactInt::zero();
    (0..len).find_map(|i| {
        let (a, b) = (lhs.get(i).unwrap_or(&zero), rhs.get(i).unwrap_or(&zero));
        (a != b).then(|| format!("coefficient of x^{i}: {a} != {b}"))
    })
}

fn poly_mul(a: &[ExactInt], b: &[ExactInt]) -> Vec<ExactInt> {
    let mut out = vec![ExactInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The Eulerian generating identity with weight `f(k) = k^l`, coefficientwise.
pub fn check_e1(tables: &ExactTables, n: u64, l: u64) -> Result<IdentityCheckResult> {
    let params = format!("n={n};l={l}");
    if n == 0 {
        return Err(Error::param("E1 needs n >= 1"));
    }
    let lhs: Vec<ExactInt> = tables
        .get(crate::Family::Eulerian)
        .row(n)?
        .iter()
        .enumerate()
        .map(|(k, e)| e * pow(&big(k as u64), l))
        .collect();
    let mut rhs = vec![ExactInt::zero(); n as usize + 1];
    for m in 0..=n {
        let weight = factorial::<ExactInt>(m) * tables.stirling2(n, m as i64)?;
        if weight.is_zero() {
            continue;
        }
        for i in 0..=n - m {
            rhs[i as usize] +=
                &weight * binom(&big(n - m), i as i64) * sign(n - m - i) * pow(&big(i), l);
        }
    }
    Ok(IdentityCheckResult::new(
        IdentityId::E1,
        params,
        mismatch(&lhs, &rhs),
    ))
}

/// `sum_k <n,k> x^k = sum_m m! S(n,m) (x-1)^(n-m)`, expanded by multiplication.
pub fn check_e2(tables: &ExactTables, n: u64) -> Result<IdentityCheckResult> {
    let params = format!("n={n}");
    if n == 0 {
        return Err(Error::param("E2 needs n >= 1"));
    }
    let lhs = tables.get(crate::Family::Eulerian).row(n)?.to_vec();
    let x_minus_one = [-ExactInt::one(), ExactInt::one()];
    let mut rhs = vec![ExactInt::zero(); n as usize + 1];
    let mut power = vec![ExactInt::one()];
    // m runs downward so (x-1)^(n-m) grows by one factor per step.
    for m in (0..=n).rev() {
        let weight = factorial::<ExactInt>(m) * tables.stirling2(n, m as i64)?;
        for (i, c) in power.iter().enumerate() {
            rhs[i] += &weight * c;
        }
        if m > 0 {
            power = poly_mul(&power, &x_minus_one);
        }
    }
    Ok(IdentityCheckResult::new(
        IdentityId::E2,
        params,
        mismatch(&lhs, &rhs),
    ))
}

fn compare(id: IdentityId, params: String, lhs: ExactInt, rhs: ExactInt) -> IdentityCheckResult {
    let failure = (lhs != rhs).then(|| format!("{lhs} != {rhs}"));
    IdentityCheckResult::new(id, params, failure)
}

/// `k! S(n,k) = sum_{i=k-1}^{n-1} C(n,i) (k-1)! S(i,k-1)` for `k >= 1`.
pub fn check_s3(tables: &ExactTables, n: u64, k: u64) -> Result<IdentityCheckResult> {
    if k == 0 {
        return Err(Error::param("S3 needs k >= 1"));
    }
    let lhs = factorial::<ExactInt>(k) * tables.stirling2(n, k as i64)?;
    let mut rhs = ExactInt::zero();
    for i in k - 1..n {
        rhs += binom(&big(n), i as i64)
            * factorial::<ExactInt>(k - 1)
            * tables.stirling2(i, k as i64 - 1)?;
    }
    Ok(compare(IdentityId::S3, format!("n={n};k={k}"), lhs, rhs))
}

/// `k s(n,k) = sum_{i=k-1}^{n-1} C(n,i) (n-i-1)! s(i,k-1)` for `k >= 1`.
pub fn check_ss3(tables: &ExactTables, n: u64, k: u64) -> Result<IdentityCheckResult> {
    if k == 0 {
        return Err(Error::param("SS3 needs k >= 1"));
    }
    let lhs = big(k) * tables.stirling1(n, k as i64)?;
    let mut rhs = ExactInt::zero();
    for i in k - 1..n {
        rhs += binom(&big(n), i as i64)
            * factorial::<ExactInt>(n - i - 1)
            * tables.stirling1(i, k as i64 - 1)?;
    }
    Ok(compare(IdentityId::SS3, format!("n={n};k={k}"), lhs, rhs))
}

/// `ord_p(k! S(n,k)) >= ord_p(floor(n/p^(a-1))!) - floor((n-k)/(p^(a-1)(p-1)))`.
pub fn check_s4(
    tables: &ExactTables,
    n: u64,
    k: u64,
    p: u64,
    alpha: u64,
) -> Result<IdentityCheckResult> {
    check_prime(p)?;
    if alpha == 0 {
        return Err(Error::param("S4 needs alpha >= 1"));
    }
    let params = format!("n={n};k={k};p={p};alpha={alpha}");
    let value = factorial::<ExactInt>(k) * tables.stirling2(n, k as i64)?;
    let q = checked_power(p, alpha - 1)?;
    let bound =
        ord_p_factorial(n / q, p)? as i64 - floor_div(n as i64 - k as i64, (q * (p - 1)) as i64);
    let ord = ord_p_unchecked(&value, p);
    let failure = ord
        .cmp_exponent(bound)
        .is_lt()
        .then(|| format!("ord {ord} < bound {bound}"));
    Ok(IdentityCheckResult::new(IdentityId::S4, params, failure))
}

/// Row `N = p^a (p-1)` of the first-kind triangle modulo `p`: entry `k` is 1
/// when `p^(a-1)(p-1)` divides `k` and 0 otherwise, for `1 <= k <= N`.
pub fn check_scl3e(tables: &ExactTables, p: u64, alpha: u64) -> Result<IdentityCheckResult> {
    check_prime(p)?;
    if alpha == 0 {
        return Err(Error::param("SCL3E needs alpha >= 1"));
    }
    let params = format!("p={p};alpha={alpha}");
    let period = checked_power(p, alpha - 1)? * (p - 1);
    let n = period * p;
    let row = tables.get(crate::Family::Stirling1).row(n)?;
    let modulus = big(p);
    let failure = (1..=n).find_map(|k| {
        let got = row[k as usize].mod_floor(&modulus);
        let want = big(u64::from(k % period == 0));
        (got != want).then(|| format!("s({n},{k}) mod {p} = {got}, expected {want}"))
    });
    Ok(IdentityCheckResult::new(IdentityId::SCL3E, params, failure))
}

/// Modulus `p^(ord_p(n!) + 1)` that `x - x'` must be divisible by.
pub fn l31_modulus(n: u64, p: u64) -> Result<ExactInt> {
    let e = ord_p_factorial(n, p)? + 1;
    Ok(pow(&big(p), e))
}

/// `C(x,n) = C(x',n) (mod p)` whenever `x = x' (mod p^(ord_p(n!)+1))`.
pub fn check_l31(n: u64, p: u64, x: &ExactInt, x_prime: &ExactInt) -> Result<IdentityCheckResult> {
    let modulus = l31_modulus(n, p)?;
    if !((x - x_prime).mod_floor(&modulus)).is_zero() {
        return Err(Error::param(format!(
            "x={x} and x'={x_prime} differ modulo {modulus}"
        )));
    }
    let params = format!("n={n};p={p};x={x};x'={x_prime}");
    let (a, b) = (binom(x, n as i64), binom(x_prime, n as i64));
    let failure = !((&a - &b).mod_floor(&big(p))).is_zero();
    let failure = failure.then(|| format!("C(x,n)={a}, C(x',n)={b} differ modulo {p}"));
    Ok(IdentityCheckResult::new(IdentityId::L31, params, failure))
}

/// `(n-i) C(i,l-1) <= C(n,l)` for `0 <= i <= n`.
pub fn check_l32(n: u64, l: u64, i: u64) -> Result<IdentityCheckResult> {
    if i > n {
        return Err(Error::param(format!("L32 needs i <= n, got i={i}, n={n}")));
    }
    let lhs = big(n - i) * binom(&big(i), l as i64 - 1);
    let rhs = binom(&big(n), l as i64);
    let failure = (lhs > rhs).then(|| format!("{lhs} > {rhs}"));
    Ok(IdentityCheckResult::new(
        IdentityId::L32,
        format!("n={n};l={l};i={i}"),
        failure,
    ))
}

/// Parameter ranges for an identity sweep. `None` means the default grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRanges {
    pub n: Option<Vec<u64>>,
    pub l: Option<Vec<u64>>,
    pub p: Option<Vec<u64>>,
    pub alpha: Option<Vec<u64>>,
    /// Number of random tuples for L31.
    pub samples: u64,
    pub seed: u64,
}

impl Default for IdentityRanges {
    fn default() -> Self {
        IdentityRanges {
            n: None,
            l: None,
            p: None,
            alpha: None,
            samples: 200,
            seed: 0x5eed,
        }
    }
}

const SCL3E_ROW_LIMIT: u64 = 100;

impl IdentityRanges {
    fn ns(&self, id: IdentityId) -> Vec<u64> {
        if let Some(n) = &self.n {
            return n.clone();
        }
        match id {
            IdentityId::E1 | IdentityId::E2 => (1..=12).collect(),
            IdentityId::S3 | IdentityId::SS3 => (1..=20).collect(),
            IdentityId::S4 => (0..=40).collect(),
            IdentityId::L31 => (0..=12).collect(),
            IdentityId::L32 => (0..=60).collect(),
            IdentityId::SCL3E => Vec::new(),
        }
    }

    fn ps(&self, id: IdentityId) -> Vec<u64> {
        if let Some(p) = &self.p {
            return p.clone();
        }
        match id {
            IdentityId::L31 => vec![2, 3, 5, 7],
            _ => vec![2, 3, 5],
        }
    }

    fn alphas(&self) -> Vec<u64> {
        self.alpha.clone().unwrap_or_else(|| vec![1, 2])
    }

    /// `(p, alpha)` pairs for SCL3E: the explicit product when either list is
    /// given, otherwise every pair whose row index is at most 100.
    pub fn scl3e_pairs(&self) -> Result<Vec<(u64, u64)>> {
        if self.p.is_some() || self.alpha.is_some() {
            let ps = self.p.clone().unwrap_or_else(|| vec![2, 3, 5]);
            let alphas = self.alpha.clone().unwrap_or_else(|| vec![1]);
            return Ok(ps
                .iter()
                .flat_map(|&p| alphas.iter().map(move |&a| (p, a)))
                .collect());
        }
        let mut pairs = Vec::new();
        for p in (2..=SCL3E_ROW_LIMIT).filter(|&p| is_prime(p)) {
            let mut alpha = 1;
            while checked_power(p, alpha)? * (p - 1) <= SCL3E_ROW_LIMIT {
                pairs.push((p, alpha));
                alpha += 1;
            }
        }
        Ok(pairs)
    }

    /// Largest triangle row the sweep of `id` reads.
    pub fn required_rows(&self, id: IdentityId) -> Result<u64> {
        Ok(match id {
            IdentityId::SCL3E => {
                let mut top = 0;
                for (p, a) in self.scl3e_pairs()? {
                    check_prime(p)?;
                    if a == 0 {
                        return Err(Error::param("SCL3E needs alpha >= 1"));
                    }
                    top = top.max(checked_power(p, a)? * (p - 1));
                }
                top
            }
            IdentityId::L31 | IdentityId::L32 => 0,
            _ => self.ns(id).into_iter().max().unwrap_or(0),
        })
    }

    /// Random `(n, p, x, x')` tuples with `x = x' (mod p^(ord_p(n!)+1))`.
    pub fn l31_tuples(&self) -> Result<Vec<(u64, u64, ExactInt, ExactInt)>> {
        let ns = self.ns(IdentityId::L31);
        let ps = self.ps(IdentityId::L31);
        if ns.is_empty() || ps.is_empty() {
            return Ok(Vec::new());
        }
        for &p in &ps {
            check_prime(p)?;
        }
        let mut rng = StdRng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.samples as usize);
        for _ in 0..self.samples {
            let n = ns[rng.random_range(0..ns.len())];
            let p = ps[rng.random_range(0..ps.len())];
            let x = ExactInt::from(rng.random_range(-1000i64..=1000));
            let shift = ExactInt::from(rng.random_range(-20i64..=20)) * l31_modulus(n, p)?;
            let x_prime = &x + shift;
            out.push((n, p, x, x_prime));
        }
        Ok(out)
    }
}

/// Every check of `id` over `ranges`, in a fixed order.
pub fn run_identity(
    tables: &ExactTables,
    id: IdentityId,
    ranges: &IdentityRanges,
) -> Result<Vec<IdentityCheckResult>> {
    tables.ensure_capacity(ranges.required_rows(id)?)?;
    let ns = ranges.ns(id);
    let mut out = Vec::new();
    match id {
        IdentityId::E1 => {
            let ls = ranges.l.clone().unwrap_or_else(|| (0..=4).collect());
            for &n in &ns {
                for &l in &ls {
                    out.push(check_e1(tables, n, l)?);
                }
            }
        }
        IdentityId::E2 => {
            for &n in &ns {
                out.push(check_e2(tables, n)?);
            }
        }
        IdentityId::S3 | IdentityId::SS3 => {
            for &n in &ns {
                for k in 1..=n.max(1) {
                    out.push(if id == IdentityId::S3 {
                        check_s3(tables, n, k)?
                    } else {
                        check_ss3(tables, n, k)?
                    });
                }
            }
        }
        IdentityId::S4 => {
            let ps = ranges.ps(id);
            let alphas = ranges.alphas();
            for &n in &ns {
                for k in 0..=n + 1 {
                    for &p in &ps {
                        for &a in &alphas {
                            out.push(check_s4(tables, n, k, p, a)?);
                        }
                    }
                }
            }
        }
        IdentityId::SCL3E => {
            for (p, a) in ranges.scl3e_pairs()? {
                out.push(check_scl3e(tables, p, a)?);
            }
        }
        IdentityId::L31 => {
            for (n, p, x, x_prime) in ranges.l31_tuples()? {
                out.push(check_l31(n, p, &x, &x_prime)?);
            }
        }
        IdentityId::L32 => {
            for &n in &ns {
                let ls = ranges.l.clone().unwrap_or_else(|| (0..=n).collect());
                for &l in ls.iter().filter(|&&l| l <= n) {
                    for i in 0..=n {
                        out.push(check_l32(n, l, i)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Largest row needed to run every identity in `ids` over `ranges`.
pub fn required_rows(ids: &[IdentityId], ranges: &IdentityRanges) -> Result<u64> {
    ids.iter()
        .try_fold(0, |acc, &id| Ok(acc.max(ranges.required_rows(id)?)))
}
