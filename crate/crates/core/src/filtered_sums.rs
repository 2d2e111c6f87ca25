//! Residue-class filtered sums, evaluated directly over the integers.
//!
//! Every sum runs over the natural support of its weights (`0..=n`, or
//! `0..n` for Eulerian rows) and visits only the members of the class by
//! stepping `k` by the modulus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{binom, binomial_row, check_prime, checked_power, pow, IntPolynomial};
use crate::scalar::Scalar;
use crate::triangles::Tables;

/// The integers congruent to `residue` modulo `modulus`, with the residue
/// stored canonically in `[0, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueClass {
    modulus: u64,
    residue: u64,
}

impl ResidueClass {
    pub fn new(modulus: u64, r: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::param("residue class modulus must be positive"));
        }
        let residue = (r as i128).rem_euclid(modulus as i128) as u64;
        Ok(ResidueClass { modulus, residue })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn contains(&self, k: i64) -> bool {
        (k as i128).rem_euclid(self.modulus as i128) as u64 == self.residue
    }

    /// Members of the class in `[0, hi]`, ascending.
    pub fn members_up_to(&self, hi: u64) -> impl Iterator<Item = u64> {
        (self.residue..=hi).step_by(self.modulus as usize)
    }

    /// One full period of classes: residues `0..modulus`.
    pub fn all(modulus: u64) -> Result<Vec<ResidueClass>> {
        (0..modulus as i64)
            .map(|r| ResidueClass::new(modulus, r))
            .collect()
    }
}

/// Index weight used by the alternating binomial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FleckVariant {
    /// Class modulo `p^alpha`, weight `C((k - r)/p^alpha, l)`.
    Exact,
    /// Class modulo `p^beta` with `alpha >= beta`, weight `C(floor((k - r)/p^alpha), l)`.
    Floor { beta: u64 },
}

fn expect_modulus(cls: &ResidueClass, expected: u64, what: &str) -> Result<()> {
    if cls.modulus() != expected {
        return Err(Error::param(format!(
            "{what}: class modulus {} but {expected} required",
            cls.modulus()
        )));
    }
    Ok(())
}

/// Powers `a^k` for `k = start, start + step, ...`.
struct StridedPowers<T: Scalar> {
    next: T,
    stride: T,
}

impl<T: Scalar> StridedPowers<T> {
    fn new(a: &T, start: u64, step: u64) -> Self {
        StridedPowers {
            next: pow(a, start),
            stride: pow(a, step),
        }
    }

    fn advance(&mut self) -> T {
        let cur = self.next.clone();
        self.next = cur.clone() * self.stride.clone();
        cur
    }
}

/// `sum_{k = r (mod d), 0 <= k <= n} C(n,k) (-1)^k w(k)` with the weight of `variant`.
pub fn fleck_sum<T: Scalar>(
    n: u64,
    p: u64,
    alpha: u64,
    cls: &ResidueClass,
    l: u64,
    variant: FleckVariant,
) -> Result<T> {
    check_prime(p)?;
    let p_alpha = checked_power(p, alpha)?;
    match variant {
        FleckVariant::Exact => expect_modulus(cls, p_alpha, "fleck sum")?,
        FleckVariant::Floor { beta } => {
            if beta > alpha {
                return Err(Error::param(format!("beta {beta} exceeds alpha {alpha}")));
            }
            expect_modulus(cls, checked_power(p, beta)?, "fleck sum (floor variant)")?
        }
    }
    let row: Vec<T> = binomial_row(n);
    let r = cls.residue();
    let mut total = T::zero();
    for k in cls.members_up_to(n) {
        let offset = k - r;
        let q = match variant {
            FleckVariant::Exact => {
                assert_eq!(offset % p_alpha, 0, "class member off the p^alpha lattice");
                offset / p_alpha
            }
            FleckVariant::Floor { .. } => offset / p_alpha,
        };
        let w = binom(&T::from_u64_exact(q), l as i64);
        if w.is_zero() {
            continue;
        }
        let term = row[k as usize].clone() * w;
        total = if k % 2 == 0 {
            total + term
        } else {
            total - term
        };
    }
    Ok(total)
}

/// `sum_{k = r (mod p^alpha), 0 <= k <= n} C(n,k) (-a)^k`.
pub fn binom_power_sum<T: Scalar>(
    n: u64,
    p: u64,
    alpha: u64,
    cls: &ResidueClass,
    a: &T,
) -> Result<T> {
    check_prime(p)?;
    expect_modulus(cls, checked_power(p, alpha)?, "binomial power sum")?;
    let row: Vec<T> = binomial_row(n);
    let neg_a = -a.clone();
    let mut powers = StridedPowers::new(&neg_a, cls.residue(), cls.modulus());
    Ok(cls.members_up_to(n).fold(T::zero(), |acc, k| {
        acc + row[k as usize].clone() * powers.advance()
    }))
}

/// `sum_{k = r (mod p^alpha)} <n,k> C((k - r)/p^alpha, l)` over `0 <= k < n`.
pub fn eulerian_wan_sum<T: Scalar>(
    tables: &Tables<T>,
    n: u64,
    p: u64,
    alpha: u64,
    cls: &ResidueClass,
    l: u64,
) -> Result<T> {
    check_prime(p)?;
    let p_alpha = checked_power(p, alpha)?;
    expect_modulus(cls, p_alpha, "eulerian sum")?;
    let row = tables.eulerian.row(n)?;
    let r = cls.residue();
    let mut total = T::zero();
    for k in cls.members_up_to(row.len() as u64 - 1) {
        let offset = k - r;
        assert_eq!(offset % p_alpha, 0, "class member off the p^alpha lattice");
        let w = binom(&T::from_u64_exact(offset / p_alpha), l as i64);
        total = total + row[k as usize].clone() * w;
    }
    Ok(total)
}

/// `sum_{k = r (mod p^alpha)} <n,k> a^k`.
pub fn eulerian_power_sum<T: Scalar>(
    tables: &Tables<T>,
    n: u64,
    p: u64,
    alpha: u64,
    cls: &ResidueClass,
    a: &T,
) -> Result<T> {
    check_prime(p)?;
    expect_modulus(cls, checked_power(p, alpha)?, "eulerian power sum")?;
    let row = tables.eulerian.row(n)?;
    let mut powers = StridedPowers::new(a, cls.residue(), cls.modulus());
    Ok(cls
        .members_up_to(row.len() as u64 - 1)
        .fold(T::zero(), |acc, k| {
            acc + row[k as usize].clone() * powers.advance()
        }))
}

/// `C_{d,r}(n,m,a) = sum_{k = r (mod d)} s(n,k) S(k,m) a^k`.
pub fn stirling_product_sum<T: Scalar>(
    tables: &Tables<T>,
    n: u64,
    m: u64,
    cls: &ResidueClass,
    a: &T,
) -> Result<T> {
    let s1 = tables.stirling1.row(n)?;
    let mut powers = StridedPowers::new(a, cls.residue(), cls.modulus());
    let mut total = T::zero();
    for k in cls.members_up_to(n) {
        let power = powers.advance();
        // S(k, m) vanishes for k < m.
        if k < m {
            continue;
        }
        let s2 = tables.stirling2.entry(k, m as i64)?;
        total = total + s1[k as usize].clone() * s2 * power;
    }
    Ok(total)
}

/// `sum_{k = r (mod d)} s(n,k) f(k) a^k`.
pub fn stirling_poly_sum<T: Scalar>(
    tables: &Tables<T>,
    n: u64,
    f: &IntPolynomial<T>,
    cls: &ResidueClass,
    a: &T,
) -> Result<T> {
    let s1 = tables.stirling1.row(n)?;
    let mut powers = StridedPowers::new(a, cls.residue(), cls.modulus());
    Ok(cls.members_up_to(n).fold(T::zero(), |acc, k| {
        acc + s1[k as usize].clone() * f.eval(&T::from_u64_exact(k)) * powers.advance()
    }))
}
