//! Exact integer primitives: p-adic valuations, Legendre's formula,
//! generalized binomial coefficients, rising factorials and integer
//! polynomials.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Trial-division primality test. Inputs in scope are tiny.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// The p-adic order of an integer: a natural number, or infinity for zero.
///
/// `Finite` is declared first so the derived ordering puts `Infinite` above
/// every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PAdicOrder {
    Finite(u64),
    Infinite,
}

impl PAdicOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            PAdicOrder::Finite(e) => Some(e),
            PAdicOrder::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PAdicOrder::Infinite)
    }

    /// Compare against a (possibly negative) integer exponent.
    pub fn cmp_exponent(self, bound: i64) -> Ordering {
        match self {
            PAdicOrder::Infinite => Ordering::Greater,
            PAdicOrder::Finite(e) => (e as i128).cmp(&(bound as i128)),
        }
    }
}

impl fmt::Display for PAdicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicOrder::Finite(e) => write!(f, "{e}"),
            PAdicOrder::Infinite => f.write_str("inf"),
        }
    }
}

// Serialized as a JSON number, or the string "inf".
impl Serialize for PAdicOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PAdicOrder::Finite(e) => s.serialize_u64(*e),
            PAdicOrder::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PAdicOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(e) => Ok(PAdicOrder::Finite(e)),
            Repr::Str(s) if s == "inf" => Ok(PAdicOrder::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad p-adic order {s:?}"))),
        }
    }
}

/// Largest `e` with `p^e | x`; infinite for `x = 0`.
pub fn ord_p<T: Scalar>(x: &T, p: u64) -> Result<PAdicOrder> {
    check_prime(p)?;
    Ok(ord_p_unchecked(x, p))
}

pub(crate) fn ord_p_unchecked<T: Scalar>(x: &T, p: u64) -> PAdicOrder {
    if x.is_zero() {
        return PAdicOrder::Infinite;
    }
    let p = T::from_u64_exact(p);
    let mut rest = x.abs();
    let mut e = 0u64;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return PAdicOrder::Finite(e);
        }
        rest = q;
        e += 1;
    }
}

/// `ord_p(n!)` by Legendre's formula.
pub fn ord_p_factorial(n: u64, p: u64) -> Result<u64> {
    check_prime(p)?;
    Ok(legendre(n, p))
}

pub(crate) fn legendre(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

pub fn factorial<T: Scalar>(n: u64) -> T {
    (2..=n).fold(T::one(), |acc, i| acc * T::from_u64_exact(i))
}

/// Generalized binomial coefficient `x(x-1)...(x-k+1)/k!`, zero for `k < 0`.
///
/// Integer-valued for every integer `x`, including negative ones. Each
/// prefix product `C(x, i) * (x - i)` is divisible by `i + 1`, so the running
/// value stays exact.
pub fn binom<T: Scalar>(x: &T, k: i64) -> T {
    if k < 0 {
        return T::zero();
    }
    let mut acc = T::one();
    for i in 0..k {
        let i = T::from_i64_exact(i);
        acc = acc * (x.clone() - i.clone()) / (i + T::one());
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Row `C(n, 0), ..., C(n, n)`.
pub fn binomial_row<T: Scalar>(n: u64) -> Vec<T> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut cur = T::one();
    row.push(cur.clone());
    for k in 0..n {
        cur = cur * T::from_u64_exact(n - k) / T::from_u64_exact(k + 1);
        row.push(cur.clone());
    }
    row
}

/// `x(x+1)...(x+n-1)`; the empty product is 1.
pub fn rising_factorial<T: Scalar>(x: &T, n: u64) -> T {
    let mut acc = T::one();
    for i in 0..n {
        acc = acc * (x.clone() + T::from_u64_exact(i));
    }
    acc
}

/// `base^exp` by repeated squaring, with `0^0 = 1`.
pub fn pow<T: Scalar>(base: &T, exp: u64) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// `p^e` as a scalar.
pub fn prime_power<T: Scalar>(p: u64, e: u64) -> T {
    pow(&T::from_u64_exact(p), e)
}

/// `p^e` as a machine integer, erroring instead of overflowing.
pub fn checked_power(p: u64, e: u64) -> Result<u64> {
    u32::try_from(e)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .ok_or_else(|| Error::param(format!("{p}^{e} overflows")))
}

pub fn floor_div(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_floor(&a, &b)
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_ceil(&a, &b)
}

/// Polynomial with integer coefficients; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zero coefficients are trimmed on construction, so two equal
/// polynomials always compare equal. The zero polynomial has degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> IntPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d + 1];
        coeffs[d] = T::one();
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Parse a comma-separated coefficient list, low degree first (`"0,0,1"` is `x^2`).
    pub fn parse_coeff_list(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                T::parse_decimal(t).ok_or_else(|| {
                    Error::param(format!("bad polynomial coefficient {t:?} in {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    /// The inverse of [`Self::parse_coeff_list`]; the zero polynomial is `"0"`.
    pub fn to_coeff_list(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl<T: Scalar> fmt::Display for IntPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}
