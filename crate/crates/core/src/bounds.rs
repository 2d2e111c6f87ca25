//! Right-hand-side exponents of the congruences, as exact integer formulas.
//!
//! A bound is returned verbatim, negative values included. Parameter tuples
//! outside a result's hypotheses yield [`BoundOutcome::NotApplicable`]
//! instead of an error so grid sweeps can record and skip them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{
    binom, ceil_div, check_prime, checked_power, floor_div, legendre, ord_p_unchecked, prime_power,
};
use crate::filtered_sums::FleckVariant;
use crate::{ExactInt, PAdicOrder, Poly};

/// Every congruence the verifier knows.
///
/// `Ds16Scaled` and `Su18Inferred` are not stated verbatim in the source
/// literature: the first is the Davis–Sun bound with the sum multiplied by
/// `l!`, the second the binomial power-sum bound the `EC2` argument relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "FLECK_1_1")]
    Fleck11,
    #[serde(rename = "WEISMAN_1_2")]
    Weisman12,
    #[serde(rename = "WAN_1_3")]
    Wan13,
    #[serde(rename = "SUN_1_4")]
    Sun14,
    #[serde(rename = "WAN_1_5")]
    Wan15,
    #[serde(rename = "DS_1_6")]
    Ds16,
    #[serde(rename = "DS_1_7")]
    Ds17,
    #[serde(rename = "EC1")]
    Ec1,
    #[serde(rename = "EC2")]
    Ec2,
    #[serde(rename = "SC1")]
    Sc1,
    #[serde(rename = "SC2")]
    Sc2,
    #[serde(rename = "SC3")]
    Sc3,
    #[serde(rename = "DS_1_6_SCALED")]
    Ds16Scaled,
    #[serde(rename = "SU_1_8_INFERRED")]
    Su18Inferred,
}

/// Parameter names in canonical order; also the lexicographic order of grid tuples.
pub const PARAM_ORDER: [&str; 9] = ["p", "alpha", "beta", "n", "l", "m", "f", "a", "r"];

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::Fleck11,
        TheoremId::Weisman12,
        TheoremId::Wan13,
        TheoremId::Sun14,
        TheoremId::Wan15,
        TheoremId::Ds16,
        TheoremId::Ds17,
        TheoremId::Ec1,
        TheoremId::Ec2,
        TheoremId::Sc1,
        TheoremId::Sc2,
        TheoremId::Sc3,
        TheoremId::Ds16Scaled,
        TheoremId::Su18Inferred,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Fleck11 => "FLECK_1_1",
            TheoremId::Weisman12 => "WEISMAN_1_2",
            TheoremId::Wan13 => "WAN_1_3",
            TheoremId::Sun14 => "SUN_1_4",
            TheoremId::Wan15 => "WAN_1_5",
            TheoremId::Ds16 => "DS_1_6",
            TheoremId::Ds17 => "DS_1_7",
            TheoremId::Ec1 => "EC1",
            TheoremId::Ec2 => "EC2",
            TheoremId::Sc1 => "SC1",
            TheoremId::Sc2 => "SC2",
            TheoremId::Sc3 => "SC3",
            TheoremId::Ds16Scaled => "DS_1_6_SCALED",
            TheoremId::Su18Inferred => "SU_1_8_INFERRED",
        }
    }

    /// Parameters the claim depends on, in [`PARAM_ORDER`].
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            TheoremId::Fleck11 => &["p", "n", "r"],
            TheoremId::Weisman12 => &["p", "alpha", "n", "r"],
            TheoremId::Wan13 => &["p", "n", "l", "r"],
            TheoremId::Sun14 => &["p", "alpha", "beta", "n", "l", "r"],
            TheoremId::Wan15
            | TheoremId::Ds16
            | TheoremId::Ds17
            | TheoremId::Ds16Scaled
            | TheoremId::Ec1 => &["p", "alpha", "n", "l", "r"],
            TheoremId::Ec2 | TheoremId::Su18Inferred => &["p", "alpha", "n", "a", "r"],
            TheoremId::Sc1 => &["p", "n", "m", "a", "r"],
            TheoremId::Sc2 => &["p", "n", "f", "a", "r"],
            TheoremId::Sc3 => &["p", "alpha", "n", "m", "a", "r"],
        }
    }

    pub fn uses(self, param: &str) -> bool {
        self.parameters().contains(&param)
    }

    /// Modulus of the residue filter.
    pub fn modulus(self, p: u64, alpha: u64, beta: u64) -> Result<u64> {
        match self {
            TheoremId::Fleck11 | TheoremId::Wan13 => Ok(p),
            TheoremId::Sun14 => checked_power(p, beta),
            TheoremId::Sc1 | TheoremId::Sc2 => Ok(p - 1),
            TheoremId::Sc3 => Ok(checked_power(p, alpha)? * (p - 1)),
            _ => checked_power(p, alpha),
        }
    }

    /// Index weight for the alternating binomial families.
    pub fn fleck_variant(self, beta: u64) -> Option<FleckVariant> {
        match self {
            TheoremId::Fleck11
            | TheoremId::Weisman12
            | TheoremId::Wan13
            | TheoremId::Wan15
            | TheoremId::Ds16
            | TheoremId::Ds17
            | TheoremId::Ds16Scaled => Some(FleckVariant::Exact),
            TheoremId::Sun14 => Some(FleckVariant::Floor { beta }),
            _ => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase().replace('-', "_");
        let id = match key.as_str() {
            "FLECK" | "FLECK_1_1" => TheoremId::Fleck11,
            "WEISMAN" | "WEISMAN_1_2" => TheoremId::Weisman12,
            "WAN13" | "WAN_1_3" => TheoremId::Wan13,
            "SUN" | "SUN14" | "SUN_1_4" => TheoremId::Sun14,
            "WAN15" | "WAN_1_5" => TheoremId::Wan15,
            "DS16" | "DS_1_6" => TheoremId::Ds16,
            "DS17" | "DS_1_7" => TheoremId::Ds17,
            "EC1" => TheoremId::Ec1,
            "EC2" => TheoremId::Ec2,
            "SC1" => TheoremId::Sc1,
            "SC2" => TheoremId::Sc2,
            "SC3" => TheoremId::Sc3,
            "DS16_SCALED" | "DS_1_6_SCALED" => TheoremId::Ds16Scaled,
            "SU18" | "SU_1_8" | "SU_1_8_INFERRED" => TheoremId::Su18Inferred,
            _ => return Err(Error::param(format!("unknown theorem id {s:?}"))),
        };
        Ok(id)
    }
}

/// One parameter tuple. Fields a theorem does not use are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub n: u64,
    pub p: u64,
    pub alpha: u64,
    pub beta: u64,
    pub l: u64,
    pub m: u64,
    pub r: i64,
    pub a: ExactInt,
    pub f: Poly,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: 1,
            p: 2,
            alpha: 1,
            beta: 0,
            l: 0,
            m: 1,
            r: 0,
            a: ExactInt::one(),
            f: Poly::constant(ExactInt::one()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSpec {
    pub theorem: TheoremId,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundOutcome {
    /// `ord_p(sum) >= exponent`.
    Exponent(i64),
    /// `ord_p(sum) >= ord_p(n!) - log_p C(n, l)`, decided by [`sc2_holds`].
    LogBinomial { l: u64, factorial_order: u64 },
    /// The parameters fall outside the result's hypotheses.
    NotApplicable(String),
}

fn na(msg: impl Into<String>) -> Result<BoundOutcome> {
    Ok(BoundOutcome::NotApplicable(msg.into()))
}

fn to_i64(v: u64) -> i64 {
    i64::try_from(v).expect("parameter exceeds i64")
}

/// `l = min(deg f, floor(n/p))` for the log-binomial bound.
pub fn sc2_l(n: u64, p: u64, f: &Poly) -> u64 {
    (f.degree() as u64).min(n / p)
}

pub fn bound_exponent(spec: &BoundSpec) -> Result<BoundOutcome> {
    let t = spec.theorem;
    let Params {
        n,
        p,
        alpha,
        beta,
        l,
        m,
        ref a,
        ref f,
        ..
    } = spec.params;
    check_prime(p)?;

    let needs_alpha = t.uses("alpha");
    if needs_alpha && alpha == 0 {
        return na("alpha must be positive");
    }
    if n == 0 && t != TheoremId::Su18Inferred {
        return na("n must be positive");
    }
    if (t.uses("m")) && m == 0 {
        return na("m must be positive");
    }
    let a_is_one_mod_p = || (a - ExactInt::one()).is_multiple_of(&ExactInt::from(p));

    let (ni, pi, li) = (to_i64(n), to_i64(p), to_i64(l));
    let q = if needs_alpha {
        to_i64(checked_power(p, alpha - 1)?)
    } else {
        1
    };
    let pa = q * pi;
    let ord_fact = |x: u64| to_i64(legendre(x, p));

    let e = match t {
        TheoremId::Fleck11 => floor_div(ni - 1, pi - 1),
        TheoremId::Weisman12 => floor_div(ni - q, q * (pi - 1)),
        TheoremId::Wan13 => {
            if n <= l * p {
                return na("requires n > l p");
            }
            floor_div(ni - li * pi - 1, pi - 1)
        }
        TheoremId::Sun14 => {
            if beta > alpha {
                return na("requires alpha >= beta");
            }
            if n < checked_power(p, alpha - 1)? {
                return na("requires n >= p^(alpha-1)");
            }
            floor_div(ni - q - li, q * (pi - 1)) - (li - 1) * to_i64(alpha) - to_i64(beta)
        }
        TheoremId::Wan15 => floor_div(ni - q - li * pa, q * (pi - 1)),
        TheoremId::Ds16 => ord_fact(n / pa as u64),
        TheoremId::Ds16Scaled => ord_fact(n / pa as u64) - ord_fact(l),
        TheoremId::Ds17 => ord_fact(n / q as u64) - li - ord_fact(l),
        TheoremId::Ec1 => ord_fact(n / q as u64) - ceil_div(q + li * pa, q * (pi - 1)),
        TheoremId::Ec2 => {
            if n < pa as u64 {
                return na("requires n >= p^alpha");
            }
            if !a_is_one_mod_p() {
                return na("requires a = 1 (mod p)");
            }
            ord_fact(n / q as u64) - 1
        }
        TheoremId::Su18Inferred => {
            if !a_is_one_mod_p() {
                return na("requires a = 1 (mod p)");
            }
            floor_div(ni - q, q * (pi - 1))
        }
        TheoremId::Sc1 => ord_fact(n) - ord_fact(m),
        TheoremId::Sc2 => {
            return Ok(BoundOutcome::LogBinomial {
                l: sc2_l(n, p, f),
                factorial_order: legendre(n, p),
            })
        }
        TheoremId::Sc3 => floor_div(ni - pa, pa * (pi - 1)) - ord_fact(m),
    };
    Ok(BoundOutcome::Exponent(e))
}

/// Exact operands of the log-binomial comparison:
/// `C(n,l) * p^ord` (left) against `p^{ord_p(n!)}` (right).
pub fn sc2_operands(n: u64, p: u64, f: &Poly, ord: u64) -> (ExactInt, ExactInt) {
    let l = sc2_l(n, p, f);
    let lhs = binom(&ExactInt::from(n), l as i64) * prime_power::<ExactInt>(p, ord);
    let rhs = prime_power::<ExactInt>(p, legendre(n, p));
    (lhs, rhs)
}

/// Whether `ord_p(sum) >= ord_p(n!) - log_p C(n, l)` with `l = min(deg f, floor(n/p))`.
///
/// No floating point: the inequality is equivalent to
/// `C(n,l) * p^{ord_p(sum)} >= p^{ord_p(n!)}`. A zero sum always holds.
pub fn sc2_holds(n: u64, p: u64, f: &Poly, sum: &ExactInt) -> Result<bool> {
    check_prime(p)?;
    match ord_p_unchecked(sum, p) {
        PAdicOrder::Infinite => Ok(true),
        PAdicOrder::Finite(ord) => {
            let (lhs, rhs) = sc2_operands(n, p, f, ord);
            Ok(lhs >= rhs)
        }
    }
}

/// Whether the log-binomial bound is negative, i.e. `C(n,l) > p^{ord_p(n!)}`.
pub fn sc2_bound_is_negative(n: u64, p: u64, f: &Poly) -> bool {
    let (lhs, rhs) = sc2_operands(n, p, f, 0);
    lhs > rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn spec(theorem: TheoremId, f: impl FnOnce(&mut Params)) -> BoundSpec {
        let mut params = Params::default();
        f(&mut params);
        BoundSpec { theorem, params }
    }

    fn exponent(theorem: TheoremId, f: impl FnOnce(&mut Params)) -> i64 {
        match bound_exponent(&spec(theorem, f)).unwrap() {
            BoundOutcome::Exponent(e) => e,
            other => panic!("expected an exponent, got {other:?}"),
        }
    }

    fn not_applicable(theorem: TheoremId, f: impl FnOnce(&mut Params)) -> bool {
        matches!(
            bound_exponent(&spec(theorem, f)).unwrap(),
            BoundOutcome::NotApplicable(_)
        )
    }

    #[test]
    fn documented_examples() {
        assert_eq!(exponent(TheoremId::Fleck11, |p| p.n = 3), 2);
        assert_eq!(exponent(TheoremId::Ec1, |p| p.n = 4), 2);
        assert_eq!(exponent(TheoremId::Sc3, |p| p.n = 4), 1);
        assert_eq!(
            exponent(TheoremId::Sc1, |p| {
                p.n = 4;
                p.m = 2;
                p.p = 3
            }),
            1
        );
        assert_eq!(
            exponent(TheoremId::Ec2, |p| {
                p.n = 4;
                p.a = 3.into()
            }),
            2
        );
    }

    #[test]
    fn formulas_by_hand() {
        // floor((10 - 3)/(3*2)) = 1
        assert_eq!(
            exponent(TheoremId::Weisman12, |p| {
                p.n = 10;
                p.p = 3;
                p.alpha = 2
            }),
            1
        );
        // floor((20 - 2*3 - 1)/2) = 6
        assert_eq!(
            exponent(TheoremId::Wan13, |p| {
                p.n = 20;
                p.p = 3;
                p.l = 2
            }),
            6
        );
        // floor((30 - 2 - 1)/(2*1)) - 0*2 - 1 = 12
        assert_eq!(
            exponent(TheoremId::Sun14, |p| {
                p.n = 30;
                p.alpha = 2;
                p.beta = 1;
                p.l = 1
            }),
            12
        );
        // floor((30 - 3 - 9)/(3*2)) = 3
        assert_eq!(
            exponent(TheoremId::Wan15, |p| {
                p.n = 30;
                p.p = 3;
                p.alpha = 2;
                p.l = 1
            }),
            3
        );
        // ord_2(floor(40/4)!) = 8
        assert_eq!(
            exponent(TheoremId::Ds16, |p| {
                p.n = 40;
                p.alpha = 2
            }),
            8
        );
        // ord_2(10!) - ord_2(3!) = 7
        assert_eq!(
            exponent(TheoremId::Ds16Scaled, |p| {
                p.n = 40;
                p.alpha = 2;
                p.l = 3
            }),
            7
        );
        // ord_2(20!) - 3 - ord_2(3!) = 18 - 3 - 1
        assert_eq!(
            exponent(TheoremId::Ds17, |p| {
                p.n = 40;
                p.alpha = 2;
                p.l = 3
            }),
            14
        );
        // ord_3(floor(30/3)!) - ceil((3 + 2*9)/(3*2)) = 4 - 4
        assert_eq!(
            exponent(TheoremId::Ec1, |p| {
                p.n = 30;
                p.p = 3;
                p.alpha = 2;
                p.l = 2
            }),
            0
        );
        // floor((7 - 1)/1) = 6
        assert_eq!(exponent(TheoremId::Su18Inferred, |p| p.n = 7), 6);
    }

    #[test]
    fn bounds_may_be_negative() {
        assert_eq!(
            exponent(TheoremId::Sc3, |p| {
                p.n = 1;
                p.p = 3;
                p.m = 9
            }),
            -1 - 4
        );
        assert_eq!(
            exponent(TheoremId::Ec2, |p| {
                p.n = 3;
                p.p = 3;
                p.a = 4.into()
            }),
            0
        );
        assert_eq!(
            exponent(TheoremId::Ec2, |p| {
                p.n = 5;
                p.p = 5;
                p.a = 6.into()
            }),
            0
        );
        assert_eq!(
            exponent(TheoremId::Su18Inferred, |p| {
                p.n = 0;
                p.p = 5
            }),
            -1
        );
    }

    #[test]
    fn hypotheses_yield_not_applicable() {
        assert!(not_applicable(TheoremId::Wan13, |p| {
            p.n = 4;
            p.l = 2
        }));
        assert!(!not_applicable(TheoremId::Wan13, |p| {
            p.n = 5;
            p.l = 2
        }));
        assert!(not_applicable(TheoremId::Sun14, |p| {
            p.alpha = 1;
            p.beta = 2;
            p.n = 10
        }));
        assert!(not_applicable(TheoremId::Sun14, |p| {
            p.p = 3;
            p.alpha = 3;
            p.n = 8
        }));
        assert!(!not_applicable(TheoremId::Sun14, |p| {
            p.p = 3;
            p.alpha = 3;
            p.n = 9
        }));
        assert!(not_applicable(TheoremId::Ec2, |p| p.n = 1));
        assert!(not_applicable(TheoremId::Ec2, |p| {
            p.n = 9;
            p.p = 3;
            p.a = 2.into()
        }));
        assert!(!not_applicable(TheoremId::Ec2, |p| {
            p.n = 9;
            p.p = 3;
            p.a = (-2).into()
        }));
        assert!(not_applicable(TheoremId::Weisman12, |p| p.alpha = 0));
        assert!(not_applicable(TheoremId::Fleck11, |p| p.n = 0));
        assert!(not_applicable(TheoremId::Sc1, |p| p.m = 0));
    }

    #[test]
    fn composite_prime_is_an_error() {
        let s = spec(TheoremId::Fleck11, |p| p.p = 6);
        assert!(matches!(bound_exponent(&s), Err(Error::NotPrime(6))));
    }

    #[test]
    fn floor_bounds_are_monotone_in_n() {
        for theorem in [
            TheoremId::Fleck11,
            TheoremId::Weisman12,
            TheoremId::Wan15,
            TheoremId::Ds16,
            TheoremId::Ds17,
            TheoremId::Ec1,
            TheoremId::Sc3,
            TheoremId::Sun14,
        ] {
            for p in [2u64, 3, 5] {
                for alpha in 1..=3u64 {
                    for l in 0..=3u64 {
                        let mut prev = i64::MIN;
                        for n in 1..=200u64 {
                            let s = spec(theorem, |x| {
                                x.n = n;
                                x.p = p;
                                x.alpha = alpha;
                                x.beta = alpha;
                                x.l = l;
                            });
                            if let BoundOutcome::Exponent(e) = bound_exponent(&s).unwrap() {
                                assert!(e >= prev, "{theorem} p={p} alpha={alpha} l={l} n={n}");
                                prev = e;
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn improved_wan_agrees_with_wan_at_alpha_one() {
        for p in [2u64, 3, 5, 7] {
            for l in 0..=4u64 {
                for n in (l * p + 1)..=200 {
                    let set = |x: &mut Params| {
                        x.n = n;
                        x.p = p;
                        x.l = l;
                    };
                    assert_eq!(
                        exponent(TheoremId::Wan13, set),
                        exponent(TheoremId::Wan15, set)
                    );
                }
            }
        }
    }

    #[test]
    fn sc2_examples() {
        let one = Poly::constant(1.into());
        assert!(sc2_holds(3, 2, &one, &ExactInt::zero()).unwrap());
        assert!(sc2_holds(3, 2, &one, &6.into()).unwrap());
        assert!(!sc2_holds(3, 2, &one, &3.into()).unwrap());
        let x2 = Poly::monomial(2);
        assert_eq!(sc2_l(4, 2, &x2), 2);
        assert!(sc2_holds(4, 2, &x2, &2.into()).unwrap());
        assert_eq!(sc2_operands(4, 2, &x2, 1), (12.into(), 8.into()));
        assert!(!sc2_holds(4, 2, &x2, &1.into()).unwrap());
    }

    #[test]
    fn sc2_constant_reduces_to_factorial_order() {
        let c = Poly::constant(7.into());
        for p in [2u64, 3, 5] {
            for n in 1..=40u64 {
                let target = legendre(n, p);
                for e in 0..=target + 1 {
                    let sum = prime_power::<ExactInt>(p, e) * 11;
                    assert_eq!(sc2_holds(n, p, &c, &sum).unwrap(), e >= target);
                }
            }
        }
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{t}\""));
        }
        assert_eq!("fleck".parse::<TheoremId>().unwrap(), TheoremId::Fleck11);
        assert_eq!("ds-1-7".parse::<TheoremId>().unwrap(), TheoremId::Ds17);
        assert!("euler".parse::<TheoremId>().is_err());
    }

    #[test]
    fn parameters_follow_canonical_order() {
        for t in TheoremId::ALL {
            let idx: Vec<usize> = t
                .parameters()
                .iter()
                .map(|name| PARAM_ORDER.iter().position(|o| o == name).unwrap())
                .collect();
            assert!(idx.windows(2).all(|w| w[0] < w[1]), "{t}");
        }
    }

    #[test]
    fn moduli() {
        assert_eq!(TheoremId::Fleck11.modulus(5, 3, 0).unwrap(), 5);
        assert_eq!(TheoremId::Sun14.modulus(3, 3, 2).unwrap(), 9);
        assert_eq!(TheoremId::Sc1.modulus(2, 1, 0).unwrap(), 1);
        assert_eq!(TheoremId::Sc3.modulus(3, 2, 0).unwrap(), 18);
        assert_eq!(TheoremId::Ec1.modulus(5, 2, 0).unwrap(), 25);
    }
}
