//! Claim evaluation, grid sweeps and outcome aggregation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_exponent, sc2_bound_is_negative, sc2_operands, BoundOutcome, BoundSpec, Params, TheoremId,
};
use crate::error::{Error, Result};
use crate::exactmath::{check_prime, ord_p_unchecked};
use crate::filtered_sums::{
    binom_power_sum, eulerian_power_sum, eulerian_wan_sum, fleck_sum, stirling_poly_sum,
    stirling_product_sum, ResidueClass,
};
use crate::{ExactInt, ExactTables, PAdicOrder, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "HOLDS")]
    Holds,
    #[serde(rename = "HOLDS-VACUOUS")]
    HoldsVacuous,
    #[serde(rename = "HOLDS-TRIVIAL-BOUND")]
    HoldsTrivialBound,
    #[serde(rename = "TIGHT")]
    Tight,
    #[serde(rename = "VIOLATION")]
    Violation,
    #[serde(rename = "NOT-APPLICABLE")]
    NotApplicable,
}

impl Verdict {
    pub const ALL: [Verdict; 6] = [
        Verdict::Holds,
        Verdict::HoldsVacuous,
        Verdict::HoldsTrivialBound,
        Verdict::Tight,
        Verdict::Violation,
        Verdict::NotApplicable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::HoldsVacuous => "HOLDS-VACUOUS",
            Verdict::HoldsTrivialBound => "HOLDS-TRIVIAL-BOUND",
            Verdict::Tight => "TIGHT",
            Verdict::Violation => "VIOLATION",
            Verdict::NotApplicable => "NOT-APPLICABLE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters as they appear in a record: only those the theorem uses.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RecordParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    /// Polynomial as a low-to-high coefficient list.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f: Option<String>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        default,
        with = "crate::report::decimal_opt"
    )]
    pub a: Option<ExactInt>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<i64>,
}

impl RecordParams {
    pub fn from_params(theorem: TheoremId, params: &Params) -> Self {
        let used = |name| theorem.uses(name);
        RecordParams {
            p: used("p").then_some(params.p),
            alpha: used("alpha").then_some(params.alpha),
            beta: used("beta").then_some(params.beta),
            n: used("n").then_some(params.n),
            l: used("l").then_some(params.l),
            m: used("m").then_some(params.m),
            f: used("f").then(|| params.f.to_coeff_list()),
            a: used("a").then(|| params.a.clone()),
            r: used("r").then_some(params.r),
        }
    }

    /// `name=value` pairs in canonical order, `;`-separated.
    pub fn to_compact(&self) -> String {
        let mut parts = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        };
        push("p", self.p.map(|v| v.to_string()));
        push("alpha", self.alpha.map(|v| v.to_string()));
        push("beta", self.beta.map(|v| v.to_string()));
        push("n", self.n.map(|v| v.to_string()));
        push("l", self.l.map(|v| v.to_string()));
        push("m", self.m.map(|v| v.to_string()));
        push("f", self.f.clone());
        push("a", self.a.as_ref().map(|v| v.to_string()));
        push("r", self.r.map(|v| v.to_string()));
        parts.join(";")
    }

    pub fn from_compact(s: &str) -> Result<Self> {
        let mut out = RecordParams::default();
        for part in s.split(';').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::param(format!("bad parameter {part:?}")))?;
            let bad = || Error::param(format!("bad value in {part:?}"));
            let num = || v.parse::<u64>().map_err(|_| bad());
            match k {
                "p" => out.p = Some(num()?),
                "alpha" => out.alpha = Some(num()?),
                "beta" => out.beta = Some(num()?),
                "n" => out.n = Some(num()?),
                "l" => out.l = Some(num()?),
                "m" => out.m = Some(num()?),
                "f" => out.f = Some(v.to_string()),
                "a" => out.a = Some(v.parse().map_err(|_| bad())?),
                "r" => out.r = Some(v.parse().map_err(|_| bad())?),
                _ => return Err(Error::param(format!("unknown parameter {k:?}"))),
            }
        }
        Ok(out)
    }
}

/// The right-hand side as stored in a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundValue {
    Exponent(i64),
    /// The log-binomial bound, which has no integer value.
    Marker(String),
}

pub const SC2_MARKER: &str = "log_p_binomial";

/// The exact operands of the log-binomial comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBinomialComparison {
    #[serde(with = "crate::report::decimal")]
    pub lhs: ExactInt,
    #[serde(with = "crate::report::decimal")]
    pub rhs: ExactInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub theorem_id: TheoremId,
    pub params: RecordParams,
    #[serde(with = "crate::report::decimal_opt", default)]
    pub sum: Option<ExactInt>,
    pub ord: Option<PAdicOrder>,
    pub bound: Option<BoundValue>,
    pub verdict: Verdict,
    pub margin: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comparison: Option<LogBinomialComparison>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Evaluate the filtered sum a theorem is about.
pub fn claim_sum(tables: &ExactTables, theorem: TheoremId, params: &Params) -> Result<ExactInt> {
    let Params {
        n,
        p,
        alpha,
        beta,
        l,
        m,
        r,
        ref a,
        ref f,
    } = *params;
    let cls = ResidueClass::new(theorem.modulus(p, alpha, beta)?, r)?;
    if let Some(variant) = theorem.fleck_variant(beta) {
        // Fleck and the first Wan extension filter modulo p.
        let alpha = match theorem {
            TheoremId::Fleck11 | TheoremId::Wan13 => 1,
            _ => alpha,
        };
        let l = if theorem == TheoremId::Fleck11 || theorem == TheoremId::Weisman12 {
            0
        } else {
            l
        };
        return fleck_sum(n, p, alpha, &cls, l, variant);
    }
    match theorem {
        TheoremId::Ec1 => eulerian_wan_sum(tables, n, p, alpha, &cls, l),
        TheoremId::Ec2 => eulerian_power_sum(tables, n, p, alpha, &cls, a),
        TheoremId::Su18Inferred => binom_power_sum(n, p, alpha, &cls, a),
        TheoremId::Sc1 | TheoremId::Sc3 => stirling_product_sum(tables, n, m, &cls, a),
        TheoremId::Sc2 => stirling_poly_sum(tables, n, f, &cls, a),
        _ => unreachable!("alternating binomial families handled above"),
    }
}

fn needs_tables(theorem: TheoremId) -> bool {
    matches!(
        theorem,
        TheoremId::Ec1 | TheoremId::Ec2 | TheoremId::Sc1 | TheoremId::Sc2 | TheoremId::Sc3
    )
}

/// Evaluate one claim. Tuples outside the theorem's hypotheses yield a
/// `NOT-APPLICABLE` record; with `evaluate_outside` the record still carries
/// the sum, its order and the formal bound.
pub fn check_claim(
    tables: &ExactTables,
    theorem: TheoremId,
    params: &Params,
    evaluate_outside: bool,
) -> Result<ClaimRecord> {
    if needs_tables(theorem) {
        tables.ensure_capacity(params.n)?;
    }
    let spec = BoundSpec {
        theorem,
        params: params.clone(),
    };
    let outcome = bound_exponent(&spec)?;
    let mut record = ClaimRecord {
        theorem_id: theorem,
        params: RecordParams::from_params(theorem, params),
        sum: None,
        ord: None,
        bound: None,
        verdict: Verdict::NotApplicable,
        margin: None,
        comparison: None,
        note: None,
    };

    if let BoundOutcome::NotApplicable(reason) = outcome {
        record.note = Some(reason);
        if evaluate_outside {
            if let Ok(sum) = claim_sum(tables, theorem, params) {
                record.ord = Some(ord_p_unchecked(&sum, params.p));
                record.sum = Some(sum);
            }
        }
        return Ok(record);
    }

    let sum = claim_sum(tables, theorem, params)?;
    let ord = ord_p_unchecked(&sum, params.p);
    record.ord = Some(ord);

    match outcome {
        BoundOutcome::Exponent(bound) => {
            record.bound = Some(BoundValue::Exponent(bound));
            record.verdict = classify(ord, bound);
            record.margin = ord.finite().map(|e| e as i64 - bound);
        }
        BoundOutcome::LogBinomial { .. } => {
            record.bound = Some(BoundValue::Marker(SC2_MARKER.to_string()));
            record.verdict = match ord {
                PAdicOrder::Infinite => Verdict::HoldsVacuous,
                PAdicOrder::Finite(e) => {
                    let (lhs, rhs) = sc2_operands(params.n, params.p, &params.f, e);
                    let holds = lhs >= rhs;
                    record.comparison = Some(LogBinomialComparison { lhs, rhs });
                    if !holds {
                        Verdict::Violation
                    } else if sc2_bound_is_negative(params.n, params.p, &params.f) {
                        Verdict::HoldsTrivialBound
                    } else {
                        Verdict::Holds
                    }
                }
            };
        }
        BoundOutcome::NotApplicable(_) => unreachable!(),
    }
    record.sum = Some(sum);
    Ok(record)
}

/// Verdict for an integer bound.
pub fn classify(ord: PAdicOrder, bound: i64) -> Verdict {
    match ord {
        PAdicOrder::Infinite => Verdict::HoldsVacuous,
        PAdicOrder::Finite(_) => match ord.cmp_exponent(bound) {
            Ordering::Less => Verdict::Violation,
            Ordering::Equal => Verdict::Tight,
            Ordering::Greater if bound < 0 => Verdict::HoldsTrivialBound,
            Ordering::Greater => Verdict::Holds,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "policy", content = "values")]
pub enum ResiduePolicy {
    /// One full period `[0, d)` of the theorem's modulus.
    All,
    List(Vec<i64>),
}

/// A finite parameter grid for one theorem. Lists for parameters the
/// theorem does not use are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theorem_id: TheoremId,
    pub n: Vec<u64>,
    pub p: Vec<u64>,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub l: Vec<u64>,
    pub m: Vec<u64>,
    pub a: Vec<i64>,
    /// Polynomials as low-to-high coefficient lists.
    pub f: Vec<String>,
    pub r: ResiduePolicy,
    /// Skip tuples with `m > n`.
    #[serde(default)]
    pub m_at_most_n: bool,
    /// Evaluate sums for tuples outside the hypotheses as well.
    #[serde(default)]
    pub evaluate_outside: bool,
}

impl GridSpec {
    /// A grid with single default values for every parameter.
    pub fn new(theorem: TheoremId) -> Self {
        GridSpec {
            theorem_id: theorem,
            n: vec![1],
            p: vec![2],
            alpha: vec![1],
            beta: vec![0],
            l: vec![0],
            m: vec![1],
            a: vec![1],
            f: vec!["1".to_string()],
            r: ResiduePolicy::All,
            m_at_most_n: false,
            evaluate_outside: false,
        }
    }

    pub fn validate(&self) -> Result<Vec<Poly>> {
        let t = self.theorem_id;
        let nonempty = |name: &str, len: usize| {
            if t.uses(name) && len == 0 {
                Err(Error::param(format!("empty range for {name}")))
            } else {
                Ok(())
            }
        };
        nonempty("n", self.n.len())?;
        nonempty("p", self.p.len())?;
        nonempty("alpha", self.alpha.len())?;
        nonempty("beta", self.beta.len())?;
        nonempty("l", self.l.len())?;
        nonempty("m", self.m.len())?;
        nonempty("a", self.a.len())?;
        nonempty("f", self.f.len())?;
        if let ResiduePolicy::List(rs) = &self.r {
            nonempty("r", rs.len())?;
        }
        for &p in &self.p {
            check_prime(p)?;
        }
        self.f.iter().map(|s| Poly::parse_coeff_list(s)).collect()
    }

    pub fn max_n(&self) -> u64 {
        self.n.iter().copied().max().unwrap_or(0)
    }

    /// Every tuple in lexicographic order of `p, alpha, beta, n, l, m, f, a, r`.
    pub fn tuples(&self) -> Result<Vec<Params>> {
        let polys = self.validate()?;
        let t = self.theorem_id;
        let d = Params::default();
        fn pick<V: Clone + PartialEq>(used: bool, values: &[V], default: V) -> Vec<V> {
            if used {
                let mut v = values.to_vec();
                v.dedup();
                v
            } else {
                vec![default]
            }
        }
        let sorted = |v: &[u64]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ps = pick(t.uses("p"), &sorted(&self.p), d.p);
        let alphas = pick(t.uses("alpha"), &sorted(&self.alpha), d.alpha);
        let betas = pick(t.uses("beta"), &sorted(&self.beta), d.beta);
        let ns = pick(t.uses("n"), &sorted(&self.n), d.n);
        let ls = pick(t.uses("l"), &sorted(&self.l), d.l);
        let ms = pick(t.uses("m"), &sorted(&self.m), d.m);
        let fs = pick(t.uses("f"), &polys, d.f.clone());
        let mut a_sorted = self.a.clone();
        a_sorted.sort_unstable();
        a_sorted.dedup();
        let a_values = pick(t.uses("a"), &a_sorted, 1);

        let mut out = Vec::new();
        for &p in &ps {
            for &alpha in &alphas {
                for &beta in &betas {
                    let modulus = t.modulus(p, alpha, beta)?;
                    let residues: Vec<i64> = match &self.r {
                        ResiduePolicy::All => (0..modulus as i64).collect(),
                        ResiduePolicy::List(rs) => {
                            let mut rs = rs.clone();
                            rs.sort_unstable();
                            rs.dedup();
                            rs
                        }
                    };
                    for &n in &ns {
                        for &l in &ls {
                            for &m in &ms {
                                if self.m_at_most_n && t.uses("m") && m > n {
                                    continue;
                                }
                                for f in &fs {
                                    for &a in &a_values {
                                        for &r in &residues {
                                            out.push(Params {
                                                n,
                                                p,
                                                alpha,
                                                beta,
                                                l,
                                                m,
                                                r,
                                                a: a.into(),
                                                f: f.clone(),
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub counts: BTreeMap<Verdict, u64>,
    /// Smallest `ord - bound` over non-vacuous records with an integer bound.
    pub min_margin: Option<i64>,
    pub first_violation: Option<ClaimRecord>,
}

impl Summary {
    pub fn from_records(records: &[ClaimRecord]) -> Self {
        let mut counts: BTreeMap<Verdict, u64> = Verdict::ALL.iter().map(|v| (*v, 0)).collect();
        for r in records {
            *counts.entry(r.verdict).or_default() += 1;
        }
        let min_margin = records
            .iter()
            .filter(|r| r.verdict != Verdict::NotApplicable)
            .filter_map(|r| r.margin)
            .min();
        Summary {
            total: records.len() as u64,
            counts,
            min_margin,
            first_violation: records
                .iter()
                .find(|r| r.verdict == Verdict::Violation)
                .cloned(),
        }
    }

    pub fn count(&self, v: Verdict) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn violations(&self) -> u64 {
        self.count(Verdict::Violation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridOutcome {
    pub records: Vec<ClaimRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Stop after the first violation (records end at it).
    pub fail_fast: bool,
}

const FAIL_FAST_CHUNK: usize = 2048;

/// Evaluate every tuple of `grid`. Record order is the tuple order no matter
/// how many workers run.
pub fn run_grid(tables: &ExactTables, grid: &GridSpec, opts: RunOptions) -> Result<GridOutcome> {
    let tuples = grid.tuples()?;
    if needs_tables(grid.theorem_id) {
        tables.ensure_capacity(grid.max_n())?;
    }
    let eval = |chunk: &[Params]| -> Result<Vec<ClaimRecord>> {
        chunk
            .par_iter()
            .map(|p| check_claim(tables, grid.theorem_id, p, grid.evaluate_outside))
            .collect()
    };
    let run = || -> Result<Vec<ClaimRecord>> {
        if !opts.fail_fast {
            return eval(&tuples);
        }
        let mut records = Vec::with_capacity(tuples.len());
        for chunk in tuples.chunks(FAIL_FAST_CHUNK) {
            let part = eval(chunk)?;
            if let Some(i) = part.iter().position(|r| r.verdict == Verdict::Violation) {
                records.extend(part.into_iter().take(i + 1));
                break;
            }
            records.extend(part);
        }
        Ok(records)
    };
    let records = if opts.workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::param(format!("cannot start {} workers: {e}", opts.workers)))?
            .install(run)?
    };
    let summary = Summary::from_records(&records);
    Ok(GridOutcome { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Tables;

    fn tables() -> ExactTables {
        Tables::build(40)
    }

    fn params(f: impl FnOnce(&mut Params)) -> Params {
        let mut p = Params::default();
        f(&mut p);
        p
    }

    #[test]
    fn fleck_spot_check() {
        let rec = check_claim(&tables(), TheoremId::Fleck11, &params(|p| p.n = 3), false).unwrap();
        assert_eq!(rec.sum, Some(4.into()));
        assert_eq!(rec.ord, Some(PAdicOrder::Finite(2)));
        assert_eq!(rec.bound, Some(BoundValue::Exponent(2)));
        assert_eq!(rec.verdict, Verdict::Tight);
        assert_eq!(rec.margin, Some(0));
    }

    #[test]
    fn ec2_spot_check() {
        let p = params(|p| {
            p.n = 4;
            p.a = 3.into();
            p.r = 1;
        });
        let rec = check_claim(&tables(), TheoremId::Ec2, &p, false).unwrap();
        assert_eq!(rec.sum, Some(60.into()));
        assert_eq!(rec.ord, Some(PAdicOrder::Finite(2)));
        assert_eq!(rec.verdict, Verdict::Tight);
    }

    #[test]
    fn sc1_spot_check() {
        let p = params(|p| {
            p.n = 4;
            p.m = 2;
            p.p = 3;
        });
        let rec = check_claim(&tables(), TheoremId::Sc1, &p, false).unwrap();
        assert_eq!(rec.sum, Some(18.into()));
        assert_eq!(rec.ord, Some(PAdicOrder::Finite(2)));
        assert_eq!(rec.bound, Some(BoundValue::Exponent(1)));
        assert_eq!(rec.verdict, Verdict::Holds);
        assert_eq!(rec.margin, Some(1));
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(PAdicOrder::Infinite, 5), Verdict::HoldsVacuous);
        assert_eq!(classify(PAdicOrder::Finite(2), 3), Verdict::Violation);
        assert_eq!(classify(PAdicOrder::Finite(3), 3), Verdict::Tight);
        assert_eq!(classify(PAdicOrder::Finite(0), 0), Verdict::Tight);
        assert_eq!(classify(PAdicOrder::Finite(4), 3), Verdict::Holds);
        assert_eq!(
            classify(PAdicOrder::Finite(0), -1),
            Verdict::HoldsTrivialBound
        );
    }

    #[test]
    fn not_applicable_records() {
        let p = params(|p| p.n = 1);
        let rec = check_claim(&tables(), TheoremId::Ec2, &p, false).unwrap();
        assert_eq!(rec.verdict, Verdict::NotApplicable);
        assert!(rec.sum.is_none() && rec.bound.is_none());
        assert!(rec.note.is_some());

        let rec = check_claim(&tables(), TheoremId::Ec2, &p, true).unwrap();
        assert_eq!(rec.verdict, Verdict::NotApplicable);
        assert_eq!(rec.sum, Some(1.into()));
    }

    #[test]
    fn sc2_records_carry_operands() {
        let p = params(|p| {
            p.n = 4;
            p.p = 3;
            p.f = Poly::monomial(1);
            p.r = 0;
        });
        let rec = check_claim(&tables(), TheoremId::Sc2, &p, false).unwrap();
        assert_eq!(rec.bound, Some(BoundValue::Marker(SC2_MARKER.into())));
        let cmp = rec.comparison.expect("operands");
        assert!(cmp.lhs >= cmp.rhs);
        assert!(rec.margin.is_none());
    }

    #[test]
    fn capacity_errors_surface() {
        let small: ExactTables = Tables::build(5);
        let p = params(|p| p.n = 6);
        assert!(matches!(
            check_claim(&small, TheoremId::Sc1, &p, false),
            Err(Error::Capacity { .. })
        ));
        // Binomial families need no triangles.
        assert!(check_claim(&small, TheoremId::Fleck11, &p, false).is_ok());
        let mut grid = GridSpec::new(TheoremId::Ec1);
        grid.n = (1..=10).collect();
        assert!(matches!(
            run_grid(&small, &grid, RunOptions::default()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn fleck_grid_has_no_violations() {
        let mut grid = GridSpec::new(TheoremId::Fleck11);
        grid.p = vec![2, 3];
        grid.n = (1..=30).collect();
        let out = run_grid(&tables(), &grid, RunOptions::default()).unwrap();
        assert_eq!(out.summary.total, 2 * 30 + 3 * 30);
        assert_eq!(out.summary.violations(), 0);
        assert!(out.summary.first_violation.is_none());
    }

    #[test]
    fn empty_classes_are_vacuous() {
        // n = 1 with residues 2..6 mod 7: nothing in [0, 1].
        let mut grid = GridSpec::new(TheoremId::Fleck11);
        grid.p = vec![7];
        grid.r = ResiduePolicy::List(vec![2, 3, 4, 5, 6]);
        let out = run_grid(&tables(), &grid, RunOptions::default()).unwrap();
        assert_eq!(out.summary.count(Verdict::HoldsVacuous), 5);
        assert_eq!(out.summary.total, 5);
        assert_eq!(out.summary.min_margin, None);
    }

    #[test]
    fn tuples_are_sorted_and_unused_params_collapse() {
        let mut grid = GridSpec::new(TheoremId::Weisman12);
        grid.p = vec![3, 2];
        grid.alpha = vec![2, 1];
        grid.l = vec![0, 1, 2];
        grid.n = vec![5, 4];
        let tuples = grid.tuples().unwrap();
        // l is unused by WEISMAN_1_2.
        assert_eq!(tuples.len(), 2 * (2 + 4) + 2 * (3 + 9));
        let keys: Vec<(u64, u64, u64, i64)> =
            tuples.iter().map(|t| (t.p, t.alpha, t.n, t.r)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn m_cap() {
        let mut grid = GridSpec::new(TheoremId::Sc1);
        grid.p = vec![3];
        grid.n = vec![1, 2, 3];
        grid.m = vec![1, 2, 3];
        grid.m_at_most_n = true;
        assert_eq!(grid.tuples().unwrap().len(), (1 + 2 + 3) * 2);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let mut grid = GridSpec::new(TheoremId::Fleck11);
        grid.p = vec![4];
        assert!(matches!(grid.tuples(), Err(Error::NotPrime(4))));
        let mut grid = GridSpec::new(TheoremId::Fleck11);
        grid.n.clear();
        assert!(grid.tuples().is_err());
        let mut grid = GridSpec::new(TheoremId::Sc2);
        grid.f = vec!["1,x".into()];
        assert!(grid.tuples().is_err());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut grid = GridSpec::new(TheoremId::Sc3);
        grid.p = vec![2, 3];
        grid.n = (1..=25).collect();
        grid.m = (1..=4).collect();
        grid.a = vec![-1, 2];
        let t = tables();
        let one = run_grid(
            &t,
            &grid,
            RunOptions {
                workers: 1,
                fail_fast: false,
            },
        )
        .unwrap();
        let many = run_grid(
            &t,
            &grid,
            RunOptions {
                workers: 4,
                fail_fast: false,
            },
        )
        .unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn fail_fast_truncates_at_first_violation() {
        // The Davis-Sun bound as stated fails at n=4, p=2, alpha=1, l=2, r=0.
        let mut grid = GridSpec::new(TheoremId::Ds16);
        grid.n = (1..=10).collect();
        grid.l = vec![2];
        let full = run_grid(&tables(), &grid, RunOptions::default()).unwrap();
        assert!(full.summary.violations() > 0);
        let first = full.summary.first_violation.clone().unwrap();
        assert_eq!(first.params.n, Some(4));
        assert_eq!(first.params.r, Some(0));

        let fast = run_grid(
            &tables(),
            &grid,
            RunOptions {
                workers: 2,
                fail_fast: true,
            },
        )
        .unwrap();
        assert_eq!(fast.records.last(), Some(&first));
        assert_eq!(fast.summary.violations(), 1);
    }

    #[test]
    fn margins_are_consistent() {
        let mut grid = GridSpec::new(TheoremId::Ec1);
        grid.p = vec![2, 3];
        grid.alpha = vec![1, 2];
        grid.l = vec![0, 1, 2];
        grid.n = (1..=30).collect();
        let out = run_grid(&tables(), &grid, RunOptions::default()).unwrap();
        for r in &out.records {
            match r.verdict {
                Verdict::Tight => assert_eq!(r.margin, Some(0)),
                Verdict::Holds | Verdict::HoldsTrivialBound => assert!(r.margin.unwrap() > 0),
                Verdict::HoldsVacuous => assert_eq!(r.margin, None),
                _ => {}
            }
        }
    }

    #[test]
    fn compact_params_round_trip() {
        let p = params(|p| {
            p.n = 7;
            p.p = 5;
            p.f = Poly::parse_coeff_list("0,-1,0,3").unwrap();
            p.a = (-2).into();
            p.r = 3;
        });
        let rp = RecordParams::from_params(TheoremId::Sc2, &p);
        let s = rp.to_compact();
        assert_eq!(s, "p=5;n=7;f=0,-1,0,3;a=-2;r=3");
        assert_eq!(RecordParams::from_compact(&s).unwrap(), rp);
        assert!(RecordParams::from_compact("q=1").is_err());
    }
}
