//! Exhaustive checks of the finite binomial identities behind the limit
//! formulas for `q0` and `q1`.
//!
//! Left-hand sides are summed term by term with the multiplicative binomial;
//! right-hand sides read from a shared Pascal-triangle cache. The two sides
//! never share a summation helper.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use dashu::integer::IBig;
use serde::{Serialize, Serializer};

use crate::binomial::{binom, BigBinomial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IdentityId {
    /// `(m+1)! C(k, m+1) > C(k+n-1, n)`.
    #[serde(rename = "P6_INEQ")]
    P6Ineq,
    /// `sum_{n=0}^{k} (-1)^n C(m, n) = (-1)^k C(m-1, k)`.
    #[serde(rename = "P7_ALT_SUM")]
    P7AltSum,
    /// A one-parameter family of rewritings of the `EQ132` sum.
    #[serde(rename = "P8_ABEL_FAMILY")]
    P8AbelFamily,
    /// `sum_{n=0}^{m} (-1)^n C(m, n) C(k+n-1, n) = (-1)^m C(k-1, m)`.
    #[serde(rename = "EQ132_CLOSED")]
    Eq132Closed,
    /// `sum_{z=0}^{m-1} C(k+z-2, k-2) = C(k+m-2, k-1)`.
    #[serde(rename = "HOCKEY_STICK")]
    HockeyStick,
    /// A one-parameter family of rewritings of the `q1` alternating sum.
    #[serde(rename = "P9_FAMILY")]
    P9Family,
    /// The `q1` alternating sum in closed form.
    #[serde(rename = "EQ206_CLOSED")]
    Eq206Closed,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::P6Ineq,
        IdentityId::P7AltSum,
        IdentityId::P8AbelFamily,
        IdentityId::Eq132Closed,
        IdentityId::HockeyStick,
        IdentityId::P9Family,
        IdentityId::Eq206Closed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::P6Ineq => "P6_INEQ",
            IdentityId::P7AltSum => "P7_ALT_SUM",
            IdentityId::P8AbelFamily => "P8_ABEL_FAMILY",
            IdentityId::Eq132Closed => "EQ132_CLOSED",
            IdentityId::HockeyStick => "HOCKEY_STICK",
            IdentityId::P9Family => "P9_FAMILY",
            IdentityId::Eq206Closed => "EQ206_CLOSED",
        }
    }

    /// Whether the identity takes a third parameter (`n` or `a`).
    fn uses_aux(self) -> bool {
        matches!(
            self,
            IdentityId::P6Ineq | IdentityId::P8AbelFamily | IdentityId::P9Family
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn as_string<S: Serializer>(v: &IBig, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One evaluated tuple. `pass` is equality of `lhs` and `rhs`, except for
/// `P6_INEQ` where it is `lhs > rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCase {
    pub identity_id: IdentityId,
    pub params: BTreeMap<&'static str, i64>,
    #[serde(serialize_with = "as_string")]
    pub lhs: IBig,
    #[serde(serialize_with = "as_string")]
    pub rhs: IBig,
    pub pass: bool,
}

fn pascal() -> &'static BigBinomial {
    static CACHE: OnceLock<BigBinomial> = OnceLock::new();
    CACHE.get_or_init(BigBinomial::new)
}

/// Right-hand-side binomial, read from the Pascal cache.
fn pc(a: i64, b: i64) -> IBig {
    pascal()
        .get(a, b)
        .expect("admissible parameters keep upper indices nonnegative")
}

/// Left-hand-side binomial, multiplicative formula.
fn lc(a: i64, b: i64) -> IBig {
    binom(a, b).expect("admissible parameters keep upper indices nonnegative")
}

fn sign(e: i64) -> IBig {
    if e.rem_euclid(2) == 0 {
        IBig::ONE
    } else {
        -IBig::ONE
    }
}

fn require(
    ok: bool,
    id: IdentityId,
    params: &[(&'static str, i64)],
) -> Result<BTreeMap<&'static str, i64>> {
    if ok {
        Ok(params.iter().copied().collect())
    } else {
        let shown: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        Err(Error::Inadmissible {
            identity: id.name(),
            params: shown.join(", "),
        })
    }
}

fn equality(
    identity_id: IdentityId,
    params: BTreeMap<&'static str, i64>,
    lhs: IBig,
    rhs: IBig,
) -> IdentityCase {
    let pass = lhs == rhs;
    IdentityCase {
        identity_id,
        params,
        lhs,
        rhs,
        pass,
    }
}

pub fn check_p6(m: i64, k: i64, n: i64) -> Result<IdentityCase> {
    let id = IdentityId::P6Ineq;
    let params = require(
        m >= 0 && n >= 0 && k > m + 1 && n <= m,
        id,
        &[("m", m), ("k", k), ("n", n)],
    )?;
    let factorial: IBig = (1..=m + 1).map(IBig::from).product();
    let lhs = factorial * lc(k, m + 1);
    let rhs = pc(k + n - 1, n);
    let pass = lhs > rhs;
    Ok(IdentityCase {
        identity_id: id,
        params,
        lhs,
        rhs,
        pass,
    })
}

pub fn check_p7(m: i64, k: i64) -> Result<IdentityCase> {
    let id = IdentityId::P7AltSum;
    let params = require(m >= 1 && 0 <= k && k < m, id, &[("m", m), ("k", k)])?;
    let mut lhs = IBig::ZERO;
    for n in 0..=k {
        lhs += sign(n) * lc(m, n);
    }
    let rhs = sign(k) * pc(m - 1, k);
    Ok(equality(id, params, lhs, rhs))
}

fn eq132_lhs(m: i64, k: i64) -> IBig {
    let mut lhs = IBig::ZERO;
    for n in 0..=m {
        lhs += sign(n) * lc(m, n) * lc(k + n - 1, n);
    }
    lhs
}

pub fn check_eq132(m: i64, k: i64) -> Result<IdentityCase> {
    let id = IdentityId::Eq132Closed;
    let params = require(m >= 0 && k >= 1, id, &[("m", m), ("k", k)])?;
    let rhs = sign(m) * pc(k - 1, m);
    Ok(equality(id, params, eq132_lhs(m, k), rhs))
}

pub fn check_p8_family(m: i64, k: i64, a: i64) -> Result<IdentityCase> {
    let id = IdentityId::P8AbelFamily;
    let params = require(
        k >= 1 && 0 <= a && a <= m,
        id,
        &[("m", m), ("k", k), ("a", a)],
    )?;
    let mut inner = IBig::ZERO;
    for r in 1..=m + 1 - a {
        inner += sign(r - 1) * pc(k + r - 2, r - 1 + a) * pc(m - a, r - 1);
    }
    Ok(equality(id, params, eq132_lhs(m, k), sign(a) * inner))
}

pub fn check_hockey_stick(k: i64, m: i64) -> Result<IdentityCase> {
    let id = IdentityId::HockeyStick;
    let params = require(k >= 2 && m >= 1, id, &[("k", k), ("m", m)])?;
    let mut lhs = IBig::ZERO;
    for z in 0..m {
        lhs += lc(k + z - 2, k - 2);
    }
    Ok(equality(id, params, lhs, pc(k + m - 2, k - 1)))
}

pub fn check_p9_family(m: i64, k: i64, a: i64) -> Result<IdentityCase> {
    let id = IdentityId::P9Family;
    let params = require(
        m > 1 && 1 <= a && a <= m - 2 && k >= 2,
        id,
        &[("m", m), ("k", k), ("a", a)],
    )?;
    let mut lhs = IBig::ZERO;
    for n in 1..m {
        lhs += sign(n) * lc(m, n + 1) * lc(k + n - 1, k - 1);
    }
    let mut shifted = IBig::ZERO;
    for n in 1..m - a {
        shifted += sign(n) * pc(m - a, n + 1) * pc(k + n - 1, k - 1 - a);
    }
    let mut tail = IBig::ZERO;
    for r in 1..=a {
        tail += sign(r) * IBig::from(m - r) * pc(k, r);
    }
    Ok(equality(id, params, lhs, sign(a) * shifted + tail))
}

pub fn check_eq206(m: i64, k: i64) -> Result<IdentityCase> {
    let id = IdentityId::Eq206Closed;
    let params = require(m >= 1 && k >= 2, id, &[("m", m), ("k", k)])?;
    let mut lhs = IBig::ZERO;
    for n in 1..=m {
        let weight = lc(m, n + 1) - IBig::from(m) * lc(m, n);
        lhs += weight * sign(n) * lc(k + n - 1, n);
    }
    let rhs = sign(m - 1) * (IBig::from(m) * pc(k - 1, m) + pc(k - 2, m - 1));
    Ok(equality(id, params, lhs, rhs))
}

/// Parameter ranges for [`run_suite`]. `aux` is `n` for `P6_INEQ` and `a`
/// for the two families; identities without a third parameter ignore it.
#[derive(Clone, Debug)]
pub struct SuiteRanges {
    pub m: RangeInclusive<i64>,
    pub k: RangeInclusive<i64>,
    pub aux: RangeInclusive<i64>,
}

impl Default for SuiteRanges {
    fn default() -> Self {
        SuiteRanges {
            m: 0..=25,
            k: 0..=25,
            aux: 0..=25,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityCounts {
    pub evaluated: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub per_identity: BTreeMap<IdentityId, IdentityCounts>,
    pub failures: Vec<IdentityCase>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check(id: IdentityId, m: i64, k: i64, aux: i64) -> Result<IdentityCase> {
    match id {
        IdentityId::P6Ineq => check_p6(m, k, aux),
        IdentityId::P7AltSum => check_p7(m, k),
        IdentityId::P8AbelFamily => check_p8_family(m, k, aux),
        IdentityId::Eq132Closed => check_eq132(m, k),
        IdentityId::HockeyStick => check_hockey_stick(k, m),
        IdentityId::P9Family => check_p9_family(m, k, aux),
        IdentityId::Eq206Closed => check_eq206(m, k),
    }
}

/// Enumerates every tuple in the ranges for every identity. Tuples outside an
/// identity's admissible domain are counted as skipped.
pub fn run_suite(ranges: &SuiteRanges) -> SuiteReport {
    let mut report = SuiteReport::default();
    for id in IdentityId::ALL {
        let counts = report.per_identity.entry(id).or_default();
        let aux: Vec<i64> = if id.uses_aux() {
            ranges.aux.clone().collect()
        } else {
            vec![0]
        };
        for m in ranges.m.clone() {
            for k in ranges.k.clone() {
                for &x in &aux {
                    match check(id, m, k, x) {
                        Ok(case) => {
                            counts.evaluated += 1;
                            if case.pass {
                                counts.passed += 1;
                            } else {
                                counts.failed += 1;
                                report.failures.push(case);
                            }
                        }
                        Err(_) => counts.skipped += 1,
                    }
                }
            }
        }
        report.total += counts.evaluated;
        report.passed += counts.passed;
        report.failed += counts.failed;
        report.skipped += counts.skipped;
    }
    report
}
