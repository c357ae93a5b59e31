//! Row transformations on finitely supported sequences.
//!
//! `T_k` keeps entries `0..=k` and replaces every later entry by the sum of
//! itself and its predecessor. Composing `T_1, ..., T_m` triangularizes the
//! coefficient system of the approximant; its closed form is a binomial
//! convolution. Both the iterative and the closed-form routes are exposed so
//! each can check the other.

use std::ops::Add;

use crate::binomial::binom_scalar;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TaylorSeries;

/// A 0-indexed sequence that is zero from `effective_length()` on.
#[derive(Clone, Debug, PartialEq)]
pub struct CountableSet {
    elements: Vec<Scalar>,
}

impl CountableSet {
    pub fn new(mut elements: Vec<Scalar>) -> Self {
        while elements.last().is_some_and(Scalar::is_zero) {
            elements.pop();
        }
        CountableSet { elements }
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Scalar) -> Self {
        CountableSet::new((0..len).map(f).collect())
    }

    pub fn zero() -> Self {
        CountableSet {
            elements: Vec::new(),
        }
    }

    /// Element `i`; zero past the support.
    pub fn get(&self, i: usize) -> Scalar {
        self.elements.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Index past the last nonzero element.
    pub fn effective_length(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    /// The first `n` elements, zero-padded.
    pub fn prefix(&self, n: usize) -> Vec<Scalar> {
        (0..n).map(|i| self.get(i)).collect()
    }
}

impl Add for &CountableSet {
    type Output = CountableSet;
    fn add(self, rhs: &CountableSet) -> CountableSet {
        let len = self.effective_length().max(rhs.effective_length());
        CountableSet::from_fn(len, |i| self.get(i) + rhs.get(i))
    }
}

/// `T_k`: `r'_i = r_i` for `i <= k`, `r'_i = r_i + r_{i-1}` for `i > k`.
pub fn transform_k(r: &CountableSet, k: usize) -> Result<CountableSet> {
    if k < 1 {
        return Err(Error::OrderTooSmall {
            what: "transform order k",
            min: 1,
            got: k,
        });
    }
    let len = r.effective_length() + 1;
    Ok(CountableSet::from_fn(len, |i| {
        if i <= k {
            r.get(i)
        } else {
            r.get(i) + r.get(i - 1)
        }
    }))
}

/// `T_m ∘ ... ∘ T_1` applied step by step.
pub fn sequential_transform(r: &CountableSet, m: usize) -> Result<CountableSet> {
    if m < 1 {
        return Err(Error::OrderTooSmall {
            what: "sequential transform order m",
            min: 1,
            got: m,
        });
    }
    (1..=m).try_fold(r.clone(), |acc, k| transform_k(&acc, k))
}

/// Closed form of [`sequential_transform`]:
///
/// ```text
/// R(m)_0 = R_0
/// R(m)_i = sum_{s=0}^{i-1} C(i-1, s) R_{i-s}    1 <= i <= m+1
/// R(m)_i = sum_{s=0}^{m}   C(m, s)   R_{i-s}    i > m+1
/// ```
pub fn sequential_transform_closed(r: &CountableSet, m: usize) -> Result<CountableSet> {
    if m < 1 {
        return Err(Error::OrderTooSmall {
            what: "sequential transform order m",
            min: 1,
            got: m,
        });
    }
    let len = r.effective_length() + m;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let value = if i == 0 {
            r.get(0)
        } else {
            let top = if i <= m + 1 { i - 1 } else { m };
            let mut acc = Scalar::zero();
            for s in 0..=top {
                acc = acc + binom_scalar(top as i64, s as i64)? * r.get(i - s);
            }
            acc
        };
        out.push(value);
    }
    Ok(CountableSet::new(out))
}

/// `C(m)_0..=C(m)_m` built from a Taylor series: `C_0 = c_0` and
/// `C_n = sum_{s=0}^{n-1} C(n-1, s) c_{n-s}`. Entry `n` does not depend on `m`.
#[derive(Clone, Debug)]
pub struct BinomialConvolvedCoefficients<'a> {
    values: Vec<Scalar>,
    source: &'a TaylorSeries,
}

impl<'a> BinomialConvolvedCoefficients<'a> {
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn source(&self) -> &'a TaylorSeries {
        self.source
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn binomial_convolve(
    series: &TaylorSeries,
    m: usize,
) -> Result<BinomialConvolvedCoefficients<'_>> {
    let c = series.prefix(m)?;
    let mut values = Vec::with_capacity(m + 1);
    values.push(c[0].clone());
    for n in 1..=m {
        let mut acc = Scalar::zero();
        for s in 0..n {
            acc = acc + binom_scalar(n as i64 - 1, s as i64)? * &c[n - s];
        }
        values.push(acc);
    }
    Ok(BinomialConvolvedCoefficients {
        values,
        source: series,
    })
}
