//! The inverse-power approximant
//!
//! ```text
//! R(x) = q_0 + sum_{k=1}^{m} q_k / (x - x0 + 1)^k
//! ```
//!
//! built so that its Taylor expansion about `x0` agrees with `c_0..=c_m`.
//! Three constructions are available and must agree exactly: the closed form,
//! the matrix form `q = A * C(m)`, and a direct fraction-free solve of the
//! linear system relating `q` to `c`.
//!
//! Only `q_0` and `q_1` carry asymptotic meaning as `m` grows. The higher
//! coefficients change with the center `x0` and should not be read as terms of
//! an expansion in `1/x`.

use dashu::base::{BitTest, Gcd};
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use serde::Serialize;

use crate::binomial::{binom, BigBinomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TaylorSeries;
use crate::transforms::binomial_convolve;

/// `a_{i,j} = (-1)^i C(j, i)` for `0 <= i, j <= m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedBinomialMatrix {
    m: usize,
    entries: Vec<Vec<IBig>>,
}

/// Dense integer matrix, used for products of [`SignedBinomialMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct IntMatrix(pub Vec<Vec<IBig>>);

impl IntMatrix {
    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, row)| {
            row.len() == self.0.len()
                && row
                    .iter()
                    .enumerate()
                    .all(|(j, v)| *v == if i == j { IBig::ONE } else { IBig::ZERO })
        })
    }
}

pub fn build_matrix_a(m: usize) -> SignedBinomialMatrix {
    let pascal = BigBinomial::new();
    let entries = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| {
                    let c = pascal.get(j as i64, i as i64).expect("nonnegative index");
                    if i % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect();
    SignedBinomialMatrix { m, entries }
}

impl SignedBinomialMatrix {
    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &IBig {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<IBig>] {
        &self.entries
    }

    /// Exact product. Panics if the dimensions differ.
    pub fn mul(&self, other: &SignedBinomialMatrix) -> IntMatrix {
        assert_eq!(self.m, other.m, "matrix dimensions differ");
        let n = self.m + 1;
        IntMatrix(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .map(|k| &self.entries[i][k] * &other.entries[k][j])
                                .sum()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// The matrix is upper triangular, so this is the diagonal product.
    pub fn determinant(&self) -> IBig {
        (0..=self.m).map(|i| self.entries[i][i].clone()).product()
    }

    /// `A * v`. Panics unless `v` has `m + 1` entries.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.m + 1, "vector length must be m + 1");
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| **a != IBig::ZERO)
                    .map(|(a, x)| Scalar::from_ibig(a.clone()) * x)
                    .sum()
            })
            .collect()
    }
}

/// Raised when float-mode construction at dimension `m` loses more than half
/// the working precision to the size of `C(m, m/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationWarning {
    pub m: usize,
    pub precision: usize,
    pub binomial_bits: usize,
}

impl std::fmt::Display for CancellationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cancellation hazard: C({}, {}) needs {} bits, more than half of the {}-bit precision",
            self.m,
            self.m / 2,
            self.binomial_bits,
            self.precision
        )
    }
}

pub fn cancellation_hazard(m: usize, precision: usize) -> Option<CancellationWarning> {
    let bits = crate::binomial::choose(m as u64, (m / 2) as u64).bit_len();
    (bits > precision / 2).then_some(CancellationWarning {
        m,
        precision,
        binomial_bits: bits,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InversePowerApproximant {
    center: Scalar,
    coeffs: Vec<Scalar>,
    warning: Option<CancellationWarning>,
}

impl InversePowerApproximant {
    /// An approximant with the given `q_0..=q_m`.
    pub fn new(center: Scalar, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(InversePowerApproximant {
            center,
            coeffs,
            warning: None,
        })
    }

    fn built(series: &TaylorSeries, coeffs: Vec<Scalar>) -> Self {
        let m = coeffs.len() - 1;
        let warning = if series.is_exact() {
            None
        } else {
            series
                .float_precision()
                .and_then(|p| cancellation_hazard(m, p))
        };
        InversePowerApproximant {
            center: series.center().clone(),
            coeffs,
            warning,
        }
    }

    pub fn dimension(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn center(&self) -> &Scalar {
        &self.center
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `q_k`. Only `k = 0, 1` estimate the large-`x` behavior of `f`.
    pub fn q(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn is_exact(&self) -> bool {
        self.center.is_exact() && self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn warning(&self) -> Option<&CancellationWarning> {
        self.warning.as_ref()
    }

    /// `R(x)` by Horner's rule in `t = 1 / (x - x0 + 1)`.
    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        let shifted = x - &self.center + Scalar::one();
        if shifted.is_zero() {
            return Err(Error::Pole {
                x: x.to_plain_string(),
            });
        }
        let t = shifted.recip()?;
        let mut acc = self.coeffs[self.dimension()].clone();
        for q in self.coeffs[..self.dimension()].iter().rev() {
            acc = acc * &t + q;
        }
        Ok(acc)
    }

    /// Taylor coefficients of `R` about `x0`:
    /// `c_0 = sum_k q_k`, `c_n = (-1)^n sum_{k>=1} q_k C(k+n-1, n)`.
    pub fn expand_to_taylor(&self, n_terms: usize) -> Result<TaylorSeries> {
        if n_terms < 1 {
            return Err(Error::OrderTooSmall {
                what: "number of Taylor terms",
                min: 1,
                got: n_terms,
            });
        }
        let m = self.dimension();
        let mut coeffs = Vec::with_capacity(n_terms);
        coeffs.push(self.coeffs.iter().sum());
        for n in 1..n_terms {
            let mut acc = Scalar::zero();
            for k in 1..=m {
                acc =
                    acc + Scalar::from_ibig(binom((k + n - 1) as i64, n as i64)?) * &self.coeffs[k];
            }
            coeffs.push(if n % 2 == 0 { acc } else { -acc });
        }
        TaylorSeries::new(self.center.clone(), coeffs)
    }
}

/// `q_{0,m} = sum_{s=0}^{m} C(m, s) c_s`.
pub fn q0_closed_form(series: &TaylorSeries, m: usize) -> Result<Scalar> {
    Ok(q0_with_row(series.prefix(m)?, &BigBinomial::new().row(m)))
}

/// `q_{1,m} = sum_{s=1}^{m} (C(m, s+1) - m C(m, s)) c_s`.
pub fn q1_closed_form(series: &TaylorSeries, m: usize) -> Result<Scalar> {
    Ok(q1_with_row(series.prefix(m)?, &BigBinomial::new().row(m)))
}

/// [`q0_closed_form`] given `c_0..=c_m` and Pascal row `m`.
pub(crate) fn q0_with_row(c: &[Scalar], row: &[UBig]) -> Scalar {
    c.iter()
        .zip(row)
        .map(|(c, b)| Scalar::from_ibig(IBig::from(b.clone())) * c)
        .sum()
}

/// [`q1_closed_form`] given `c_0..=c_m` and Pascal row `m`.
pub(crate) fn q1_with_row(c: &[Scalar], row: &[UBig]) -> Scalar {
    let m = c.len() - 1;
    let at = |j: usize| row.get(j).map_or(IBig::ZERO, |b| IBig::from(b.clone()));
    (1..=m)
        .map(|s| Scalar::from_ibig(at(s + 1) - IBig::from(m) * at(s)) * &c[s])
        .sum()
}

/// Integer weight of `c_s` in `q_{k,m}` for `k >= 2`, before the `(-1)^k` sign:
/// `sum_{n=0}^{k} (-1)^n C(m-n, k-n) C(m, s+n)`.
fn higher_weight(pascal: &BigBinomial, m: usize, k: usize, s: usize) -> IBig {
    let mut w = IBig::ZERO;
    for n in 0..=k.min(m) {
        let term = pascal.get((m - n) as i64, (k - n) as i64).expect("m >= n")
            * pascal.get(m as i64, (s + n) as i64).expect("m >= 0");
        if n % 2 == 0 {
            w += term;
        } else {
            w -= term;
        }
    }
    w
}

pub fn coeffs_closed_form(series: &TaylorSeries, m: usize) -> Result<InversePowerApproximant> {
    let c = series.prefix(m)?;
    let pascal = BigBinomial::new();
    let mut q = Vec::with_capacity(m + 1);
    q.push(q0_closed_form(series, m)?);
    if m >= 1 {
        q.push(q1_closed_form(series, m)?);
    }
    for k in 2..=m {
        let sum: Scalar = (1..=m)
            .map(|s| Scalar::from_ibig(higher_weight(&pascal, m, k, s)) * &c[s])
            .sum();
        q.push(if k % 2 == 0 { sum } else { -sum });
    }
    Ok(InversePowerApproximant::built(series, q))
}

pub fn coeffs_via_matrix(series: &TaylorSeries, m: usize) -> Result<InversePowerApproximant> {
    let convolved = binomial_convolve(series, m)?;
    let q = build_matrix_a(m).apply(convolved.values());
    Ok(InversePowerApproximant::built(series, q))
}

/// Solves the `(m+1) x (m+1)` system for `q` directly by fraction-free
/// elimination. Exact input only.
pub fn coeffs_oracle_solve(series: &TaylorSeries, m: usize) -> Result<InversePowerApproximant> {
    let c = series.prefix(m)?;
    let rhs: Vec<RBig> = c
        .iter()
        .map(|s| s.as_rational().cloned().ok_or(Error::InexactOracleInput))
        .collect::<Result<_>>()?;
    if !series.center().is_exact() {
        return Err(Error::InexactOracleInput);
    }
    let scale = rhs.iter().fold(UBig::ONE, |l, r| {
        let d = r.denominator();
        let g = (&l).gcd(d);
        l / g * d
    });
    let n = m + 1;
    let mut rows: Vec<Vec<IBig>> = Vec::with_capacity(n);
    for (i, r) in rhs.iter().enumerate() {
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..n {
            row.push(if i == 0 {
                IBig::ONE
            } else if k == 0 {
                IBig::ZERO
            } else {
                let b = binom((k + i - 1) as i64, i as i64)?;
                if i % 2 == 0 {
                    b
                } else {
                    -b
                }
            });
        }
        let scaled = r * RBig::from(scale.clone());
        debug_assert!(scaled.denominator() == &UBig::ONE);
        row.push(scaled.numerator().clone());
        rows.push(row);
    }
    let solution = bareiss_solve(rows)?;
    let scale = RBig::from(scale);
    let q = solution
        .into_iter()
        .map(|x| Scalar::from_rational(x / &scale))
        .collect();
    Ok(InversePowerApproximant::built(series, q))
}

/// Fraction-free elimination on an augmented `n x (n+1)` integer matrix,
/// followed by rational back substitution.
fn bareiss_solve(mut a: Vec<Vec<IBig>>) -> Result<Vec<RBig>> {
    let n = a.len();
    let mut prev = IBig::ONE;
    for k in 0..n {
        if a[k][k] == IBig::ZERO {
            let swap = (k + 1..n)
                .find(|&i| a[i][k] != IBig::ZERO)
                .ok_or(Error::SingularSystem)?;
            a.swap(k, swap);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = IBig::ZERO;
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![RBig::ZERO; n];
    for i in (0..n).rev() {
        let mut acc = RBig::from(a[i][n].clone());
        for j in i + 1..n {
            acc -= RBig::from(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / RBig::from(a[i][i].clone());
    }
    Ok(x)
}
