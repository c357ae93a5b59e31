//! Big-integer binomial coefficients.
//!
//! `C(a, b)` is zero whenever `b < 0` or `b > a`; a negative upper index is a
//! domain error. Two independent routes are provided: the multiplicative
//! formula ([`binom`]) and memoized Pascal rows ([`BigBinomial`]).

use std::sync::{Arc, RwLock};

use dashu::integer::{IBig, UBig};

use crate::scalar::{Scalar, ScalarError};

/// `C(a, b)` by the multiplicative formula.
pub fn binom(a: i64, b: i64) -> Result<IBig, ScalarError> {
    if a < 0 {
        return Err(ScalarError::NegativeUpperIndex(a));
    }
    if b < 0 || b > a {
        return Ok(IBig::ZERO);
    }
    Ok(IBig::from(choose(a as u64, b as u64)))
}

/// `C(a, b)` as an exact scalar.
pub fn binom_scalar(a: i64, b: i64) -> Result<Scalar, ScalarError> {
    binom(a, b).map(Scalar::from_ibig)
}

/// `C(n, k)` for `0 <= k <= n`; each partial product is itself a binomial,
/// so every division is exact.
pub(crate) fn choose(n: u64, k: u64) -> UBig {
    let k = k.min(n - k);
    let mut acc = UBig::ONE;
    for i in 1..=k {
        acc = acc * UBig::from(n - k + i) / UBig::from(i);
    }
    acc
}

/// Pascal's triangle, grown on demand. Rows are published whole, so a reader
/// never sees a partially built row.
#[derive(Debug, Default)]
pub struct BigBinomial {
    rows: RwLock<Vec<Arc<[UBig]>>>,
}

impl BigBinomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// Row `a` of Pascal's triangle: `C(a, 0), ..., C(a, a)`.
    pub fn row(&self, a: usize) -> Arc<[UBig]> {
        if let Some(row) = self.rows.read().expect("pascal cache poisoned").get(a) {
            return Arc::clone(row);
        }
        let mut rows = self.rows.write().expect("pascal cache poisoned");
        while rows.len() <= a {
            let next: Arc<[UBig]> = match rows.last() {
                None => Arc::from(vec![UBig::ONE]),
                Some(prev) => {
                    let mut row = Vec::with_capacity(prev.len() + 1);
                    row.push(UBig::ONE);
                    row.extend(prev.windows(2).map(|w| &w[0] + &w[1]));
                    row.push(UBig::ONE);
                    Arc::from(row)
                }
            };
            rows.push(next);
        }
        Arc::clone(&rows[a])
    }

    pub fn get(&self, a: i64, b: i64) -> Result<IBig, ScalarError> {
        if a < 0 {
            return Err(ScalarError::NegativeUpperIndex(a));
        }
        if b < 0 || b > a {
            return Ok(IBig::ZERO);
        }
        Ok(IBig::from(self.row(a as usize)[b as usize].clone()))
    }

    /// Number of rows currently cached.
    pub fn cached_rows(&self) -> usize {
        self.rows.read().expect("pascal cache poisoned").len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(a: i64, k: i64) -> IBig {
        binom(a, k).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(b(4, 2), IBig::from(6));
        assert_eq!(b(7, -1), IBig::ZERO);
        assert_eq!(b(3, 4), IBig::ZERO);
        assert_eq!(b(0, 0), IBig::ONE);
        assert_eq!(binom(-1, 0), Err(ScalarError::NegativeUpperIndex(-1)));
    }

    #[test]
    fn thirty_choose_fifteen_both_routes() {
        assert_eq!(b(30, 15), IBig::from(155_117_520));
        assert_eq!(
            BigBinomial::new().get(30, 15).unwrap(),
            IBig::from(155_117_520)
        );
    }

    #[test]
    fn pascal_identity_and_symmetry_to_200() {
        for a in 1..=200i64 {
            for k in 1..=a {
                assert_eq!(
                    b(a, k),
                    b(a - 1, k) + b(a - 1, k - 1),
                    "pascal at ({a},{k})"
                );
            }
            for k in 0..=a {
                assert_eq!(b(a, k), b(a, a - k), "symmetry at ({a},{k})");
            }
        }
    }

    #[test]
    fn row_sums_are_powers_of_two() {
        for a in 0..=64i64 {
            let sum: IBig = (0..=a).map(|k| b(a, k)).sum();
            assert_eq!(sum, IBig::ONE << a as usize);
        }
    }

    #[test]
    fn cache_matches_fresh_rows() {
        let cache = BigBinomial::new();
        let _ = cache.row(120);
        assert_eq!(cache.cached_rows(), 121);
        for a in 0..=120i64 {
            for k in -1..=a + 1 {
                assert_eq!(cache.get(a, k).unwrap(), b(a, k));
            }
        }
    }

    #[test]
    fn cache_shared_across_threads() {
        let cache = Arc::new(BigBinomial::new());
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let cache = Arc::clone(&cache);
                std::thread::spawn(move || {
                    for a in (t * 10)..(t * 10 + 60) {
                        let row = cache.row(a);
                        assert_eq!(row.len(), a + 1);
                        assert_eq!(
                            IBig::from(row[a / 2].clone()),
                            binom(a as i64, (a / 2) as i64).unwrap()
                        );
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
    }

    proptest! {
        #[test]
        fn multiplicative_agrees_with_pascal(a in 0i64..300, k in -3i64..303) {
            let cache = BigBinomial::new();
            prop_assert_eq!(binom(a, k).unwrap(), cache.get(a, k).unwrap());
        }
    }
}
