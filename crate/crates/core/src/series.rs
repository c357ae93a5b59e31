use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Taylor coefficients `c_0, ..., c_N` of a function about a finite center.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    center: Scalar,
    coeffs: Vec<Scalar>,
    radius_hint: Option<Scalar>,
}

impl TaylorSeries {
    pub fn new(center: Scalar, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(TaylorSeries {
            center,
            coeffs,
            radius_hint: None,
        })
    }

    /// Records the analyticity radius of `v(z) = f(1/z + x0 - 1)`. Metadata
    /// only; nothing in the crate enforces it.
    pub fn with_radius_hint(mut self, hint: Option<Scalar>) -> Self {
        self.radius_hint = hint;
        self
    }

    pub fn center(&self) -> &Scalar {
        &self.center
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn radius_hint(&self) -> Option<&Scalar> {
        self.radius_hint.as_ref()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest approximant dimension these coefficients support.
    pub fn max_dimension(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.center.is_exact() && self.coeffs.iter().all(Scalar::is_exact)
    }

    /// Smallest float precision among the coefficients and center.
    pub fn float_precision(&self) -> Option<usize> {
        std::iter::once(&self.center)
            .chain(&self.coeffs)
            .filter_map(Scalar::precision)
            .min()
    }

    /// `c_0..=c_m`, or an error when fewer are available.
    pub fn prefix(&self, m: usize) -> Result<&[Scalar]> {
        if self.coeffs.len() < m + 1 {
            return Err(Error::InsufficientCoefficients {
                dimension: m,
                needed: m + 1,
                available: self.coeffs.len(),
            });
        }
        Ok(&self.coeffs[..=m])
    }

    pub fn truncated(&self, n: usize) -> Result<TaylorSeries> {
        let n = n.max(1);
        let prefix = self.prefix(n - 1)?;
        Ok(TaylorSeries {
            center: self.center.clone(),
            coeffs: prefix.to_vec(),
            radius_hint: self.radius_hint.clone(),
        })
    }

    /// The same series with every value rounded to `precision` bits.
    pub fn to_float(&self, precision: usize) -> Result<TaylorSeries> {
        Ok(TaylorSeries {
            center: self.center.to_float(precision)?,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_float(precision))
                .collect::<Result<_, _>>()?,
            radius_hint: self.radius_hint.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(matches!(
            TaylorSeries::new(Scalar::one(), vec![]),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn prefix_bounds() {
        let s = TaylorSeries::new(Scalar::one(), vec![Scalar::int(1), Scalar::int(-1)]).unwrap();
        assert_eq!(s.max_dimension(), 1);
        assert_eq!(s.prefix(1).unwrap().len(), 2);
        assert!(matches!(
            s.prefix(2),
            Err(Error::InsufficientCoefficients {
                dimension: 2,
                needed: 3,
                available: 2
            })
        ));
        assert!(s.is_exact());
        let f = s.to_float(64).unwrap();
        assert!(!f.is_exact());
        assert_eq!(f.float_precision(), Some(64));
    }
}
