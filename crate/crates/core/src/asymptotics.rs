//! Convergence tables `m -> (q_{0,m}, q_{1,m})`, limit estimates, and
//! diagnostics for the two-term large-`x` form `f(x) = q0 + q1/x + O(1/x^2)`.
//!
//! The limit estimate is the last table value; the error indicator is the
//! last step size. No acceleration is applied, and the indicator is a
//! heuristic rather than a bound.

use dashu::integer::UBig;

use crate::approximant::{cancellation_hazard, q0_with_row, q1_with_row, CancellationWarning};
use crate::corpus::CorpusFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::TaylorSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub m: usize,
    pub q0: Scalar,
    /// Absent at `m = 0`.
    pub q1: Option<Scalar>,
    /// `|q0_m - q0_{m-1}|`, absent at `m = 0`.
    pub delta0: Option<Scalar>,
    /// `|q1_m - q1_{m-1}|`, absent for `m < 2`.
    pub delta1: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    rows: Vec<TableRow>,
    warning: Option<CancellationWarning>,
}

impl ConvergenceTable {
    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn m_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn last(&self) -> &TableRow {
        self.rows.last().expect("table has at least one row")
    }

    /// Set when the table was computed in float mode and its largest
    /// dimension is exposed to cancellation.
    pub fn warning(&self) -> Option<&CancellationWarning> {
        self.warning.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.q0.is_exact() && r.q1.as_ref().is_none_or(Scalar::is_exact))
    }
}

fn next_pascal_row(row: &[UBig]) -> Vec<UBig> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(UBig::ONE);
    next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
    next.push(UBig::ONE);
    next
}

/// Rows `m = 0..=m_max` from the `k = 0, 1` closed forms.
pub fn convergence_table(series: &TaylorSeries, m_max: usize) -> Result<ConvergenceTable> {
    let c = series.prefix(m_max)?;
    let mut rows: Vec<TableRow> = Vec::with_capacity(m_max + 1);
    let mut pascal = vec![UBig::ONE];
    for m in 0..=m_max {
        if m > 0 {
            pascal = next_pascal_row(&pascal);
        }
        let q0 = q0_with_row(&c[..=m], &pascal);
        let q1 = (m >= 1).then(|| q1_with_row(&c[..=m], &pascal));
        let prev = rows.last();
        let delta0 = prev.map(|p| (&q0 - &p.q0).abs());
        let delta1 = match (prev.and_then(|p| p.q1.as_ref()), &q1) {
            (Some(a), Some(b)) => Some((b - a).abs()),
            _ => None,
        };
        rows.push(TableRow {
            m,
            q0,
            q1,
            delta0,
            delta1,
        });
    }
    let warning = if series.is_exact() {
        None
    } else {
        series
            .float_precision()
            .and_then(|p| cancellation_hazard(m_max, p))
    };
    Ok(ConvergenceTable { rows, warning })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    pub q0: Scalar,
    pub q1: Scalar,
    /// Last `delta0`.
    pub error_indicator_q0: Scalar,
    /// Last `delta1`.
    pub error_indicator_q1: Scalar,
    pub converged_q0: bool,
    pub converged_q1: bool,
    pub m_used: usize,
}

impl AsymptoticEstimate {
    pub fn converged(&self) -> bool {
        self.converged_q0 && self.converged_q1
    }

    pub fn residual_scan(&self, f: &CorpusFunction, grid: &[Scalar]) -> Result<ResidualReport> {
        asymptotic_residual_scan(f, &self.q0, &self.q1, grid)
    }
}

/// Minimum table length accepted by [`estimate_limits`].
pub const MIN_TABLE_ROWS: usize = 3;

/// Last-row values, flagged converged when the last two deltas are both
/// within `tol`.
pub fn estimate_limits(table: &ConvergenceTable, tol: &Scalar) -> Result<AsymptoticEstimate> {
    let rows = table.rows();
    if rows.len() < MIN_TABLE_ROWS {
        return Err(Error::TableTooShort {
            rows: rows.len(),
            min: MIN_TABLE_ROWS,
        });
    }
    let last_two = |pick: fn(&TableRow) -> Option<&Scalar>| -> bool {
        let tail = &rows[rows.len() - 2..];
        tail.iter().all(|r| pick(r).is_some_and(|d| d <= tol))
    };
    let last = table.last();
    Ok(AsymptoticEstimate {
        q0: last.q0.clone(),
        q1: last.q1.clone().expect("m >= 1"),
        error_indicator_q0: last.delta0.clone().expect("m >= 1"),
        error_indicator_q1: last.delta1.clone().expect("m >= 2"),
        converged_q0: last_two(|r| r.delta0.as_ref()),
        converged_q1: last_two(|r| r.delta1.as_ref()),
        m_used: last.m,
    })
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub table_a: ConvergenceTable,
    pub table_b: ConvergenceTable,
    pub diff_q0: Scalar,
    pub diff_q1: Scalar,
    pub q0_agrees: bool,
    pub q1_agrees: bool,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.q0_agrees && self.q1_agrees
    }
}

/// Builds tables of `f` about two centers and compares their final `q0`, `q1`.
pub fn center_invariance_check(
    f: &CorpusFunction,
    x0_a: &Scalar,
    x0_b: &Scalar,
    m_max: usize,
    tol: &Scalar,
) -> Result<InvarianceReport> {
    if m_max < 1 {
        return Err(Error::OrderTooSmall {
            what: "m_max",
            min: 1,
            got: m_max,
        });
    }
    let table_a = convergence_table(&f.taylor_coeffs(x0_a, m_max + 1)?, m_max)?;
    let table_b = convergence_table(&f.taylor_coeffs(x0_b, m_max + 1)?, m_max)?;
    let (la, lb) = (table_a.last(), table_b.last());
    let diff_q0 = (&la.q0 - &lb.q0).abs();
    let diff_q1 = (la.q1.as_ref().expect("m >= 1") - lb.q1.as_ref().expect("m >= 1")).abs();
    Ok(InvarianceReport {
        q0_agrees: &diff_q0 <= tol,
        q1_agrees: &diff_q1 <= tol,
        diff_q0,
        diff_q1,
        table_a,
        table_b,
    })
}

/// Growth allowed above the reference point before a scan is flagged.
pub const RESIDUAL_GROWTH_FACTOR: i64 = 4;

/// The reference point sits ten octaves below the largest grid point.
pub const RESIDUAL_REFERENCE_OCTAVES: i64 = 10;

#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// `(x, x^2 |f(x) - q0 - q1/x|)` for each grid point.
    pub points: Vec<(Scalar, Scalar)>,
    /// Index into `points` of the reference point.
    pub reference: usize,
    /// True when some residual at or above the reference exceeds
    /// [`RESIDUAL_GROWTH_FACTOR`] times the reference residual.
    pub flagged: bool,
}

impl ResidualReport {
    pub fn reference_point(&self) -> &(Scalar, Scalar) {
        &self.points[self.reference]
    }

    /// Largest ratio `r(x) / r(x_ref)` over the points at or above the
    /// reference, or `None` when the reference residual is zero.
    pub fn max_growth(&self) -> Option<Scalar> {
        let r_ref = &self.points[self.reference].1;
        if r_ref.is_zero() {
            return None;
        }
        self.points[self.reference..]
            .iter()
            .map(|(_, r)| r.checked_div(r_ref).expect("nonzero"))
            .max_by(|a, b| a.cmp_value(b))
    }
}

/// `x = 2^lo, 2^{lo+1}, ..., 2^hi`.
pub fn dyadic_grid(lo: i64, hi: i64) -> Vec<Scalar> {
    (lo..=hi)
        .map(|e| Scalar::int(2).pow_int(e).expect("small exponent"))
        .collect()
}

/// Scans `r(x) = x^2 |f(x) - q0 - q1/x|` over a strictly increasing grid.
/// The reference is the largest grid point at most `x_max / 2^10` (the first
/// point if none is that small).
pub fn asymptotic_residual_scan(
    f: &CorpusFunction,
    q0: &Scalar,
    q1: &Scalar,
    grid: &[Scalar],
) -> Result<ResidualReport> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid);
    }
    let points = grid
        .iter()
        .map(|x| {
            if x.is_zero() {
                return Err(Error::Pole {
                    x: x.to_plain_string(),
                });
            }
            let r = (f.evaluate(x)? - q0 - q1.checked_div(x)?).abs() * x * x;
            Ok((x.clone(), r))
        })
        .collect::<Result<Vec<_>>>()?;
    let x_max = grid.last().expect("nonempty");
    let cutoff = x_max.checked_div(&Scalar::int(2).pow_int(RESIDUAL_REFERENCE_OCTAVES)?)?;
    let reference = grid.iter().rposition(|x| *x <= cutoff).unwrap_or(0);
    let bound = &points[reference].1 * Scalar::int(RESIDUAL_GROWTH_FACTOR);
    let flagged = points[reference..].iter().any(|(_, r)| *r > bound);
    Ok(ResidualReport {
        points,
        reference,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn sel(name: &str) -> CorpusFunction {
        CorpusFunction::from_selector(name, None).unwrap()
    }

    fn table(name: &str, x0: Scalar, m_max: usize) -> ConvergenceTable {
        convergence_table(&sel(name).taylor_coeffs(&x0, m_max + 1).unwrap(), m_max).unwrap()
    }

    #[test]
    fn reciprocal_table_is_exact_from_m1() {
        let t = table("one-over-x", Scalar::one(), 12);
        assert_eq!(t.rows()[0].q0, q(1, 1));
        assert!(t.rows()[0].q1.is_none() && t.rows()[0].delta0.is_none());
        assert!(t.rows()[1].delta1.is_none());
        for row in &t.rows()[1..] {
            assert_eq!(row.q0, q(0, 1));
            assert_eq!(row.q1, Some(q(1, 1)));
        }
        assert!(t.is_exact() && t.warning().is_none());
    }

    #[test]
    fn constant_series() {
        let s = TaylorSeries::new(Scalar::one(), vec![q(7, 1), q(0, 1), q(0, 1), q(0, 1)]).unwrap();
        let t = convergence_table(&s, 3).unwrap();
        for row in t.rows() {
            assert_eq!(row.q0, q(7, 1));
            assert!(row.q1.as_ref().is_none_or(Scalar::is_zero));
        }
    }

    #[test]
    fn first_q1_row_is_minus_c1() {
        let s = TaylorSeries::new(Scalar::one(), vec![q(3, 1), q(-5, 7)]).unwrap();
        assert_eq!(
            convergence_table(&s, 1).unwrap().rows()[1].q1,
            Some(q(5, 7))
        );
    }

    #[test]
    fn estimate_reciprocal() {
        let t = table("one-over-x", Scalar::one(), 3);
        let e = estimate_limits(&t, &q(1, 1_000_000_000_000)).unwrap();
        assert_eq!((e.q0.clone(), e.q1.clone()), (q(0, 1), q(1, 1)));
        assert!(e.converged());
        assert_eq!(e.m_used, 3);
    }

    #[test]
    fn estimate_needs_three_rows() {
        let t = table("one-over-x", Scalar::one(), 1);
        assert!(matches!(
            estimate_limits(&t, &q(1, 10)),
            Err(Error::TableTooShort { rows: 2, min: 3 })
        ));
    }

    #[test]
    fn single_quiet_step_is_not_convergence() {
        // q0 walks 0, 1, 0, 0: one zero delta at the end, one large before it
        let s =
            TaylorSeries::new(Scalar::one(), vec![q(0, 1), q(1, 1), q(-3, 1), q(5, 1)]).unwrap();
        let t = convergence_table(&s, 3).unwrap();
        assert_eq!(t.last().delta0, Some(q(0, 1)));
        let e = estimate_limits(&t, &q(1, 1000)).unwrap();
        assert!(!e.converged_q0);
    }

    #[test]
    fn x_over_x_plus_one_converges() {
        let t = table("x-over-x-plus-one", Scalar::one(), 40);
        let e = estimate_limits(&t, &q(1, 1_000_000_000)).unwrap();
        assert!((&e.q0 - q(1, 1)).abs() <= q(1, 1_000_000_000));
        assert!((&e.q1 + q(1, 1)).abs() <= q(1, 1_000_000_000));
        for row in t.rows() {
            assert_eq!(
                row.q0,
                q(1, 1) - Scalar::int(2).pow_int(-(row.m as i64 + 1)).unwrap()
            );
        }
    }

    #[test]
    fn invariance_reports() {
        let r =
            center_invariance_check(&sel("one-over-x"), &q(1, 1), &q(5, 4), 30, &q(1, 1_000_000))
                .unwrap();
        assert!(r.q0_agrees);
        let seven = CorpusFunction::shifted_reciprocal(q(7, 1), q(0, 1), q(0, 1));
        let r = center_invariance_check(&seven, &q(1, 1), &q(3, 1), 5, &q(0, 1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.table_a, r.table_b);
    }

    #[test]
    fn residual_examples() {
        let grid = dyadic_grid(4, 20);
        let r = asymptotic_residual_scan(&sel("one-over-x"), &q(0, 1), &q(1, 1), &grid).unwrap();
        assert!(r.points.iter().all(|(_, v)| v.is_zero()));
        assert!(!r.flagged);
        assert_eq!(r.reference_point().0, Scalar::int(1024));

        let r = asymptotic_residual_scan(&sel("x-over-x-plus-one"), &q(1, 1), &q(-1, 1), &grid)
            .unwrap();
        assert!(!r.flagged);
        assert!(r.points.iter().all(|(_, v)| *v <= q(1, 1)));

        let r =
            asymptotic_residual_scan(&sel("mobius-2-3-1-2"), &q(2, 1), &q(-1, 1), &grid).unwrap();
        let top = &r.points.last().unwrap().1;
        assert!((top - q(2, 1)).abs() < q(1, 1000));

        // a wrong q1 leaves an O(x) residual, which the scan flags
        let r = asymptotic_residual_scan(&sel("one-over-x"), &q(0, 1), &q(9, 10), &grid).unwrap();
        assert!(r.flagged);
    }

    #[test]
    fn residual_grid_validation() {
        let f = sel("one-over-x");
        assert!(matches!(
            asymptotic_residual_scan(&f, &q(0, 1), &q(1, 1), &[]),
            Err(Error::InvalidGrid)
        ));
        let bad = [q(2, 1), q(1, 1)];
        assert!(matches!(
            asymptotic_residual_scan(&f, &q(0, 1), &q(1, 1), &bad),
            Err(Error::InvalidGrid)
        ));
        let pole = [q(-1, 1), q(1, 1)];
        let g = sel("x-over-x-plus-one");
        assert!(matches!(
            asymptotic_residual_scan(&g, &q(1, 1), &q(-1, 1), &pole),
            Err(Error::Pole { .. })
        ));
    }
}
