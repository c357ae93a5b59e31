//! Convergence tables on the shipped corpus, checked against brute-force sums
//! over raw big rationals.

use dashu::integer::IBig;
use dashu::rational::RBig;
use series_asymptote::approximant::coeffs_oracle_solve;
use series_asymptote::asymptotics::{center_invariance_check, dyadic_grid};
use series_asymptote::corpus::default_corpus;
use series_asymptote::{convergence_table, estimate_limits, CorpusFunction, Scalar};

fn factorial(n: u64) -> IBig {
    (1..=n).map(IBig::from).product()
}

fn choose(n: u64, k: u64) -> IBig {
    if k > n {
        IBig::ZERO
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

/// q0 and q1 summed directly from the defining weights.
fn brute_q0_q1(c: &[RBig]) -> (RBig, RBig) {
    let m = (c.len() - 1) as u64;
    let mut q0 = RBig::ZERO;
    let mut q1 = RBig::ZERO;
    for (s, cs) in c.iter().enumerate() {
        let s = s as u64;
        q0 += RBig::from(choose(m, s)) * cs;
        if s >= 1 {
            q1 += RBig::from(choose(m, s + 1) - IBig::from(m) * choose(m, s)) * cs;
        }
    }
    (q0, q1)
}

fn pow(b: RBig, e: usize) -> RBig {
    (0..e).fold(RBig::ONE, |acc, _| acc * &b)
}

fn ratio(n: i64, d: i64) -> RBig {
    RBig::from(n) / RBig::from(d)
}

fn rational(s: &Scalar) -> RBig {
    s.as_rational().expect("exact").clone()
}

#[test]
fn quarter_brute_force_then_closed_forms() {
    let f = CorpusFunction::from_selector("reciprocal-quarter", None).unwrap();
    let series = f.taylor_coeffs(&Scalar::one(), 21).unwrap();
    let table = convergence_table(&series, 20).unwrap();
    for m in 0..=20usize {
        let c: Vec<RBig> = (0..=m)
            .map(|n| {
                let v = pow(ratio(4, 5), n + 1);
                if n % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let (q0, q1) = brute_q0_q1(&c);
        let p = pow(RBig::from(5), m + 1);
        assert_eq!(q0, RBig::from(4) / &p, "brute q0 at m={m}");
        assert_eq!(rational(&table.rows()[m].q0), q0);
        if m >= 1 {
            assert_eq!(
                q1,
                RBig::ONE - RBig::from(4 * m as i64 + 5) / &p,
                "brute q1 at m={m}"
            );
            assert_eq!(rational(table.rows()[m].q1.as_ref().unwrap()), q1);
        }
    }
    let e = estimate_limits(&table, &Scalar::parse_exact("1e-12").unwrap()).unwrap();
    let tol = Scalar::parse_exact("1e-12").unwrap();
    assert!(e.q0.abs() <= tol);
    assert!((&e.q1 - Scalar::one()).abs() <= tol);
}

#[test]
fn x_over_x_plus_one_brute_force_then_closed_forms() {
    let f = CorpusFunction::from_selector("x-over-x-plus-one", None).unwrap();
    let series = f.taylor_coeffs(&Scalar::one(), 31).unwrap();
    let table = convergence_table(&series, 30).unwrap();
    for m in 0..=30usize {
        let c: Vec<RBig> = (0..=m)
            .map(|n| {
                let v = pow(ratio(1, 2), n + 1);
                if n == 0 || n % 2 == 1 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let (q0, _) = brute_q0_q1(&c);
        assert_eq!(q0, RBig::ONE - pow(ratio(1, 2), m + 1), "brute q0 at m={m}");
        assert_eq!(rational(&table.rows()[m].q0), q0);
    }
    let q1 = table.last().q1.clone().unwrap();
    assert!((q1 + Scalar::one()).abs() <= Scalar::parse_exact("1e-6").unwrap());
}

#[test]
fn pipeline_round_trip_for_every_entry() {
    for entry in default_corpus() {
        for m in [0usize, 1, 5, 10] {
            let s = entry.function.taylor_coeffs(&entry.center, m + 1).unwrap();
            let back = coeffs_oracle_solve(&s, m)
                .unwrap()
                .expand_to_taylor(m + 1)
                .unwrap();
            assert_eq!(
                back.coeffs(),
                s.coeffs(),
                "{} at {} m={m}",
                entry.name,
                entry.center
            );
        }
    }
}

#[test]
fn satisfied_entries_reach_their_asymptote_by_forty() {
    let tol = Scalar::parse_exact("1e-6").unwrap();
    let mut checked = 0;
    for entry in default_corpus() {
        if !entry.function.hypothesis_report(&entry.center).satisfied {
            continue;
        }
        let s = entry.function.taylor_coeffs(&entry.center, 41).unwrap();
        let last = convergence_table(&s, 40).unwrap().last().clone();
        let (q0, q1) = entry.function.known_asymptote();
        assert!(
            (&last.q0 - &q0).abs() <= tol,
            "{} at {}",
            entry.name,
            entry.center
        );
        assert!(
            (last.q1.unwrap() - &q1).abs() <= tol,
            "{} at {}",
            entry.name,
            entry.center
        );
        checked += 1;
    }
    assert_eq!(checked, 3);
}

#[test]
fn deltas_settle_into_monotone_decrease() {
    for entry in default_corpus() {
        let s = entry.function.taylor_coeffs(&entry.center, 41).unwrap();
        let t = convergence_table(&s, 40).unwrap();
        for pick in [0, 1] {
            let deltas: Vec<Scalar> = t
                .rows()
                .iter()
                .filter_map(|r| {
                    if pick == 0 {
                        r.delta0.clone()
                    } else {
                        r.delta1.clone()
                    }
                })
                .collect();
            let last_rise = deltas.windows(2).rposition(|w| w[1] > w[0]);
            assert!(
                last_rise.is_none_or(|i| i + 1 < 30),
                "{} at {}: delta{pick} still rising near m=40",
                entry.name,
                entry.center
            );
        }
    }
}

#[test]
fn exact_tables_are_reproducible() {
    for entry in default_corpus() {
        let s = entry.function.taylor_coeffs(&entry.center, 26).unwrap();
        let a = convergence_table(&s, 25).unwrap();
        let b = convergence_table(&s, 25).unwrap();
        assert!(a.is_exact());
        for (x, y) in a.rows().iter().zip(b.rows()) {
            assert_eq!(x.q0.to_plain_string(), y.q0.to_plain_string());
        }
    }
}

#[test]
fn reciprocal_center_agreement_is_exact_from_m2() {
    let f = CorpusFunction::from_selector("one-over-x", None).unwrap();
    let s = f.taylor_coeffs(&Scalar::one(), 31).unwrap();
    for row in &convergence_table(&s, 30).unwrap().rows()[2..] {
        assert!(row.q0.is_zero());
        assert_eq!(row.q1, Some(Scalar::one()));
    }
    let r = center_invariance_check(
        &f,
        &Scalar::one(),
        &Scalar::ratio(5, 4),
        30,
        &Scalar::parse_exact("1e-6").unwrap(),
    )
    .unwrap();
    assert!(r.passed());
}

#[test]
fn analytic_asymptote_residuals_stay_bounded() {
    let grid = dyadic_grid(4, 20);
    for entry in default_corpus() {
        let (q0, q1) = entry.function.known_asymptote();
        let scan = series_asymptote::asymptotics::asymptotic_residual_scan(
            &entry.function,
            &q0,
            &q1,
            &grid,
        )
        .unwrap();
        assert!(!scan.flagged, "{}", entry.name);
    }
}
