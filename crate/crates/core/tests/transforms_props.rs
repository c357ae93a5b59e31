//! Transformation laws on countable sets.

use proptest::prelude::*;
use series_asymptote::transforms::{
    binomial_convolve, sequential_transform, sequential_transform_closed, transform_k, CountableSet,
};
use series_asymptote::{binom, Scalar, TaylorSeries};

fn rational() -> impl Strategy<Value = Scalar> {
    (-60i64..60, 1i64..25).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn rationals(max_len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(rational(), 1..=max_len)
}

fn c(a: i64, b: i64) -> Scalar {
    Scalar::from_ibig(binom(a, b).unwrap())
}

fn sign(i: usize) -> Scalar {
    if i.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

fn at(v: &[Scalar], i: i64) -> Scalar {
    if i < 0 {
        Scalar::zero()
    } else {
        v.get(i as usize).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// Elementwise binomial convolution of `c` with row `top` (or the growing row
/// `i - 1` below the switch index).
fn convolved(coeffs: &[Scalar], i: usize, switch: usize, top: usize) -> Scalar {
    if i == 0 {
        return at(coeffs, 0);
    }
    let t = if i <= switch { i - 1 } else { top };
    (0..=t)
        .map(|s| c(t as i64, s as i64) * at(coeffs, i as i64 - s as i64))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn proposition_1(coeffs in rationals(20), k in 1usize..=12) {
        let len = coeffs.len() + k + 2;
        let r = CountableSet::from_fn(len, |i| convolved(&coeffs, i, k, k - 1));
        let out = transform_k(&r, k).unwrap();
        for i in 0..len + 2 {
            prop_assert_eq!(out.get(i), convolved(&coeffs, i, k + 1, k), "index {}", i);
        }
    }

    #[test]
    fn proposition_3(coeffs in rationals(8), m in 1usize..=15) {
        let r = CountableSet::new(coeffs);
        prop_assert_eq!(sequential_transform(&r, m).unwrap(), sequential_transform_closed(&r, m).unwrap());
    }

    #[test]
    fn proposition_5(u in rationals(10), v in rationals(10), m in 1usize..=10) {
        let (u, v) = (CountableSet::new(u), CountableSet::new(v));
        let lhs = sequential_transform(&(&u + &v), m).unwrap();
        let rhs = &sequential_transform(&u, m).unwrap() + &sequential_transform(&v, m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn convolution_prefix_stable(coeffs in rationals(16)) {
        let m = coeffs.len() - 1;
        let s = TaylorSeries::new(Scalar::one(), coeffs).unwrap();
        for mm in 0..m {
            let short = binomial_convolve(&s, mm).unwrap();
            let long = binomial_convolve(&s, mm + 1).unwrap();
            prop_assert_eq!(short.values(), &long.values()[..=mm]);
            prop_assert_eq!(&short.values()[0], &s.coeffs()[0]);
        }
    }
}

#[test]
fn proposition_2() {
    const CHECK: usize = 25;
    for j in 0..=10i64 {
        for k in 1..=10usize {
            let r = CountableSet::from_fn(CHECK + 5, |i| {
                let b = if i <= k {
                    c(j, j - i as i64)
                } else {
                    c(i as i64 + j - k as i64, j - k as i64)
                };
                sign(i) * b
            });
            let out = transform_k(&r, k).unwrap();
            for i in 0..=CHECK {
                let b = if i <= k + 1 {
                    c(j, j - i as i64)
                } else {
                    c(i as i64 + j - k as i64 - 1, j - k as i64 - 1)
                };
                assert_eq!(out.get(i), sign(i) * b, "j={j} k={k} i={i}");
            }
        }
    }
}

#[test]
fn proposition_4() {
    const CHECK: usize = 25;
    for j in 1..=8i64 {
        for m in 1..=8usize {
            let r = CountableSet::from_fn(CHECK + m + 5, |i| sign(i) * c(i as i64 + j - 1, j - 1));
            let out = sequential_transform(&r, m).unwrap();
            for i in 0..=CHECK {
                let b = if i <= m + 1 {
                    c(j, j - i as i64)
                } else {
                    c(i as i64 + j - m as i64 - 1, j - m as i64 - 1)
                };
                assert_eq!(out.get(i), sign(i) * b, "j={j} m={m} i={i}");
            }
        }
    }
}

#[test]
fn sequential_agrees_on_support_eight_at_order_three() {
    let r = CountableSet::new((1..=8).map(|n| Scalar::ratio(n * n - 7, n + 2)).collect());
    assert_eq!(
        sequential_transform(&r, 3).unwrap(),
        sequential_transform_closed(&r, 3).unwrap()
    );
}

#[test]
fn second_order_on_j2_set_matches_closed_pattern() {
    // R_i = (-1)^i C(i+1, 1), j = 2, m = 2: (-1)^i C(2, 2-i) for i <= 3
    let r = CountableSet::from_fn(12, |i| sign(i) * c(i as i64 + 1, 1));
    let out = sequential_transform(&r, 2).unwrap();
    for i in 0..=3 {
        assert_eq!(out.get(i), sign(i) * c(2, 2 - i as i64));
    }
}
