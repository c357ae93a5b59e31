//! Scalar arithmetic against a naive i128 fraction type.

use proptest::prelude::*;
use series_asymptote::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Frac(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    fn new(n: i128, d: i128) -> Frac {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
    fn div(self, o: Frac) -> Option<Frac> {
        (o.0 != 0).then(|| Frac::new(self.0 * o.1, self.1 * o.0))
    }
    fn scalar(self) -> Scalar {
        Scalar::ratio(self.0 as i64, self.1 as i64)
    }
}

fn frac() -> impl Strategy<Value = Frac> {
    (-100_000i128..100_000, 1i128..100_000).prop_map(|(n, d)| Frac::new(n, d))
}

proptest! {
    #[test]
    fn field_operations_match(a in frac(), b in frac()) {
        let (x, y) = (a.scalar(), b.scalar());
        prop_assert_eq!(&x + &y, a.add(b).scalar());
        prop_assert_eq!(&x - &y, a.sub(b).scalar());
        prop_assert_eq!(&x * &y, a.mul(b).scalar());
        match a.div(b) {
            Some(q) => prop_assert_eq!(x.checked_div(&y).unwrap(), q.scalar()),
            None => prop_assert!(x.checked_div(&y).is_err()),
        }
        prop_assert_eq!(x < y, a.0 * b.1 < b.0 * a.1);
    }

    #[test]
    fn rendering_round_trips(a in frac()) {
        let x = a.scalar();
        prop_assert_eq!(Scalar::parse_exact(&x.to_plain_string()).unwrap(), x.clone());
        prop_assert_eq!(x.to_plain_string().parse::<Scalar>().unwrap(), x);
    }

    #[test]
    fn float_mode_stays_close(a in frac(), b in frac()) {
        let (x, y) = (a.scalar().to_float(64).unwrap(), b.scalar().to_float(64).unwrap());
        let exact = a.mul(b).add(a).scalar();
        let approx = &x * &y + &x;
        prop_assert!(!approx.is_exact());
        let scale = exact.abs() + Scalar::one();
        let bound = Scalar::int(2).pow_int(-58).unwrap() * scale;
        prop_assert!((approx - exact).abs() <= bound);
    }

    #[test]
    fn float_text_round_trips(a in frac(), p in 64usize..200) {
        let x = a.scalar().to_float(p).unwrap();
        prop_assert_eq!(Scalar::parse_float(&x.to_plain_string(), p).unwrap(), x);
    }
}
