//! Exact rational / fixed-precision binary float scalars.
//!
//! A [`Scalar`] is either an exact rational in lowest terms or a binary float
//! rounded half-to-even at a fixed precision of at least
//! [`MIN_FLOAT_PRECISION`] bits. Exactness is contagious in the usual way:
//! exact op exact stays exact, anything touching a float is a float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu::base::{Abs, Sign, UnsignedAbs};
use dashu::float::round::mode::HalfEven;
use dashu::float::{Context, FBig};
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use thiserror::Error;

/// Binary float with round-half-to-even.
pub type Float = FBig<HalfEven, 2>;

/// Smallest precision (in bits) accepted for inexact scalars.
pub const MIN_FLOAT_PRECISION: usize = 64;

/// Largest exponent magnitude accepted by [`Scalar::pow_int`] and by the
/// decimal exponent of parsed literals.
pub const MAX_EXPONENT: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is out of range (|e| <= {MAX_EXPONENT})")]
    ExponentOverflow(i64),
    #[error("float precision {0} is below the {MIN_FLOAT_PRECISION}-bit minimum")]
    PrecisionTooLow(usize),
    #[error("binomial upper index {0} is negative")]
    NegativeUpperIndex(i64),
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
    #[error("{0:?} is a float literal and has no exact rational reading; declare float mode")]
    FloatLiteralInExactMode(String),
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(RBig),
    Float(Float),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(RBig::ZERO)
    }

    pub fn one() -> Self {
        Scalar::Exact(RBig::ONE)
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(RBig::from(n))
    }

    pub fn from_ibig(n: IBig) -> Self {
        Scalar::Exact(RBig::from(n))
    }

    /// `num/den` in lowest terms. Panics if `den == 0`; use
    /// [`Scalar::checked_div`] for fallible division.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "Scalar::ratio with zero denominator");
        Scalar::Exact(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_rational(r: RBig) -> Self {
        Scalar::Exact(r)
    }

    /// Wraps a float, enforcing the minimum precision.
    pub fn from_float(f: Float) -> Result<Self, ScalarError> {
        if f.precision() < MIN_FLOAT_PRECISION {
            return Err(ScalarError::PrecisionTooLow(f.precision()));
        }
        Ok(Scalar::Float(f))
    }

    /// Correctly rounded conversion of a rational to a `precision`-bit float.
    pub fn float_from_rational(r: &RBig, precision: usize) -> Result<Self, ScalarError> {
        if precision < MIN_FLOAT_PRECISION {
            return Err(ScalarError::PrecisionTooLow(precision));
        }
        Ok(Scalar::Float(rational_to_float(r, precision)))
    }

    /// Rounds this value to a `precision`-bit float. Floats are re-rounded.
    pub fn to_float(&self, precision: usize) -> Result<Self, ScalarError> {
        if precision < MIN_FLOAT_PRECISION {
            return Err(ScalarError::PrecisionTooLow(precision));
        }
        Ok(match self {
            Scalar::Exact(r) => Scalar::Float(rational_to_float(r, precision)),
            Scalar::Float(f) => Scalar::Float(f.clone().with_precision(precision).value()),
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Precision in bits for floats, `None` for exact values.
    pub fn precision(&self) -> Option<usize> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(f) => Some(f.precision()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.repr().is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&RBig> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// The exact rational value (floats are dyadic, so this is lossless).
    pub fn to_rational(&self) -> RBig {
        match self {
            Scalar::Exact(r) => r.clone(),
            Scalar::Float(f) => float_to_rational(f),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().value(),
            Scalar::Float(f) => f.to_f64().value(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone().abs()),
            Scalar::Float(f) => Scalar::Float(f.clone().abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let sign = match self {
            Scalar::Exact(r) => r.sign(),
            Scalar::Float(f) => f.sign(),
        };
        match sign {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(binary(self, rhs, |a, b| a / b, |a, b| a / b))
    }

    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self)
    }

    /// Integer power. Negative exponents need a nonzero base.
    pub fn pow_int(&self, exp: i64) -> Result<Scalar, ScalarError> {
        if exp.unsigned_abs() > MAX_EXPONENT as u64 {
            return Err(ScalarError::ExponentOverflow(exp));
        }
        if exp < 0 && self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = exp.unsigned_abs() as usize;
        let positive = match self {
            Scalar::Exact(r) => Scalar::Exact(r.pow(n)),
            Scalar::Float(f) => Scalar::Float(f.powi(IBig::from(n))),
        };
        if exp < 0 {
            positive.recip()
        } else {
            Ok(positive)
        }
    }

    /// Parses `p/q`, an integer, or a decimal with optional exponent as an
    /// exact rational. Hex float literals are rejected.
    pub fn parse_exact(s: &str) -> Result<Scalar, ScalarError> {
        let t = s.trim();
        if is_hex_float(t) || is_non_finite(t) {
            return Err(ScalarError::FloatLiteralInExactMode(s.to_string()));
        }
        parse_rational(t).map(Scalar::Exact)
    }

    /// Parses anything [`Scalar::parse_exact`] accepts, plus C99 hex floats
    /// (`0x1.8p-3`), and rounds to `precision` bits.
    pub fn parse_float(s: &str, precision: usize) -> Result<Scalar, ScalarError> {
        let t = s.trim();
        let r = if is_hex_float(t) {
            parse_hex_float(t).ok_or_else(|| ScalarError::Parse(s.to_string()))?
        } else {
            parse_rational(t)?
        };
        Scalar::float_from_rational(&r, precision)
    }

    /// Decimal rendering with at most `digits` significant digits, rounded
    /// half-to-even, trailing zeros trimmed. Plain notation for decimal
    /// exponents in `[-5, digits)`, scientific otherwise.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        render_decimal(&self.to_rational(), digits.max(1))
    }

    /// `p/q` (or `p` for integers) for exact values; a decimal with enough
    /// digits to round-trip at the value's precision for floats.
    pub fn to_plain_string(&self) -> String {
        match self {
            Scalar::Exact(r) => render_rational(r),
            Scalar::Float(f) => {
                render_decimal(&float_to_rational(f), round_trip_digits(f.precision()))
            }
        }
    }
}

/// Significant decimal digits that let a `precision`-bit float round-trip.
pub fn round_trip_digits(precision: usize) -> usize {
    // ceil(p * log10(2)) + 1
    (precision as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

fn rational_to_float(r: &RBig, precision: usize) -> Float {
    if r.is_zero() {
        return Context::<HalfEven>::new(precision)
            .convert_int::<2>(IBig::ZERO)
            .value();
    }
    r.to_float::<HalfEven, 2>(precision).value()
}

fn float_to_rational(f: &Float) -> RBig {
    let repr = f.repr();
    let significand = repr.significand().clone();
    let exponent = repr.exponent();
    if exponent >= 0 {
        RBig::from(significand << exponent as usize)
    } else {
        RBig::from_parts(significand, UBig::ONE << exponent.unsigned_abs())
    }
}

fn binary(
    a: &Scalar,
    b: &Scalar,
    exact: impl FnOnce(&RBig, &RBig) -> RBig,
    float: impl FnOnce(&Float, &Float) -> Float,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(float(x, y)),
        (Scalar::Exact(x), Scalar::Float(y)) => {
            Scalar::Float(float(&rational_to_float(x, y.precision()), y))
        }
        (Scalar::Float(x), Scalar::Exact(y)) => {
            Scalar::Float(float(x, &rational_to_float(y, x.precision())))
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                binary(self, rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Float(f) => Scalar::Float(-f.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Scalar {
    /// Total order by value; mixed comparisons are exact.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<IBig> for Scalar {
    fn from(n: IBig) -> Self {
        Scalar::from_ibig(n)
    }
}

impl From<RBig> for Scalar {
    fn from(r: RBig) -> Self {
        Scalar::Exact(r)
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse_exact(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

fn render_rational(r: &RBig) -> String {
    if r.denominator().is_one() {
        r.numerator().to_string()
    } else {
        format!("{}/{}", r.numerator(), r.denominator())
    }
}

fn pow10(n: usize) -> UBig {
    UBig::from(10u8).pow(n)
}

fn render_decimal(r: &RBig, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.sign() == Sign::Negative;
    let num = r.numerator().clone().unsigned_abs();
    let den = r.denominator().clone();

    // 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let below = if e >= 0 {
        num < &den * pow10(e as usize)
    } else {
        &num * pow10((-e) as usize) < den
    };
    if below {
        e -= 1;
    }

    // mantissa = round(num/den * 10^(digits-1-e))
    let shift = digits as i64 - 1 - e;
    let (n, d) = if shift >= 0 {
        (num * pow10(shift as usize), den)
    } else {
        (num, den * pow10((-shift) as usize))
    };
    let (q, rem) = (&n / &d, &n % &d);
    let twice = &rem << 1;
    let round_up = match twice.cmp(&d) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (&q % UBig::from(2u8)) == UBig::ONE,
    };
    let mut mantissa = if round_up { q + UBig::ONE } else { q };
    if mantissa == pow10(digits) {
        mantissa = pow10(digits - 1);
        e += 1;
    }

    let full = mantissa.to_string();
    let trimmed = full.trim_end_matches('0');
    let body = if e >= -5 && e < digits as i64 {
        plain_notation(trimmed, e)
    } else {
        let (head, tail) = trimmed.split_at(1);
        if tail.is_empty() {
            format!("{head}e{e}")
        } else {
            format!("{head}.{tail}e{e}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn plain_notation(digits: &str, e: i64) -> String {
    if e < 0 {
        let zeros = "0".repeat((-e - 1) as usize);
        return format!("0.{zeros}{digits}");
    }
    let int_len = e as usize + 1;
    if digits.len() <= int_len {
        format!("{digits}{}", "0".repeat(int_len - digits.len()))
    } else {
        format!("{}.{}", &digits[..int_len], &digits[int_len..])
    }
}

fn is_non_finite(s: &str) -> bool {
    let t = s.trim_start_matches(['+', '-']).to_ascii_lowercase();
    matches!(t.as_str(), "inf" | "infinity" | "nan")
}

fn is_hex_float(s: &str) -> bool {
    let t = s.trim_start_matches(['+', '-']);
    t.starts_with("0x") || t.starts_with("0X")
}

fn parse_int(s: &str) -> Option<IBig> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let magnitude = IBig::from_str(digits).ok()?;
    Some(if s.starts_with('-') {
        -magnitude
    } else {
        magnitude
    })
}

fn parse_rational(s: &str) -> Result<RBig, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_int(n.trim()).ok_or_else(err)?;
        let den = parse_int(d.trim()).ok_or_else(err)?;
        if den == IBig::ZERO {
            return Err(ScalarError::DivisionByZero);
        }
        return Ok(RBig::from_parts_signed(num, den));
    }

    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let mut exp10: i64 = match exponent {
        Some(e) => {
            let v = parse_int(e).ok_or_else(err)?;
            let v = i64::try_from(v).map_err(|_| ScalarError::ExponentOverflow(i64::MAX))?;
            if v.unsigned_abs() > MAX_EXPONENT as u64 {
                return Err(ScalarError::ExponentOverflow(v));
            }
            v
        }
        None => 0,
    };
    exp10 -= frac_part.len() as i64;
    let digits = format!("{int_part}{frac_part}");
    let magnitude = UBig::from_str(&digits).map_err(|_| err())?;
    let value = if exp10 >= 0 {
        RBig::from(magnitude * pow10(exp10 as usize))
    } else {
        RBig::from_parts(IBig::from(magnitude), pow10((-exp10) as usize))
    };
    Ok(if negative { -value } else { value })
}

/// `[-]0xH[.H]p[+-]D` as an exact dyadic rational.
fn parse_hex_float(s: &str) -> Option<RBig> {
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))?;
    let (mantissa, exp) = body.split_once(['p', 'P'])?;
    let exp = i64::try_from(parse_int(exp)?).ok()?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let magnitude = UBig::from_str_radix(&digits, 16).ok()?;
    let exp2 = exp - 4 * frac_part.len() as i64;
    if exp2.unsigned_abs() > MAX_EXPONENT as u64 {
        return None;
    }
    let value = if exp2 >= 0 {
        RBig::from(magnitude << exp2 as usize)
    } else {
        RBig::from_parts(
            IBig::from(magnitude),
            UBig::ONE << exp2.unsigned_abs() as usize,
        )
    };
    Some(if negative { -value } else { value })
}
