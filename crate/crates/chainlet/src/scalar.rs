//! Scalar field abstraction: exact rationals or `f64`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Tolerance for identity checks in float mode.
pub const FLOAT_TOL: f64 = 1e-12;

/// Which scalar field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithmeticMode {
    Rational,
    Float,
}

impl Display for ArithmeticMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticMode::Rational => write!(f, "rational"),
            ArithmeticMode::Float => write!(f, "float"),
        }
    }
}

impl FromStr for ArithmeticMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(ArithmeticMode::Rational),
            "float" => Ok(ArithmeticMode::Float),
            other => Err(format!(
                "unknown arithmetic mode `{other}` (expected rational|float)"
            )),
        }
    }
}

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const MODE: ArithmeticMode;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Rationals convert the binary value of the float exactly. `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> Option<Rational>;
    /// `None` when the result is not representable (rational mode).
    fn sin(&self) -> Option<Self>;
    fn cos(&self) -> Option<Self>;
    fn total_cmp(&self, other: &Self) -> Ordering;
    /// Exact equality for rationals; relative tolerance [`FLOAT_TOL`] for floats.
    fn close_to(&self, other: &Self) -> bool;
    /// Parses integers, decimals (`-1.25`, `3e-2`) and fractions (`3/4`).
    fn parse_literal(s: &str) -> Option<Self>;

    fn pow_u32(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
}

impl Scalar for f64 {
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }
    fn sin(&self) -> Option<Self> {
        Some(f64::sin(*self))
    }
    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn close_to(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= FLOAT_TOL * scale
    }
    fn parse_literal(s: &str) -> Option<Self> {
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            return (b != 0.0).then_some(a / b);
        }
        s.trim().parse().ok().filter(|v: &f64| v.is_finite())
    }
}

impl Scalar for Rational {
    const MODE: ArithmeticMode = ArithmeticMode::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn sin(&self) -> Option<Self> {
        self.is_zero().then(Rational::zero)
    }
    fn cos(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn close_to(&self, other: &Self) -> bool {
        self == other
    }
    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

/// Nearest-ish `f64` of a big rational, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down to 64 significant bits before dividing.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Exact parse of integer, fraction and decimal literals (with optional exponent).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let a = parse_rational(a)?;
        let b = parse_rational(b)?;
        return (!b.is_zero()).then(|| a / b);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str_radix(&digits, 10).ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Formats a scalar for reports: exact text for rationals, fixed precision for floats.
pub fn fmt_fixed<S: Scalar>(v: &S, digits: usize) -> String {
    match S::MODE {
        ArithmeticMode::Rational => v.to_string(),
        ArithmeticMode::Float => format!("{:.*}", digits, v.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimal_and_fraction_literals_exactly() {
        assert_eq!(parse_rational("0.5"), Some(q(1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("2e-2"), Some(q(1, 50)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn float_rational_round_trip_is_exact() {
        for v in [0.1, -3.75, 1e-300, 12345.678] {
            let r = <Rational as Scalar>::from_f64(v).unwrap();
            assert_eq!(rational_to_f64(&r), v);
        }
    }

    #[test]
    fn float_closeness_is_relative() {
        assert!(1e6f64.close_to(&(1e6 + 1e-7)));
        assert!(!1.0f64.close_to(&(1.0 + 1e-9)));
    }

    #[test]
    fn rational_trig_only_at_zero() {
        assert_eq!(Scalar::sin(&q(0, 1)), Some(q(0, 1)));
        assert_eq!(Scalar::sin(&q(1, 2)), None);
    }
}
