//! Small helpers around [`BigRational`].

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Largest dyadic `k / 2^bits` not above `q`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = q.numer() * &scale;
    Rational::new(scaled.div_floor(q.denom()), scale)
}

/// Smallest dyadic `k / 2^bits` not below `q`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = q.numer() * &scale;
    Rational::new(scaled.div_ceil(q.denom()), scale)
}

/// Parses `"n/d"` or an integer `"n"`. Decimal points are rejected so that
/// no value is silently rounded.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// `"n/d"`, or `"n"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn format_decimal(q: &Rational, places: usize) -> String {
    let mut scale = BigInt::one();
    for _ in 0..places {
        scale *= 10;
    }
    let scaled = q.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        let frac = format!("{frac}");
        let pad = places - frac.len();
        format!("{sign}{whole}.{}{frac}", "0".repeat(pad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(12225, 64), 6), "191.015625");
        assert_eq!(format_decimal(&ratio(-5, 8), 2), "-0.63");
        assert_eq!(format_decimal(&ratio(1, 3), 0), "0");
        assert_eq!(format_decimal(&ratio(3, 4), 6), "0.750000");
    }

    #[test]
    fn parse_rejects_decimals() {
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational(" 75 "), Some(int(75)));
        assert_eq!(parse_rational("0.75"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = ratio(1, 3);
        let lo = floor_dyadic(&q, 10);
        let hi = ceil_dyadic(&q, 10);
        assert!(lo <= q && q <= hi);
        assert_eq!(&hi - &lo, ratio(1, 1024));
    }
}
