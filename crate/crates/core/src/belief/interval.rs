use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{ceil_dyadic, floor_dyadic, format_decimal, pow, Rational};

/// Closed rational interval `[lo, hi]`; a point when both ends agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// Strictly below every point of `other`.
    pub fn below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn scale(&self, s: &Rational) -> Interval {
        if s.is_negative() {
            Interval::new(&self.hi * s, &self.lo * s)
        } else {
            Interval::new(&self.lo * s, &self.hi * s)
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> Interval {
        Interval::new(Rational::one() - &self.hi, Rational::one() - &self.lo)
    }

    /// `self / (self + rest)` for positive `self` and nonnegative `rest`.
    pub fn share_of(&self, rest: &Interval) -> Interval {
        let lo = &self.lo / (&self.lo + &rest.hi);
        let hi = &self.hi / (&self.hi + &rest.lo);
        Interval::new(lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        crate::rational::to_f64(&self.midpoint())
    }
}

impl Add for &Interval {
    type Output = Interval;

    fn add(self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Mul for &Interval {
    type Output = Interval;

    /// General product: the extremes lie among the four corner products.
    fn mul(self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four corners").clone();
        let hi = c.iter().max().expect("four corners").clone();
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", format_decimal(&self.lo, 12))
        } else {
            write!(
                f,
                "[{}, {}]",
                format_decimal(&self.lo, 12),
                format_decimal(&self.hi, 12)
            )
        }
    }
}

/// Bracket of `x^(1/n)` for `x > 0` with about 64 significant bits.
pub fn nth_root_bounds(x: &Rational, n: u32) -> Interval {
    if n == 1 {
        return Interval::point(x.clone());
    }
    // Scale so that the integer root has at least 64 bits.
    let log2_lower = x.numer().bits() as i64 - x.denom().bits() as i64 - 1;
    let extra = if log2_lower < 0 {
        (-log2_lower) as u64 / n as u64 + 1
    } else {
        0
    };
    let bits = 64 + extra as u32;
    let scaled = x * Rational::from_integer(BigInt::one() << (bits as usize * n as usize));
    let floor = scaled.floor().to_integer();
    let mut k = floor.nth_root(n);
    // Integer root of the floor equals the floor of the real root.
    let scale = Rational::from_integer(BigInt::one() << bits as usize);
    let lo = Rational::from_integer(k.clone()) / &scale;
    let exact = pow(&lo, n) == *x;
    if !exact {
        k += 1;
    }
    let hi = Rational::from_integer(k) / &scale;
    Interval::new(lo, hi)
}

/// `ε^(1/ε)`: exact when `1/ε` is an integer, bracketed otherwise.
pub fn eta(eps: &Rational) -> Interval {
    let p = eps.numer().clone();
    let q = eps.denom().clone();
    // ε^(q/p) = (ε^q)^(1/p)
    let q_u32 = u32::try_from(&q).expect("denominator of epsilon fits in u32");
    let p_u32 = u32::try_from(&p).expect("numerator of epsilon fits in u32");
    let base = pow(eps, q_u32);
    nth_root_bounds(&base, p_u32)
}

const LN_BITS: u32 = 120;

/// `2 atanh(z)` for `0 <= z <= 1/3`, bracketed.
fn two_atanh(z: &Rational) -> Interval {
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    let cutoff = Rational::new(BigInt::one(), BigInt::one() << (LN_BITS as usize + 4));
    loop {
        let t = &term / Rational::from_integer(BigInt::from(2 * k + 1));
        sum += &t;
        term = floor_dyadic(&(&term * &z2), LN_BITS + 8);
        k += 1;
        if t < cutoff {
            break;
        }
    }
    // The remainder is at most the next exact term over (1 - z²). Rounding
    // `term` down loses under 2^-(LN_BITS+8) per step, and the j-th term
    // carries at most j such losses.
    let next = z * pow(&z2, k as u32) / Rational::from_integer(BigInt::from(2 * k + 1));
    let tail = next / (Rational::one() - &z2);
    let slack = Rational::new(BigInt::from((k + 1) * (k + 1)), BigInt::one() << (LN_BITS as usize + 8));
    let two = Rational::from_integer(BigInt::from(2));
    let lo = floor_dyadic(&(&sum * &two), LN_BITS);
    let hi = ceil_dyadic(&((sum + tail + slack) * &two), LN_BITS);
    Interval::new(lo, hi)
}

/// Natural logarithm of a positive rational.
pub fn ln_bounds(x: &Rational) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    // x = y · 2^e with y in [1, 2)
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = Rational::from_integer(BigInt::from(2));
    let shift = |e: i64| {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut y = x / shift(e);
    while y >= two {
        y /= &two;
        e += 1;
    }
    while y < Rational::one() {
        y *= &two;
        e -= 1;
    }
    let one = Rational::one();
    let ln_y = two_atanh(&((&y - &one) / (&y + &one)));
    let ln2 = two_atanh(&Rational::new(BigInt::one(), BigInt::from(3)));
    &ln_y + &ln2.scale(&Rational::from_integer(BigInt::from(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, to_f64};

    #[test]
    fn eta_is_exact_for_unit_fractions() {
        assert_eq!(eta(&ratio(1, 10)), Interval::point(ratio(1, 10_000_000_000)));
    }

    #[test]
    fn eta_bracket_for_other_fractions() {
        let e = eta(&ratio(2, 5));
        // (2/5)^(5/2) = 0.1011928851...
        assert!(!e.is_point());
        assert!(to_f64(&e.lo) <= 0.10119288512538815 && 0.10119288512538811 <= to_f64(&e.hi));
        assert!(e.width() < ratio(1, 1 << 60));
        assert!(pow(&e.lo, 2) <= pow(&ratio(2, 5), 5) && pow(&ratio(2, 5), 5) <= pow(&e.hi, 2));
    }

    #[test]
    fn logarithms() {
        let l2 = ln_bounds(&int(2));
        assert!(to_f64(&l2.lo) <= core::f64::consts::LN_2 && core::f64::consts::LN_2 <= to_f64(&l2.hi));
        assert!(l2.width() < Rational::new(BigInt::one(), BigInt::one() << 100usize));
        let l = ln_bounds(&ratio(1, 100));
        let want = -4.605170185988091;
        assert!((to_f64(&l.lo) - want).abs() < 1e-12 && l.contains(&l.midpoint()));
        assert!(ln_bounds(&int(1)).contains(&int(0)));
    }
}
