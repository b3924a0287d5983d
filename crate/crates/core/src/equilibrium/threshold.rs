use alloc::string::String;

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::rational::{format_decimal, ratio, to_f64, Rational};

/// Exact bracket around the smallest discount factor at which the
/// contagious profile deters an all-`D` deviation at the opening.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub lower: Rational,
    pub upper: Rational,
    /// Conform-minus-deviate payoff at each endpoint.
    pub gain_lower: Rational,
    pub gain_upper: Rational,
    /// Positive root of the quadratic left after clearing denominators.
    pub quadratic_root: f64,
    pub quadratic_in_bracket: bool,
}

impl ThresholdResult {
    pub fn midpoint(&self) -> Rational {
        (&self.lower + &self.upper) / Rational::from_integer(BigInt::from(2))
    }

    /// Midpoint rounded to `places` decimals.
    pub fn render(&self, places: usize) -> String {
        format_decimal(&self.midpoint(), places)
    }
}

/// Contagious on-path value minus the all-`D` deviation value at δ:
/// `R + δR/(2(1-δ)) - (T + δT/2 + δ²P/(2(1-δ)))`.
pub fn contagious_gain(m: &PayoffMatrix, delta: &Rational) -> Rational {
    let two = Rational::from_integer(BigInt::from(2));
    let half_geo = Rational::one() / (&two * (Rational::one() - delta));
    let conform = m.r() + delta * m.r() * &half_geo;
    let deviate = m.t() + delta * m.t() / &two + delta * delta * m.p() * &half_geo;
    conform - deviate
}

/// `2(1-δ)` times the gain: `(T-P)δ² + (T-R)δ + 2(R-T)`.
fn cleared_gain(m: &PayoffMatrix, d: &Rational) -> Rational {
    let a = m.t() - m.p();
    let b = m.t() - m.r();
    let c = (m.r() - m.t()) * Rational::from_integer(BigInt::from(2));
    &a * d * d + &b * d + c
}

/// Bisects the sign change of the gain on `(0, 1)` down to an interval of
/// width at most `10^-9` with dyadic endpoints.
pub fn contagious_threshold(m: &PayoffMatrix) -> Result<ThresholdResult> {
    let mut lo = Rational::zero();
    let mut hi = Rational::one() - ratio(1, 1 << 40);
    let (g_lo, g_hi) = (cleared_gain(m, &lo), cleared_gain(m, &hi));
    if !(g_lo.is_negative() && g_hi.is_positive()) {
        return Err(Error::NoInteriorThreshold {
            near_zero: format_decimal(&contagious_gain(m, &lo), 6),
            near_one: format_decimal(&contagious_gain(m, &hi), 6),
        });
    }
    let tol = ratio(1, 1_000_000_000);
    let two = Rational::from_integer(BigInt::from(2));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        let g = cleared_gain(m, &mid);
        if g.is_zero() {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if g.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b, c) = (
        to_f64(&(m.t() - m.p())),
        to_f64(&(m.t() - m.r())),
        2.0 * to_f64(&(m.r() - m.t())),
    );
    let root = if a == 0.0 {
        -c / b
    } else {
        (-b + Float::sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    };
    let slack = 1e-12;
    let inside = to_f64(&lo) - slack <= root && root <= to_f64(&hi) + slack;
    Ok(ThresholdResult {
        gain_lower: contagious_gain(m, &lo),
        gain_upper: contagious_gain(m, &hi),
        lower: lo,
        upper: hi,
        quadratic_root: root,
        quadratic_in_bracket: inside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn table_threshold() {
        let t = contagious_threshold(&PayoffMatrix::standard()).unwrap();
        assert!(&t.upper - &t.lower <= ratio(1, 1_000_000_000));
        assert_eq!(t.render(6), "0.752903");
        assert!(t.quadratic_in_bracket);
        assert!(!t.gain_lower.is_positive() && !t.gain_upper.is_negative());
    }

    #[test]
    fn gain_at_three_quarters() {
        assert_eq!(contagious_gain(&PayoffMatrix::standard(), &ratio(3, 4)), ratio(-5, 8));
    }

    #[test]
    fn no_sign_change_without_temptation() {
        // T below R: cooperating is never worse.
        let m = PayoffMatrix::unchecked(int(70), int(75), int(45), int(10));
        assert!(matches!(
            contagious_threshold(&m),
            Err(Error::NoInteriorThreshold { .. })
        ));
    }
}
