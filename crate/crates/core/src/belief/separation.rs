use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, pow, Rational};

use super::interval::{ln_bounds, Interval};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub k: u32,
    pub eps: Rational,
    pub tolerance: Rational,
    /// Bracket on `log10(ε^(1/ε) / ε^k)`.
    pub log10_ratio: Interval,
    /// The ratio is provably below the tolerance.
    pub below: bool,
}

fn reciprocal(i: &Interval) -> Interval {
    Interval::new(Rational::one() / &i.hi, Rational::one() / &i.lo)
}

/// Checks `ε^(1/ε) / ε^k < tolerance` through `(1/ε - k) ln ε`.
pub fn separation_check(k: u32, eps: &Rational, tolerance: &Rational) -> Result<SeparationReport> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::InvalidEpsilon(format_rational(eps)));
    }
    if !tolerance.is_positive() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let exponent = eps.recip() - Rational::from_integer(BigInt::from(k));
    let ln_ratio = ln_bounds(eps).scale(&exponent);
    let log10_ratio = &ln_ratio * &reciprocal(&ln_bounds(&Rational::from_integer(BigInt::from(10))));
    let below = if exponent.is_integer() {
        // 1/ε is an integer, so the ratio is the rational ε^(1/ε - k).
        let e = exponent.to_integer();
        let ratio = if e.is_negative() {
            pow(&eps.recip(), u32::try_from(-e).expect("small exponent"))
        } else {
            pow(eps, u32::try_from(e).expect("small exponent"))
        };
        ratio < *tolerance
    } else {
        ln_ratio.hi < ln_bounds(tolerance).lo
    };
    Ok(SeparationReport {
        k,
        eps: eps.clone(),
        tolerance: tolerance.clone(),
        log10_ratio,
        below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, to_f64};

    #[test]
    fn hundredth_and_fifth_power() {
        let r = separation_check(5, &ratio(1, 100), &ratio(1, 1_000_000)).unwrap();
        assert!(r.below);
        assert!(r.log10_ratio.contains(&Rational::from_integer((-190).into())));
        assert!(to_f64(&r.log10_ratio.width()) < 1e-20);
    }

    #[test]
    fn non_unit_fraction() {
        let r = separation_check(2, &ratio(3, 100), &ratio(1, 1000)).unwrap();
        assert!(r.below);
        // (100/3 - 2) · log10(0.03) ≈ -47.7169
        let mid = to_f64(&r.log10_ratio.midpoint());
        assert!((mid + 47.716_867).abs() < 1e-5, "{mid}");
    }

    #[test]
    fn large_epsilon_is_not_separated() {
        // ε = 1/2, k = 3: ratio = (1/2)^(2-3) = 2
        let r = separation_check(3, &ratio(1, 2), &Rational::one()).unwrap();
        assert!(!r.below);
    }
}
