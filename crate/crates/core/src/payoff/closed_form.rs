use alloc::string::ToString;

use num_traits::One;

use crate::error::{Error, Result};
use crate::game::{GameParams, PayoffMatrix};
use crate::rational::{format_rational, int, Rational};

/// Identifiers accepted by [`closed_form`].
pub const FORMULA_IDS: [&str; 13] = [
    "on-path-x",
    "all-d-deviation",
    "case2-C",
    "case2-D",
    "case3-C",
    "case3-D",
    "case4-C",
    "case4-D",
    "case5-D",
    "case5-one-shot-C",
    "case5-persistent-C",
    "case6-C",
    "case6-D",
];

/// Evaluates a named continuation-value expression. The expressions bake in
/// symmetric matching, so any other matching probability is rejected.
pub fn closed_form(id: &str, m: &PayoffMatrix, params: &GameParams) -> Result<Rational> {
    if !FORMULA_IDS.contains(&id) {
        return Err(Error::UnknownFormula(id.to_string()));
    }
    if !params.is_symmetric() {
        return Err(Error::AsymmetricMatching(format_rational(params.match_prob())));
    }
    let (t, r, p, s) = (m.t(), m.r(), m.p(), m.s());
    let d = params.delta();
    let d2 = d * d;
    let d3 = &d2 * d;
    let one = Rational::one();
    let two = int(2);
    let four = int(4);
    // Σ_{k≥0} δ^k = 1/(1-δ)
    let geo = &one / (&one - d);

    let on_path = r + d * r * &geo / &two;
    let all_d = t + d * t / &two + &d2 * p * &geo / &two;
    let case2_d = t + d * p * &geo / &two;

    let v = match id {
        "on-path-x" | "case2-C" => on_path,
        "all-d-deviation" | "case6-D" => all_d,
        "case2-D" | "case5-D" => case2_d,
        "case3-C" => s + d * r * &geo,
        "case3-D" => p + d / &two * (p + r) * &geo,
        "case4-C" => r + d * r / &two + d * s / &two + &d2 * r * &geo,
        "case4-D" => t + d * (s / &two + p / &two) + &d2 * p * &geo / &two + &d2 * r * &geo / &two,
        "case5-one-shot-C" => r + d * t / &two + &d2 * p * &geo / &two,
        "case5-persistent-C" => {
            // Σ_{s≥2} δ^s (1/2)^{s-1} (R-P) = δ²(R-P)/(2-δ)
            let mixed = &d2 * (r - p) / (&two - d) + &d2 * p * &geo;
            r + d * r / &two + mixed / &two
        }
        "case6-C" => r + d * r / &two + &d2 * (r + t) / &four + &d3 * r * &geo / &two,
        _ => unreachable!("checked against FORMULA_IDS"),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn eval(id: &str) -> Rational {
        closed_form(id, &PayoffMatrix::standard(), &GameParams::standard()).unwrap()
    }

    #[test]
    fn quoted_values() {
        assert_eq!(eval("on-path-x"), ratio(375, 2));
        assert_eq!(eval("all-d-deviation"), ratio(1505, 8));
        assert_eq!(eval("case2-D"), ratio(335, 2));
        assert_eq!(eval("case3-C"), int(235));
        assert_eq!(eval("case3-D"), int(225));
        assert_eq!(eval("case4-C"), ratio(2205, 8));
        assert_eq!(eval("case4-D"), ratio(2045, 8));
        assert_eq!(eval("case5-one-shot-C"), ratio(1305, 8));
        assert_eq!(eval("case5-persistent-C"), ratio(321, 2));
        assert_eq!(eval("case6-C"), ratio(12225, 64));
    }

    #[test]
    fn unknown_and_asymmetric() {
        let m = PayoffMatrix::standard();
        assert!(matches!(
            closed_form("case7", &m, &GameParams::standard()),
            Err(Error::UnknownFormula(_))
        ));
        let p = GameParams::new(ratio(3, 4), ratio(1, 3)).unwrap();
        assert!(matches!(
            closed_form("case3-C", &m, &p),
            Err(Error::AsymmetricMatching(_))
        ));
    }
}
