//! Exact rational series arithmetic and the Bender-Wu coefficients of the
//! ground level.

mod bw;
pub mod cache;
mod poly;

pub use bw::{generate_bw_coefficients, BwSeries};
pub use poly::RationalPolynomial;
pub use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Generalized binomial coefficient `alpha (alpha-1) ... (alpha-k+1) / k!`.
pub fn binom_general(alpha: &Rational, k: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..k {
        acc *= Rational::from(alpha - i as u64);
        acc /= (i + 1) as u64;
    }
    acc
}

/// The upper argument `(1 - (p+2) j / 2) / 2` shared by every reexpansion
/// binomial. `p` is even, so this is a half-integer or integer.
pub(crate) fn reexpansion_alpha(p: u32, j: usize) -> Rational {
    let half_p2 = (p as i64 + 2) / 2;
    Rational::from((1 - half_p2 * j as i64, 2))
}

/// Even `p >= 4`.
pub fn check_power(p: u32) -> Result<()> {
    if p < 4 || p % 2 == 1 {
        Err(Error::InvalidPower(p))
    } else {
        Ok(())
    }
}

/// `"num/den"` in base 10, or just `"num"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3/4"`, `"-7"`, `"0.125"` or `"1e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if s.contains('/') {
        let r: Rational = s.parse().map_err(|_| err())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: Integer = if all_digits.is_empty() {
        Integer::new()
    } else {
        all_digits.parse().map_err(|_| err())?
    };
    let scale = exponent - frac_part.len() as i32;
    let mut value = Rational::from(numer);
    if scale >= 0 {
        value *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        value /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_general(&q(1, 2), 1), q(1, 2));
        assert_eq!(binom_general(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binom_general(&q(-1, 1), 1), q(-1, 1));
        assert_eq!(binom_general(&q(7, 3), 0), q(1, 1));
    }

    #[test]
    fn binomial_integer_upper_matches_pascal() {
        for n in 0..12i64 {
            for k in 0..=n as usize {
                let mut pascal = Integer::from(1);
                for i in 0..k {
                    pascal = pascal * (n - i as i64) / (i as i64 + 1);
                }
                assert_eq!(binom_general(&Rational::from(n), k), Rational::from(pascal));
            }
            assert_eq!(binom_general(&Rational::from(n), n as usize + 1), 0);
        }
    }

    #[test]
    fn power_validation() {
        assert!(check_power(4).is_ok());
        assert!(check_power(10).is_ok());
        assert!(matches!(check_power(5), Err(Error::InvalidPower(5))));
        assert!(matches!(check_power(2), Err(Error::InvalidPower(2))));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("2").unwrap(), q(2, 1));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("-2.5E2").unwrap(), q(-250, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        for bad in ["", "abc", "1/0x", "1.2.3", "e5", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_forms() {
        assert_eq!(format_rational(&q(-21, 8)), "-21/8");
        assert_eq!(format_rational(&q(6, 1)), "6");
    }

    fn big_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), any::<i64>(), 1..u64::MAX).prop_map(|(a, b, d)| {
            let numer = Integer::from(a) * Integer::from(u64::MAX) + b;
            Rational::from((numer, Integer::from(d)))
        })
    }

    proptest! {
        #[test]
        fn rational_round_trips(a in big_rational(), b in big_rational()) {
            let sum = Rational::from(&a + &b);
            prop_assert_eq!(Rational::from(&sum - &b), a.clone());
            if b != 0 {
                let prod = Rational::from(&a * &b);
                prop_assert_eq!(Rational::from(&prod / &b), a.clone());
            }
            prop_assert!(*a.denom() > 0);
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }
    }
}
