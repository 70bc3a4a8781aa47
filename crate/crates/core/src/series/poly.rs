use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use crate::precision::Precision;

/// Univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` multiplies `x^k`. Trailing zeros are always trimmed, so the
/// zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = RationalPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u64))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from(c * factor))
                .collect(),
        )
    }

    /// Multiplies by `x`.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::new());
        coeffs.extend(self.coeffs.iter().cloned());
        RationalPolynomial { coeffs }
    }

    /// Substitutes `x -> -x`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k % 2 == 1 {
                        Rational::from(-c)
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Horner evaluation with every intermediate rounded to `prec`.
    pub fn eval_float(&self, x: &Float, prec: Precision) -> Float {
        let mut acc = prec.float(0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `sum |c_k| |x|^k`, the natural scale against which a residual at `x`
    /// is judged.
    pub fn eval_abs_float(&self, x: &Float, prec: Precision) -> Float {
        let ax = Float::with_val(prec.bits(), x.abs_ref());
        let mut acc = prec.float(0);
        for c in self.coeffs.iter().rev() {
            acc *= &ax;
            acc += Rational::from(c.abs_ref());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by zero polynomial");
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + ddeg];
            if *top == 0 {
                continue;
            }
            let q = Rational::from(top / dlead);
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= Rational::from(&q * d);
            }
            quot[k] = q;
        }
        rem.truncate(ddeg);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Same roots with multiplicity one.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Human-readable form in the indeterminate `var`, highest power first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let num = c.numer().clone().abs();
            let den = c.denom();
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 || num != 1 {
                out.push_str(&num.to_string());
            }
            out.push_str(&power);
            if *den != 1 {
                out.push('/');
                out.push_str(&den.to_string());
            }
        }
        out
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = RationalPolynomial::new(vec![q(1, 2), Rational::new(), Rational::new()]);
        assert_eq!(p.degree(), Some(0));
        assert!(RationalPolynomial::new(vec![Rational::new()]).is_zero());
        assert_eq!(RationalPolynomial::zero().degree(), None);
    }

    #[test]
    fn derivative_power_rule() {
        let p = RationalPolynomial::new(vec![q(5, 1), q(3, 7), q(2, 3)]);
        assert_eq!(
            p.derivative(),
            RationalPolynomial::new(vec![q(3, 7), q(4, 3)])
        );
        assert!(RationalPolynomial::constant(q(1, 2)).derivative().is_zero());
    }

    #[test]
    fn eval_examples() {
        let p = RationalPolynomial::new(vec![q(3, 4), q(-1, 4)]);
        assert_eq!(p.eval(&Rational::new()), q(3, 4));
        let p1 = RationalPolynomial::new(vec![q(-3, 2), q(1, 4)]);
        assert_eq!(p1.eval(&Rational::from(6)), 0);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = RationalPolynomial::from_ints(&[-6, 11, -6, 1]);
        let b = RationalPolynomial::new(vec![q(-1, 2), q(3, 1)]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn square_free_drops_multiplicity() {
        // (x-1)^2 (x+2)
        let p = &(&RationalPolynomial::from_ints(&[-1, 1])
            * &RationalPolynomial::from_ints(&[-1, 1]))
            * &RationalPolynomial::from_ints(&[2, 1]);
        assert_eq!(p.square_free(), RationalPolynomial::from_ints(&[-2, 1, 1]));
    }

    #[test]
    fn display_matches_hand_form() {
        let p = RationalPolynomial::new(vec![q(-3, 2), q(1, 4)]);
        assert_eq!(p.display_in("σ"), "σ/4 - 3/2");
        assert_eq!(RationalPolynomial::constant(q(1, 2)).display_in("σ"), "1/2");
        let p = RationalPolynomial::new(vec![Rational::new(), q(-1, 1), q(3, 4)]);
        assert_eq!(p.display_in("s"), "3s^2/4 - s");
    }

    #[test]
    fn float_eval_agrees_with_exact() {
        let prec = Precision::digits(40);
        let p = RationalPolynomial::new(vec![q(1, 3), q(-7, 5), q(2, 9), q(11, 13)]);
        let x = q(17, 11);
        let exact = prec.float(&p.eval(&x));
        let approx = p.eval_float(&prec.float(&x), prec);
        let rel = Float::with_val(prec.bits(), &approx - &exact).abs() / exact.abs();
        assert!(rel < 1e-38);
    }
}
