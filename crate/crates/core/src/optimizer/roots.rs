//! Real roots of exact rational polynomials.
//!
//! Roots are counted and isolated with a Sturm sequence on the square-free
//! part, then refined by bisection on exact dyadic rationals, so every
//! reported root is certified to lie in its final interval.

use std::cmp::Ordering;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::series::RationalPolynomial;

/// A certified real root.
#[derive(Debug, Clone)]
pub struct RealRoot {
    /// Midpoint of the final bracket, rounded to the working precision.
    pub value: Float,
    /// Closed bracket `[lo, hi]` known to contain exactly this root.
    pub lo: Rational,
    pub hi: Rational,
    /// Set when the root is rational and was recovered exactly.
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<RationalPolynomial>,
}

impl SturmSequence {
    /// Chain for the square-free part of `poly`; counts distinct real roots.
    pub fn new(poly: &RationalPolynomial) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let base = primitive(&poly.square_free());
        let mut chain = vec![base.clone()];
        let d = primitive(&base.derivative());
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (_, rem) = chain[n - 2].div_rem(&chain[n - 1]);
            if rem.is_zero() {
                break;
            }
            chain.push(primitive(&-&rem));
        }
        Ok(SturmSequence { chain })
    }

    /// The square-free polynomial heading the chain.
    pub fn base(&self) -> &RationalPolynomial {
        &self.chain[0]
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.eval(x).cmp0()))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let lead = p.leading().expect("nonzero").cmp0();
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if positive || !odd {
                lead
            } else {
                lead.reverse()
            }
        }))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Distinct real roots on the whole line.
    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

/// Scales to integer coefficients with unit content, keeping the sign of
/// the leading coefficient. Sturm counts only depend on signs.
fn primitive(poly: &RationalPolynomial) -> RationalPolynomial {
    if poly.is_zero() {
        return RationalPolynomial::zero();
    }
    let mut lcm = Integer::from(1);
    for c in poly.coeffs() {
        lcm.lcm_mut(c.denom());
    }
    let ints: Vec<Integer> = poly
        .coeffs()
        .iter()
        .map(|c| c.numer() * Integer::from(&lcm / c.denom()))
        .collect();
    let mut gcd = Integer::new();
    for i in &ints {
        gcd.gcd_mut(i);
    }
    RationalPolynomial::new(ints.into_iter().map(|i| Rational::from(i / &gcd)).collect())
}

/// Cauchy bound: every root satisfies `|x| < 1 + max |c_k / c_n|`.
pub fn cauchy_bound(poly: &RationalPolynomial) -> Rational {
    let lead = Rational::from(poly.leading().expect("nonzero").abs_ref());
    let mut max = Rational::new();
    for c in &poly.coeffs()[..poly.coeffs().len() - 1] {
        let r = Rational::from(c.abs_ref()) / &lead;
        if r > max {
            max = r;
        }
    }
    // Round up to an integer to keep the initial bracket cheap to evaluate.
    let ceil = (Integer::from(max.numer() + max.denom()) - 1u32) / max.denom();
    Rational::from(ceil + 1u32)
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    Rational::from(a + b) / 2u32
}

/// Isolating intervals `(lo, hi)` with exactly one root each and nonzero
/// values at both ends, plus roots hit exactly during bisection.
fn isolate(sturm: &SturmSequence) -> (Vec<(Rational, Rational)>, Vec<Rational>) {
    let base = sturm.base();
    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    if base.degree().unwrap_or(0) == 0 {
        return (brackets, exact);
    }
    let bound = cauchy_bound(base);
    let mut stack = vec![(Rational::from(-&bound), bound)];
    while let Some((a, b)) = stack.pop() {
        match sturm.count_in(&a, &b) {
            0 => {}
            1 => brackets.push((a, b)),
            _ => {
                let m = midpoint(&a, &b);
                if base.eval(&m) == 0 {
                    // Step off the exact root until the neighbourhood holds
                    // nothing else.
                    let mut delta = Rational::from(&b - &a) / 4u32;
                    loop {
                        let lo = Rational::from(&m - &delta);
                        let hi = Rational::from(&m + &delta);
                        if base.eval(&lo) != 0
                            && base.eval(&hi) != 0
                            && sturm.count_in(&lo, &hi) == 1
                        {
                            stack.push((a, lo));
                            stack.push((hi, b));
                            break;
                        }
                        delta /= 2u32;
                    }
                    exact.push(m);
                } else {
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
    }
    (brackets, exact)
}

/// Bisects a sign-changing bracket until its width is below
/// `2^-bits * max(|lo|, |hi|, 2^-bits)`.
fn refine(
    base: &RationalPolynomial,
    mut lo: Rational,
    mut hi: Rational,
    bits: u32,
) -> (Rational, Rational) {
    let lo_sign = base.eval(&lo).cmp0();
    let tiny = Rational::from((1, Integer::from(Integer::u_pow_u(2, bits))));
    loop {
        let width = Rational::from(&hi - &lo);
        let scale = Rational::from(lo.abs_ref()).max(Rational::from(hi.abs_ref()));
        let target = Rational::from(&scale * &tiny).max(Rational::from(tiny.square_ref()));
        if width <= target {
            return (lo, hi);
        }
        let m = midpoint(&lo, &hi);
        let s = base.eval(&m).cmp0();
        if s == Ordering::Equal {
            return (m.clone(), m);
        }
        if s == lo_sign {
            lo = m;
        } else {
            hi = m;
        }
    }
}

/// Tries the continued-fraction convergents of `approx` (with moderate
/// denominators) as exact roots of `poly`.
pub fn recover_rational_root(
    poly: &RationalPolynomial,
    lo: &Rational,
    hi: &Rational,
    approx: &Float,
) -> Option<Rational> {
    let target = approx.to_rational()?;
    let max_den = Integer::from(1u64 << 40);
    let mut x = target;
    // Convergents h/k: h_n = a_n h_{n-1} + h_{n-2}, same for k.
    let (mut h2, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k2, mut k1) = (Integer::from(1), Integer::from(0));
    for _ in 0..64 {
        let a = Rational::from(x.floor_ref()).into_numer_denom().0;
        let h = Integer::from(&a * &h1) + &h2;
        let k = Integer::from(&a * &k1) + &k2;
        if k > max_den {
            break;
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        let candidate = Rational::from((h1.clone(), k1.clone()));
        if candidate >= *lo && candidate <= *hi && poly.eval(&candidate) == 0 {
            return Some(candidate);
        }
        let frac = Rational::from(&x - &a);
        if frac == 0 {
            break;
        }
        x = frac.recip();
    }
    None
}

/// All distinct real roots, ascending, each refined to `prec`.
///
/// The number of roots returned always equals the Sturm count of the
/// square-free part.
pub fn real_roots(poly: &RationalPolynomial, prec: Precision) -> Result<Vec<RealRoot>> {
    let sturm = SturmSequence::new(poly)?;
    let base = sturm.base().clone();
    let (brackets, exact_hits) = isolate(&sturm);
    let bits = prec.bits();
    let mut roots: Vec<RealRoot> = exact_hits
        .into_iter()
        .map(|r| RealRoot {
            value: Float::with_val(bits, &r),
            lo: r.clone(),
            hi: r.clone(),
            exact: Some(r),
        })
        .collect();
    for (a, b) in brackets {
        let (lo, hi) = refine(&base, a, b, bits);
        let value = Float::with_val(bits, midpoint(&lo, &hi));
        let exact = if lo == hi {
            Some(lo.clone())
        } else {
            recover_rational_root(&base, &lo, &hi, &value)
        };
        roots.push(RealRoot {
            value,
            lo,
            hi,
            exact,
        });
    }
    roots.sort_by(|x, y| x.lo.cmp(&y.lo));
    debug_assert_eq!(roots.len(), sturm.count_real());
    Ok(roots)
}
