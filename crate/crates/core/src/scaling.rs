//! The universal extremality polynomial `P_N(sigma)` and exact checks of the
//! identities that make `dW_N/dOmega` collapse onto it.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::reexpansion::{reexpand, sigma_of, trial_coupling, OscillatorSpec, ReexpandedSeries};
use crate::series::{binom_general, check_power, reexpansion_alpha, BwSeries, RationalPolynomial};

/// `P_N(sigma)`, with `dW_N/dOmega = (g / Omega^((p+2)/2))^N P_N(sigma)`.
///
/// Depends only on `p` and `N`: neither `omega` nor `g` enters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingPolynomial {
    p: u32,
    order: usize,
    poly: RationalPolynomial,
}

impl ScalingPolynomial {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn poly(&self) -> &RationalPolynomial {
        &self.poly
    }
}

/// Explicit sum
/// `2 sum_{j<=N} e_j^BW binom(alpha_j, N+1-j) (N+1-j) (-sigma)^(N-j)`.
pub fn build_scaling_polynomial(bw: &BwSeries, order: usize) -> Result<ScalingPolynomial> {
    bw.require(order, order)?;
    let p = bw.p();
    let mut coeffs = vec![Rational::new(); order + 1];
    for j in 0..=order {
        let k = order + 1 - j;
        let mut c = binom_general(&reexpansion_alpha(p, j), k) * bw.coeff(j);
        c *= 2 * k as u64;
        if (order - j) % 2 == 1 {
            c = -c;
        }
        coeffs[order - j] = c;
    }
    Ok(ScalingPolynomial {
        p,
        order,
        poly: RationalPolynomial::new(coeffs),
    })
}

/// `-2 d e_{N+1} / d sigma`, built from the reexpanded series. Needs one
/// more Bender-Wu coefficient than [`build_scaling_polynomial`], although
/// that coefficient drops out of the result.
pub fn scaling_polynomial_via_derivative(bw: &BwSeries, order: usize) -> Result<ScalingPolynomial> {
    bw.require(order + 1, order)?;
    let series = reexpand(bw, order + 1)?;
    let poly = series.e(order + 1).derivative().scale(&Rational::from(-2));
    Ok(ScalingPolynomial {
        p: bw.p(),
        order,
        poly,
    })
}

/// `d sigma / d Omega = [((p+2)/2) Omega^(p/2) - ((p-2)/2) omega^2 Omega^((p-4)/2)] / g`.
pub fn dsigma_domega(spec: &OscillatorSpec, omega_trial: &Float, prec: Precision) -> Float {
    let om = prec.float(omega_trial);
    let a = spec.coupling_power();
    let b = spec.sigma_power();
    let mut first = Float::with_val(prec.bits(), (&om).pow(spec.p / 2));
    first *= a;
    let mut second = Float::with_val(prec.bits(), (&om).pow(b as i32 - 1));
    second *= spec.omega_squared();
    second *= b;
    let mut out = first - second;
    out /= &spec.g;
    out
}

fn check_trial(omega_trial: &Float) -> Result<()> {
    if omega_trial.is_nan() || *omega_trial <= 0 {
        Err(Error::NonPositiveFrequency)
    } else {
        Ok(())
    }
}

/// `(g / Omega^((p+2)/2))^N P_N(sigma(Omega))`.
pub fn dw_domega_closed_form(
    series: &ReexpandedSeries,
    scaling: &ScalingPolynomial,
    spec: &OscillatorSpec,
    omega_trial: &Float,
    prec: Precision,
) -> Result<Float> {
    check_trial(omega_trial)?;
    if scaling.order != series.order() {
        return Err(Error::OrderMismatch {
            scaling: scaling.order,
            series: series.order(),
        });
    }
    let sigma = sigma_of(spec, omega_trial, prec)?;
    let ghat = trial_coupling(spec, omega_trial, prec);
    let prefactor = Float::with_val(prec.bits(), ghat.pow(scaling.order as u32));
    Ok(prefactor * scaling.poly.eval_float(&sigma, prec))
}

/// Full second derivative of `W_N` in `Omega`, valid at any trial frequency.
pub fn d2w_domega2(
    scaling: &ScalingPolynomial,
    spec: &OscillatorSpec,
    omega_trial: &Float,
    prec: Precision,
) -> Result<Float> {
    check_trial(omega_trial)?;
    let om = prec.float(omega_trial);
    let sigma = sigma_of(spec, &om, prec)?;
    let ghat = trial_coupling(spec, &om, prec);
    let n = scaling.order as u32;
    let prefactor = Float::with_val(prec.bits(), (&ghat).pow(n));
    let value = scaling.poly.eval_float(&sigma, prec);
    let slope = scaling.poly.derivative().eval_float(&sigma, prec);
    // d/dOmega ghat^N = -N (p+2)/2 ghat^N / Omega
    let mut from_prefactor = value;
    from_prefactor *= n * spec.coupling_power();
    from_prefactor /= &om;
    let along_sigma = slope * dsigma_domega(spec, &om, prec);
    Ok(prefactor * (along_sigma - from_prefactor))
}

/// `|P(x)| / sum |c_k| |x|^k`, zero for an exact root.
pub fn relative_residual(poly: &RationalPolynomial, x: &Float, prec: Precision) -> Float {
    let value = poly.eval_float(x, prec).abs();
    let scale = poly.eval_abs_float(x, prec);
    if scale.is_zero() {
        value
    } else {
        value / scale
    }
}

/// Second derivative at a stationary point, where the term proportional to
/// `P_N` vanishes: `(g / Omega^((p+2)/2))^N P_N'(sigma) d sigma / d Omega`.
pub fn d2w_domega2_at_extremum(
    scaling: &ScalingPolynomial,
    spec: &OscillatorSpec,
    sigma_root: &Float,
    omega_trial: &Float,
    prec: Precision,
) -> Result<Float> {
    check_trial(omega_trial)?;
    let residual = relative_residual(&scaling.poly, sigma_root, prec);
    let tolerance = prec.epsilon(prec.decimal_digits() as i32 / 2);
    if residual > tolerance {
        return Err(Error::NotAnExtremum {
            sigma: prec.render(sigma_root),
            residual: residual.to_string_radix(10, Some(6)),
        });
    }
    let ghat = trial_coupling(spec, omega_trial, prec);
    let prefactor = Float::with_val(prec.bits(), ghat.pow(scaling.order as u32));
    let slope = scaling.poly.derivative().eval_float(sigma_root, prec);
    Ok(prefactor * slope * dsigma_domega(spec, omega_trial, prec))
}

/// Outcome of a polynomial identity check; the identity holds iff the
/// residual is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub p: u32,
    pub l: usize,
    pub residual: RationalPolynomial,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    /// Lowest power with a nonzero residual coefficient.
    pub fn first_offending_monomial(&self) -> Option<(usize, Rational)> {
        self.residual
            .coeffs()
            .iter()
            .enumerate()
            .find(|(_, c)| **c != 0)
            .map(|(k, c)| (k, c.clone()))
    }
}

fn check_l(series: &ReexpandedSeries, l: usize) -> Result<()> {
    if series.order() == 0 || l + 1 > series.order() {
        return Err(Error::IndexOutOfRange {
            index: l,
            lo: 0,
            hi: series.order().saturating_sub(1),
        });
    }
    Ok(())
}

fn half_p_minus_2(p: u32) -> Rational {
    Rational::from((p as i64 - 2, 2))
}

/// `(1 - (p+2) l / 2) e_l + ((p-2)/2) sigma e_l' + 2 e_{l+1}'`, which must
/// vanish identically.
pub fn verify_term_identity(series: &ReexpandedSeries, l: usize) -> Result<IdentityCheck> {
    check_l(series, l)?;
    let p = series.p();
    let e_l = series.e(l);
    let factor = Rational::from(1) - Rational::from(((p as i64 + 2) * l as i64, 2));
    let term_a = e_l.scale(&factor);
    let term_b = e_l.derivative().shift().scale(&half_p_minus_2(p));
    let term_c = series.e(l + 1).derivative().scale(&Rational::from(2));
    let residual = &(&term_a + &term_b) + &term_c;
    Ok(IdentityCheck { p, l, residual })
}

/// `((p-2)/2) sigma e_l' + 2 e_{l+1}' = ((p+2) l / 2 - 1) e_l`, checked as
/// left minus right.
pub fn verify_combined_identity(series: &ReexpandedSeries, l: usize) -> Result<IdentityCheck> {
    check_l(series, l)?;
    let p = series.p();
    let lhs = &series.e(l).derivative().shift().scale(&half_p_minus_2(p))
        + &series.e(l + 1).derivative().scale(&Rational::from(2));
    let factor = Rational::from(((p as i64 + 2) * l as i64, 2)) - 1u32;
    let rhs = series.e(l).scale(&factor);
    Ok(IdentityCheck {
        p,
        l,
        residual: &lhs - &rhs,
    })
}

/// Both sides of
/// `2 binom(alpha_j, l+1-j) = ((p-2) j / 2 + 2 l - 1) / (j - l - 1) binom(alpha_j, l-j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialCheck {
    pub p: u32,
    pub j: usize,
    pub l: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl BinomialCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn verify_binomial_identity(p: u32, j: usize, l: usize) -> Result<BinomialCheck> {
    check_power(p)?;
    if j > l {
        return Err(Error::IndexOutOfRange {
            index: j,
            lo: 0,
            hi: l,
        });
    }
    let alpha = reexpansion_alpha(p, j);
    let lhs = binom_general(&alpha, l + 1 - j) * 2u32;
    let numer = Rational::from(((p as i64 - 2) * j as i64, 2)) + (2 * l as i64 - 1);
    let denom = Rational::from(j as i64 - l as i64 - 1);
    let rhs = numer / denom * binom_general(&alpha, l - j);
    Ok(BinomialCheck { p, j, l, lhs, rhs })
}
