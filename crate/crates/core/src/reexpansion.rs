//! Reexpansion of the energy series around a trial frequency and the
//! truncated variational energy `W_N(g, Omega)`.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::series::{binom_general, check_power, reexpansion_alpha, BwSeries, RationalPolynomial};

/// `V(x) = omega^2 x^2 / 2 + g x^p` for the ground level.
///
/// Frequencies and couplings are exact rationals so that every quantity has
/// an exact path; floating evaluation converts them at the requested
/// precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OscillatorSpec {
    pub p: u32,
    #[serde(serialize_with = "ser_rational")]
    pub omega: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub g: Rational,
    pub level: u32,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::series::format_rational(r))
}

impl OscillatorSpec {
    pub fn new(p: u32, omega: Rational, g: Rational) -> Result<Self> {
        check_power(p)?;
        if g <= 0 {
            return Err(Error::InvalidSpec("coupling g must be positive".into()));
        }
        if omega < 0 {
            return Err(Error::InvalidSpec(
                "frequency omega must be non-negative".into(),
            ));
        }
        Ok(OscillatorSpec {
            p,
            omega,
            g,
            level: 0,
        })
    }

    /// Exact conversion of binary floats; rejects non-finite inputs.
    pub fn from_f64(p: u32, omega: f64, g: f64) -> Result<Self> {
        let conv = |v: f64, name: &str| {
            Rational::from_f64(v)
                .ok_or_else(|| Error::InvalidSpec(format!("{name} = {v} is not finite")))
        };
        Self::new(p, conv(omega, "omega")?, conv(g, "g")?)
    }

    /// `(p + 2) / 2`, the power of Omega in the reduced coupling.
    pub fn coupling_power(&self) -> u32 {
        (self.p + 2) / 2
    }

    /// `(p - 2) / 2`, the power of Omega in the scaling variable.
    pub fn sigma_power(&self) -> u32 {
        (self.p - 2) / 2
    }

    pub fn omega_squared(&self) -> Rational {
        Rational::from(self.omega.square_ref())
    }

    /// `g / omega^((p+2)/2)`; undefined in the pure-power limit `omega = 0`.
    pub fn reduced_coupling(&self) -> Option<Rational> {
        if self.omega == 0 {
            return None;
        }
        let denom = Rational::from((&self.omega).pow(self.coupling_power() as i32));
        Some(Rational::from(&self.g / &denom))
    }

    /// The same physics in units rescaled by `lambda`:
    /// `(omega, g) -> (lambda omega, lambda^((p+2)/2) g)`.
    pub fn rescaled(&self, lambda: &Rational) -> Result<Self> {
        let factor = Rational::from(lambda.pow(self.coupling_power() as i32));
        Self::new(
            self.p,
            Rational::from(&self.omega * lambda),
            Rational::from(&self.g * &factor),
        )
    }
}

/// Per-order polynomials `e_l(sigma)` with `e_l(0) = e_l^BW`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReexpandedSeries {
    p: u32,
    e_polys: Vec<RationalPolynomial>,
}

impl ReexpandedSeries {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.e_polys.len() - 1
    }

    pub fn e_polys(&self) -> &[RationalPolynomial] {
        &self.e_polys
    }

    pub fn e(&self, l: usize) -> &RationalPolynomial {
        &self.e_polys[l]
    }

    pub fn truncated(&self, order: usize) -> Self {
        ReexpandedSeries {
            p: self.p,
            e_polys: self.e_polys.iter().take(order + 1).cloned().collect(),
        }
    }

    /// Replaces one polynomial. Used to build deliberately corrupted series
    /// for sensitivity checks.
    pub fn with_polynomial(&self, l: usize, poly: RationalPolynomial) -> Self {
        let mut out = self.clone();
        out.e_polys[l] = poly;
        out
    }
}

/// `e_l(sigma) = sum_j e_j^BW binom((1 - (p+2) j / 2) / 2, l - j) (-sigma)^(l-j)`.
///
/// This is the ordinary series with `omega` replaced by
/// `sqrt(Omega^2 + 2 g r)` and re-expanded in `g` at fixed `r`, written in
/// the scaling variable `sigma = -2 r Omega^((p-2)/2)`.
pub fn reexpand(bw: &BwSeries, order: usize) -> Result<ReexpandedSeries> {
    bw.require(order, order)?;
    let p = bw.p();
    let alphas: Vec<Rational> = (0..=order).map(|j| reexpansion_alpha(p, j)).collect();
    let e_polys = (0..=order)
        .map(|l| {
            let mut coeffs = vec![Rational::new(); l + 1];
            for (j, alpha) in alphas.iter().enumerate().take(l + 1) {
                let k = l - j;
                let mut c = binom_general(alpha, k) * bw.coeff(j);
                if k % 2 == 1 {
                    c = -c;
                }
                coeffs[k] = c;
            }
            RationalPolynomial::new(coeffs)
        })
        .collect();
    Ok(ReexpandedSeries { p, e_polys })
}

/// `r = (omega^2 - Omega^2) / (2 g)`, the coefficient of `g x^2` in the
/// split-off interaction.
pub fn interaction_r(spec: &OscillatorSpec, omega_trial: &Rational) -> Rational {
    let diff = spec.omega_squared() - Rational::from(omega_trial.square_ref());
    diff / Rational::from(&spec.g * 2u32)
}

fn check_positive_float(x: &Float) -> Result<()> {
    if x.is_nan() || *x <= 0 {
        Err(Error::NonPositiveFrequency)
    } else {
        Ok(())
    }
}

/// `sigma = Omega^((p-2)/2) (Omega^2 - omega^2) / g`.
pub fn sigma_of(spec: &OscillatorSpec, omega_trial: &Float, prec: Precision) -> Result<Float> {
    check_positive_float(omega_trial)?;
    let om = prec.float(omega_trial);
    let mut s = prec.float(om.square_ref());
    s -= spec.omega_squared();
    s *= Float::with_val(prec.bits(), (&om).pow(spec.sigma_power()));
    s /= &spec.g;
    Ok(s)
}

pub fn sigma_of_exact(spec: &OscillatorSpec, omega_trial: &Rational) -> Result<Rational> {
    if *omega_trial <= 0 {
        return Err(Error::NonPositiveFrequency);
    }
    let mut s = Rational::from(omega_trial.square_ref()) - spec.omega_squared();
    s *= Rational::from(omega_trial.pow(spec.sigma_power() as i32));
    s /= &spec.g;
    Ok(s)
}

/// `g / Omega^((p+2)/2)`, the reduced coupling measured in the trial frequency.
pub fn trial_coupling(spec: &OscillatorSpec, omega_trial: &Float, prec: Precision) -> Float {
    let pow = Float::with_val(prec.bits(), omega_trial.pow(spec.coupling_power()));
    prec.float(&spec.g) / pow
}

/// `W_N = Omega * sum_{l<=N} e_l(sigma) (g / Omega^((p+2)/2))^l`.
pub fn evaluate_wn(
    series: &ReexpandedSeries,
    spec: &OscillatorSpec,
    omega_trial: &Float,
    prec: Precision,
) -> Result<Float> {
    check_positive_float(omega_trial)?;
    let om = prec.float(omega_trial);
    let sigma = sigma_of(spec, &om, prec)?;
    let ghat = trial_coupling(spec, &om, prec);
    let mut acc = prec.float(0);
    for poly in series.e_polys().iter().rev() {
        acc *= &ghat;
        acc += poly.eval_float(&sigma, prec);
    }
    Ok(acc * om)
}

/// Exact `W_N` for a rational trial frequency.
pub fn evaluate_wn_exact(
    series: &ReexpandedSeries,
    spec: &OscillatorSpec,
    omega_trial: &Rational,
) -> Result<Rational> {
    let sigma = sigma_of_exact(spec, omega_trial)?;
    let ghat = &spec.g / Rational::from(omega_trial.pow(spec.coupling_power() as i32));
    let mut acc = Rational::new();
    for poly in series.e_polys().iter().rev() {
        acc *= &ghat;
        acc += poly.eval(&sigma);
    }
    Ok(acc * omega_trial)
}

/// `sum_{l<=N} e_l^BW ghat^l`, the plain truncated weak-coupling series in
/// units of `omega` multiplied back by `omega`.
pub fn truncated_series_energy(
    bw: &BwSeries,
    spec: &OscillatorSpec,
    order: usize,
) -> Result<Rational> {
    bw.require(order, order)?;
    let ghat = spec
        .reduced_coupling()
        .ok_or_else(|| Error::InvalidSpec("reduced coupling needs omega > 0".into()))?;
    let mut acc = Rational::new();
    for c in bw.coeffs()[..=order].iter().rev() {
        acc *= &ghat;
        acc += c;
    }
    Ok(acc * &spec.omega)
}
