use rug::Rational;
use serde::{Deserialize, Serialize};

use super::check_power;
use crate::error::{Error, Result};

/// Rayleigh-Schrodinger coefficients `e_0 .. e_N` of the energy in powers of
/// the reduced coupling `g / omega^((p+2)/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BwSeries {
    p: u32,
    level: u32,
    #[serde(with = "rational_strings")]
    coeffs: Vec<Rational>,
}

impl BwSeries {
    pub(crate) fn from_parts(p: u32, level: u32, coeffs: Vec<Rational>) -> Result<Self> {
        check_power(p)?;
        if level != 0 {
            return Err(Error::UnsupportedLevel(level));
        }
        if coeffs.is_empty() {
            return Err(Error::Cache("empty coefficient list".into()));
        }
        Ok(BwSeries { p, level, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> &Rational {
        &self.coeffs[l]
    }

    /// The same series cut back to `order` (no-op if already shorter).
    pub fn truncated(&self, order: usize) -> Self {
        BwSeries {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().take(order + 1).cloned().collect(),
        }
    }

    pub(crate) fn require(&self, needed: usize, requested: usize) -> Result<()> {
        if self.order() < needed {
            Err(Error::InsufficientCoefficients {
                requested,
                needed,
                available: self.order(),
            })
        } else {
            Ok(())
        }
    }
}

/// Ground-level coefficients for `H = -1/2 d^2/dx^2 + x^2/2 + g x^p`.
///
/// Writes `psi = exp(-x^2/2) * (1 + g Phi_1 + g^2 Phi_2 + ...)` with
/// polynomial `Phi_k` of degree `k p` and `Phi_k(0) = 0`. Matching powers of
/// `g` gives
///
/// ```text
/// -Phi_k''/2 + x Phi_k' + x^p Phi_{k-1} = sum_{m=1..k} e_m Phi_{k-m}
/// ```
///
/// which is solved for the monomials of `Phi_k` from the top degree down;
/// the constant term then fixes `e_k = [x^p Phi_{k-1}]_0 - [Phi_k]_2`.
pub fn generate_bw_coefficients(p: u32, order: usize) -> Result<BwSeries> {
    check_power(p)?;
    let step = p as usize / 2;
    // phis[k][i] is the coefficient of x^(2i) in Phi_k; only even powers occur.
    let mut phis: Vec<Vec<Rational>> = vec![vec![Rational::from(1)]];
    let mut energies = vec![Rational::from((1, 2))];

    for k in 1..=order {
        let len = k * step + 1;
        let source = &phis[k - 1];
        let mut phi = vec![Rational::new(); len];
        for i in (1..len).rev() {
            let n = 2 * i as u64;
            // (n+2)(n+1)/2 * c_{n+2}
            let mut rhs = match phi.get(i + 1) {
                Some(above) => Rational::from(above * ((n + 2) * (n + 1) / 2)),
                None => Rational::new(),
            };
            if i >= step {
                if let Some(c) = source.get(i - step) {
                    rhs -= c;
                }
            }
            for m in 1..k {
                if let Some(c) = phis[k - m].get(i) {
                    if *c != 0 {
                        rhs += Rational::from(&energies[m] * c);
                    }
                }
            }
            rhs /= n;
            phi[i] = rhs;
        }
        // x^p Phi_{k-1} has no constant term for p > 0.
        let e_k = -phi.get(1).cloned().unwrap_or_default();
        energies.push(e_k);
        phis.push(phi);
    }

    BwSeries::from_parts(p, 0, energies)
}

mod rational_strings {
    use rug::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::series::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}
