use nalgebra::{DMatrix, SymmetricEigen};
use rug::Float;

use super::{check_level, first_order_estimate, OracleSettings};
use crate::error::{Error, Result};
use crate::reexpansion::OscillatorSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagEnergy {
    pub energy: f64,
    pub converged: bool,
    /// Basis size of the reported energy.
    pub basis_dim: usize,
    /// Change between the last two basis sizes.
    pub last_change: f64,
    pub basis_frequency: f64,
}

/// Symmetric band matrix: `rows[i][k]` holds `A[i][i + k]` for `k <= width`.
struct Band {
    width: usize,
    rows: Vec<Vec<Float>>,
}

impl Band {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn get(&self, i: usize, j: usize) -> Option<&Float> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.rows[i].get(j - i)
    }

    fn mul_vec(&self, v: &[Float], bits: u32) -> Vec<Float> {
        let n = self.dim();
        let mut out: Vec<Float> = (0..n).map(|_| Float::new(bits)).collect();
        for i in 0..n {
            for (k, a) in self.rows[i].iter().enumerate() {
                let j = i + k;
                if j >= n {
                    break;
                }
                out[i] += Float::with_val(bits, a * &v[j]);
                if k > 0 {
                    out[j] += Float::with_val(bits, a * &v[i]);
                }
            }
        }
        out
    }
}

/// `L D L^T` of `A - shift` without pivoting; `None` when a pivot is not
/// positive, i.e. `shift` is not below the lowest eigenvalue.
struct Factor {
    lower: Vec<Vec<Float>>,
    pivots: Vec<Float>,
}

impl Factor {
    fn new(a: &Band, shift: &Float, bits: u32) -> Option<Self> {
        let n = a.dim();
        let w = a.width;
        // lower[i][t] = L[i][i - w + t]
        let mut lower: Vec<Vec<Float>> = Vec::with_capacity(n);
        let mut pivots: Vec<Float> = Vec::with_capacity(n);
        for i in 0..n {
            let lo = i.saturating_sub(w);
            let mut row: Vec<Float> = (0..w).map(|_| Float::new(bits)).collect();
            for j in lo..i {
                let mut acc = Float::with_val(bits, a.get(i, j).unwrap_or(&Float::new(bits)));
                for k in lo.max(j.saturating_sub(w))..j {
                    let lik = &row[k + w - i];
                    let ljk = &lower[j][k + w - j];
                    acc -= Float::with_val(bits, lik * ljk) * &pivots[k];
                }
                acc /= &pivots[j];
                row[j + w - i] = acc;
            }
            let mut d = Float::with_val(bits, a.get(i, i).unwrap() - shift);
            for k in lo..i {
                let lik = &row[k + w - i];
                d -= Float::with_val(bits, lik * lik) * &pivots[k];
            }
            if d <= 0 {
                return None;
            }
            lower.push(row);
            pivots.push(d);
        }
        Some(Factor { lower, pivots })
    }

    fn solve(&self, rhs: &[Float], bits: u32) -> Vec<Float> {
        let n = rhs.len();
        let w = self.lower.first().map_or(0, Vec::len);
        let mut z: Vec<Float> = rhs.to_vec();
        for i in 0..n {
            for k in i.saturating_sub(w)..i {
                let t = Float::with_val(bits, &self.lower[i][k + w - i] * &z[k]);
                z[i] -= t;
            }
        }
        for (zi, d) in z.iter_mut().zip(&self.pivots) {
            *zi /= d;
        }
        for i in (0..n).rev() {
            for j in i + 1..(i + w + 1).min(n) {
                let t = Float::with_val(bits, &self.lower[j][i + w - j] * &z[j]);
                z[i] -= t;
            }
        }
        z
    }
}

/// Even-parity block of the Hamiltonian in an oscillator basis of frequency
/// `Omega_b`, as a band of half-width `p/2`.
///
/// With `x = (a + a^+) / sqrt(2 Omega_b)` the Hamiltonian reads
/// `Omega_b (n + 1/2) + (omega^2 - Omega_b^2) x^2 / 2 + g x^p`. Powers of
/// `x` are formed on `dim + 2p` states and cut back to `dim`, so every
/// retained matrix element is exact.
fn hamiltonian_band(
    p: u32,
    omega2: &Float,
    g: &Float,
    basis_frequency: &Float,
    dim: usize,
    bits: u32,
) -> Band {
    let p = p as usize;
    let full = dim + 2 * p;
    let x_off: Vec<Float> = (0..full)
        .map(|n| {
            let v = Float::with_val(bits, (n + 1) as u32)
                / Float::with_val(bits, basis_frequency * 2u32);
            v.sqrt()
        })
        .collect();
    // power[i][k] = (x^m)[i][i - m + k], built by right-multiplying with x.
    let mut power: Vec<Vec<Float>> = (0..full).map(|_| vec![Float::with_val(bits, 1)]).collect();
    let mut x2 = Vec::new();
    for m in 1..=p {
        let next: Vec<Vec<Float>> = (0..full)
            .map(|i| {
                (0..=2 * m)
                    .map(|k| {
                        let mut v = Float::new(bits);
                        let j = (i + k).checked_sub(m);
                        let Some(j) = j.filter(|&j| j < full) else {
                            return v;
                        };
                        // (x^{m-1})[i][j-1] x[j-1][j] + (x^{m-1})[i][j+1] x[j+1][j]
                        let prev = |col: usize| -> Option<&Float> {
                            let t = (col + m - 1).checked_sub(i)?;
                            power[i].get(t)
                        };
                        if j > 0 {
                            if let Some(a) = prev(j - 1) {
                                v += Float::with_val(bits, a * &x_off[j - 1]);
                            }
                        }
                        if j + 1 < full {
                            if let Some(a) = prev(j + 1) {
                                v += Float::with_val(bits, a * &x_off[j]);
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        power = next;
        if m == 2 {
            x2 = power.clone();
        }
    }
    let shift = Float::with_val(
        bits,
        omega2 - Float::with_val(bits, basis_frequency.square_ref()),
    ) / 2u32;
    let half = p / 2;
    let even_dim = dim.div_ceil(2);
    let rows = (0..even_dim)
        .map(|a| {
            let i = 2 * a;
            (0..=half)
                .filter(|t| a + t < even_dim)
                .map(|t| {
                    let j = 2 * (a + t);
                    let mut v = Float::with_val(bits, g * &power[i][j + p - i]);
                    if j <= i + 2 {
                        v += Float::with_val(bits, &shift * &x2[i][j + 2 - i]);
                    }
                    if t == 0 {
                        v += Float::with_val(bits, basis_frequency * (i as f64 + 0.5));
                    }
                    v
                })
                .collect()
        })
        .collect();
    Band { width: half, rows }
}

/// Lowest eigenvalue of the band: a dense double-precision solve gives a
/// seed, then shifted inverse iteration and a Rayleigh quotient at `bits`
/// remove the round-off of the dense solve.
fn lowest_eigenvalue(band: &Band, bits: u32) -> Float {
    let n = band.dim();
    let dense = DMatrix::<f64>::from_fn(n, n, |i, j| band.get(i, j).map_or(0.0, Float::to_f64));
    let seed = SymmetricEigen::new(dense)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let mut gap = 1e-6 * seed.abs().max(1.0);
    let factor = loop {
        let shift = Float::with_val(bits, seed - gap);
        if let Some(f) = Factor::new(band, &shift, bits) {
            break f;
        }
        gap *= 10.0;
    };
    let mut v: Vec<Float> = (0..n)
        .map(|i| Float::with_val(bits, if i == 0 { 1 } else { 0 }))
        .collect();
    let tol = Float::with_val(bits, 2f64.powi(-(bits as i32) + 16));
    let mut energy = Float::with_val(bits, f64::INFINITY);
    for _ in 0..60 {
        v = factor.solve(&v, bits);
        let norm = v
            .iter()
            .fold(Float::new(bits), |acc, x| {
                acc + Float::with_val(bits, x.square_ref())
            })
            .sqrt();
        v.iter_mut().for_each(|x| *x /= &norm);
        let hv = band.mul_vec(&v, bits);
        let rq = v.iter().zip(&hv).fold(Float::new(bits), |acc, (a, b)| {
            acc + Float::with_val(bits, a * b)
        });
        let change = Float::with_val(bits, &rq - &energy).abs();
        energy = rq;
        if change <= Float::with_val(bits, energy.abs_ref()) * &tol {
            break;
        }
    }
    energy
}

fn energy_at(
    p: u32,
    omega2: &Float,
    g: &Float,
    basis_frequency: &Float,
    dim: usize,
    bits: u32,
) -> f64 {
    lowest_eigenvalue(
        &hamiltonian_band(p, omega2, g, basis_frequency, dim, bits),
        bits,
    )
    .to_f64()
}

/// Ground energy by basis diagonalization, doubling the basis until two
/// sizes agree to `settings.tolerance` (relative).
pub fn exact_energy_diag(spec: &OscillatorSpec, settings: &OracleSettings) -> Result<DiagEnergy> {
    check_level(spec)?;
    settings.validate()?;
    let basis_frequency = settings
        .basis_frequency
        .unwrap_or_else(|| first_order_estimate(spec).0);
    let bits = settings.precision.bits();
    let omega2 = Float::with_val(bits, spec.omega_squared());
    let g = Float::with_val(bits, &spec.g);
    let frequency = Float::with_val(bits, basis_frequency);
    let energy = |dim| energy_at(spec.p, &omega2, &g, &frequency, dim, bits);
    let mut dim = settings.basis_dim;
    let mut previous = energy(dim);
    loop {
        let next_dim = dim * 2;
        let current = energy(next_dim);
        let change = (current - previous).abs();
        let converged = change <= settings.tolerance * current.abs().max(1.0);
        if converged || next_dim * 2 > settings.max_basis_dim {
            if !converged && settings.require_convergence {
                return Err(Error::OracleNotConverged(format!(
                    "basis {dim} -> {next_dim} changed the energy by {change:e}"
                )));
            }
            return Ok(DiagEnergy {
                energy: current,
                converged,
                basis_dim: next_dim,
                last_change: change,
                basis_frequency,
            });
        }
        previous = current;
        dim = next_dim;
    }
}
