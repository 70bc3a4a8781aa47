use super::{check_level, first_order_estimate, OracleSettings};
use crate::error::{Error, Result};
use crate::reexpansion::OscillatorSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct GridEnergy {
    /// Richardson extrapolation of the two resolutions.
    pub energy: f64,
    pub coarse: f64,
    pub fine: f64,
    pub halfwidth: f64,
    /// Shift of the coarse energy when the box is doubled.
    pub box_change: f64,
}

/// Potential on `n` interior points of `[-L, L]`, placed symmetrically so
/// that `x_{n-1-i} = -x_i` holds bit for bit.
pub fn grid_potential(spec: &OscillatorSpec, halfwidth: f64, n: usize) -> (f64, Vec<f64>) {
    let h = 2.0 * halfwidth / (n + 1) as f64;
    let center = (n as f64 - 1.0) / 2.0;
    let w2 = spec.omega_squared().to_f64();
    let g = spec.g.to_f64();
    let v = (0..n)
        .map(|i| {
            let x = (i as f64 - center) * h;
            0.5 * w2 * x * x + g * x.powi(spec.p as i32)
        })
        .collect();
    (h, v)
}

/// Number of eigenvalues below `e` of the tridiagonal matrix with diagonal
/// `diag` and constant off-diagonal `off`.
fn count_below(diag: &[f64], off: f64, e: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, d) in diag.iter().enumerate() {
        q = if i == 0 { d - e } else { d - e - off2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (d.abs() + off.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(T - shift) y = rhs` for the symmetric tridiagonal `T` by the
/// Thomas algorithm; stable while `T - shift` is positive definite.
fn solve_shifted(diag: &[f64], off: f64, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0] - shift;
    c[0] = off / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - shift - off * c[i - 1];
        c[i] = off / denom;
        d[i] = (rhs[i] - off * d[i - 1]) / denom;
    }
    let mut y = vec![0.0; n];
    y[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        y[i] = d[i] - c[i] * y[i + 1];
    }
    y
}

/// `<psi|H|psi> / <psi|psi>` with the kinetic term as a sum of squared
/// differences, which avoids cancelling the large `1/h^2` diagonal.
fn rayleigh_quotient(psi: &[f64], v: &[f64], h: f64) -> f64 {
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    let mut norm = 0.0;
    let mut prev = 0.0;
    for (p, vi) in psi.iter().zip(v) {
        kinetic += (p - prev) * (p - prev);
        potential += vi * p * p;
        norm += p * p;
        prev = *p;
    }
    kinetic += prev * prev;
    (kinetic / (2.0 * h * h) + potential) / norm
}

/// Lowest eigenvalue of `-psi''/2 + V psi` with Dirichlet ends: bisection
/// on Sturm counts, then inverse iteration from below and a Rayleigh
/// quotient.
fn lowest_fd(spec: &OscillatorSpec, halfwidth: f64, n: usize, upper_guess: f64) -> f64 {
    let (h, v) = grid_potential(spec, halfwidth, n);
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = v.iter().map(|vi| inv_h2 + vi).collect();
    let off = -0.5 * inv_h2;
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = upper_guess.max(lo + 1.0);
    while count_below(&diag, off, hi) == 0 {
        hi = lo + 2.0 * (hi - lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(&diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let shift = lo - 1e-6 * (1.0 + lo.abs());
    let mut psi = vec![1.0; n];
    for _ in 0..4 {
        psi = solve_shifted(&diag, off, shift, &psi);
        let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
        psi.iter_mut().for_each(|x| *x /= norm);
    }
    rayleigh_quotient(&psi, &v, h)
}

/// Box half-width at which the WKB decay exponent beyond the classical
/// turning point of energy `energy` reaches `action`.
fn wkb_halfwidth(spec: &OscillatorSpec, energy: f64, action: f64) -> f64 {
    let w2 = spec.omega_squared().to_f64();
    let g = spec.g.to_f64();
    let v = |x: f64| 0.5 * w2 * x * x + g * x.powi(spec.p as i32);
    let mut turning = 1e-3;
    while v(turning) < energy {
        turning *= 1.1;
    }
    let step = turning * 1e-3;
    let mut x = turning;
    let mut s = 0.0;
    while s < action {
        s += step * (2.0 * (v(x + 0.5 * step) - energy)).max(0.0).sqrt();
        x += step;
    }
    x
}

const DECAY_ACTION: f64 = 24.0;

/// Ground energy from a second-order central-difference Hamiltonian on
/// `[-L, L]`, Richardson-extrapolated from spacings `h` and `h/2`.
pub fn exact_energy_grid(spec: &OscillatorSpec, settings: &OracleSettings) -> Result<GridEnergy> {
    check_level(spec)?;
    settings.validate()?;
    let (_, estimate) = first_order_estimate(spec);
    let halfwidth = settings
        .grid_halfwidth
        .unwrap_or_else(|| wkb_halfwidth(spec, estimate, DECAY_ACTION));
    let n = settings.grid_points;
    let upper = estimate * 1.5 + 1.0;
    let coarse = lowest_fd(spec, halfwidth, n, upper);
    let fine = lowest_fd(spec, halfwidth, 2 * n + 1, upper);
    // Same spacing, twice the box.
    let doubled = lowest_fd(spec, 2.0 * halfwidth, 2 * n + 1, upper);
    let box_change = (doubled - coarse).abs();
    if box_change > settings.tolerance.max(1e-10) * coarse.abs().max(1.0) {
        return Err(Error::OracleNotConverged(format!(
            "box half-width {halfwidth} too small: doubling shifts the energy by {box_change:e}"
        )));
    }
    Ok(GridEnergy {
        energy: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
        halfwidth,
        box_change,
    })
}
