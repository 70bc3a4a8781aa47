//! Reference energies and a scaling-free extremizer, used to check the
//! variational results.
//!
//! Nothing here touches the scaling polynomial: the two eigenvalue solvers
//! work directly on the Hamiltonian and the extremizer differentiates `W_N`
//! numerically.

mod diag;
mod direct;
mod grid;

pub use diag::{exact_energy_diag, DiagEnergy};
pub use direct::{direct_extremize_wn, StationaryKind, StationaryPoint};
pub use grid::{exact_energy_grid, grid_potential, GridEnergy};

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::reexpansion::OscillatorSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Starting basis size; doubled until two sizes agree.
    pub basis_dim: usize,
    pub max_basis_dim: usize,
    /// Frequency of the oscillator basis. `None` uses the first-order
    /// variational frequency of the problem.
    pub basis_frequency: Option<f64>,
    /// Half-width of the finite-difference box. `None` sizes it from a WKB
    /// decay estimate.
    pub grid_halfwidth: Option<f64>,
    /// Interior points of the coarse grid; the fine grid has twice as many.
    pub grid_points: usize,
    /// Relative agreement demanded between basis sizes and box sizes.
    pub tolerance: f64,
    /// Return an unconverged diagonalization instead of failing.
    pub require_convergence: bool,
    pub precision: Precision,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            basis_dim: 32,
            max_basis_dim: 1024,
            basis_frequency: None,
            grid_halfwidth: None,
            grid_points: 4000,
            tolerance: 1e-11,
            require_convergence: true,
            precision: Precision::default(),
        }
    }
}

impl OracleSettings {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.basis_dim < 16 {
            return Err(Error::InvalidSpec("basis_dim must be at least 16".into()));
        }
        if self.max_basis_dim < 2 * self.basis_dim {
            return Err(Error::InvalidSpec(
                "max_basis_dim must allow at least one doubling of basis_dim".into(),
            ));
        }
        if self.grid_points < 16 {
            return Err(Error::InvalidSpec("grid_points must be at least 16".into()));
        }
        if let Some(f) = self.basis_frequency {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidSpec(
                    "basis_frequency must be positive".into(),
                ));
            }
        }
        if let Some(l) = self.grid_halfwidth {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidSpec("grid_halfwidth must be positive".into()));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_level(spec: &OscillatorSpec) -> Result<()> {
    if spec.level != 0 {
        return Err(Error::UnsupportedLevel(spec.level));
    }
    Ok(())
}

/// `(p - 1)!! / 2^(p/2)`, the Gaussian moment `<0|x^p|0>` at unit frequency.
pub(crate) fn gaussian_moment(p: u32) -> f64 {
    let mut m = 1.0;
    let mut k = p as i64 - 1;
    while k > 1 {
        m *= k as f64;
        k -= 2;
    }
    m / 2f64.powi(p as i32 / 2)
}

/// Minimizer and minimum of the Gaussian trial energy
/// `Omega/4 + omega^2/(4 Omega) + g <x^p>_Omega`, solved in double precision.
///
/// This is the first-order variational estimate; it seeds the basis
/// frequency and sizes the grid box.
pub fn first_order_estimate(spec: &OscillatorSpec) -> (f64, f64) {
    let p = spec.p as i32;
    let w2 = spec.omega_squared().to_f64();
    let g = spec.g.to_f64();
    let m = gaussian_moment(spec.p);
    // Stationarity: Omega^(p/2+1) - omega^2 Omega^(p/2-1) - 2 p g m = 0.
    let f = |om: f64| om.powi(p / 2 + 1) - w2 * om.powi(p / 2 - 1) - 2.0 * p as f64 * g * m;
    let mut lo = w2.sqrt();
    let mut hi = lo.max(1e-3) * 2.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let om = 0.5 * (lo + hi);
    let energy = om / 4.0 + w2 / (4.0 * om) + g * m / om.powi(p / 2);
    (om, energy)
}

/// Relative agreement required between the two eigenvalue solvers before a
/// reference energy is trusted.
pub const CROSS_ORACLE_TOLERANCE: f64 = 1e-9;

/// A reference energy from both solvers.
#[derive(Debug, Clone)]
pub struct ReferenceEnergy {
    pub diag: DiagEnergy,
    pub grid: GridEnergy,
    /// `|diag - grid| / |diag|`.
    pub relative_gap: f64,
}

impl ReferenceEnergy {
    pub fn energy(&self) -> f64 {
        self.diag.energy
    }

    pub fn agrees(&self) -> bool {
        self.diag.converged && self.relative_gap <= CROSS_ORACLE_TOLERANCE
    }
}

/// Runs both eigenvalue solvers on the same problem.
pub fn reference_energy(
    spec: &OscillatorSpec,
    settings: &OracleSettings,
) -> Result<ReferenceEnergy> {
    let diag = exact_energy_diag(spec, settings)?;
    let grid = exact_energy_grid(spec, settings)?;
    let relative_gap = (diag.energy - grid.energy).abs() / diag.energy.abs();
    Ok(ReferenceEnergy {
        diag,
        grid,
        relative_gap,
    })
}
