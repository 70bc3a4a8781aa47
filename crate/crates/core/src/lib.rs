//! Variational perturbation theory for the anharmonic oscillator
//! `V(x) = omega^2 x^2 / 2 + g x^p` with even `p >= 4`.
//!
//! The weak-coupling energy series is generated exactly ([`series`]),
//! reexpanded around a trial frequency `Omega` ([`reexpansion`]), and made
//! stationary in `Omega`. The stationarity condition only depends on the
//! scaling variable `sigma = Omega^((p-2)/2) (Omega^2 - omega^2) / g`
//! through a degree-`N` polynomial `P_N(sigma)` ([`scaling`]) that is the
//! same for every `omega` and `g`. [`optimizer`] solves it and picks the
//! flattest stationary point; [`oracle`] supplies independent reference
//! energies.
//!
//! ```
//! use vpt::{optimize, OscillatorSpec, Precision, SelectionPolicy};
//!
//! let spec = OscillatorSpec::from_f64(4, 1.0, 1.0).unwrap();
//! let result = optimize(&spec, 1, SelectionPolicy::default(), Precision::default()).unwrap();
//! assert_eq!(result.chosen.energy, 0.8125);
//! ```
//!
//! Only the ground level is implemented; `OscillatorSpec::level` is the hook
//! for excited levels, which would need their own Bender-Wu recursion.

pub mod cli;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod precision;
pub mod reexpansion;
pub mod scaling;
pub mod series;

pub use error::{Error, Result};
pub use optimizer::{
    converge_scan, converge_scan_with, omega_from_sigma, optimize, optimize_with, real_roots,
    CandidateKind, ConvergenceReport, ExtremumCandidate, SelectionPolicy, VariationalResult,
};
pub use oracle::{
    exact_energy_diag, exact_energy_grid, reference_energy, OracleSettings, ReferenceEnergy,
};
pub use precision::Precision;
pub use reexpansion::{evaluate_wn, reexpand, sigma_of, OscillatorSpec, ReexpandedSeries};
pub use scaling::{build_scaling_polynomial, ScalingPolynomial};
pub use series::{generate_bw_coefficients, BwSeries, Rational, RationalPolynomial};
