//! Ground energies from basis diagonalization and from a finite-difference
//! grid, side by side.
//!
//! $ cargo run --release --example reference_energies

use vpt::oracle::{exact_energy_diag, exact_energy_grid};
use vpt::{OracleSettings, OscillatorSpec};

fn main() -> vpt::Result<()> {
    let settings = OracleSettings::default();
    println!(
        "{:>3} {:>6} {:>8} {:>20} {:>20} {:>9}",
        "p", "omega", "g", "diagonalization", "grid", "rel gap"
    );
    for p in [4, 6, 8] {
        for (omega, g) in [(1.0, 0.1), (1.0, 1.0), (1.0, 10.0), (0.0, 1.0)] {
            let spec = OscillatorSpec::from_f64(p, omega, g)?;
            let diag = exact_energy_diag(&spec, &settings)?;
            let grid = exact_energy_grid(&spec, &settings)?;
            let gap = (diag.energy - grid.energy).abs() / diag.energy;
            println!(
                "{p:>3} {omega:>6} {g:>8} {:>20.15} {:>20.15} {gap:>9.1e}",
                diag.energy, grid.energy
            );
        }
    }
    Ok(())
}
