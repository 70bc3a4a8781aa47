//! W_N against the reference energy for N up to 25 at weak, unit and strong
//! coupling.
//!
//! $ cargo run --release --example convergence_study

use vpt::oracle::CROSS_ORACLE_TOLERANCE;
use vpt::{converge_scan, reference_energy, OracleSettings, OscillatorSpec, Precision, Rational};

fn main() -> vpt::Result<()> {
    for g in [
        Rational::from((1, 10)),
        Rational::from(1),
        Rational::from(10),
        Rational::from(1000),
    ] {
        let spec = OscillatorSpec::new(4, Rational::from(1), g.clone())?;
        let reference = reference_energy(&spec, &OracleSettings::default())?;
        let e = reference.energy();
        println!(
            "g = {g}: E = {e:.15} (diagonalization vs grid {:.1e})",
            reference.relative_gap
        );
        let report = converge_scan(&spec, 25, e, Precision::default())?;
        for row in report.rows.iter().filter(|r| r.order % 2 == 1) {
            println!(
                "  N = {:2}  |W_N - E| = {:.3e}",
                row.order,
                row.abs_error.to_f64()
            );
        }
        if let Some((a, b)) = report.first_odd_increase(CROSS_ORACLE_TOLERANCE * e) {
            println!("  error grows from N = {a} to N = {b}");
        }
    }
    Ok(())
}
