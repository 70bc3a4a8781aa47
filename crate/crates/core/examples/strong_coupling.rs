//! The pure quartic oscillator (omega = 0), where the weak-coupling series is
//! useless but the variational sequence still converges, and the energy
//! scales as g^(1/3).
//!
//! $ cargo run --release --example strong_coupling

use vpt::{
    optimize, reference_energy, OracleSettings, OscillatorSpec, Precision, Rational,
    SelectionPolicy,
};

fn main() -> vpt::Result<()> {
    let spec = OscillatorSpec::new(4, Rational::new(), Rational::from(1))?;
    let e = reference_energy(&spec, &OracleSettings::default())?.energy();
    println!("E(omega = 0, g = 1) = {e:.15}");
    for n in [1, 3, 5, 9, 13, 17, 21] {
        let r = optimize(&spec, n, SelectionPolicy::default(), Precision::default())?;
        println!(
            "N = {n:2}: W = {:.15}  error {:.2e}  sigma = {:.4}",
            r.chosen.energy.to_f64(),
            (r.chosen.energy.to_f64() - e).abs(),
            r.chosen.sigma.to_f64()
        );
    }
    let eight = OscillatorSpec::new(4, Rational::new(), Rational::from(8))?;
    let e8 = reference_energy(&eight, &OracleSettings::default())?.energy();
    println!("E(g = 8) / E(g = 1) = {:.12}, expected 8^(1/3) = 2", e8 / e);
    Ok(())
}
