//! Order-by-order variational energies for the quartic oscillator at unit
//! coupling, with the full candidate table at one order.
//!
//! $ cargo run --example solve_quartic

use vpt::{optimize, OscillatorSpec, Precision, Rational, SelectionPolicy};

fn main() -> vpt::Result<()> {
    let spec = OscillatorSpec::new(4, Rational::from(1), Rational::from(1))?;
    let prec = Precision::default();
    let policy = SelectionPolicy::default();

    let first = optimize(&spec, 1, policy, prec)?;
    let exact = first
        .chosen
        .exact
        .as_ref()
        .expect("rational first-order root");
    println!(
        "N = 1: sigma = {}, Omega = {}, W_1 = {}",
        exact.sigma, exact.omega_trial, exact.energy
    );

    for n in 2..=12 {
        let r = optimize(&spec, n, policy, prec)?;
        println!(
            "N = {n:2}: W = {:.15}  sigma = {:8.4}  Omega = {:.6}  {}",
            r.chosen.energy.to_f64(),
            r.chosen.sigma.to_f64(),
            r.chosen.omega_trial.to_f64(),
            r.chosen.kind.as_str()
        );
    }

    let r = optimize(&spec, 16, policy, prec)?;
    println!("candidates at N = 16, flattest first:");
    for c in &r.all_candidates {
        println!(
            "  sigma = {:8.4}  W = {:.15}  |W''| = {:.3e}",
            c.sigma.to_f64(),
            c.energy.to_f64(),
            c.flatness.to_f64()
        );
    }
    Ok(())
}
