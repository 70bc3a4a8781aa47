//! Stationary points of W_N found by brute force in Omega land on the same
//! sigma values for every coupling: the roots of P_N.
//!
//! $ cargo run --release --example universality

use vpt::oracle::direct_extremize_wn;
use vpt::{
    build_scaling_polynomial, generate_bw_coefficients, real_roots, reexpand, sigma_of,
    OscillatorSpec, Precision, Rational,
};

fn main() -> vpt::Result<()> {
    let prec = Precision::default();
    for n in [1, 3, 5, 7, 9] {
        let bw = generate_bw_coefficients(4, n)?;
        let series = reexpand(&bw, n)?;
        let roots = real_roots(build_scaling_polynomial(&bw, n)?.poly(), prec)?;
        let roots: Vec<String> = roots
            .iter()
            .map(|r| format!("{:.10}", r.value.to_f64()))
            .collect();
        println!("N = {n}: roots of P_N   {}", roots.join(", "));
        for (omega, g) in [(1, (1, 10)), (1, (1, 1)), (2, (10, 1)), (0, (3, 1))] {
            let spec = OscillatorSpec::new(4, Rational::from(omega), Rational::from(g))?;
            let points = direct_extremize_wn(&bw, &series, &spec, n, prec)?;
            let images: Vec<String> = points
                .iter()
                .map(|pt| {
                    sigma_of(&spec, &pt.omega_trial, prec).map(|s| format!("{:.10}", s.to_f64()))
                })
                .collect::<vpt::Result<_>>()?;
            println!(
                "       omega = {omega}, g = {:>4}: {}",
                spec.g.to_string(),
                images.join(", ")
            );
        }
    }
    Ok(())
}
