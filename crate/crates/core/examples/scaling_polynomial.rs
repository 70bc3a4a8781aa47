//! The scaling polynomials P_N(sigma) and their certified real roots.
//!
//! $ cargo run --example scaling_polynomial

use vpt::optimizer::SturmSequence;
use vpt::{build_scaling_polynomial, generate_bw_coefficients, real_roots, Precision};

fn main() -> vpt::Result<()> {
    let prec = Precision::digits(30);
    let bw = generate_bw_coefficients(4, 16)?;
    for n in 0..=16 {
        let scaling = build_scaling_polynomial(&bw, n)?;
        let roots = real_roots(scaling.poly(), prec)?;
        let certified = SturmSequence::new(scaling.poly())?.count_real();
        assert_eq!(roots.len(), certified);
        let shown: Vec<String> = roots
            .iter()
            .map(|r| format!("{:.12}", r.value.to_f64()))
            .collect();
        println!(
            "N = {n:2}: {} real roots [{}]",
            roots.len(),
            shown.join(", ")
        );
        if n <= 2 {
            println!("        P_{n} = {}", scaling.poly().display_in("σ"));
        }
    }
    Ok(())
}
