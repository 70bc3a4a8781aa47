//! The exact polynomial identities behind the scaling property, for several
//! powers p.
//!
//! $ cargo run --example verify_identities

use vpt::scaling::{
    scaling_polynomial_via_derivative, verify_binomial_identity, verify_combined_identity,
    verify_term_identity,
};
use vpt::{build_scaling_polynomial, generate_bw_coefficients, reexpand};

fn main() -> vpt::Result<()> {
    let n = 12;
    for p in [4, 6, 8, 10] {
        let bw = generate_bw_coefficients(p, n + 1)?;
        let series = reexpand(&bw, n)?;
        let mut checks = 0;
        for l in 0..n {
            assert!(verify_term_identity(&series, l)?.holds());
            assert!(verify_combined_identity(&series, l)?.holds());
            checks += 2;
        }
        for l in 0..=n {
            for j in 0..=l {
                assert!(verify_binomial_identity(p, j, l)?.holds());
                checks += 1;
            }
        }
        assert_eq!(
            build_scaling_polynomial(&bw, n)?,
            scaling_polynomial_via_derivative(&bw, n)?
        );
        println!(
            "p = {p:2}: {checks} identities hold exactly; P_{n} = -2 e_{}'",
            n + 1
        );
    }

    // A single wrong coefficient breaks the term-by-term identity.
    let bw = generate_bw_coefficients(4, 6)?;
    let series = reexpand(&bw, 6)?;
    let bumped = series.e(3).scale(&vpt::Rational::from((101, 100)));
    let broken = series.with_polynomial(3, bumped);
    let check = verify_term_identity(&broken, 2)?;
    println!(
        "tampered e_3: identity holds = {}, first residual {:?}",
        check.holds(),
        check.first_offending_monomial()
    );
    Ok(())
}
