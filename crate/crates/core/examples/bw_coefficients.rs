//! Exact weak-coupling coefficients e_l for several potentials, and the
//! on-disk cache that serves them.
//!
//! $ cargo run --example bw_coefficients

use vpt::generate_bw_coefficients;
use vpt::series::cache::{CacheOutcome, CoefficientCache};
use vpt::series::format_rational;

fn main() -> vpt::Result<()> {
    for p in [4, 6, 8] {
        let series = generate_bw_coefficients(p, 6)?;
        println!("p = {p}");
        for (l, c) in series.coeffs().iter().enumerate() {
            println!("  e_{l} = {:<40} ~ {:.6e}", format_rational(c), c.to_f64());
        }
    }

    // Ratios e_{l+1}/e_l grow linearly in l for the quartic: the series diverges.
    let quartic = generate_bw_coefficients(4, 30)?;
    let c = quartic.coeffs();
    for l in [5, 10, 20, 29] {
        let ratio = c[l + 1].to_f64() / c[l].to_f64();
        println!("quartic e_{}/e_{l} = {ratio:.3}", l + 1);
    }

    let dir = tempfile::tempdir()?;
    let cache = CoefficientCache::new(dir.path());
    let (_, first) = cache.get_or_generate(4, 20)?;
    let (_, second) = cache.get_or_generate(4, 12)?;
    assert_eq!(first, CacheOutcome::Miss);
    assert_eq!(second, CacheOutcome::Hit);
    println!("cache file: {}", cache.path_for(4, 0).display());
    Ok(())
}
