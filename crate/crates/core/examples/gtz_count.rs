//! Counts lattice points where every form is prime and compares with the
//! singular product times a pointwise logarithmic weight.

use kronecker::linforms::{box_max_value, gtz_empirical_count, AffineSystem};
use kronecker::primes::sieve;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("3-term AP", AffineSystem::from_rows(&[(&[1, 0], 0), (&[1, 1], 0), (&[1, 2], 0)])?, 1_000),
        ("twin primes", AffineSystem::from_rows(&[(&[1], 0), (&[1], 2)])?, 100_000),
        ("x, y", AffineSystem::from_rows(&[(&[1, 0], 0), (&[0, 1], 0)])?, 500),
        ("n, n+1", AffineSystem::from_rows(&[(&[1], 0), (&[1], 1)])?, 1_000),
    ];
    for (name, s, n) in &cases {
        let table = sieve(box_max_value(s, *n)?.max(2))?;
        let g = gtz_empirical_count(s, *n, &table, 10_000)?;
        println!(
            "{name:>12} N = {n:>6}: actual {:>7}, predicted {:>10.1}, ratio {:.4}",
            g.actual, g.predicted, g.ratio
        );
    }
    Ok(())
}
