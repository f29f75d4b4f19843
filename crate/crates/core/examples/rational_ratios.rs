//! Writes positive rationals as ratios of two members of a set.

use kronecker::diffstats::kronecker_set;
use kronecker::primes::sieve;
use kronecker::ratios::{canonical_ip_generators, represent_rational, represent_via_dilation};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = sieve(1_000_000)?;
    let set = kronecker_set(&table, 10_000, 3)?;
    for (m, n) in [(1, 1), (3, 2), (22, 7), (355, 113), (49, 50)] {
        match represent_rational(&set, m, n, 100)? {
            Some(c) => println!("{m}/{n} = {}/{} (t = {}, verified {})", c.a, c.b, c.scale, c.verify(&set)),
            None => println!("{m}/{n}: none with t <= 100"),
        }
    }

    let evens = |x: u64| x.is_multiple_of(2);
    let gens = canonical_ip_generators(&evens, 12, 1_000);
    let c = represent_via_dilation(&evens, &gens, 5, 3, 2)?.expect("evens");
    println!("5/3 through dilated finite sums of {gens:?}: {}/{}", c.a, c.b);
    Ok(())
}
