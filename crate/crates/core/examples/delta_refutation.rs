//! Looks for r-sets whose pairwise differences all avoid a given set.

use kronecker::density::{delta_star_refute, progression_witness};
use kronecker::diffstats::kronecker_set;
use kronecker::primes::sieve;
use kronecker::sets::Evens;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    // among any three integers two share parity
    let evens = delta_star_refute(&Evens, 3, 30, 1_000_000, 0)?;
    println!("evens, r = 3: {:?} after {} sets", evens.witness, evens.examined);

    let squares = |n: u64| (n as f64).sqrt().fract() == 0.0;
    let out = delta_star_refute(&squares, 4, 40, 1_000_000, 0)?;
    println!("squares, r = 4, M = 40: witness {:?} ({:?})", out.witness, out.mode);

    let table = sieve(1_000_000)?;
    let k = kronecker_set(&table, 2_000, 3)?;
    let out = delta_star_refute(&k, 50, 2_000, 20_000, 7)?;
    println!("empirical Kronecker set, r = 50: {} samples, witness {:?}", out.examined, out.witness);

    for a in [1, 7, 35] {
        println!("window {{{a}, ..., 6*{a}}}: least j with j*{a} in set = {:?}", progression_witness(&k, a, 7));
    }
    Ok(())
}
