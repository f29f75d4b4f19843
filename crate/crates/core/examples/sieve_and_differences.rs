//! Sieve the primes, count representations `p' - p = d`, and extract the
//! empirical Kronecker set with its gap statistics.

use kronecker::diffstats::{gap_analysis, kronecker_set, representation_count};
use kronecker::primes::{sieve, PrimeTable};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let limit = 2_000_000;
    let table = sieve(limit)?;
    println!("pi({limit}) = {}", table.prime_count(limit)?);

    for d in [2, 4, 6, 30, 210] {
        println!("pairs below {limit} with gap {d:>3}: {}", representation_count(&table, d)?);
    }

    let profile = kronecker_set(&table, 1_000, 3)?;
    let gaps = gap_analysis(profile.members())?;
    println!(
        "{} of {} even d <= 1000 have at least {} representations; max gap {}",
        profile.members().len(),
        profile.counts().len(),
        profile.threshold(),
        gaps.max_gap
    );

    let dir = std::env::temp_dir().join("kronecker-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(format!("sieve-{limit}.krn"));
    table.save_cache(&path)?;
    let back = PrimeTable::load_cache(&path)?;
    println!("cache round trip at {}: {}", path.display(), back == table);
    Ok(())
}
