//! Exact lower densities for sets meeting every difference set of size r,
//! next to the count of pairwise disjoint progression windows they rest on.

use kronecker::density::{density_lower_bound, disjoint_family_count};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4}  {:>28}  {:>14}  {:>14}", "r", "per even", "decimal", "windows/N");
    let n = 1_000_000;
    for r in [3, 5, 7, 11, 13, 19, 31] {
        let b = density_lower_bound(r)?;
        let windows = disjoint_family_count(n, r)? as f64 / n as f64;
        println!(
            "{r:>4}  {:>28}  {:>14}  {:>14.8}",
            b.per_even.to_string(),
            b.per_even.to_decimal(12),
            2.0 * windows
        );
    }
    let big = density_lower_bound(721)?;
    println!(
        "r = 721: per_even ~ {:.6e} ({} digit denominator)",
        big.per_even.to_f64(),
        big.per_even.denominator().to_string().len()
    );
    Ok(())
}
