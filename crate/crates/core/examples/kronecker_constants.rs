//! Finds m' and the constants k and D with k Z inside D times the Kronecker
//! set, then checks the product identity against the empirical set.

use kronecker::diffstats::kronecker_set;
use kronecker::linforms::{
    build_kronecker_system, complexity, kronecker_coefficients, search_m_prime,
    verify_product_representation,
};
use kronecker::primes::sieve;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = sieve(1_000_000)?;
    for r in 2..=8 {
        let Some(res) = search_m_prime(r, 10, 1_000_000, &table)? else {
            println!("r = {r}: no m' <= 10");
            continue;
        };
        let d: Vec<String> = res.d_set.iter().map(ToString::to_string).collect();
        println!("r = {r}: m' = {}, k = {}, D = {{{}}}", res.m_prime, res.k, d.join(", "));
    }

    let res = search_m_prime(4, 10, 100, &table)?.expect("r = 4 fits below 100");
    let set = kronecker_set(&table, 4 * 500, 3)?;
    let report = verify_product_representation(&res, &set, 500);
    println!("r = 4, b <= 500: pass {}, j usage {:?}", report.pass, report.j_histogram);

    println!("complexity of the r = 5 system: {}", complexity(&build_kronecker_system(5)?)?);
    let a = kronecker_coefficients(720);
    println!("r = 720: a_1 = 720! has {} digits, system has {} forms", a[0].to_string().len(), 2 * a.len());
    Ok(())
}
