//! The system `{n_j, n_j + a_j m : j = 1..r}` with `a_j = r!/j`, the least
//! `m'` making every pair prime, and the resulting constants
//! `D = {a_j m'}` and `k = r! m'`.
//!
//! For any `b`, if `j b` belongs to the target set for some `j <= r`, then
//! `k b = (a_j m') (j b)`, i.e. `k b` lies in `D` times the set.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use super::system::{AffineForm, AffineSystem};
use crate::error::{invalid, Error, Result};
use crate::primes::PrimeTable;
use crate::sets::NumberSet;

pub const MAX_KRONECKER_R: u64 = 720;

pub fn factorial(r: u64) -> BigUint {
    (2..=r).fold(BigUint::one(), |acc, k| acc * k)
}

/// `a_j = r!/j` for `j = 1..=r`.
pub fn kronecker_coefficients(r: u64) -> Vec<BigUint> {
    let f = factorial(r);
    (1..=r).map(|j| &f / j).collect()
}

/// Variables `(n_1, ..., n_r, m)`; forms `psi_{2j-1} = n_j`,
/// `psi_{2j} = n_j + a_j m`.
pub fn build_kronecker_system(r: u64) -> Result<AffineSystem> {
    if r < 2 {
        return invalid(format!("Kronecker system needs r >= 2, got {r}"));
    }
    if r > MAX_KRONECKER_R {
        return Err(Error::TooLarge(format!("r = {r} exceeds {MAX_KRONECKER_R}")));
    }
    let d = r as usize + 1;
    let mut forms = Vec::with_capacity(2 * r as usize);
    for (j, a) in kronecker_coefficients(r).into_iter().enumerate() {
        let mut plain = vec![0i64; d];
        plain[j] = 1;
        let mut shifted: Vec<num_bigint::BigInt> = plain.iter().map(|&x| x.into()).collect();
        shifted[d - 1] = a.into();
        forms.push(AffineForm::new(plain, 0));
        forms.push(AffineForm { linear: shifted, constant: 0.into() });
    }
    AffineSystem::new(d, forms)
}

fn big_as_string<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn bigs_as_strings<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KroneckerSearchResult {
    pub r: u64,
    pub m_prime: u64,
    /// `D = {a_j m'}` in order `j = 1..=r`.
    #[serde(rename = "D", serialize_with = "bigs_as_strings")]
    pub d_set: Vec<BigUint>,
    #[serde(serialize_with = "big_as_string")]
    pub k: BigUint,
    /// `(n_j, n_j + a_j m')`, both prime; the smallest such `n_j`.
    pub witnesses: Vec<(u64, u64)>,
}

/// Least `m <= m_max` such that for every `j` some prime `n <= x_max - a_j m`
/// has `n + a_j m` prime. For fixed `m` the `r` pairs are independent.
pub fn search_m_prime(
    r: u64,
    m_max: u64,
    x_max: u64,
    table: &PrimeTable,
) -> Result<Option<KroneckerSearchResult>> {
    if r < 2 {
        return invalid(format!("r must be at least 2, got {r}"));
    }
    if x_max > table.limit() {
        return Err(Error::OutOfRange { value: x_max, limit: table.limit() });
    }
    let coeffs = kronecker_coefficients(r);
    let small: Vec<Option<u64>> = coeffs.iter().map(ToPrimitive::to_u64).collect();
    'm: for m in 1..=m_max {
        let mut witnesses = Vec::with_capacity(r as usize);
        for a in &small {
            let Some(gap) = a.and_then(|a| a.checked_mul(m)) else { continue 'm };
            if gap >= x_max {
                continue 'm;
            }
            let top = x_max - gap;
            let found = table
                .primes()
                .take_while(|&n| n <= top)
                .find(|&n| table.is_prime(n + gap));
            match found {
                Some(n) => witnesses.push((n, n + gap)),
                None => continue 'm,
            }
        }
        let d_set = coeffs.iter().map(|a| a * m).collect();
        return Ok(Some(KroneckerSearchResult { r, m_prime: m, d_set, k: factorial(r) * m, witnesses }));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub b_max: u64,
    pub pass: bool,
    /// Least `j` with `j b` in the set, for `b = 1..=b_max`; `None` on failure.
    pub choices: Vec<Option<u64>>,
    pub failures: Vec<u64>,
    /// `j -> number of b` that used it
    pub j_histogram: BTreeMap<u64, u64>,
}

impl ProductReport {
    pub fn choice(&self, b: u64) -> Option<u64> {
        self.choices.get(b.checked_sub(1)? as usize).copied().flatten()
    }
}

/// For each `b <= b_max`, finds the least `j <= r` with `j b` in `set` and
/// checks `k b = (a_j m') (j b)`.
pub fn verify_product_representation<S: NumberSet + ?Sized>(
    result: &KroneckerSearchResult,
    set: &S,
    b_max: u64,
) -> ProductReport {
    let mut choices = Vec::with_capacity(b_max as usize);
    let mut failures = Vec::new();
    let mut j_histogram = BTreeMap::new();
    for b in 1..=b_max {
        let j = (1..=result.r).find(|&j| set.contains(j * b));
        match j {
            Some(j) => {
                let lhs = &result.k * b;
                let rhs = &result.d_set[(j - 1) as usize] * (j * b);
                assert_eq!(lhs, rhs, "k b = a_j m' * j b must hold");
                *j_histogram.entry(j).or_insert(0) += 1;
            }
            None => failures.push(b),
        }
        choices.push(j);
    }
    ProductReport { b_max, pass: failures.is_empty(), choices, failures, j_histogram }
}
