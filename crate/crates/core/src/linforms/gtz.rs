use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::local::singular_product;
use super::system::AffineSystem;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

pub const MAX_GTZ_DIMENSION: usize = 2;
pub const MAX_GTZ_FORMS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GtzCount {
    /// Lattice points of `[1, N]^d` where every form is prime.
    pub actual: u64,
    pub predicted: f64,
    /// `actual / predicted`; NaN when the prediction is zero.
    pub ratio: f64,
    pub singular_product: f64,
}

/// Largest value any form takes on `[1, N]^d` (0 when all are non-positive).
pub fn box_max_value(system: &AffineSystem, n: u64) -> Result<u64> {
    let n = BigInt::from(n);
    let one = BigInt::one();
    let best = system
        .forms()
        .iter()
        .map(|f| {
            f.linear.iter().fold(f.constant.clone(), |acc, a| {
                let lo = a * &one;
                let hi = a * &n;
                acc + if hi > lo { hi } else { lo }
            })
        })
        .max()
        .unwrap_or_default();
    if best.sign() == num_bigint::Sign::Minus {
        return Ok(0);
    }
    best.to_u64().ok_or_else(|| Error::TooLarge(format!("form values reach {best}")))
}

/// Compares the exact number of prime-valued points in `[1, N]^d` with
/// `S_P * sum_{n : psi_i(n) >= 3} prod_i 1/log psi_i(n)`, where `S_P` is the
/// singular product over primes up to `max_prime`.
pub fn gtz_empirical_count(
    system: &AffineSystem,
    n: u64,
    table: &PrimeTable,
    max_prime: u64,
) -> Result<GtzCount> {
    let d = system.dimension();
    let t = system.len();
    if d > MAX_GTZ_DIMENSION || t > MAX_GTZ_FORMS {
        return Err(Error::TooLarge(format!(
            "lattice count supports d <= {MAX_GTZ_DIMENSION} and t <= {MAX_GTZ_FORMS}, got d = {d}, t = {t}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let to_i64 = |x: &num_bigint::BigInt| {
        x.to_i64().ok_or_else(|| Error::TooLarge(format!("coefficient {x} too large")))
    };
    let forms: Vec<(Vec<i64>, i64)> = system
        .forms()
        .iter()
        .map(|f| Ok((f.linear.iter().map(to_i64).collect::<Result<_>>()?, to_i64(&f.constant)?)))
        .collect::<Result<_>>()?;

    let ni = n as i64;
    let max_value = box_max_value(system, n)?.max(2);
    if max_value > table.limit() {
        return Err(Error::OutOfRange { value: max_value, limit: table.limit() });
    }

    let inv_log: Vec<f64> = (0..=max_value)
        .map(|v| if v >= 3 { 1.0 / (v as f64).ln() } else { 0.0 })
        .collect();

    let mut actual = 0u64;
    let mut weight = 0.0f64;
    let mut visit = |point: &[i64]| {
        let mut all_prime = true;
        let mut w = 1.0;
        for (lin, c) in &forms {
            let v = c + lin.iter().zip(point).map(|(a, x)| a * x).sum::<i64>();
            if v < 3 {
                w = 0.0;
                all_prime &= v == 2;
            } else {
                w *= inv_log[v as usize];
                all_prime &= table.is_prime(v as u64);
            }
        }
        actual += all_prime as u64;
        weight += w;
    };
    match d {
        1 => (1..=ni).for_each(|x| visit(&[x])),
        _ => {
            for x in 1..=ni {
                for y in 1..=ni {
                    visit(&[x, y]);
                }
            }
        }
    }

    let sp = singular_product(system, max_prime)?.to_f64();
    let predicted = sp * weight;
    let ratio = if predicted > 0.0 { actual as f64 / predicted } else { f64::NAN };
    Ok(GtzCount { actual, predicted, ratio, singular_product: sp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve;

    #[test]
    fn consecutive_integers() {
        let s = AffineSystem::from_rows(&[(&[1], 0), (&[1], 1)]).unwrap();
        let t = sieve(1000).unwrap();
        let g = gtz_empirical_count(&s, 500, &t, 100).unwrap();
        assert_eq!(g.predicted, 0.0);
        assert_eq!(g.actual, 1);
        assert!(g.ratio.is_nan());
    }

    #[test]
    fn single_form_counts_primes() {
        let s = AffineSystem::from_rows(&[(&[1], 0)]).unwrap();
        let t = sieve(1000).unwrap();
        let g = gtz_empirical_count(&s, 1000, &t, 100).unwrap();
        assert_eq!(g.actual, 168);
    }

    #[test]
    fn guards() {
        let t = sieve(100).unwrap();
        let s = AffineSystem::from_rows(&[(&[1, 0, 0], 0)]).unwrap();
        assert!(matches!(gtz_empirical_count(&s, 10, &t, 10), Err(Error::TooLarge(_))));
        let s = AffineSystem::from_rows(&[(&[1], 0), (&[1], 2)]).unwrap();
        assert!(matches!(gtz_empirical_count(&s, 100, &t, 10), Err(Error::OutOfRange { .. })));
    }
}
