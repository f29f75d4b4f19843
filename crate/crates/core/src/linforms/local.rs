//! Local factors
//!
//! `beta_p = p^-d * sum_{n in Z_p^d} prod_i Lambda_p(psi_i(n))` where
//! `Lambda_p(x) = p/(p-1)` when `p` does not divide `x` and `0` otherwise.
//! Every nonzero summand equals `(p/(p-1))^t`, so
//! `beta_p = (p/(p-1))^t * #{n : p ∤ psi_i(n) for all i} / p^d`, and the work
//! is counting admissible residue points.
//!
//! Two counting routes:
//! - full enumeration of `Z_p^d` (odometer with incremental residues), and
//! - a factorized route for star-shaped systems, where every form involves at
//!   most one variable besides the last one. For a fixed value of the last
//!   variable the remaining coordinates are independent, so the count is a
//!   sum over that value of per-coordinate counts. The Kronecker system is of
//!   this shape.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::system::AffineSystem;
use crate::error::{invalid, Error, Result};
use crate::primes::small_primes;
use crate::rational::ExactRational;

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

fn is_prime_u64(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// A system reduced modulo one prime.
struct Reduced {
    p: u64,
    d: usize,
    /// per form: (coefficients mod p, constant mod p)
    forms: Vec<(Vec<u64>, u64)>,
}

impl Reduced {
    fn new(system: &AffineSystem, p: u64) -> Reduced {
        let forms = system
            .forms()
            .iter()
            .map(|f| (f.linear.iter().map(|a| residue(a, p)).collect(), residue(&f.constant, p)))
            .collect();
        Reduced { p, d: system.dimension(), forms }
    }

    fn eval(&self, i: usize, point: &[u64]) -> u64 {
        let (lin, c) = &self.forms[i];
        let p = self.p as u128;
        let v = lin
            .iter()
            .zip(point)
            .fold(*c as u128, |acc, (&a, &x)| (acc + a as u128 * x as u128) % p);
        v as u64
    }
}

/// Star layout: which non-last variable (if any) each form touches.
struct Star {
    /// forms grouped by their single non-last variable
    groups: Vec<Vec<usize>>,
    /// forms touching only the last variable (or nothing)
    rest: Vec<usize>,
}

fn star_layout(system: &AffineSystem) -> Option<Star> {
    let d = system.dimension();
    let mut groups = vec![Vec::new(); d - 1];
    let mut rest = Vec::new();
    for (i, f) in system.forms().iter().enumerate() {
        let mut vars = f.linear[..d - 1].iter().enumerate().filter(|(_, a)| !a.is_zero());
        match (vars.next(), vars.next()) {
            (None, _) => rest.push(i),
            (Some((k, _)), None) => groups[k].push(i),
            (Some(_), Some(_)) => return None,
        }
    }
    Some(Star { groups, rest })
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

/// Residues `x` of coordinate `k` that kill some form in `group` when the
/// last variable is fixed. `None` if a form vanishes for every `x`.
fn forbidden(red: &Reduced, group: &[usize], k: usize, last: u64, out: &mut Vec<u64>) -> Option<()> {
    let p = red.p;
    let l = red.d - 1;
    out.clear();
    for &i in group {
        let (lin, c) = &red.forms[i];
        let shift = ((*c as u128 + lin[l] as u128 * last as u128) % p as u128) as u64;
        let a = lin[k];
        if a == 0 {
            if shift == 0 {
                return None;
            }
            continue;
        }
        // a x + shift = 0  =>  x = -shift / a
        let x = ((p - shift) % p) as u128 * inverse_mod(a, p) as u128 % p as u128;
        out.push(x as u64);
    }
    out.sort_unstable();
    out.dedup();
    Some(())
}

fn star_count(red: &Reduced, star: &Star) -> BigUint {
    let p = red.p;
    let l = red.d - 1;
    let unused = star.groups.iter().filter(|g| g.is_empty()).count();
    let active: Vec<(usize, &Vec<usize>)> =
        star.groups.iter().enumerate().filter(|(_, g)| !g.is_empty()).collect();

    // Residues of the last-variable-only forms, advanced incrementally.
    let mut rest_vals: Vec<u64> = star.rest.iter().map(|&i| red.forms[i].1).collect();
    let rest_steps: Vec<u64> = star.rest.iter().map(|&i| red.forms[i].0[l]).collect();

    let mut plain: u64 = 0;
    let mut total = BigUint::zero();
    let mut scratch = Vec::new();
    for m in 0..p {
        if rest_vals.iter().all(|&v| v != 0) {
            if active.is_empty() {
                plain += 1;
            } else {
                let mut prod = BigUint::one();
                for &(k, group) in &active {
                    match forbidden(red, group, k, m, &mut scratch) {
                        Some(()) => prod *= p - scratch.len() as u64,
                        None => {
                            prod = BigUint::zero();
                            break;
                        }
                    }
                }
                total += prod;
            }
        }
        for (v, &s) in rest_vals.iter_mut().zip(&rest_steps) {
            *v += s;
            if *v >= p {
                *v -= p;
            }
        }
    }
    (total + plain) * BigUint::from(p).pow(unused as u32)
}

/// Calls `visit` on each point of `Z_p^d` in lexicographic order with the
/// residues of all forms; stops early when `visit` returns `false`.
fn enumerate(red: &Reduced, mut visit: impl FnMut(&[u64], &[u64]) -> bool) {
    let p = red.p;
    let d = red.d;
    let mut point = vec![0u64; d];
    let mut vals: Vec<u64> = red.forms.iter().map(|f| f.1).collect();
    loop {
        if !visit(&point, &vals) {
            return;
        }
        // increment the last coordinate first
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            point[k] += 1;
            for (v, f) in vals.iter_mut().zip(&red.forms) {
                *v += f.0[k];
                if *v >= p {
                    *v -= p;
                }
            }
            if point[k] < p {
                break;
            }
            point[k] = 0;
        }
    }
}

fn enumerated_count(red: &Reduced) -> BigUint {
    let mut count: u64 = 0;
    enumerate(red, |_, vals| {
        if vals.iter().all(|&v| v != 0) {
            count += 1;
        }
        true
    });
    BigUint::from(count)
}

fn beta_from_count(count: BigUint, p: u64, t: usize, d: usize) -> ExactRational {
    if count.is_zero() {
        return ExactRational::zero();
    }
    let num = BigInt::from(count) * BigInt::from(p).pow(t as u32);
    let den = BigInt::from(p - 1).pow(t as u32) * BigInt::from(p).pow(d as u32);
    ExactRational::new(num, den)
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(())
}

fn check_budget(p: u64, d: usize, budget: u64) -> Result<()> {
    let fits = (p as u128)
        .checked_pow(d as u32)
        .is_some_and(|n| n <= budget as u128);
    if !fits {
        return Err(Error::TooLarge(format!(
            "enumerating {p}^{d} residue points exceeds the budget of {budget}"
        )));
    }
    Ok(())
}

pub fn local_factor(system: &AffineSystem, p: u64) -> Result<ExactRational> {
    local_factor_with_budget(system, p, DEFAULT_ENUMERATION_BUDGET)
}

/// Uses the factorized count for star-shaped systems and full enumeration
/// (at most `budget` points) otherwise.
pub fn local_factor_with_budget(system: &AffineSystem, p: u64, budget: u64) -> Result<ExactRational> {
    check_prime(p)?;
    let red = Reduced::new(system, p);
    let count = match star_layout(system) {
        Some(star) => star_count(&red, &star),
        None => {
            check_budget(p, system.dimension(), budget)?;
            enumerated_count(&red)
        }
    };
    Ok(beta_from_count(count, p, system.len(), system.dimension()))
}

/// Always enumerates all of `Z_p^d`.
pub fn local_factor_enumerated(system: &AffineSystem, p: u64, budget: u64) -> Result<ExactRational> {
    check_prime(p)?;
    check_budget(p, system.dimension(), budget)?;
    let red = Reduced::new(system, p);
    Ok(beta_from_count(enumerated_count(&red), p, system.len(), system.dimension()))
}

/// Whether every form is nonzero mod `p` at `point`.
pub fn point_is_admissible(system: &AffineSystem, point: &[u64], p: u64) -> bool {
    if point.len() != system.dimension() {
        return false;
    }
    let red = Reduced::new(system, p);
    (0..system.len()).all(|i| red.eval(i, point) != 0)
}

/// A residue point where no form vanishes mod `p`, or `None` exactly when
/// `beta_p = 0`.
pub fn admissible_witness(system: &AffineSystem, p: u64) -> Result<Option<Vec<u64>>> {
    check_prime(p)?;
    let red = Reduced::new(system, p);
    let d = system.dimension();
    if let Some(star) = star_layout(system) {
        let mut scratch = Vec::new();
        'last: for m in 0..p {
            let mut point = vec![0u64; d];
            point[d - 1] = m;
            if star.rest.iter().any(|&i| red.eval(i, &point) == 0) {
                continue;
            }
            for (k, group) in star.groups.iter().enumerate() {
                if group.is_empty() {
                    continue;
                }
                if forbidden(&red, group, k, m, &mut scratch).is_none() {
                    continue 'last;
                }
                match (0..p).find(|x| scratch.binary_search(x).is_err()) {
                    Some(x) => point[k] = x,
                    None => continue 'last,
                }
            }
            return Ok(Some(point));
        }
        return Ok(None);
    }
    check_budget(p, d, DEFAULT_ENUMERATION_BUDGET)?;
    let mut found = None;
    enumerate(&red, |point, vals| {
        if vals.iter().all(|&v| v != 0) {
            found = Some(point.to_vec());
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// `prod_{p <= max_prime} beta_p`, exact.
pub fn singular_product(system: &AffineSystem, max_prime: u64) -> Result<ExactRational> {
    let primes = small_primes(max_prime);
    let factors: Vec<ExactRational> = primes
        .par_iter()
        .map(|&p| local_factor(system, p))
        .collect::<Result<_>>()?;
    if factors.iter().any(ExactRational::is_zero) {
        return Ok(ExactRational::zero());
    }
    Ok(ExactRational::product(&factors))
}
