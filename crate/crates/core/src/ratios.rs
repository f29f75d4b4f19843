//! Writing a positive rational `m/n` as `a/b` with `a` and `b` in a set.
//!
//! With `gcd(m, n) = 1` every solution of `a/b = m/n` is `a = m t`,
//! `b = n t`, so the search runs over the scale `t`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ramsey::{dilation_blocks, fs_of};
use crate::sets::NumberSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RatioCertificate {
    /// reduced `(m, n)`
    pub target: (u64, u64),
    pub a: u64,
    pub b: u64,
    pub scale: u64,
}

impl RatioCertificate {
    /// Re-checks `a n = b m` and both memberships.
    pub fn verify<S: NumberSet + ?Sized>(&self, set: &S) -> bool {
        let (m, n) = self.target;
        self.a as u128 * n as u128 == self.b as u128 * m as u128
            && self.a == m * self.scale
            && self.b == n * self.scale
            && set.contains(self.a)
            && set.contains(self.b)
    }
}

fn reduce(m: u64, n: u64) -> Result<(u64, u64)> {
    if m == 0 || n == 0 {
        return invalid(format!("numerator and denominator must be positive, got {m}/{n}"));
    }
    let g = m.gcd(&n);
    Ok((m / g, n / g))
}

/// Least `t <= t_max` with `m t` and `n t` both in `set`, after reducing `m/n`.
pub fn represent_rational<S: NumberSet + ?Sized>(
    set: &S,
    m: u64,
    n: u64,
    t_max: u64,
) -> Result<Option<RatioCertificate>> {
    let (m, n) = reduce(m, n)?;
    Ok((1..=t_max)
        .find(|&t| set.contains(m * t) && set.contains(n * t))
        .map(|t| RatioCertificate { target: (m, n), a: m * t, b: n * t, scale: t }))
}

/// Cross-check through IP-set dilation. `ip_generators` spans the IP set
/// `B = FS(ip_generators)`. Blocks of the generators with sums divisible by
/// `n` give `y` with `n FS(y) ⊆ B`; the result is the least `z` in `FS(y)`
/// with `m z` and `n z` both in `set`.
pub fn represent_via_dilation<S: NumberSet + ?Sized>(
    set: &S,
    ip_generators: &[u64],
    m: u64,
    n: u64,
    blocks: usize,
) -> Result<Option<RatioCertificate>> {
    let (m, n) = reduce(m, n)?;
    let ys: Vec<u64> = if n == 1 {
        ip_generators.iter().copied().take(blocks).collect()
    } else {
        let fam = dilation_blocks(ip_generators, n, blocks)?;
        fam.quotients(n).expect("dilation block sums are divisible by n")
    };
    Ok(fs_of(&ys)
        .into_iter()
        .find(|&z| set.contains(m * z) && set.contains(n * z))
        .map(|z| RatioCertificate { target: (m, n), a: m * z, b: n * z, scale: z }))
}

/// The first `count` members of `set` in increasing order, scanning up to `limit`.
pub fn canonical_ip_generators<S: NumberSet + ?Sized>(set: &S, count: usize, limit: u64) -> Vec<u64> {
    (1..=limit).filter(|&x| set.contains(x)).take(count).collect()
}
