//! Difference sets, progression windows and the density lower bound for sets
//! that meet every difference set of size `r`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::primes::small_primes;
use crate::rational::ExactRational;
use crate::sets::NumberSet;

/// Positive differences `{a - b : a, b in S, a > b}`.
pub fn delta_of(set: &BTreeSet<u64>) -> Result<BTreeSet<u64>> {
    if set.len() < 2 {
        return invalid(format!("difference set needs at least 2 elements, got {}", set.len()));
    }
    let xs: Vec<u64> = set.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (i, &b) in xs.iter().enumerate() {
        for &a in &xs[i + 1..] {
            out.insert(a - b);
        }
    }
    Ok(out)
}

/// The window `{a, 2a, ..., (r-1)a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionWindow {
    pub a: u64,
    pub r: u64,
}

impl ProgressionWindow {
    pub fn new(a: u64, r: u64) -> Result<Self> {
        if a == 0 {
            return invalid("window step must be positive");
        }
        if r < 2 {
            return invalid(format!("window parameter r must be at least 2, got {r}"));
        }
        Ok(ProgressionWindow { a, r })
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.r).map(move |j| j * self.a)
    }

    pub fn max_element(&self) -> u64 {
        (self.r - 1) * self.a
    }

    /// `{a, 2a, ..., ra}`, whose difference set is this window.
    pub fn generating_set(&self) -> BTreeSet<u64> {
        (1..=self.r).map(|j| j * self.a).collect()
    }
}

/// Least `j` in `1..r` with `j * a` in the set.
pub fn progression_witness<S: NumberSet + ?Sized>(set: &S, a: u64, r: u64) -> Option<u64> {
    (1..r).find(|&j| set.contains(j * a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefuteOutcome {
    pub mode: SearchMode,
    /// Candidate sets examined before stopping.
    pub examined: u64,
    /// A set `S` of size `r` in `[1, M]` whose differences all avoid the set.
    pub witness: Option<Vec<u64>>,
}

/// Looks for an `r`-element `S` in `[1, m]` with `Δ(S)` disjoint from `set`.
///
/// Every `r`-subset is tried in lexicographic order when there are at most
/// `budget` of them; otherwise `budget` uniform random subsets are drawn from
/// a ChaCha8 stream seeded with `seed`.
pub fn delta_star_refute<S: NumberSet + ?Sized>(
    set: &S,
    r: u64,
    m: u64,
    budget: u64,
    seed: u64,
) -> Result<RefuteOutcome> {
    if r < 2 {
        return invalid(format!("r must be at least 2, got {r}"));
    }
    if m < r {
        return invalid(format!("M = {m} must be at least r = {r}"));
    }
    let r = r as usize;
    // Differences are < m, so membership is probed once per value.
    let hit: Vec<bool> = (0..m).map(|d| d > 0 && set.contains(d)).collect();
    let avoids = |s: &[u64]| -> bool {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if hit[s[i].abs_diff(s[j]) as usize] {
                    return false;
                }
            }
        }
        true
    };

    if binomial_at_most(m, r as u64, budget) {
        let mut combo: Vec<u64> = (1..=r as u64).collect();
        let mut examined = 0;
        loop {
            examined += 1;
            if avoids(&combo) {
                return Ok(RefuteOutcome {
                    mode: SearchMode::Exhaustive,
                    examined,
                    witness: Some(combo),
                });
            }
            if !next_combination(&mut combo, m) {
                return Ok(RefuteOutcome { mode: SearchMode::Exhaustive, examined, witness: None });
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<u64> = (1..=m).collect();
    for examined in 1..=budget {
        let (chosen, _) = pool.partial_shuffle(&mut rng, r);
        if avoids(chosen) {
            let mut w = chosen.to_vec();
            w.sort_unstable();
            return Ok(RefuteOutcome { mode: SearchMode::Sampled, examined, witness: Some(w) });
        }
    }
    Ok(RefuteOutcome { mode: SearchMode::Sampled, examined: budget, witness: None })
}

/// Whether C(n, k) <= bound, without overflowing.
fn binomial_at_most(n: u64, k: u64, bound: u64) -> bool {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > bound as u128 {
            return false;
        }
    }
    true
}

fn next_combination(combo: &mut [u64], n: u64) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - 1 - i) as u64 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityBound {
    pub r: u64,
    /// Lower density among all positive integers.
    pub per_integer: ExactRational,
    /// Lower density among positive even integers; twice `per_integer`.
    pub per_even: ExactRational,
}

/// `(1/(r-1)) * prod_{p <= r-1} (1 - 1/p)` and twice that among evens.
pub fn density_lower_bound(r: u64) -> Result<DensityBound> {
    if r < 3 {
        return invalid(format!("density bound needs r >= 3, got {r}"));
    }
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(r - 1);
    for p in small_primes(r - 1) {
        num *= p - 1;
        den *= p;
    }
    let per_integer = ExactRational::new(num, den);
    let per_even = &per_integer * &ExactRational::from_integer(2);
    Ok(DensityBound { r, per_integer, per_even })
}

/// `#{a <= N/(r-1) : gcd(a, prod_{p <= r-1} p) = 1}`: the number of pairwise
/// disjoint windows `A_r(a)` that fit in `[1, N]`.
pub fn disjoint_family_count(n: u64, r: u64) -> Result<u64> {
    if r < 3 {
        return invalid(format!("r must be at least 3, got {r}"));
    }
    if n < r - 1 {
        return invalid(format!("N = {n} must be at least r - 1 = {}", r - 1));
    }
    let primes = small_primes(r - 1);
    let top = n / (r - 1);
    Ok((1..=top).filter(|a| primes.iter().all(|p| a % p != 0)).count() as u64)
}
