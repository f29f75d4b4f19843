use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::system::AffineSystem;
use crate::error::{Error, Result};

pub const MAX_COMPLEXITY_FORMS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Complexity {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Complexity::Finite(s) => write!(f, "{s}"),
            Complexity::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Complexity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Complexity::Finite(v) => s.serialize_u64(*v as u64),
            Complexity::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// Least `s` such that, for every form, the remaining forms split into
/// `s + 1` classes none of whose affine-linear spans contains it.
///
/// A form lies in the affine span of a class iff its linear part is a
/// rational combination of the class's linear parts; constants never matter.
/// A single form has complexity 0.
pub fn complexity(system: &AffineSystem) -> Result<Complexity> {
    let t = system.len();
    if t > MAX_COMPLEXITY_FORMS {
        return Err(Error::TooLarge(format!(
            "complexity search handles at most {MAX_COMPLEXITY_FORMS} forms, got {t}"
        )));
    }
    if t == 1 {
        return Ok(Complexity::Finite(0));
    }

    let rows: Vec<Vec<BigRational>> = system
        .forms()
        .iter()
        .map(|f| f.linear_part().iter().map(|a| BigRational::from_integer(a.clone())).collect())
        .collect();
    let full = 1usize << t;
    let rank: Vec<usize> = (0..full).map(|mask| rank_of(&rows, mask)).collect();

    let mut worst = 0;
    for i in 0..t {
        let bit = 1usize << i;
        // subsets of the other forms, re-indexed densely
        let others: Vec<usize> = (0..t).filter(|&j| j != i).collect();
        let n = others.len();
        let expand = |sub: usize| -> usize {
            (0..n).filter(|&k| sub >> k & 1 == 1).map(|k| 1usize << others[k]).sum()
        };
        let avoids: Vec<bool> = (0..1usize << n)
            .map(|sub| {
                let m = expand(sub);
                rank[m | bit] > rank[m]
            })
            .collect();
        match min_cover(&avoids, n) {
            Some(c) => worst = worst.max(c),
            None => return Ok(Complexity::Infinite),
        }
    }
    Ok(Complexity::Finite(worst - 1))
}

/// Fewest classes partitioning `{0..n}` with every class in `good`.
/// `good` is closed under subsets, so partitions suffice for covers.
fn min_cover(good: &[bool], n: usize) -> Option<usize> {
    const INF: usize = usize::MAX;
    let full = 1usize << n;
    let mut best = vec![INF; full];
    best[0] = 0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // enumerate submasks of `rest`, each joined with the lowest bit
        let mut sub = rest;
        loop {
            let class = sub | low;
            if good[class] {
                let prev = best[mask ^ class];
                if prev != INF {
                    best[mask] = best[mask].min(prev + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    (best[full - 1] != INF).then_some(best[full - 1])
}

fn rank_of(rows: &[Vec<BigRational>], mask: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, r)| r.clone())
        .collect();
    rank(&mut m)
}

/// Row rank by exact Gaussian elimination.
pub(crate) fn rank(m: &mut [Vec<BigRational>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for k in c..cols {
                let v = &f * &m[r][k];
                m[i][k] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn integer_rows(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&mut integer_rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mut integer_rows(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2]])), 2);
        assert_eq!(rank(&mut integer_rows(&[&[0, 0]])), 0);
        assert_eq!(rank(&mut integer_rows(&[&[3, 1], &[1, 3]])), 2);
    }

    #[test]
    fn known_complexities() {
        let s = AffineSystem::from_rows(&[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)]).unwrap();
        assert_eq!(complexity(&s).unwrap(), Complexity::Finite(1));
        let twin = AffineSystem::from_rows(&[(&[1], 0), (&[1], 2)]).unwrap();
        assert_eq!(complexity(&twin).unwrap(), Complexity::Infinite);
        let single = AffineSystem::from_rows(&[(&[1, 1], 3)]).unwrap();
        assert_eq!(complexity(&single).unwrap(), Complexity::Finite(0));
        // two independent forms: each avoids the other's span with one class
        let indep = AffineSystem::from_rows(&[(&[1, 0], 0), (&[0, 1], 0)]).unwrap();
        assert_eq!(complexity(&indep).unwrap(), Complexity::Finite(0));
        // k-term progressions have complexity k - 2
        let ap4 = AffineSystem::from_rows(&[(&[1, 0], 0), (&[1, 1], 0), (&[1, 2], 0), (&[1, 3], 0)])
            .unwrap();
        assert_eq!(complexity(&ap4).unwrap(), Complexity::Finite(2));
        let ap3 = AffineSystem::from_rows(&[(&[1, 0], 0), (&[1, 1], 0), (&[1, 2], 0)]).unwrap();
        assert_eq!(complexity(&ap3).unwrap(), Complexity::Finite(1));
    }

    #[test]
    fn too_many_forms() {
        let rows: Vec<(&[i64], i64)> = (0..13).map(|c| (&[1i64, 2][..], c)).collect();
        let s = AffineSystem::from_rows(&rows).unwrap();
        assert!(matches!(complexity(&s), Err(Error::TooLarge(_))));
    }

    #[test]
    fn serializes_infinity() {
        assert_eq!(serde_json::to_string(&Complexity::Infinite).unwrap(), "\"infinity\"");
        assert_eq!(serde_json::to_string(&Complexity::Finite(1)).unwrap(), "1");
    }
}
