use std::collections::{BTreeMap, BTreeSet};

use kronecker::ramsey::{
    dilation_blocks_with, finite_sums, partial_sums_delta, refine_sub_ip, sub_ip_search,
    verify_blocks, DilationStrategy, FiniteSumsFamily,
};
use kronecker::sets::NumberSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nonempty subset sums via a reachability table.
fn subset_sums(xs: &[u64]) -> Vec<bool> {
    let total: u64 = xs.iter().sum();
    let mut reach = vec![false; total as usize + 1];
    for &x in xs {
        for s in (0..=total - x).rev() {
            if reach[s as usize] {
                reach[(s + x) as usize] = true;
            }
        }
        reach[x as usize] = true;
    }
    reach
}

#[test]
fn dilation_lands_inside_finite_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..10_000 {
        let m = rng.random_range(2..=5u64);
        let (strategy, per_block) = if case % 2 == 0 {
            (DilationStrategy::PrefixPigeonhole, m as usize)
        } else {
            (DilationStrategy::ResidueGrouping, (m * (m - 1) + 1) as usize)
        };
        let count = rng.random_range(1..=3usize).min(24 / per_block);
        let needed = per_block * count;
        let len = rng.random_range(needed..=needed + 4).min(24);
        let xs: Vec<u64> = (0..len).map(|_| rng.random_range(1..=60)).collect();
        let family = match dilation_blocks_with(&xs, m, count, strategy) {
            Ok(f) => f,
            Err(e) => panic!("case {case}: {xs:?} m={m} count={count}: {e}"),
        };
        assert_eq!(family.len(), count);
        let ys = family.quotients(m).expect("sums divisible by m");
        let reach = subset_sums(&xs);
        for mask in 1u32..1 << ys.len() {
            let s: u64 = (0..ys.len()).filter(|i| mask >> i & 1 == 1).map(|i| ys[i]).sum();
            assert!(reach[(m * s) as usize], "case {case}: {} not a subset sum", m * s);
        }
    }
}

#[test]
fn partial_sum_differences_are_finite_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1_000 {
        let r = rng.random_range(1..=8usize);
        let xs: Vec<u64> = (0..r).map(|_| rng.random_range(1..=100)).collect();
        let out = partial_sums_delta(&xs).unwrap();
        assert!(out.contained);
        let reach = subset_sums(&xs);
        assert!(out.delta.iter().all(|&d| reach[d as usize]));
        assert_eq!(out.partial_sums.len(), r);
        assert_eq!(*out.partial_sums.last().unwrap(), xs.iter().sum::<u64>());
    }
}

/// Whether some assignment of generator indices to `depth` nonempty blocks
/// (or to no block) makes every finite sum of block sums the same color.
fn brute_force_exists(xs: &[u64], coloring: &BTreeMap<u64, u32>, depth: usize) -> bool {
    let n = xs.len();
    let labels = depth + 1;
    let total = labels.pow(n as u32);
    (0..total).any(|mut code| {
        let mut sums = vec![0u64; depth];
        let mut nonempty = vec![false; depth];
        for &x in xs {
            let l = code % labels;
            code /= labels;
            if l > 0 {
                sums[l - 1] += x;
                nonempty[l - 1] = true;
            }
        }
        if !nonempty.iter().all(|&b| b) {
            return false;
        }
        let colors: BTreeSet<u32> = (1u32..1 << depth)
            .map(|mask| {
                let s: u64 = (0..depth).filter(|i| mask >> i & 1 == 1).map(|i| sums[i]).sum();
                coloring[&s]
            })
            .collect();
        colors.len() == 1
    })
}

fn random_coloring(family: &FiniteSumsFamily, colors: u32, rng: &mut ChaCha8Rng) -> BTreeMap<u64, u32> {
    family.sums().iter().map(|&v| (v, rng.random_range(0..colors))).collect()
}

#[test]
fn sub_ip_search_is_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut found = 0;
    for _ in 0..600 {
        let r = rng.random_range(2..=6usize);
        let xs: Vec<u64> = (0..r).map(|_| rng.random_range(1..=30)).collect();
        let family = finite_sums(&xs).unwrap();
        let coloring = random_coloring(&family, rng.random_range(1..=3), &mut rng);
        let depth = rng.random_range(1..=r.min(3));
        let cert = sub_ip_search(&family, &coloring, depth).unwrap();
        if let Some(c) = &cert {
            found += 1;
            assert!(verify_blocks(&family, c.blocks(), &coloring, depth));
        }
        assert_eq!(cert.is_some(), brute_force_exists(&xs, &coloring, depth), "{xs:?} depth {depth}");
    }
    assert!(found > 100);
}

#[test]
fn verify_rejects_bad_certificates() {
    let family = finite_sums(&[1, 2, 4, 8]).unwrap();
    let parity: BTreeMap<u64, u32> = family.sums().iter().map(|&v| (v, v.count_ones() % 2)).collect();
    assert!(verify_blocks(&family, &[vec![0, 1], vec![2, 3]], &parity, 2));
    assert!(!verify_blocks(&family, &[vec![0], vec![1]], &parity, 2));
    assert!(!verify_blocks(&family, &[vec![0, 1], vec![1, 2]], &parity, 2));
    assert!(!verify_blocks(&family, &[vec![0, 1], vec![9]], &parity, 2));
    assert!(!verify_blocks(&family, &[vec![0, 1]], &parity, 2));
}

#[test]
fn refinement_lands_in_every_set() {
    let gens: Vec<u64> = (0..12).map(|i| 1 + 2 * i).collect();
    let evens = |n: u64| n.is_multiple_of(2);
    let mult3 = |n: u64| n.is_multiple_of(3);
    let sets: [&dyn NumberSet; 2] = [&evens, &mult3];
    let bf = refine_sub_ip(&gens, &sets, 2).unwrap().expect("nested family exists");
    let reach = subset_sums(&gens);
    for mask in 1u32..4 {
        let s: u64 = (0..2).filter(|i| mask >> i & 1 == 1).map(|i| bf.sums()[i]).sum();
        assert!(evens(s) && mult3(s), "{s}");
        assert!(reach[s as usize]);
    }
}
