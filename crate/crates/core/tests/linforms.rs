use kronecker::linforms::{
    admissible_witness, beta_infinity_mc, build_kronecker_system, complexity, gtz_empirical_count,
    local_factor, local_factor_enumerated, point_is_admissible, singular_product, AffineSystem,
    Complexity,
};
use kronecker::primes::{sieve, small_primes};
use kronecker::ExactRational;
use proptest::prelude::*;

type Row = (Vec<i64>, i64);

fn system(rows: &[Row]) -> AffineSystem {
    let refs: Vec<(&[i64], i64)> = rows.iter().map(|(l, c)| (l.as_slice(), *c)).collect();
    AffineSystem::from_rows(&refs).unwrap()
}

/// Rank by fraction-free elimination over i128.
fn int_rank(rows: &[&Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (n, cols) = (m.len(), m.first().map_or(0, |r| r.len()));
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..n).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        for i in rank + 1..n {
            let (a, b) = (m[rank][c], m[i][c]);
            for k in 0..cols {
                m[i][k] = m[i][k] * a - m[rank][k] * b;
            }
            let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Exhaustive label assignment of the other forms into `k` classes.
fn brute_complexity(rows: &[Row]) -> Option<usize> {
    let t = rows.len();
    if t == 1 {
        return Some(0);
    }
    let mut worst = 0;
    for i in 0..t {
        let others: Vec<usize> = (0..t).filter(|&j| j != i).collect();
        let fits = |k: usize| -> bool {
            let total = k.pow(others.len() as u32);
            (0..total).any(|mut code| {
                let mut classes: Vec<Vec<&Vec<i64>>> = vec![Vec::new(); k];
                for &j in &others {
                    classes[code % k].push(&rows[j].0);
                    code /= k;
                }
                classes.iter().all(|cls| {
                    let mut with = cls.clone();
                    with.push(&rows[i].0);
                    int_rank(&with) > int_rank(cls)
                })
            })
        };
        let k = (1..=others.len()).find(|&k| fits(k))?;
        worst = worst.max(k);
    }
    Some(worst - 1)
}

fn rows_strategy(d: usize, t: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, d), -5i64..=5), t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn complexity_matches_exhaustive_covers(rows in (1usize..=4).prop_flat_map(|d| rows_strategy(d, 1..=6))) {
        let got = complexity(&system(&rows)).unwrap();
        let expected = match brute_complexity(&rows) {
            Some(s) => Complexity::Finite(s),
            None => Complexity::Infinite,
        };
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn infinite_iff_proportional_pair(rows in (1usize..=4).prop_flat_map(|d| rows_strategy(d, 2..=6))) {
        let proportional = (0..rows.len()).any(|i| {
            (0..i).any(|j| {
                let (a, b) = (&rows[i].0, &rows[j].0);
                int_rank(&[a]) == 0 || int_rank(&[b]) == 0 || int_rank(&[a, b]) == 1
            })
        });
        let c = complexity(&system(&rows)).unwrap();
        prop_assert_eq!(c == Complexity::Infinite, proportional);
    }

    #[test]
    fn complexity_is_permutation_invariant(
        rows in (1usize..=3).prop_flat_map(|d| rows_strategy(d, 2..=6)),
        seed in any::<u64>(),
    ) {
        let s = system(&rows);
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut x = seed;
        for i in (1..order.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (x >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(complexity(&s).unwrap(), complexity(&s.permuted(&order)).unwrap());
    }

    #[test]
    fn witness_exists_iff_local_factor_nonzero(rows in (1usize..=2).prop_flat_map(|d| rows_strategy(d, 1..=3))) {
        let s = system(&rows);
        for p in small_primes(50) {
            let beta = local_factor(&s, p).unwrap();
            let w = admissible_witness(&s, p).unwrap();
            prop_assert_eq!(w.is_none(), beta.is_zero(), "p = {}", p);
            if let Some(w) = w {
                prop_assert!(point_is_admissible(&s, &w, p));
            }
        }
    }

    #[test]
    fn json_round_trip(rows in (1usize..=4).prop_flat_map(|d| rows_strategy(d, 1..=5))) {
        let s = system(&rows);
        prop_assert_eq!(AffineSystem::from_json(&s.to_json().unwrap()).unwrap(), s);
    }
}

#[test]
fn shifted_pair_closed_form() {
    for h in 1..=50i64 {
        let s = system(&[(vec![1], 0), (vec![1], h)]);
        for p in small_primes(100) {
            let expected = if h % p as i64 == 0 {
                ExactRational::new(p, p - 1)
            } else {
                let q = (p - 1) * (p - 1);
                ExactRational::new(q - 1, q)
            };
            assert_eq!(local_factor_enumerated(&s, p, 1_000_000).unwrap(), expected, "h = {h}, p = {p}");
            assert_eq!(local_factor(&s, p).unwrap(), expected);
        }
    }
}

#[test]
fn kronecker_systems_are_admissible() {
    for r in 2..=10 {
        let s = build_kronecker_system(r).unwrap();
        let mut point = vec![1u64; r as usize];
        point.push(0);
        for p in small_primes(100) {
            assert!(point_is_admissible(&s, &point, p), "r = {r}, p = {p}");
            assert!(!local_factor(&s, p).unwrap().is_zero(), "r = {r}, p = {p}");
        }
    }
}

#[test]
fn kronecker_local_factors_agree_with_enumeration() {
    let s = build_kronecker_system(3).unwrap();
    for p in small_primes(11) {
        assert_eq!(local_factor(&s, p).unwrap(), local_factor_enumerated(&s, p, 10_000_000).unwrap());
    }
}

#[test]
fn three_term_progression_area() {
    let s = system(&[(vec![1, 0], 0), (vec![1, 1], 0), (vec![1, 2], 0)]);
    let n = 100u64;
    let est = beta_infinity_mc(&s, n, 400_000, 11).unwrap();
    let exact = 5.0 * (n * n) as f64 / 4.0;
    assert!((est.estimate / exact - 1.0).abs() < 0.01, "{} vs {exact}", est.estimate);
    assert_eq!(est, beta_infinity_mc(&s, n, 400_000, 11).unwrap());
    assert!(beta_infinity_mc(&s, n, 999, 0).is_err());
}

#[test]
fn singular_product_of_single_form_is_one() {
    let s = system(&[(vec![1], 0)]);
    assert_eq!(singular_product(&s, 1000).unwrap(), ExactRational::one());
}

#[test]
fn adjacent_integers_have_no_main_term() {
    let s = system(&[(vec![1], 0), (vec![1], 1)]);
    let table = sieve(2_000).unwrap();
    let g = gtz_empirical_count(&s, 1_000, &table, 1_000).unwrap();
    assert_eq!(g.predicted, 0.0);
    assert!(g.actual <= 1);
}
