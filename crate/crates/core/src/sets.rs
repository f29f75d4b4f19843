//! Membership predicates over the positive integers.

use std::collections::{BTreeSet, HashSet};

/// A decidable set of positive integers.
pub trait NumberSet {
    fn contains(&self, n: u64) -> bool;
}

impl<F: Fn(u64) -> bool> NumberSet for F {
    fn contains(&self, n: u64) -> bool {
        self(n)
    }
}

impl NumberSet for BTreeSet<u64> {
    fn contains(&self, n: u64) -> bool {
        BTreeSet::contains(self, &n)
    }
}

impl NumberSet for HashSet<u64> {
    fn contains(&self, n: u64) -> bool {
        HashSet::contains(self, &n)
    }
}

/// Positive even numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Evens;

impl NumberSet for Evens {
    fn contains(&self, n: u64) -> bool {
        n > 0 && n.is_multiple_of(2)
    }
}

/// Every positive integer.
#[derive(Clone, Copy, Debug, Default)]
pub struct Everything;

impl NumberSet for Everything {
    fn contains(&self, n: u64) -> bool {
        n > 0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Nothing;

impl NumberSet for Nothing {
    fn contains(&self, _: u64) -> bool {
        false
    }
}
