//! Finite-sum (IP_r) sets and block certificates.
//!
//! Generator indices are 0-based throughout. A block family `H_1, ..., H_k`
//! is a list of pairwise-disjoint, nonempty index sets; its derived
//! generators are the block sums `y_i = sum_{t in H_i} x_t`, and
//! `FS(y) ⊆ FS(x)`.
//!
//! Block families are enumerated canonically: blocks are ordered by their
//! smallest index, and each block ranges over the unused indices in
//! lexicographic order of its sorted index list. Every search below returns
//! the first family in that order, so results are deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::density::delta_of;
use crate::error::{invalid, Error, Result};
use crate::sets::NumberSet;

pub const MAX_GENERATORS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSumsFamily {
    generators: Vec<u64>,
    fs: BTreeSet<u64>,
}

impl FiniteSumsFamily {
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn sums(&self) -> &BTreeSet<u64> {
        &self.fs
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn check_generators(generators: &[u64]) -> Result<()> {
    if generators.len() > MAX_GENERATORS {
        return Err(Error::TooLarge(format!(
            "{} generators exceeds the limit of {MAX_GENERATORS}",
            generators.len()
        )));
    }
    if generators.contains(&0) {
        return invalid("generators must be positive");
    }
    Ok(())
}

/// All sums over nonempty index subsets.
pub fn finite_sums(generators: &[u64]) -> Result<FiniteSumsFamily> {
    check_generators(generators)?;
    Ok(FiniteSumsFamily { generators: generators.to_vec(), fs: fs_of(generators) })
}

pub(crate) fn fs_of(generators: &[u64]) -> BTreeSet<u64> {
    let mut fs = BTreeSet::new();
    for &x in generators {
        let shifted: Vec<u64> = fs.iter().map(|&s| s + x).collect();
        fs.extend(shifted);
        fs.insert(x);
    }
    fs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialSumsDelta {
    pub partial_sums: Vec<u64>,
    pub delta: BTreeSet<u64>,
    pub contained: bool,
}

/// Partial sums `S = {x_1, x_1 + x_2, ...}` and `Δ(S)`, together with whether
/// `Δ(S) ⊆ FS(x)`. Each difference is a sum over a run of consecutive
/// generators, so `contained` always holds.
pub fn partial_sums_delta(generators: &[u64]) -> Result<PartialSumsDelta> {
    let family = finite_sums(generators)?;
    let partial_sums: Vec<u64> = generators
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let set: BTreeSet<u64> = partial_sums.iter().copied().collect();
    let delta = if set.len() >= 2 { delta_of(&set)? } else { BTreeSet::new() };
    let contained = delta.is_subset(family.sums());
    Ok(PartialSumsDelta { partial_sums, delta, contained })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockFamily {
    blocks: Vec<Vec<usize>>,
    sums: Vec<u64>,
}

impl BlockFamily {
    /// Builds a family from explicit blocks, checking disjointness and range.
    pub fn new(generators: &[u64], blocks: Vec<Vec<usize>>) -> Result<BlockFamily> {
        let mut seen = vec![false; generators.len()];
        let mut sums = Vec::with_capacity(blocks.len());
        for block in &blocks {
            if block.is_empty() {
                return invalid("blocks must be nonempty");
            }
            let mut s = 0u64;
            for &i in block {
                if i >= generators.len() {
                    return invalid(format!("index {i} outside {} generators", generators.len()));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return invalid(format!("index {i} appears in two blocks"));
                }
                s += generators[i];
            }
            sums.push(s);
        }
        Ok(BlockFamily { blocks, sums })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block sums, i.e. the derived generators `y_i`.
    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `y_i = sum_i / m`, for families whose block sums are all divisible by `m`.
    pub fn quotients(&self, m: u64) -> Option<Vec<u64>> {
        self.sums.iter().map(|&s| (s % m == 0).then_some(s / m)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DilationStrategy {
    /// Two of the `m + 1` prefix sums of a window agree mod `m`; the run
    /// between them is a block of at most `m` consecutive elements.
    #[default]
    PrefixPigeonhole,
    /// Buckets elements by residue mod `m` and closes a block once a bucket
    /// holds `m` elements (a residue-0 element is a block by itself). May
    /// need up to `m(m - 1) + 1` elements per block.
    ResidueGrouping,
}

pub fn dilation_blocks(xs: &[u64], m: u64, count: usize) -> Result<BlockFamily> {
    dilation_blocks_with(xs, m, count, DilationStrategy::default())
}

/// `count` disjoint blocks of `xs` whose sums are multiples of `m`, so that
/// with `y_i = sum_i / m` every element of `m * FS(y)` lies in `FS(xs)`.
pub fn dilation_blocks_with(
    xs: &[u64],
    m: u64,
    count: usize,
    strategy: DilationStrategy,
) -> Result<BlockFamily> {
    if m < 2 {
        return invalid(format!("modulus must be at least 2, got {m}"));
    }
    if count == 0 {
        return invalid("block count must be at least 1");
    }
    if (xs.len() as u64) < m * count as u64 {
        return invalid(format!(
            "sequence of length {} is shorter than m * count = {}",
            xs.len(),
            m * count as u64
        ));
    }
    if xs.contains(&0) {
        return invalid("sequence entries must be positive");
    }
    let blocks = match strategy {
        DilationStrategy::PrefixPigeonhole => prefix_blocks(xs, m, count),
        DilationStrategy::ResidueGrouping => residue_blocks(xs, m, count)?,
    };
    BlockFamily::new(xs, blocks)
}

fn prefix_blocks(xs: &[u64], m: u64, count: usize) -> Vec<Vec<usize>> {
    let mut blocks = Vec::with_capacity(count);
    let mut start = 0;
    while blocks.len() < count {
        // seen[residue] = first prefix end (exclusive) with that residue
        let mut seen = vec![None; m as usize];
        seen[0] = Some(start);
        let mut acc = 0u64;
        let mut i = start;
        loop {
            acc = (acc + xs[i] % m) % m;
            if let Some(from) = seen[acc as usize] {
                blocks.push((from..=i).collect());
                start = i + 1;
                break;
            }
            seen[acc as usize] = Some(i + 1);
            i += 1;
        }
    }
    blocks
}

fn residue_blocks(xs: &[u64], m: u64, count: usize) -> Result<Vec<Vec<usize>>> {
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m as usize];
    let mut blocks = Vec::with_capacity(count);
    for (i, &x) in xs.iter().enumerate() {
        let r = (x % m) as usize;
        if r == 0 {
            blocks.push(vec![i]);
        } else {
            buckets[r].push(i);
            if buckets[r].len() as u64 == m {
                blocks.push(std::mem::take(&mut buckets[r]));
            }
        }
        if blocks.len() == count {
            return Ok(blocks);
        }
    }
    invalid(format!(
        "residue grouping found only {} of {count} blocks in {} elements",
        blocks.len(),
        xs.len()
    ))
}

/// Depth-first search over canonical block families.
struct BlockSearch<'a, F> {
    gens: &'a [u64],
    depth: usize,
    /// Class of a value, or `None` if the value is unacceptable outright.
    classify: F,
    target: Option<u32>,
    fixed_target: bool,
    used: Vec<bool>,
    fs: Vec<u64>,
    blocks: Vec<Vec<usize>>,
}

impl<'a, F: Fn(u64) -> Option<u32>> BlockSearch<'a, F> {
    fn new(gens: &'a [u64], depth: usize, classify: F, target: Option<u32>) -> Self {
        BlockSearch {
            gens,
            depth,
            classify,
            fixed_target: target.is_some(),
            target,
            used: vec![false; gens.len()],
            fs: Vec::new(),
            blocks: Vec::new(),
        }
    }

    fn run(mut self) -> Option<Vec<Vec<usize>>> {
        if self.depth == 0 || self.depth > self.gens.len() {
            return None;
        }
        self.next_block(None).then_some(self.blocks)
    }

    fn next_block(&mut self, floor: Option<usize>) -> bool {
        if self.blocks.len() == self.depth {
            return true;
        }
        let lo = floor.map_or(0, |f| f + 1);
        let avail: Vec<usize> = (lo..self.gens.len()).filter(|&i| !self.used[i]).collect();
        // The remaining blocks each need a distinct minimum from `avail`.
        if avail.len() < self.depth - self.blocks.len() {
            return false;
        }
        let mut current = Vec::new();
        self.extend_block(&avail, 0, &mut current, 0)
    }

    /// Grows `current` through `avail[pos..]` in lexicographic order, trying
    /// each prefix as the next block.
    fn extend_block(&mut self, avail: &[usize], pos: usize, current: &mut Vec<usize>, sum: u64) -> bool {
        for k in pos..avail.len() {
            let idx = avail[k];
            current.push(idx);
            let s = sum + self.gens[idx];
            if self.try_block(current, s) || self.extend_block(avail, k + 1, current, s) {
                return true;
            }
            current.pop();
        }
        false
    }

    fn try_block(&mut self, block: &[usize], y: u64) -> bool {
        let first = self.blocks.is_empty() && !self.fixed_target;
        let Some(cls) = (self.classify)(y) else { return false };
        if first {
            self.target = Some(cls);
        } else if self.target != Some(cls) {
            return false;
        }
        let target = self.target;
        let base = self.fs.len();
        for i in 0..base {
            if (self.classify)(self.fs[i] + y) != target {
                if first {
                    self.target = None;
                }
                return false;
            }
        }
        for i in 0..base {
            let v = self.fs[i] + y;
            self.fs.push(v);
        }
        self.fs.push(y);
        for &i in block {
            self.used[i] = true;
        }
        self.blocks.push(block.to_vec());

        if self.next_block(Some(block[0])) {
            return true;
        }

        self.blocks.pop();
        for &i in block {
            self.used[i] = false;
        }
        self.fs.truncate(base);
        if first {
            self.target = None;
        }
        false
    }
}

/// Searches for `depth` disjoint blocks whose finite sums all share a color.
/// Exhaustive: `None` means no such family exists among the generators.
pub fn sub_ip_search(
    family: &FiniteSumsFamily,
    coloring: &BTreeMap<u64, u32>,
    depth: usize,
) -> Result<Option<BlockFamily>> {
    if depth == 0 || depth > family.len() {
        return invalid(format!("depth must be in 1..={}, got {depth}", family.len()));
    }
    if let Some(v) = family.sums().iter().find(|v| !coloring.contains_key(v)) {
        return invalid(format!("coloring does not cover finite sum {v}"));
    }
    let search = BlockSearch::new(family.generators(), depth, |v| coloring.get(&v).copied(), None);
    match search.run() {
        Some(blocks) => Ok(Some(BlockFamily::new(family.generators(), blocks)?)),
        None => Ok(None),
    }
}

/// Checks a sub-IP certificate: `depth` nonempty disjoint in-range blocks
/// whose `2^depth - 1` finite sums all carry the same color.
pub fn verify_blocks(
    family: &FiniteSumsFamily,
    blocks: &[Vec<usize>],
    coloring: &BTreeMap<u64, u32>,
    depth: usize,
) -> bool {
    if blocks.len() != depth || depth == 0 {
        return false;
    }
    let Ok(bf) = BlockFamily::new(family.generators(), blocks.to_vec()) else {
        return false;
    };
    let mut colors = fs_of(bf.sums()).into_iter().map(|v| coloring.get(&v));
    match colors.next() {
        Some(Some(c)) => colors.all(|x| x == Some(c)),
        _ => false,
    }
}

/// Nested extraction: a sub-IP family inside the first set, then one inside
/// the second set built from the first family's block sums, and so on.
/// Blocks compose by union. At each level the largest feasible number of
/// blocks (at least `depth`) is kept so later levels have room; the result
/// is the first `depth` blocks of the final family.
pub fn refine_sub_ip(
    generators: &[u64],
    sets: &[&dyn NumberSet],
    depth: usize,
) -> Result<Option<BlockFamily>> {
    check_generators(generators)?;
    if depth == 0 || depth > generators.len() {
        return invalid(format!("depth must be in 1..={}, got {depth}", generators.len()));
    }
    let mut blocks: Vec<Vec<usize>> = (0..generators.len()).map(|i| vec![i]).collect();
    let mut gens = generators.to_vec();
    for set in sets {
        let classify = |v: u64| set.contains(v).then_some(0);
        let found = (depth..=gens.len())
            .rev()
            .find_map(|k| BlockSearch::new(&gens, k, classify, Some(0)).run());
        let Some(level) = found else { return Ok(None) };
        let composed: Vec<Vec<usize>> = level
            .iter()
            .map(|h| {
                let mut b: Vec<usize> = h.iter().flat_map(|&t| blocks[t].iter().copied()).collect();
                b.sort_unstable();
                b
            })
            .collect();
        gens = level.iter().map(|h| h.iter().map(|&t| gens[t]).sum()).collect();
        blocks = composed;
    }
    blocks.truncate(depth);
    Ok(Some(BlockFamily::new(generators, blocks)?))
}
