//! Representation counts r_N(d) = #{p <= N - d : p and p + d prime} and the
//! thresholded "empirical Kronecker" sets built from them.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::primes::PrimeTable;
use crate::sets::NumberSet;

/// Counts prime pairs `(p, p + d)` inside the table by AND-ing the table with
/// itself shifted down by `d` bits and taking population counts.
pub fn representation_count(table: &PrimeTable, d: u64) -> Result<u64> {
    if d == 0 || d >= table.limit() {
        return invalid(format!("gap {d} must satisfy 1 <= d < {}", table.limit()));
    }
    Ok(shifted_and_popcount(table.words(), d))
}

fn shifted_and_popcount(words: &[u64], d: u64) -> u64 {
    let q = (d >> 6) as usize;
    let s = (d & 63) as u32;
    let n = words.len();
    if q >= n {
        return 0;
    }
    let mut total = 0u64;
    if s == 0 {
        for w in 0..n - q {
            total += (words[w] & words[w + q]).count_ones() as u64;
        }
    } else {
        for w in 0..n - q {
            let lo = words[w + q] >> s;
            let hi = if w + q + 1 < n { words[w + q + 1] << (64 - s) } else { 0 };
            total += (words[w] & (lo | hi)).count_ones() as u64;
        }
    }
    total
}

/// Difference counts for every even gap up to `d_max`, with the membership
/// view `{even d : r_N(d) >= threshold}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceProfile {
    #[serde(rename = "limit")]
    table_limit: u64,
    threshold: u64,
    #[serde(skip)]
    d_max: u64,
    counts: BTreeMap<u64, u64>,
    members: Vec<u64>,
}

impl DifferenceProfile {
    pub fn table_limit(&self) -> u64 {
        self.table_limit
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, d: u64) -> Option<u64> {
        self.counts.get(&d).copied()
    }

    /// Sorted members.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// Same counts, different threshold.
    pub fn with_threshold(&self, threshold: u64) -> Result<DifferenceProfile> {
        if threshold == 0 {
            return invalid("threshold must be at least 1");
        }
        let members = self
            .counts
            .iter()
            .filter(|&(_, &c)| c >= threshold)
            .map(|(&d, _)| d)
            .collect();
        Ok(DifferenceProfile { threshold, members, ..self.clone() })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profile serializes")
    }

    /// CSV with columns `d,count,member`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_io = |e: csv::Error| Error::Io(e.into());
        w.write_record(["d", "count", "member"]).map_err(to_io)?;
        for (&d, &c) in &self.counts {
            let member = c >= self.threshold;
            w.write_record([d.to_string(), c.to_string(), member.to_string()])
                .map_err(to_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Membership is only known up to `d_max`; larger numbers read as absent.
impl NumberSet for DifferenceProfile {
    fn contains(&self, n: u64) -> bool {
        n.is_multiple_of(2) && self.counts.get(&n).is_some_and(|&c| c >= self.threshold)
    }
}

pub fn kronecker_set(table: &PrimeTable, d_max: u64, threshold: u64) -> Result<DifferenceProfile> {
    if d_max >= table.limit() {
        return invalid(format!("d_max {d_max} must be below the table limit {}", table.limit()));
    }
    if threshold == 0 {
        return invalid("threshold must be at least 1");
    }
    let evens: Vec<u64> = (1..=d_max / 2).map(|k| 2 * k).collect();
    let words = table.words();
    let counts: BTreeMap<u64, u64> = evens
        .par_iter()
        .map(|&d| (d, shifted_and_popcount(words, d)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let members = counts
        .iter()
        .filter(|&(_, &c)| c >= threshold)
        .map(|(&d, _)| d)
        .collect();
    Ok(DifferenceProfile { table_limit: table.limit(), threshold, d_max, counts, members })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapAnalysis {
    pub max_gap: u64,
    /// gap length -> number of consecutive member pairs at that distance
    pub histogram: BTreeMap<u64, u64>,
}

/// Gaps between consecutive members. A single member gives `max_gap = 0`.
pub fn gap_analysis(members: &[u64]) -> Result<GapAnalysis> {
    if members.is_empty() {
        return Err(Error::EmptySet("membership is empty; no gaps to analyse".into()));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut histogram = BTreeMap::new();
    let mut max_gap = 0;
    for w in sorted.windows(2) {
        let g = w[1] - w[0];
        max_gap = max_gap.max(g);
        *histogram.entry(g).or_insert(0) += 1;
    }
    Ok(GapAnalysis { max_gap, histogram })
}
