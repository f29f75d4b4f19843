//! Segmented Eratosthenes sieve over a one-bit-per-integer table.
//!
//! Bit `i` of the table is set iff `i` is prime. Bits past `limit` in the last
//! word are always zero, which the difference counters rely on.
//!
//! Cache layout: `b"KRNSV1\0"`, a version byte (`0x01`), the limit as a
//! little-endian `u64`, then the bit vector packed least-significant-bit
//! first, zero padded to a whole byte.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

const CACHE_MAGIC: &[u8; 7] = b"KRNSV1\0";
const CACHE_VERSION: u8 = 0x01;
const CACHE_HEADER_LEN: usize = 16;

#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    segment_size: u64,
    words: Vec<u64>,
}

/// Tables compare by content; the construction segment size is not part of it.
impl PartialEq for PrimeTable {
    fn eq(&self, other: &Self) -> bool {
        self.limit == other.limit && self.words == other.words
    }
}

impl Eq for PrimeTable {}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    /// Raw words; bit `i % 64` of word `i / 64` is integer `i`.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Primality of `n`; anything past the limit reads as composite.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        if n > self.limit {
            return false;
        }
        (self.words[(n >> 6) as usize] >> (n & 63)) & 1 == 1
    }

    /// pi(x): primes up to and including `x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::OutOfRange { value: x, limit: self.limit });
        }
        let full = (x >> 6) as usize;
        let mut count: u64 = self.words[..full].iter().map(|w| w.count_ones() as u64).sum();
        let rem = (x & 63) as u32;
        let mask = if rem == 63 { u64::MAX } else { (1u64 << (rem + 1)) - 1 };
        count += (self.words[full] & mask).count_ones() as u64;
        Ok(count)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = (wi as u64) << 6;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&[CACHE_VERSION])?;
        out.write_all(&self.limit.to_le_bytes())?;
        let nbytes = byte_len(self.limit);
        let mut buf = Vec::with_capacity(nbytes);
        for w in &self.words {
            buf.extend_from_slice(&w.to_le_bytes());
        }
        buf.truncate(nbytes);
        out.write_all(&buf)?;
        out.flush()?;
        Ok(())
    }

    pub fn load_cache(path: impl AsRef<Path>) -> Result<PrimeTable> {
        let bytes = fs::read(path)?;
        Self::from_cache_bytes(&bytes)
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<PrimeTable> {
        if bytes.len() < CACHE_HEADER_LEN {
            return Err(Error::CorruptCache("truncated header".into()));
        }
        if &bytes[..7] != CACHE_MAGIC {
            return Err(Error::CorruptCache("bad magic".into()));
        }
        if bytes[7] != CACHE_VERSION {
            return Err(Error::CorruptCache(format!("unsupported version {}", bytes[7])));
        }
        let limit = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        if limit < 2 {
            return Err(Error::CorruptCache(format!("limit {limit} below 2")));
        }
        let payload = &bytes[CACHE_HEADER_LEN..];
        let nbytes = byte_len(limit);
        if payload.len() != nbytes {
            return Err(Error::CorruptCache(format!(
                "expected {nbytes} payload bytes, found {}",
                payload.len()
            )));
        }
        let mut words = vec![0u64; word_len(limit)];
        for (i, chunk) in payload.chunks(8).enumerate() {
            let mut w = [0u8; 8];
            w[..chunk.len()].copy_from_slice(chunk);
            words[i] = u64::from_le_bytes(w);
        }
        let table = PrimeTable { limit, segment_size: DEFAULT_SEGMENT_SIZE, words };
        if table.words[word_len(limit) - 1] & !last_word_mask(limit) != 0 {
            return Err(Error::CorruptCache("nonzero padding bits".into()));
        }
        Ok(table)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

fn word_len(limit: u64) -> usize {
    (limit / 64 + 1) as usize
}

fn byte_len(limit: u64) -> usize {
    (limit / 8 + 1) as usize
}

fn last_word_mask(limit: u64) -> u64 {
    let rem = (limit & 63) as u32;
    if rem == 63 {
        u64::MAX
    } else {
        (1u64 << (rem + 1)) - 1
    }
}

/// Small primes by a plain byte sieve; used for base primes and prime lists.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn sieve(limit: u64) -> Result<PrimeTable> {
    sieve_with_segment(limit, DEFAULT_SEGMENT_SIZE)
}

/// Builds the table segment by segment. Segments are rounded up to whole
/// words so they can be filled independently; the output does not depend on
/// `segment_size` or on the thread count.
pub fn sieve_with_segment(limit: u64, segment_size: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return invalid(format!("sieve limit must be at least 2, got {limit}"));
    }
    if segment_size == 0 {
        return invalid("segment size must be positive");
    }
    let nwords = word_len(limit);
    let seg_words = segment_size.div_ceil(64).max(1) as usize;
    let base = small_primes(isqrt(limit));

    let mut words = vec![0u64; nwords];
    words
        .par_chunks_mut(seg_words)
        .enumerate()
        .for_each(|(si, chunk)| {
            let lo = (si * seg_words) as u64 * 64;
            fill_segment(chunk, lo, limit, &base);
        });

    Ok(PrimeTable { limit, segment_size, words })
}

fn fill_segment(chunk: &mut [u64], lo: u64, limit: u64, base: &[u64]) {
    chunk.fill(u64::MAX);
    let hi = lo + chunk.len() as u64 * 64; // exclusive
    let clear = |chunk: &mut [u64], n: u64| {
        let off = n - lo;
        chunk[(off >> 6) as usize] &= !(1u64 << (off & 63));
    };
    for n in lo..2.min(hi) {
        clear(chunk, n);
    }
    for &p in base {
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            clear(chunk, m);
            m += p;
        }
    }
    // Trim bits past the limit.
    if hi > limit {
        let last = ((limit - lo) >> 6) as usize;
        if last < chunk.len() {
            chunk[last] &= last_word_mask(limit);
            for w in &mut chunk[last + 1..] {
                *w = 0;
            }
        }
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primes_to_ten() {
        let t = sieve(10).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(t.prime_count(10).unwrap(), 4);
        assert_eq!(t.prime_count(2).unwrap(), 1);
        assert_eq!(t.prime_count(1).unwrap(), 0);
    }

    #[test]
    fn rejects_tiny_limit() {
        assert!(matches!(sieve(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(sieve(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn count_past_limit_is_out_of_range() {
        let t = sieve(100).unwrap();
        assert!(matches!(t.prime_count(101), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = sieve(10_000).unwrap();
        for i in 0..=10_000 {
            assert_eq!(t.is_prime(i), trial_division(i), "i = {i}");
        }
    }

    #[test]
    fn segment_size_does_not_matter() {
        let reference = sieve(200_003).unwrap();
        for seg in [1, 63, 64, 1000, 4096, 1 << 16] {
            let t = sieve_with_segment(200_003, seg).unwrap();
            assert_eq!(t.words(), reference.words(), "segment {seg}");
        }
    }

    #[test]
    fn limits_around_word_boundaries() {
        for limit in [2, 3, 62, 63, 64, 65, 127, 128, 129] {
            let t = sieve_with_segment(limit, 64).unwrap();
            let expected = (0..=limit).filter(|&i| trial_division(i)).count() as u64;
            assert_eq!(t.prime_count(limit).unwrap(), expected, "limit {limit}");
            assert_eq!(t.words().last().unwrap() & !last_word_mask(limit), 0);
        }
    }

    #[test]
    fn cache_rejects_bad_input() {
        let t = sieve(1000).unwrap();
        let dir = std::env::temp_dir().join(format!("krn-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.bin");
        t.save_cache(&path).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 16 + 126);
        assert_eq!(&bytes[..8], b"KRNSV1\0\x01");

        assert!(matches!(
            PrimeTable::from_cache_bytes(&bytes[..bytes.len() - 1]),
            Err(Error::CorruptCache(_))
        ));
        assert!(matches!(PrimeTable::from_cache_bytes(&bytes[..10]), Err(Error::CorruptCache(_))));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(PrimeTable::from_cache_bytes(&bad), Err(Error::CorruptCache(_))));
        let mut bad = bytes.clone();
        bad[7] = 2;
        assert!(matches!(PrimeTable::from_cache_bytes(&bad), Err(Error::CorruptCache(_))));
        assert!(matches!(
            PrimeTable::load_cache(dir.join("missing.bin")),
            Err(Error::Io(_))
        ));
        fs::remove_dir_all(&dir).ok();
    }
}
