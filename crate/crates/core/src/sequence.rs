//! The sequence S = S_1 S_2 S_3 ... whose zone S_n enumerates every length-n
//! word exactly once in block position.
//!
//! Writing n = 2^s * t with t odd, zone n is the concatenation of 2^s blocks
//! B_i = db_i(n)^t, where db_i(n) is the i-th rotation of the least de Bruijn
//! string of order n. |S_n| = n * 2^n.

use crate::bits::BitString;
use crate::debruijn::{martin_db_with_budget, DEFAULT_MAX_ORDER};
use crate::error::Error;

/// Shape of one zone: n = 2^s * t with t odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZoneSpec {
    pub n: u32,
    pub s: u32,
    pub t: u64,
    pub block_count: u64,
    pub block_length: u64,
}

impl ZoneSpec {
    pub fn new(n: u32) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Domain("zone number must be at least 1".into()));
        }
        let s = n.trailing_zeros();
        let t = (n >> s) as u64;
        Ok(ZoneSpec {
            n,
            s,
            t,
            block_count: 1 << s,
            block_length: t << n,
        })
    }

    /// n * 2^n.
    pub fn zone_length(&self) -> u64 {
        (self.n as u64) << self.n
    }
}

/// Offset in S where zone n begins: sum over j < n of j * 2^j.
pub fn zone_start(n: u32) -> u64 {
    if n <= 1 {
        return 0;
    }
    (n as u64 - 2) * (1u64 << n) + 2
}

/// Zone containing bit offset `pos` (0-based).
pub fn zone_of(pos: u64) -> u32 {
    let mut n = 1;
    while zone_start(n + 1) <= pos {
        n += 1;
    }
    n
}

/// Builds the zone S_n.
pub fn segment(n: u32) -> Result<BitString, Error> {
    segment_with_budget(n, DEFAULT_MAX_ORDER)
}

pub fn segment_with_budget(n: u32, max_order: u32) -> Result<BitString, Error> {
    let spec = ZoneSpec::new(n)?;
    let db = martin_db_with_budget(n, max_order)?;
    let mut out = BitString::with_capacity(spec.zone_length() as usize);
    for i in 0..spec.block_count {
        let block = db.shift(i)?;
        for _ in 0..spec.t {
            out.extend(block.data());
        }
    }
    debug_assert_eq!(out.len() as u64, spec.zone_length());
    Ok(out)
}

/// Lazily streams bits of S, zone by zone.
pub struct Stream {
    current: BitString,
    pos_in_zone: usize,
    zone: u32,
    max_order: u32,
}

impl Stream {
    pub fn new() -> Self {
        Stream {
            current: BitString::new(),
            pos_in_zone: 0,
            zone: 0,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl Default for Stream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for Stream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos_in_zone == self.current.len() {
            self.zone += 1;
            self.current = segment_with_budget(self.zone, self.max_order).ok()?;
            self.pos_in_zone = 0;
        }
        let bit = self.current.get(self.pos_in_zone);
        self.pos_in_zone += 1;
        Some(bit)
    }
}

/// First `limit_bits` bits of S.
pub fn prefix(limit_bits: usize) -> BitString {
    Stream::new().take(limit_bits).collect()
}

/// Number of (overlapping) occurrences of `w` as a substring of `x`.
pub fn occ(w: &BitString, x: &BitString) -> Result<u64, Error> {
    if w.is_empty() {
        return Err(Error::Domain("occ requires a non-empty word".into()));
    }
    let m = w.len();
    if m > x.len() {
        return Ok(0);
    }
    if m <= 64 {
        // Integer sliding window.
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut target = 0u64;
        for i in 0..m {
            target = (target << 1) | w.get(i) as u64;
        }
        let mut window = 0u64;
        let mut count = 0u64;
        for i in 0..x.len() {
            window = ((window << 1) | x.get(i) as u64) & mask;
            if i + 1 >= m && window == target {
                count += 1;
            }
        }
        Ok(count)
    } else {
        let xs = x.as_slice();
        let ws = w.as_slice();
        Ok((0..=x.len() - m).filter(|&i| &xs[i..i + m] == ws).count() as u64)
    }
}

/// Block occurrences: positions i ≡ 0 (mod |w|) with x[i..i+|w|-1] = w.
/// Only complete windows count.
pub fn occ_block(w: &BitString, x: &BitString) -> Result<u64, Error> {
    if w.is_empty() {
        return Err(Error::Domain("occ_block requires a non-empty word".into()));
    }
    let m = w.len();
    let xs = x.as_slice();
    let ws = w.as_slice();
    Ok(xs.chunks_exact(m).filter(|chunk| *chunk == ws).count() as u64)
}

/// True iff every length-n word appears exactly once in block position in S_n.
pub fn check_enumeration(n: u32) -> Result<bool, Error> {
    let seg = segment(n)?;
    let len = 1usize << n;
    let mask = (len - 1) as u64;
    let mut counts = vec![0u32; len];
    let mut window = 0u64;
    for (i, &b) in seg.as_slice().iter().enumerate() {
        window = ((window << 1) | b as u64) & mask;
        if (i + 1) % n as usize == 0 {
            counts[window as usize] += 1;
        }
    }
    Ok(counts.iter().all(|&c| c == 1))
}

/// Empirical frequency of every word of length 1..=max_word_len in `prefix`.
pub fn normality_stats(
    prefix: &BitString,
    max_word_len: u32,
) -> Result<Vec<(BitString, f64)>, Error> {
    if max_word_len == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    if (1u64 << max_word_len) > prefix.len() as u64 {
        return Err(Error::Domain(format!(
            "max word length {max_word_len} too large for a {}-bit prefix",
            prefix.len()
        )));
    }
    let mut out = Vec::new();
    for m in 1..=max_word_len {
        let len = 1usize << m;
        let mask = (len - 1) as u64;
        let mut counts = vec![0u64; len];
        let mut window = 0u64;
        for (i, &b) in prefix.as_slice().iter().enumerate() {
            window = ((window << 1) | b as u64) & mask;
            if i + 1 >= m as usize {
                counts[window as usize] += 1;
            }
        }
        for v in 0..len {
            let word: BitString = (0..m).map(|j| ((v >> (m - 1 - j)) & 1) as u8).collect();
            out.push((word, counts[v] as f64 / prefix.len() as f64));
        }
    }
    Ok(out)
}
