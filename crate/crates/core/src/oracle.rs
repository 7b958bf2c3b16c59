//! Brute-force certifiers for the fast paths.
//!
//! Everything here recomputes its answer from first principles — window
//! scans, hash-map substring tallies, backtracking search — and deliberately
//! shares no machinery with the production implementations it checks.

use std::collections::HashMap;

use crate::bits::BitString;
use crate::debruijn::martin_db;
use crate::model::{ContextEntry, ContextModel, Level, Mode};

/// First point of disagreement between a fast path and its oracle.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    /// Bit index (prefix length) at which the states first differ.
    pub position: usize,
    pub expected: String,
    pub actual: String,
}

/// Window-by-window occurrence count.
pub fn naive_occ(w: &[u8], x: &[u8]) -> u64 {
    if w.is_empty() || w.len() > x.len() {
        return 0;
    }
    (0..=x.len() - w.len())
        .filter(|&i| &x[i..i + w.len()] == w)
        .count() as u64
}

/// A context model rebuilt from the raw history on every query.
///
/// For each history position e it measures how far the suffix ending at e
/// matches the suffix of the whole history; a length-L suffix context then
/// occurs at exactly the positions matching for at least L bits, and its
/// follower counts are read off the bits after those positions.
pub struct SlowModel {
    mode: Mode,
    x: Vec<u8>,
}

impl SlowModel {
    pub fn new(mode: Mode) -> Self {
        SlowModel { mode, x: Vec::new() }
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.x.push(bit);
    }

    pub fn history(&self) -> &[u8] {
        &self.x
    }

    /// match_len[e] = length of the longest common suffix of x[0..=e] and x.
    fn match_lens(&self) -> Vec<usize> {
        let n = self.x.len();
        (0..n)
            .map(|e| {
                let mut l = 0;
                while l <= e && self.x[e - l] == self.x[n - 1 - l] {
                    l += 1;
                }
                l
            })
            .collect()
    }

    /// Follower counts of the length-l suffix context.
    fn suffix_counts(&self, l: usize, match_lens: &[usize]) -> [u64; 2] {
        let n = self.x.len();
        let mut counts = [0u64; 2];
        if l == 0 {
            for &b in &self.x {
                counts[b as usize] += 1;
            }
            return counts;
        }
        for e in 0..n.saturating_sub(1) {
            if match_lens[e] >= l {
                counts[self.x[e + 1] as usize] += 1;
            }
        }
        counts
    }

    /// The escape cascade for the next bit, rebuilt from scratch.
    pub fn cascade(&self) -> Vec<Level> {
        let n = self.x.len();
        if n == 0 {
            return vec![Level::ORDER_MINUS_ONE];
        }
        let match_lens = self.match_lens();
        // longest suffix that occurs somewhere earlier as well
        let repeated = match_lens[..n - 1].iter().copied().max().unwrap_or(0);
        let selected = match self.mode {
            Mode::Bounded(k) => repeated.min(k as usize),
            Mode::Star => {
                // the empty context is a selection candidate too
                let mut sel = repeated;
                for l in 0..=repeated {
                    let counts = self.suffix_counts(l, &match_lens);
                    if (counts[0] == 0) != (counts[1] == 0) {
                        sel = l;
                        break;
                    }
                }
                sel
            }
        };
        let mut levels = Vec::new();
        for l in (0..=selected).rev() {
            let counts = self.suffix_counts(l, &match_lens);
            let escape = (counts[0] > 0) as u64 + (counts[1] > 0) as u64;
            levels.push(Level {
                context_len: Some(l as u32),
                counts,
                escape,
                total: counts[0] + counts[1] + escape,
            });
            if counts[0] > 0 && counts[1] > 0 {
                return levels;
            }
        }
        levels.push(Level::ORDER_MINUS_ONE);
        levels
    }

    /// Every stored context of length <= cap, with counts, via a full
    /// substring tally. Sorted like [`ContextModel::entries`].
    pub fn entries(&self, cap: u32) -> Vec<ContextEntry> {
        let n = self.x.len();
        let mut occ: HashMap<&[u8], u64> = HashMap::new();
        let tally_len = (cap as usize + 1).min(n);
        for i in 0..n {
            for l in 1..=tally_len.min(n - i) {
                *occ.entry(&self.x[i..i + l]).or_default() += 1;
            }
        }
        let store_cap = match self.mode {
            Mode::Bounded(k) => k.min(cap),
            Mode::Star => cap,
        } as usize;
        let mut entries = Vec::new();
        for w in occ.keys() {
            if w.len() > store_cap {
                continue;
            }
            let mut counts = [0u64; 2];
            for c in 0..2u8 {
                let mut wc = w.to_vec();
                wc.push(c);
                counts[c as usize] = occ.get(wc.as_slice()).copied().unwrap_or(0);
            }
            if counts[0] + counts[1] == 0 {
                continue;
            }
            let stored = match self.mode {
                Mode::Bounded(_) => true,
                Mode::Star => {
                    // the parent must be non-unique; the empty parent occurs
                    // |x| + 1 times
                    let parent_occ = if w.len() == 1 {
                        n as u64 + 1
                    } else {
                        occ[&w[..w.len() - 1]]
                    };
                    parent_occ >= 2
                }
            };
            if stored {
                entries.push(ContextEntry {
                    context: BitString::from_bits(w),
                    counts,
                });
            }
        }
        if n > 0 {
            let mut counts = [0u64; 2];
            for &b in &self.x {
                counts[b as usize] += 1;
            }
            entries.push(ContextEntry {
                context: BitString::new(),
                counts,
            });
        }
        entries.sort_by(|a, b| {
            b.context
                .len()
                .cmp(&a.context.len())
                .then_with(|| a.context.as_slice().cmp(b.context.as_slice()))
        });
        entries
    }
}

/// Replays `input` through the incremental model and the slow rebuild in
/// lockstep. The cascades are compared at every prefix; the full stored
/// tables (capped at `snapshot_cap`) every `snapshot_stride` bits and at the
/// end. Returns the first divergence, or `None` on agreement.
pub fn certify_model(
    mode: Mode,
    input: &BitString,
    snapshot_cap: u32,
    snapshot_stride: usize,
) -> Option<DivergenceReport> {
    let mut fast = ContextModel::new(mode);
    let mut slow = SlowModel::new(mode);
    for pos in 0..=input.len() {
        let expected = slow.cascade();
        let actual = fast.cascade();
        if expected != actual {
            return Some(DivergenceReport {
                position: pos,
                expected: format!("{expected:?}"),
                actual: format!("{actual:?}"),
            });
        }
        if pos % snapshot_stride.max(1) == 0 || pos == input.len() {
            let expected = slow.entries(snapshot_cap);
            let actual = fast.entries(Some(snapshot_cap));
            if expected != actual {
                return Some(DivergenceReport {
                    position: pos,
                    expected: format!("{expected:?}"),
                    actual: format!("{actual:?}"),
                });
            }
        }
        if pos < input.len() {
            let b = input.get(pos);
            fast.update(b);
            slow.push(b);
        }
    }
    None
}

fn is_de_bruijn_cyclic(s: &[u8], n: u32) -> bool {
    let mut seen = std::collections::HashSet::new();
    let len = s.len();
    for i in 0..len {
        let w: Vec<u8> = (0..n as usize).map(|j| s[(i + j) % len]).collect();
        if !seen.insert(w) {
            return false;
        }
    }
    seen.len() == len
}

/// The lexicographically least de Bruijn string of order n, found without
/// the greedy construction: full enumeration for n <= 4, first-solution
/// backtracking (0 before 1) for n = 5, where enumerating 2^32 candidates
/// is out of budget.
pub fn minimal_db(n: u32) -> Option<Vec<u8>> {
    if n == 0 || n > 5 {
        return None;
    }
    let len = 1usize << n;
    if n <= 4 {
        // ascending numeric order is ascending lexicographic order at a
        // fixed length, so the first valid candidate is the minimum
        for v in 0u64..(1u64 << len) {
            let s: Vec<u8> = (0..len)
                .map(|i| ((v >> (len - 1 - i)) & 1) as u8)
                .collect();
            if is_de_bruijn_cyclic(&s, n) {
                return Some(s);
            }
        }
        return None;
    }
    let mut s = Vec::with_capacity(len);
    let mut used = std::collections::HashSet::new();
    fn dfs(
        s: &mut Vec<u8>,
        used: &mut std::collections::HashSet<Vec<u8>>,
        n: usize,
        len: usize,
    ) -> bool {
        if s.len() == len {
            // the n-1 wrap-around windows must complete the enumeration
            let mut extra = Vec::new();
            for i in len - n + 1..len {
                let w: Vec<u8> = (0..n).map(|j| s[(i + j) % len]).collect();
                if used.contains(&w) || extra.contains(&w) {
                    return false;
                }
                extra.push(w);
            }
            return true;
        }
        for b in 0..2u8 {
            s.push(b);
            let ok = if s.len() >= n {
                let w = s[s.len() - n..].to_vec();
                if used.contains(&w) {
                    false
                } else {
                    used.insert(w);
                    true
                }
            } else {
                true
            };
            if ok {
                if dfs(s, used, n, len) {
                    return true;
                }
                if s.len() >= n {
                    used.remove(&s[s.len() - n..].to_vec());
                }
            }
            s.pop();
        }
        false
    }
    if dfs(&mut s, &mut used, n as usize, len) {
        Some(s)
    } else {
        None
    }
}

/// True iff the greedy construction returns the lexicographic minimum.
pub fn exhaustive_db_check(n: u32) -> bool {
    match (minimal_db(n), martin_db(n)) {
        (Some(min), Ok(db)) => min == db.data().as_slice(),
        _ => false,
    }
}
