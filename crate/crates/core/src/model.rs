//! The adaptive context model shared by bounded PPM(k) and PPM*.
//!
//! A context is a previously seen substring of the input; its entry records
//! how often each bit followed it. Escape counts use Method C: the escape
//! frequency equals the number of distinct bits predicted, so it is always 1
//! or 2 here. A context is deterministic when that number is 1.
//!
//! Which contexts exist, and with what counts, is fully determined by
//! substring occurrence counts over the history read so far:
//!
//! * bounded mode stores every substring of length <= k that has been seen
//!   with a follower;
//! * star mode stores wb only once w has occurred at least twice and wb has
//!   been seen with a follower (contexts are extended only until unique);
//! * in both modes counts(c) equals the number of occurrences of the context
//!   followed by c.
//!
//! Both rules reproduce the worked bounded and star models for the input
//! 0100110110 cell for cell. The model therefore keeps no explicit tables:
//! it maintains an online suffix automaton with exact occurrence counts and
//! answers every query from it. The relevant contexts (stored suffixes of
//! the history) are exactly the suffixes occurring at least twice, which the
//! automaton hands over as its suffix-link chain.

use std::fmt;

use crate::bits::BitString;
use crate::sam::{SuffixAutomaton, NO_STATE};

/// Bounded PPM(k) or PPM*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Bounded(u32),
    Star,
}

/// An exact probability, kept reduced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        if num == 0 {
            return Ratio { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn log2(&self) -> f64 {
        (self.num as f64).log2() - (self.den as f64).log2()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An event transmitted from a context: one of the two bits, or escape.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Event {
    Sym(u8),
    Escape,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Sym(b) => write!(f, "{b}"),
            Event::Escape => write!(f, "$"),
        }
    }
}

/// A stored context together with its Method C statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextEntry {
    pub context: BitString,
    pub counts: [u64; 2],
}

impl ContextEntry {
    pub fn escape_count(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    pub fn total(&self) -> u64 {
        self.counts[0] + self.counts[1] + self.escape_count()
    }

    pub fn is_deterministic(&self) -> bool {
        self.escape_count() == 1
    }

    pub fn prob(&self, event: Event) -> Ratio {
        let num = match event {
            Event::Sym(b) => self.counts[b as usize],
            Event::Escape => self.escape_count(),
        };
        Ratio::new(num, self.total())
    }
}

/// One step of an emission chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emission {
    /// Conditioning context; `None` is the order -1 table.
    pub context: Option<BitString>,
    pub event: Event,
    pub prob: Ratio,
}

/// Escapes followed by the actual symbol, as produced for one input bit.
pub type EmissionChain = Vec<Emission>;

/// Context statistics at one cascade level, identified by suffix length.
/// `context_len == None` is the order -1 table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    pub context_len: Option<u32>,
    pub counts: [u64; 2],
    pub escape: u64,
    pub total: u64,
}

impl Level {
    pub const ORDER_MINUS_ONE: Level = Level {
        context_len: None,
        counts: [1, 1],
        escape: 0,
        total: 2,
    };

    /// Cumulative interval of an event under the fixed ordering 0, 1, escape.
    pub fn event_bounds(&self, event: Event) -> (u64, u64) {
        match event {
            Event::Sym(0) => (0, self.counts[0]),
            Event::Sym(_) => (self.counts[0], self.counts[0] + self.counts[1]),
            Event::Escape => (self.counts[0] + self.counts[1], self.total),
        }
    }

    pub fn prob(&self, event: Event) -> Ratio {
        let (lo, hi) = self.event_bounds(event);
        Ratio::new(hi - lo, self.total)
    }
}

pub struct ContextModel {
    mode: Mode,
    history: BitString,
    sam: SuffixAutomaton,
    chain: Vec<i32>,
}

impl ContextModel {
    pub fn new(mode: Mode) -> Self {
        ContextModel {
            mode,
            history: BitString::new(),
            sam: SuffixAutomaton::new(),
            chain: Vec::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn history(&self) -> &BitString {
        &self.history
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    fn followers(&self, state: i32) -> [u64; 2] {
        let mut counts = [0u64; 2];
        for c in 0..2 {
            let t = self.sam.next(state, c as u8);
            if t != NO_STATE {
                counts[c] = self.sam.cnt(t);
            }
        }
        counts
    }

    /// Longest stored suffix-context length: repeated-suffix length, capped
    /// by k in bounded mode.
    fn max_relevant_len(&self) -> u32 {
        let k_rep = self.sam.repeated_suffix_len();
        match self.mode {
            Mode::Star => k_rep,
            Mode::Bounded(k) => k_rep.min(k),
        }
    }

    /// Length of the context the next bit is first encoded from:
    /// bounded picks the longest relevant context, star the shortest
    /// deterministic one (falling back to the longest). `None` when no
    /// context exists yet (empty history).
    pub fn selected_len(&mut self) -> Option<u32> {
        if self.history.is_empty() {
            return None;
        }
        let k_eff = self.max_relevant_len();
        match self.mode {
            Mode::Bounded(_) => Some(k_eff),
            Mode::Star => {
                self.sam.suffix_chain(&mut self.chain);
                // Scan states from the root side (ascending suffix length);
                // counts are constant within one state's length range, so the
                // first deterministic state yields the shortest deterministic
                // context at its minimum covered length.
                for &st in self.chain.iter().rev() {
                    let min_len = if st == self.sam.root() {
                        0
                    } else {
                        self.sam.len(self.sam.link(st)) + 1
                    };
                    if min_len > k_eff {
                        break;
                    }
                    let counts = self.followers(st);
                    if (counts[0] == 0) != (counts[1] == 0) {
                        return Some(min_len);
                    }
                }
                Some(k_eff)
            }
        }
    }

    /// The escape cascade for the next bit: levels from the selected context
    /// down toward lambda and the order -1 table. Generation stops after a
    /// level predicting both bits, since no escape can pass it.
    pub fn cascade(&mut self) -> Vec<Level> {
        let mut levels = Vec::new();
        let selected = match self.selected_len() {
            None => {
                levels.push(Level::ORDER_MINUS_ONE);
                return levels;
            }
            Some(l) => l,
        };
        self.sam.suffix_chain(&mut self.chain);
        // chain is last..root; walk it from the root side keeping an index to
        // the state covering the current length.
        let mut idx = self.chain.len() - 1; // root
        let covering = |model: &Self, idx: &mut usize, len: u32| -> i32 {
            while model.sam.len(model.chain[*idx]) < len {
                *idx -= 1;
            }
            model.chain[*idx]
        };
        let mut l = selected;
        loop {
            let st = covering(self, &mut idx, l);
            let counts = self.followers(st);
            let escape = (counts[0] > 0) as u64 + (counts[1] > 0) as u64;
            levels.push(Level {
                context_len: Some(l),
                counts,
                escape,
                total: counts[0] + counts[1] + escape,
            });
            if counts[0] > 0 && counts[1] > 0 {
                return levels;
            }
            if l == 0 {
                break;
            }
            l -= 1;
            idx = self.chain.len() - 1; // lengths only shrink; restart cheap
        }
        levels.push(Level::ORDER_MINUS_ONE);
        levels
    }

    /// Emission chain for encoding `symbol` after the current history.
    /// Does not update the model.
    pub fn emit(&mut self, symbol: u8) -> EmissionChain {
        assert!(symbol <= 1);
        let levels = self.cascade();
        let mut out = Vec::with_capacity(2);
        for level in levels {
            let context = level
                .context_len
                .map(|l| self.history.suffix(l as usize));
            match level.context_len {
                None => {
                    out.push(Emission {
                        context,
                        event: Event::Sym(symbol),
                        prob: level.prob(Event::Sym(symbol)),
                    });
                    return out;
                }
                Some(_) => {
                    if level.counts[symbol as usize] > 0 {
                        out.push(Emission {
                            context,
                            event: Event::Sym(symbol),
                            prob: level.prob(Event::Sym(symbol)),
                        });
                        return out;
                    }
                    out.push(Emission {
                        context,
                        event: Event::Escape,
                        prob: level.prob(Event::Escape),
                    });
                }
            }
        }
        unreachable!("cascade always terminates at a predicting level")
    }

    /// Reads `symbol` into the history. Counts and context creation follow
    /// from the occurrence semantics, so this is a single automaton append.
    pub fn update(&mut self, symbol: u8) {
        assert!(symbol <= 1);
        self.history.push(symbol);
        self.sam.append(symbol);
    }

    /// All stored contexts that are suffixes of the history, longest first,
    /// ending with lambda. Diagnostic; meant for small histories.
    pub fn relevant_contexts(&mut self) -> Vec<ContextEntry> {
        if self.history.is_empty() {
            return Vec::new();
        }
        let k_eff = self.max_relevant_len();
        (0..=k_eff)
            .rev()
            .map(|l| {
                let ctx = self.history.suffix(l as usize);
                self.context_entry(&ctx)
                    .expect("relevant suffix context must be stored")
            })
            .collect()
    }

    /// The context the next bit is first encoded from, or `None` when the
    /// model is empty and encoding starts at order -1.
    pub fn select_context(&mut self) -> Option<ContextEntry> {
        let l = self.selected_len()?;
        let ctx = self.history.suffix(l as usize);
        self.context_entry(&ctx)
    }

    /// Looks up a context if it is stored under the current mode's rules.
    pub fn context_entry(&self, context: &BitString) -> Option<ContextEntry> {
        if context.is_empty() {
            if self.history.is_empty() {
                return None;
            }
            return Some(ContextEntry {
                context: BitString::new(),
                counts: self.followers(self.sam.root()),
            });
        }
        match self.mode {
            Mode::Bounded(k) => {
                if context.len() as u64 > k as u64 {
                    return None;
                }
            }
            Mode::Star => {
                // parent must be non-unique; lambda's count is |history| + 1
                let parent = &context.as_slice()[..context.len() - 1];
                let parent_occ = if parent.is_empty() {
                    self.history.len() as u64 + 1
                } else {
                    self.sam.occ(parent)
                };
                if parent_occ < 2 {
                    return None;
                }
            }
        }
        let st = self.sam.state_of(context.as_slice())?;
        let counts = self.followers(st);
        if counts[0] + counts[1] == 0 {
            // Seen, but never with a follower: not yet a context.
            return None;
        }
        Some(ContextEntry {
            context: context.clone(),
            counts,
        })
    }

    pub fn context_exists(&self, context: &BitString) -> bool {
        self.context_entry(context).is_some()
    }

    /// Every stored context with its counts, sorted by length descending and
    /// then lexicographically; lambda comes last. `max_len` caps the context
    /// length for large histories.
    pub fn entries(&self, max_len: Option<u32>) -> Vec<ContextEntry> {
        let mut entries: Vec<ContextEntry> = Vec::new();
        let len_cap = match (self.mode, max_len) {
            (Mode::Bounded(k), Some(m)) => k.min(m),
            (Mode::Bounded(k), None) => k,
            (Mode::Star, Some(m)) => m,
            (Mode::Star, None) => u32::MAX,
        };

        // Iterative DFS over the automaton's transition paths; every distinct
        // substring is one path from the root.
        let mut path: Vec<u8> = Vec::new();
        // (state, parent_cnt, next child bit to try)
        let mut stack: Vec<(i32, u64, u8)> = vec![(self.sam.root(), 0, 0)];
        while let Some(&mut (st, parent_cnt, ref mut child)) = stack.last_mut() {
            if *child >= 2 {
                stack.pop();
                path.pop();
                continue;
            }
            let c = *child;
            *child += 1;
            let t = self.sam.next(st, c);
            if t == NO_STATE {
                continue;
            }
            path.push(c);
            let depth = path.len() as u32;
            let cnt = self.sam.cnt(t);
            let stored = match self.mode {
                Mode::Bounded(_) => depth <= len_cap,
                // parent occurrence count: lambda occurs |history| + 1 times
                Mode::Star => {
                    let parent_occ = if depth == 1 {
                        self.history.len() as u64 + 1
                    } else {
                        parent_cnt
                    };
                    depth <= len_cap && parent_occ >= 2
                }
            };
            let counts = self.followers(t);
            if stored && counts[0] + counts[1] > 0 {
                entries.push(ContextEntry {
                    context: BitString::from_bits(&path),
                    counts,
                });
            }
            let descend = depth < len_cap
                && match self.mode {
                    Mode::Bounded(_) => true,
                    // children of a unique string can never be stored
                    Mode::Star => cnt >= 2,
                };
            if descend {
                stack.push((t, cnt, 0));
            } else {
                path.pop();
            }
        }

        if !self.history.is_empty() {
            entries.push(ContextEntry {
                context: BitString::new(),
                counts: self.followers(self.sam.root()),
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

    /// Deterministic listing of the whole model, grouped by context length
    /// descending. `max_len` caps the context length for large histories.
    pub fn snapshot(&self, max_len: Option<u32>) -> Snapshot {
        let entries = self.entries(max_len);
        let mut rows = Vec::new();
        for e in &entries {
            for c in 0..2u8 {
                if e.counts[c as usize] > 0 {
                    rows.push(SnapshotRow {
                        context: Some(e.context.clone()),
                        prediction: Event::Sym(c),
                        count: e.counts[c as usize],
                        prob: e.prob(Event::Sym(c)),
                    });
                }
            }
            rows.push(SnapshotRow {
                context: Some(e.context.clone()),
                prediction: Event::Escape,
                count: e.escape_count(),
                prob: e.prob(Event::Escape),
            });
        }
        for c in 0..2u8 {
            rows.push(SnapshotRow {
                context: None,
                prediction: Event::Sym(c),
                count: 1,
                prob: Ratio::new(1, 2),
            });
        }
        Snapshot { rows }
    }
}

/// One rendered table row. `context == None` marks the order -1 table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnapshotRow {
    pub context: Option<BitString>,
    pub prediction: Event,
    pub count: u64,
    pub prob: Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub rows: Vec<SnapshotRow>,
}

impl Snapshot {
    fn context_label(row: &SnapshotRow) -> String {
        match &row.context {
            None => "⊥".to_string(),
            Some(c) if c.is_empty() => "λ".to_string(),
            Some(c) => c.to_ascii(),
        }
    }

    /// Paper-table layout: rows grouped by context length descending,
    /// one "Order k = ..." header per group.
    pub fn render_plain(&self) -> String {
        let mut out = String::new();
        let mut group: Option<Option<usize>> = None;
        let mut last_ctx: Option<&SnapshotRow> = None;
        for row in &self.rows {
            let this = row.context.as_ref().map(|c| c.len());
            if group != Some(this) {
                group = Some(this);
                last_ctx = None;
                match this {
                    Some(l) => out.push_str(&format!("Order k = {l}\n")),
                    None => out.push_str("Order k = -1\n"),
                }
            }
            // print the context label only on its first row, like the tables
            let first_of_context =
                last_ctx.map_or(true, |prev| prev.context != row.context);
            last_ctx = Some(row);
            let ctx = if first_of_context && row.context.is_some() {
                Self::context_label(row)
            } else {
                String::new()
            };
            out.push_str(&format!(
                "{:<8}{:<6}{:<6}{}\n",
                ctx,
                row.prediction.to_string(),
                row.count,
                row.prob
            ));
        }
        out
    }

    /// Machine format: `context<TAB>prediction<TAB>count<TAB>num/den`.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                Self::context_label(row),
                row.prediction,
                row.count,
                row.prob
            ));
        }
        out
    }
}
