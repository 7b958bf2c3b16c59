//! Online suffix automaton over the binary alphabet with eagerly maintained
//! occurrence counts.
//!
//! One automaton state stands for an equivalence class of substrings sharing
//! the same set of end positions, so `cnt` (the size of that set) is the
//! number of occurrences of every string in the class. Counts are kept exact
//! after every `append` by adding one along the suffix-link chain of the new
//! last state: those are precisely the classes whose end-position sets gain
//! the new position. A clone starts from the count of the state it splits,
//! which is its end-position set at the moment of the split.

pub const NO_STATE: i32 = -1;

#[derive(Clone, Debug)]
struct State {
    next: [i32; 2],
    link: i32,
    len: u32,
    cnt: u64,
}

pub struct SuffixAutomaton {
    states: Vec<State>,
    last: i32,
}

impl SuffixAutomaton {
    pub fn new() -> Self {
        SuffixAutomaton {
            states: vec![State {
                next: [NO_STATE; 2],
                link: NO_STATE,
                len: 0,
                cnt: 0,
            }],
            last: 0,
        }
    }

    pub fn root(&self) -> i32 {
        0
    }

    pub fn last(&self) -> i32 {
        self.last
    }

    pub fn len(&self, v: i32) -> u32 {
        self.states[v as usize].len
    }

    pub fn link(&self, v: i32) -> i32 {
        self.states[v as usize].link
    }

    pub fn next(&self, v: i32, c: u8) -> i32 {
        self.states[v as usize].next[c as usize]
    }

    /// Occurrence count of (every string of) state `v`.
    pub fn cnt(&self, v: i32) -> u64 {
        self.states[v as usize].cnt
    }

    /// Length of the longest suffix of the processed string that occurs at
    /// least twice. Zero for the empty or single-character string.
    pub fn repeated_suffix_len(&self) -> u32 {
        let link = self.states[self.last as usize].link;
        if link == NO_STATE {
            0
        } else {
            self.states[link as usize].len
        }
    }

    pub fn append(&mut self, c: u8) {
        debug_assert!(c <= 1);
        let c = c as usize;
        let cur = self.states.len() as i32;
        self.states.push(State {
            next: [NO_STATE; 2],
            link: NO_STATE,
            len: self.states[self.last as usize].len + 1,
            cnt: 0,
        });

        let mut p = self.last;
        while p != NO_STATE && self.states[p as usize].next[c] == NO_STATE {
            self.states[p as usize].next[c] = cur;
            p = self.states[p as usize].link;
        }
        if p == NO_STATE {
            self.states[cur as usize].link = 0;
        } else {
            let q = self.states[p as usize].next[c];
            if self.states[q as usize].len == self.states[p as usize].len + 1 {
                self.states[cur as usize].link = q;
            } else {
                let clone = self.states.len() as i32;
                let mut cloned = self.states[q as usize].clone();
                cloned.len = self.states[p as usize].len + 1;
                self.states.push(cloned);
                while p != NO_STATE && self.states[p as usize].next[c] == q {
                    self.states[p as usize].next[c] = clone;
                    p = self.states[p as usize].link;
                }
                self.states[q as usize].link = clone;
                self.states[cur as usize].link = clone;
            }
        }
        self.last = cur;

        // The new position is an end position of exactly the suffix chain.
        let mut v = cur;
        while v != NO_STATE {
            self.states[v as usize].cnt += 1;
            v = self.states[v as usize].link;
        }
    }

    /// State reached by reading `w` from the root, if `w` is a substring.
    pub fn state_of(&self, w: &[u8]) -> Option<i32> {
        let mut v = 0i32;
        for &b in w {
            v = self.states[v as usize].next[b as usize];
            if v == NO_STATE {
                return None;
            }
        }
        Some(v)
    }

    /// Occurrence count of an arbitrary pattern (0 if absent).
    pub fn occ(&self, w: &[u8]) -> u64 {
        match self.state_of(w) {
            Some(v) => self.states[v as usize].cnt,
            None => 0,
        }
    }

    /// Fills `buf` with the suffix-link chain from the last state up to the
    /// root, i.e. last first, root last.
    pub fn suffix_chain(&self, buf: &mut Vec<i32>) {
        buf.clear();
        let mut v = self.last;
        while v != NO_STATE {
            buf.push(v);
            v = self.states[v as usize].link;
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }
}

impl Default for SuffixAutomaton {
    fn default() -> Self {
        Self::new()
    }
}
