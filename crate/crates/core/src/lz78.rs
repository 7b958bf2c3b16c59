//! LZ78 parsing and phrase coding.
//!
//! The input is parsed greedily into phrases, each the longest previously
//! seen phrase plus one new bit; the final phrase may repeat an existing one
//! when the input runs out mid-extension. Each phrase is coded as a pointer
//! to its parent followed by the new bit. The j-th pointer is written in
//! ceil(log2(j)) bits, which the decoder can mirror because it knows the
//! dictionary size; an Elias-gamma variant is available for sensitivity
//! checks.

use crate::bits::BitString;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointerCode {
    Fixed,
    Gamma,
}

/// One parsed phrase: parent dictionary index (0 = the empty phrase) and the
/// extending bit, absent for a trailing incomplete phrase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phrase {
    pub parent: u64,
    pub bit: Option<u8>,
}

/// Greedy LZ78 parse. Phrase j (1-based) becomes dictionary entry j.
pub fn parse(x: &BitString) -> Vec<Phrase> {
    let mut children: Vec<[i64; 2]> = vec![[-1, -1]];
    let mut phrases = Vec::new();
    let mut node = 0usize;
    for &b in x.as_slice() {
        let next = children[node][b as usize];
        if next >= 0 {
            node = next as usize;
        } else {
            children[node][b as usize] = children.len() as i64;
            children.push([-1, -1]);
            phrases.push(Phrase {
                parent: node as u64,
                bit: Some(b),
            });
            node = 0;
        }
    }
    if node != 0 {
        phrases.push(Phrase {
            parent: node as u64,
            bit: None,
        });
    }
    phrases
}

/// Pointer width for the j-th phrase (1-based): ceil(log2(j)).
pub fn pointer_width(j: u64) -> u32 {
    debug_assert!(j >= 1);
    j.next_power_of_two().trailing_zeros()
}

fn push_fixed(bits: &mut BitString, value: u64, width: u32) {
    for i in (0..width).rev() {
        bits.push(((value >> i) & 1) as u8);
    }
}

fn push_gamma(bits: &mut BitString, value: u64) {
    debug_assert!(value >= 1);
    let n = 64 - value.leading_zeros();
    for _ in 0..n - 1 {
        bits.push(0);
    }
    push_fixed(bits, value, n);
}

/// An encoded LZ78 stream plus the header facts a decoder needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LzCode {
    pub bits: BitString,
    pub phrase_count: u64,
    pub final_complete: bool,
    pub pointer_code: PointerCode,
}

pub fn encode_lz(x: &BitString, pointer_code: PointerCode) -> LzCode {
    let phrases = parse(x);
    let mut bits = BitString::new();
    let mut final_complete = true;
    for (i, ph) in phrases.iter().enumerate() {
        let j = i as u64 + 1;
        match pointer_code {
            PointerCode::Fixed => push_fixed(&mut bits, ph.parent, pointer_width(j)),
            PointerCode::Gamma => push_gamma(&mut bits, ph.parent + 1),
        }
        match ph.bit {
            Some(b) => bits.push(b),
            None => final_complete = false,
        }
    }
    LzCode {
        bits,
        phrase_count: phrases.len() as u64,
        final_complete,
        pointer_code,
    }
}

struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn read(&mut self) -> Result<u8, Error> {
        if self.pos >= self.bits.len() {
            return Err(Error::Corrupt("code stream truncated".into()));
        }
        let b = self.bits.get(self.pos);
        self.pos += 1;
        Ok(b)
    }

    fn read_fixed(&mut self, width: u32) -> Result<u64, Error> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read()? as u64;
        }
        Ok(v)
    }

    fn read_gamma(&mut self) -> Result<u64, Error> {
        let mut zeros = 0u32;
        while self.read()? == 0 {
            zeros += 1;
            if zeros > 63 {
                return Err(Error::Corrupt("gamma code overlong".into()));
            }
        }
        let mut v = 1u64;
        for _ in 0..zeros {
            v = (v << 1) | self.read()? as u64;
        }
        Ok(v)
    }
}

pub fn decode_lz(code: &LzCode) -> Result<BitString, Error> {
    let mut reader = BitReader {
        bits: &code.bits,
        pos: 0,
    };
    // expansion of every dictionary entry; entry 0 is the empty phrase
    let mut dict: Vec<BitString> = vec![BitString::new()];
    let mut out = BitString::new();
    for j in 1..=code.phrase_count {
        let parent = match code.pointer_code {
            PointerCode::Fixed => reader.read_fixed(pointer_width(j))?,
            PointerCode::Gamma => {
                let v = reader.read_gamma()?;
                v - 1
            }
        };
        if parent >= dict.len() as u64 {
            return Err(Error::Corrupt(format!(
                "phrase {j} points at entry {parent}, dictionary has {}",
                dict.len()
            )));
        }
        let last = j == code.phrase_count;
        let mut expansion = dict[parent as usize].clone();
        if last && !code.final_complete {
            out.extend(&expansion);
        } else {
            let bit = reader.read()?;
            expansion.push(bit);
            out.extend(&expansion);
            dict.push(expansion);
        }
    }
    if reader.pos != code.bits.len() {
        return Err(Error::Corrupt("trailing bits after final phrase".into()));
    }
    Ok(out)
}

/// Code length of a prefix parse: used by the ratio curves without
/// re-encoding.
pub fn code_len_at(complete_phrases: u64, pending: bool) -> u64 {
    let mut total = 0u64;
    for j in 1..=complete_phrases {
        total += pointer_width(j) as u64 + 1;
    }
    if pending {
        total += pointer_width(complete_phrases + 1) as u64;
    }
    total
}

/// Streaming parser reporting the code length after every input bit.
pub struct StreamingLz {
    children: Vec<[i64; 2]>,
    node: usize,
    complete_phrases: u64,
    code_bits: u64,
    /// bits of pointer for the pending (in-progress) phrase
    pending_pointer_bits: u64,
}

impl StreamingLz {
    pub fn new() -> Self {
        StreamingLz {
            children: vec![[-1, -1]],
            node: 0,
            complete_phrases: 0,
            code_bits: 0,
            pending_pointer_bits: 0,
        }
    }

    pub fn step(&mut self, b: u8) {
        let next = self.children[self.node][b as usize];
        if next >= 0 {
            self.node = next as usize;
            // the pending phrase grew; its pointer width is fixed by the
            // phrase index, already accounted
        } else {
            self.children[self.node][b as usize] = self.children.len() as i64;
            self.children.push([-1, -1]);
            self.complete_phrases += 1;
            self.code_bits += pointer_width(self.complete_phrases) as u64 + 1;
            self.node = 0;
        }
        self.pending_pointer_bits = if self.node != 0 {
            pointer_width(self.complete_phrases + 1) as u64
        } else {
            0
        };
    }

    /// |LZ(prefix read so far)|, including a pointer-only trailing phrase.
    pub fn code_bits(&self) -> u64 {
        self.code_bits + self.pending_pointer_bits
    }
}

impl Default for StreamingLz {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn parse_enumeration_example() {
        // 0100011011 -> 0 | 1 | 00 | 01 | 10 | 11
        let phrases = parse(&bs("0100011011"));
        assert_eq!(
            phrases,
            vec![
                Phrase { parent: 0, bit: Some(0) },
                Phrase { parent: 0, bit: Some(1) },
                Phrase { parent: 1, bit: Some(0) },
                Phrase { parent: 1, bit: Some(1) },
                Phrase { parent: 2, bit: Some(0) },
                Phrase { parent: 2, bit: Some(1) },
            ]
        );
    }

    #[test]
    fn parse_degenerate_cases() {
        assert!(parse(&BitString::new()).is_empty());
        // 000 -> 0 | 00
        assert_eq!(
            parse(&bs("000")),
            vec![
                Phrase { parent: 0, bit: Some(0) },
                Phrase { parent: 1, bit: Some(0) },
            ]
        );
        // 00 -> 0 | 0 (incomplete repeat)
        assert_eq!(
            parse(&bs("00")),
            vec![
                Phrase { parent: 0, bit: Some(0) },
                Phrase { parent: 1, bit: None },
            ]
        );
    }

    #[test]
    fn pointer_widths() {
        let widths: Vec<u32> = (1..=6).map(pointer_width).collect();
        assert_eq!(widths, vec![0, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn encode_length_of_enumeration_example() {
        let code = encode_lz(&bs("0100011011"), PointerCode::Fixed);
        assert_eq!(code.bits.len(), 17); // 0+1+2+2+3+3 pointer bits + 6
        assert_eq!(code.phrase_count, 6);
        assert!(code.final_complete);
        assert_eq!(decode_lz(&code).unwrap(), bs("0100011011"));
    }

    #[test]
    fn empty_input_yields_empty_code() {
        let code = encode_lz(&BitString::new(), PointerCode::Fixed);
        assert_eq!(code.bits.len(), 0);
        assert_eq!(decode_lz(&code).unwrap(), BitString::new());
    }

    #[test]
    fn incomplete_final_phrase_round_trips() {
        for s in ["00", "0101", "0010000", "110110110"] {
            for pc in [PointerCode::Fixed, PointerCode::Gamma] {
                let code = encode_lz(&bs(s), pc);
                assert_eq!(decode_lz(&code).unwrap(), bs(s), "{s} {pc:?}");
            }
        }
    }

    #[test]
    fn code_length_formula() {
        for s in ["0100011011", "000", "00", "111111", "010010001"] {
            let x = bs(s);
            let phrases = parse(&x);
            let code = encode_lz(&x, PointerCode::Fixed);
            let expected = code_len_at(
                phrases.iter().filter(|p| p.bit.is_some()).count() as u64,
                phrases.last().is_some_and(|p| p.bit.is_none()),
            );
            assert_eq!(code.bits.len() as u64, expected, "{s}");
        }
    }

    #[test]
    fn streaming_matches_batch_at_every_prefix() {
        let x = bs("01000110110101001110010101110000");
        let mut stream = StreamingLz::new();
        for (i, &b) in x.as_slice().iter().enumerate() {
            stream.step(b);
            let prefix = x.prefix(i + 1);
            let batch = encode_lz(&prefix, PointerCode::Fixed);
            assert_eq!(stream.code_bits(), batch.bits.len() as u64, "prefix {}", i + 1);
        }
    }

    #[test]
    fn corrupt_pointer_detected() {
        let code = LzCode {
            bits: bs("11"), // phrase 1: 0-width pointer + bit; phrase 2 pointer "1" = entry 1...
            phrase_count: 3,
            final_complete: true,
            pointer_code: PointerCode::Fixed,
        };
        assert!(decode_lz(&code).is_err());
    }
}
