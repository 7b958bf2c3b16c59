//! On-disk formats: packed sequence files and the two code-file layouts.
//!
//! All multi-byte integers are little-endian. Bit payloads are packed MSB
//! first with an explicit bit count, so no padding convention is needed.
//!
//! * Sequence (packed): `SEQPACK1` | bit_count u64 | payload.
//!   The unpacked alternative is plain ASCII `0`/`1` with no separators.
//! * PPM code: `PPMCODE1` | mode u8 (0 bounded, 1 star) | k u16 |
//!   source_bits u64 | code_bits u64 | payload.
//! * LZ78 code: `LZ78COD1` | flags u8 (bit 0: final phrase complete,
//!   bit 1: gamma pointers) | phrase_count u64 | code_bits u64 | payload.

use crate::bits::BitString;
use crate::coder::CodeOutput;
use crate::error::Error;
use crate::lz78::{LzCode, PointerCode};
use crate::model::Mode;

pub const SEQ_MAGIC: &[u8; 8] = b"SEQPACK1";
pub const PPM_MAGIC: &[u8; 8] = b"PPMCODE1";
pub const LZ_MAGIC: &[u8; 8] = b"LZ78COD1";

fn push_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], Error> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Corrupt("file truncated".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, Error> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, Error> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, Error> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn bits(&mut self, count: u64) -> Result<BitString, Error> {
        let bytes = (count as usize).div_ceil(8);
        BitString::unpack_msb(self.take(bytes)?, count as usize)
    }

    fn finish(&self) -> Result<(), Error> {
        if self.pos != self.bytes.len() {
            return Err(Error::Corrupt("trailing bytes after payload".into()));
        }
        Ok(())
    }
}

pub fn encode_sequence_packed(bits: &BitString) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(SEQ_MAGIC);
    push_u64(&mut out, bits.len() as u64);
    out.extend_from_slice(&bits.pack_msb());
    out
}

/// Reads a sequence file: packed if it carries the magic, ASCII otherwise.
pub fn decode_sequence(bytes: &[u8]) -> Result<BitString, Error> {
    if bytes.starts_with(SEQ_MAGIC) {
        let mut r = Reader { bytes, pos: SEQ_MAGIC.len() };
        let count = r.u64()?;
        let bits = r.bits(count)?;
        r.finish()?;
        return Ok(bits);
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::Corrupt("sequence file is neither packed nor ASCII bits".into()))?;
    BitString::parse(text.trim())
}

pub fn encode_ppm_file(mode: Mode, code: &CodeOutput) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(PPM_MAGIC);
    match mode {
        Mode::Bounded(k) => {
            out.push(0);
            out.extend_from_slice(&(k as u16).to_le_bytes());
        }
        Mode::Star => {
            out.push(1);
            out.extend_from_slice(&0u16.to_le_bytes());
        }
    }
    push_u64(&mut out, code.declared_len);
    push_u64(&mut out, code.bits.len() as u64);
    out.extend_from_slice(&code.bits.pack_msb());
    out
}

pub fn decode_ppm_file(bytes: &[u8]) -> Result<(Mode, CodeOutput), Error> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != PPM_MAGIC {
        return Err(Error::Corrupt("not a PPM code file".into()));
    }
    let mode = match r.u8()? {
        0 => Mode::Bounded(r.u16()? as u32),
        1 => {
            r.u16()?;
            Mode::Star
        }
        m => return Err(Error::Corrupt(format!("unknown mode byte {m}"))),
    };
    let declared_len = r.u64()?;
    let code_bits = r.u64()?;
    let bits = r.bits(code_bits)?;
    r.finish()?;
    Ok((mode, CodeOutput { bits, declared_len }))
}

pub fn encode_lz_file(code: &LzCode) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(LZ_MAGIC);
    let mut flags = 0u8;
    if code.final_complete {
        flags |= 1;
    }
    if code.pointer_code == PointerCode::Gamma {
        flags |= 2;
    }
    out.push(flags);
    push_u64(&mut out, code.phrase_count);
    push_u64(&mut out, code.bits.len() as u64);
    out.extend_from_slice(&code.bits.pack_msb());
    out
}

pub fn decode_lz_file(bytes: &[u8]) -> Result<LzCode, Error> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != LZ_MAGIC {
        return Err(Error::Corrupt("not an LZ78 code file".into()));
    }
    let flags = r.u8()?;
    if flags & !3 != 0 {
        return Err(Error::Corrupt(format!("unknown flag bits {flags:#x}")));
    }
    let phrase_count = r.u64()?;
    let code_bits = r.u64()?;
    let bits = r.bits(code_bits)?;
    r.finish()?;
    Ok(LzCode {
        bits,
        phrase_count,
        final_complete: flags & 1 != 0,
        pointer_code: if flags & 2 != 0 {
            PointerCode::Gamma
        } else {
            PointerCode::Fixed
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coder;
    use crate::lz78;

    fn bs(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn sequence_round_trip_packed_and_ascii() {
        let x = bs("0100110110");
        assert_eq!(decode_sequence(&encode_sequence_packed(&x)).unwrap(), x);
        assert_eq!(decode_sequence(b"0100110110\n").unwrap(), x);
        assert!(decode_sequence(b"zebra").is_err());
        let empty = BitString::new();
        assert_eq!(decode_sequence(&encode_sequence_packed(&empty)).unwrap(), empty);
    }

    #[test]
    fn ppm_file_round_trip() {
        let x = bs("0100110110");
        for mode in [Mode::Star, Mode::Bounded(3)] {
            let (code, _) = coder::encode(mode, &x);
            let bytes = encode_ppm_file(mode, &code);
            let (mode2, code2) = decode_ppm_file(&bytes).unwrap();
            assert_eq!(mode2, mode);
            assert_eq!(code2, code);
            assert_eq!(coder::decode(mode2, &code2).unwrap(), x);
        }
        assert!(decode_ppm_file(b"PPMCODE1").is_err());
        assert!(decode_ppm_file(b"garbage").is_err());
    }

    #[test]
    fn lz_file_round_trip() {
        for s in ["0100011011", "00", ""] {
            for pc in [PointerCode::Fixed, PointerCode::Gamma] {
                let code = lz78::encode_lz(&bs(s), pc);
                let bytes = encode_lz_file(&code);
                let code2 = decode_lz_file(&bytes).unwrap();
                assert_eq!(code2, code);
                assert_eq!(lz78::decode_lz(&code2).unwrap(), bs(s));
            }
        }
        // truncated payload detected
        let code = lz78::encode_lz(&bs("0100011011"), PointerCode::Fixed);
        let mut bytes = encode_lz_file(&code);
        bytes.pop();
        assert!(decode_lz_file(&bytes).is_err());
    }
}
