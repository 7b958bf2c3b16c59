//! Exact-precision arithmetic coder driven by the context model's emission
//! cascades.
//!
//! The coder keeps the interval endpoints as exact rationals over a common
//! denominator (the running product of context totals), so no renormalisation
//! is needed and the final width equals the product of all emission
//! probabilities exactly. The code word is the smallest dyadic of the form
//! c/2^l inside the final interval, with l = ceil(-log2(width)); an interval
//! of width w always contains a multiple of 2^-l once 2^-l <= w, so l never
//! needs the one extra bit the classic accounting allows for.
//!
//! A floating-point ideal-length accumulator (sum of -log2 p) runs alongside
//! and is the fast path for long ratio curves, where materialising the code
//! bits is pointless.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::error::Error;
use crate::model::{ContextModel, EmissionChain, Mode};

/// Exact subinterval of [0,1): [lo/den, (lo+width)/den).
#[derive(Clone, Debug)]
pub struct CodeInterval {
    lo: BigUint,
    width: BigUint,
    den: BigUint,
}

impl CodeInterval {
    pub fn unit() -> Self {
        CodeInterval {
            lo: BigUint::zero(),
            width: BigUint::one(),
            den: BigUint::one(),
        }
    }

    /// Restricts to the event spanning [ev_lo/total, ev_hi/total) of the
    /// current interval.
    pub fn narrow(&mut self, ev_lo: u64, ev_hi: u64, total: u64) {
        assert!(ev_lo < ev_hi && ev_hi <= total, "empty or invalid event");
        self.lo = &self.lo * total + &self.width * ev_lo;
        self.width = &self.width * (ev_hi - ev_lo);
        self.den = &self.den * total;
    }

    pub fn width_parts(&self) -> (&BigUint, &BigUint) {
        (&self.width, &self.den)
    }

    /// ceil(-log2 width): the smallest l such that 2^-l <= width.
    pub fn code_bit_len(&self) -> u64 {
        let wb = self.width.bits();
        let db = self.den.bits();
        let mut l = db.saturating_sub(wb);
        while (&self.width << l) < self.den {
            l += 1;
        }
        l
    }

    /// The l-bit code word: the smallest multiple of 2^-l in the interval,
    /// written MSB first.
    pub fn finalize(&self) -> BitString {
        let l = self.code_bit_len();
        let scaled = &self.lo << l;
        let c = (&scaled + &self.den - BigUint::one()) / &self.den; // ceil
        debug_assert!(
            &c * &self.den < (&self.lo + &self.width) << l,
            "chosen dyadic fell outside the interval"
        );
        let mut bits = BitString::with_capacity(l as usize);
        for i in (0..l).rev() {
            bits.push(if c.bit(i) { 1 } else { 0 });
        }
        bits
    }
}

/// The transmitted code: dyadic bits plus the out-of-band source length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeOutput {
    pub bits: BitString,
    pub declared_len: u64,
}

/// Accounting for one encode run.
#[derive(Clone, Debug)]
pub struct EncodeStats {
    /// Sum of -log2(p) over all emissions.
    pub ideal_bits: f64,
    /// Number of code bits the exact interval requires.
    pub exact_bits: u64,
    /// Final interval width as (numerator, denominator).
    pub width: (BigUint, BigUint),
}

/// Streaming encoder; the exact interval is optional so that long runs can
/// use the ideal-length accounting alone.
pub struct Encoder {
    model: ContextModel,
    interval: Option<CodeInterval>,
    ideal_bits: f64,
    source_bits: u64,
}

impl Encoder {
    pub fn new(mode: Mode, exact: bool) -> Self {
        Encoder {
            model: ContextModel::new(mode),
            interval: exact.then(CodeInterval::unit),
            ideal_bits: 0.0,
            source_bits: 0,
        }
    }

    pub fn model(&mut self) -> &mut ContextModel {
        &mut self.model
    }

    /// Encodes one source bit: escape cascade, interval narrowing, model
    /// update.
    pub fn step(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        let levels = self.model.cascade();
        for level in levels {
            let (predicts, ev) = match level.context_len {
                None => (true, level.event_bounds(crate::model::Event::Sym(bit))),
                Some(_) => {
                    let predicts = level.counts[bit as usize] > 0;
                    let event = if predicts {
                        crate::model::Event::Sym(bit)
                    } else {
                        crate::model::Event::Escape
                    };
                    (predicts, level.event_bounds(event))
                }
            };
            self.ideal_bits -= ((ev.1 - ev.0) as f64 / level.total as f64).log2();
            if let Some(iv) = &mut self.interval {
                iv.narrow(ev.0, ev.1, level.total);
            }
            if predicts {
                break;
            }
        }
        self.model.update(bit);
        self.source_bits += 1;
    }

    pub fn ideal_bits(&self) -> f64 {
        self.ideal_bits
    }

    pub fn source_bits(&self) -> u64 {
        self.source_bits
    }

    pub fn interval(&self) -> Option<&CodeInterval> {
        self.interval.as_ref()
    }

    pub fn finish(self) -> (CodeOutput, EncodeStats) {
        let iv = self
            .interval
            .expect("finish requires an exact-interval encoder");
        let bits = iv.finalize();
        let exact_bits = bits.len() as u64;
        let (w, d) = iv.width_parts();
        (
            CodeOutput {
                bits,
                declared_len: self.source_bits,
            },
            EncodeStats {
                ideal_bits: self.ideal_bits,
                exact_bits,
                width: (w.clone(), d.clone()),
            },
        )
    }
}

/// Encodes `input` under the given model configuration.
pub fn encode(mode: Mode, input: &BitString) -> (CodeOutput, EncodeStats) {
    let mut enc = Encoder::new(mode, true);
    for &b in input.as_slice() {
        enc.step(b);
    }
    enc.finish()
}

/// Like [`encode`], also returning the per-bit emission chains.
pub fn encode_with_trace(
    mode: Mode,
    input: &BitString,
) -> (CodeOutput, EncodeStats, Vec<EmissionChain>) {
    let mut enc = Encoder::new(mode, true);
    let mut chains = Vec::with_capacity(input.len());
    for &b in input.as_slice() {
        chains.push(enc.model().emit(b));
        enc.step(b);
    }
    let (out, stats) = enc.finish();
    (out, stats, chains)
}

/// Ideal-length fast path: sum of -log2 p without code materialisation.
pub fn encode_ideal(mode: Mode, input: &BitString) -> f64 {
    let mut enc = Encoder::new(mode, false);
    for &b in input.as_slice() {
        enc.step(b);
    }
    enc.ideal_bits()
}

/// Reconstructs the source by mirroring the model evolution and locating the
/// code value in successive event subintervals.
pub fn decode(mode: Mode, code: &CodeOutput) -> Result<BitString, Error> {
    let mut model = ContextModel::new(mode);
    let l = code.bits.len() as u64;
    let mut c = BigUint::zero();
    for &b in code.bits.as_slice() {
        c = (c << 1u32) + b;
    }
    let pow2l = BigUint::one() << l;

    let mut lo = BigUint::zero();
    let mut width = BigUint::one();
    // c scaled by the running denominator, so comparisons avoid it
    let mut c_scaled = c.clone();

    let mut out = BitString::with_capacity(code.declared_len as usize);
    for _ in 0..code.declared_len {
        // corrupt-stream guard: c must lie in the current interval
        if &c_scaled < &(&lo * &pow2l) || c_scaled >= (&lo + &width) * &pow2l {
            return Err(Error::Corrupt(
                "code value left the decoding interval".into(),
            ));
        }
        let mut decoded = None;
        'levels: for level in model.cascade() {
            use crate::model::Event;
            let events: [Event; 3] = [Event::Sym(0), Event::Sym(1), Event::Escape];
            for event in events {
                let (a, b) = level.event_bounds(event);
                if a == b {
                    continue;
                }
                // c < lo + width * b / total ?
                let rhs = (&lo * level.total + &width * b) << l;
                if &c_scaled * level.total < rhs {
                    lo = &lo * level.total + &width * a;
                    width = &width * (b - a);
                    c_scaled *= level.total;
                    match event {
                        Event::Sym(s) => {
                            decoded = Some(s);
                            break 'levels;
                        }
                        Event::Escape => continue 'levels,
                    }
                }
            }
            return Err(Error::Corrupt(
                "code value outside every event subinterval".into(),
            ));
        }
        let bit = decoded
            .ok_or_else(|| Error::Corrupt("cascade ended without a symbol".into()))?;
        out.push(bit);
        model.update(bit);
    }
    Ok(out)
}
