//! Experiment drivers: compression-ratio curves over prefixes of S, the
//! closed-form bound checks, and the named verification suites behind the
//! `verify` subcommand.

use std::fmt;

use crate::bits::BitString;
use crate::coder::Encoder;
use crate::debruijn::{martin_db, verify_db};
use crate::error::Error;
use crate::lz78::StreamingLz;
use crate::model::{ContextModel, Mode};
use crate::oracle;
use crate::sequence::{self, check_enumeration, zone_of, zone_start};

/// A compressor configuration for the ratio curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    PpmStar,
    PpmK(u32),
    Lz78,
}

impl Algo {
    pub fn label(&self) -> &'static str {
        match self {
            Algo::PpmStar => "ppm_star",
            Algo::PpmK(_) => "ppm_k",
            Algo::Lz78 => "lz78",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match self {
            Algo::PpmK(k) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::PpmK(k) => write!(f, "ppm_k(k={k})"),
            _ => write!(f, "{}", self.label()),
        }
    }
}

/// One measured point of a ratio curve.
#[derive(Clone, Debug)]
pub struct RatioRecord {
    pub prefix_len: u64,
    /// Zone containing the last bit of the prefix.
    pub zone: u32,
    pub algo: Algo,
    pub output_bits: u64,
    pub ratio: f64,
}

/// Measured vs closed-form bits for one zone.
#[derive(Clone, Debug)]
pub struct BoundRecord {
    pub n: u32,
    pub measured_bits: f64,
    pub bound_bits: f64,
}

impl BoundRecord {
    pub fn holds(&self) -> bool {
        self.measured_bits <= self.bound_bits
    }
}

/// Per-zone bits for a whole zone: (2^n + 2n + n^2)·log2(n^5)
/// + log2((n−1)^n · n^(2^(n+1))).
pub fn zone_bound_bits(n: u32) -> f64 {
    let nf = n as f64;
    let pow = (1u64 << n) as f64;
    (pow + 2.0 * nf + nf * nf) * 5.0 * nf.log2()
        + nf * (nf - 1.0).log2()
        + 2.0 * pow * nf.log2()
}

/// Bits for the first 2^n + 2n bits of a zone: (2^n + 2n)·log2(n^5).
pub fn bad_zone_bound_bits(n: u32) -> f64 {
    let nf = n as f64;
    ((1u64 << n) as f64 + 2.0 * nf) * 5.0 * nf.log2()
}

/// Length of the bad zone of S_n.
pub fn bad_zone_len(n: u32) -> u64 {
    (1u64 << n) + 2 * n as u64
}

/// Default measurement points: every zone boundary and every bad-zone end
/// up to the end of S_n_max, ascending.
pub fn sample_points(n_max: u32) -> Vec<u64> {
    let mut pts = Vec::new();
    for n in 1..=n_max {
        pts.push(zone_start(n + 1));
        if n >= 2 {
            pts.push(zone_start(n) + bad_zone_len(n));
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Ideal code length (sum of −log2 p) of S↾p for each requested p,
/// in one streaming pass. `points` must be ascending.
pub fn ideal_bits_at_points(mode: Mode, points: &[u64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    let mut enc = Encoder::new(mode, false);
    let mut stream = sequence::Stream::new();
    let mut pos = 0u64;
    for &p in points {
        while pos < p {
            enc.step(stream.next().expect("sequence stream is infinite"));
            pos += 1;
        }
        out.push(enc.ideal_bits());
    }
    out
}

/// LZ78 code length of S↾p for each requested p. `points` must be ascending.
pub fn lz_bits_at_points(points: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(points.len());
    let mut lz = StreamingLz::new();
    let mut stream = sequence::Stream::new();
    let mut pos = 0u64;
    for &p in points {
        while pos < p {
            lz.step(stream.next().expect("sequence stream is infinite"));
            pos += 1;
        }
        out.push(lz.code_bits());
    }
    out
}

/// Ratio-curve records for the given algorithms at the given prefix
/// lengths of S. Zero-length points are skipped. Algorithms run on their
/// own threads; the result is merged in (algo, prefix) order.
pub fn ratio_curve(algos: &[Algo], points: &[u64]) -> Vec<RatioRecord> {
    let points: Vec<u64> = points.iter().copied().filter(|&p| p > 0).collect();
    let mut per_algo: Vec<Vec<RatioRecord>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = algos
            .iter()
            .map(|&algo| {
                let points = &points;
                scope.spawn(move || {
                    let bits: Vec<u64> = match algo {
                        Algo::PpmStar => ideal_bits_at_points(Mode::Star, points)
                            .into_iter()
                            .map(|b| b.ceil() as u64)
                            .collect(),
                        Algo::PpmK(k) => {
                            ideal_bits_at_points(Mode::Bounded(k), points)
                                .into_iter()
                                .map(|b| b.ceil() as u64)
                                .collect()
                        }
                        Algo::Lz78 => lz_bits_at_points(points),
                    };
                    points
                        .iter()
                        .zip(bits)
                        .map(|(&p, output_bits)| RatioRecord {
                            prefix_len: p,
                            zone: zone_of(p - 1),
                            algo,
                            output_bits,
                            ratio: output_bits as f64 / p as f64,
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            per_algo.push(h.join().expect("ratio-curve worker panicked"));
        }
    });
    per_algo.into_iter().flatten().collect()
}

/// Deterministic CSV rendering of ratio records.
pub fn ratio_csv(records: &[RatioRecord]) -> String {
    let mut out = String::from("prefix_len,zone,algo,k,output_bits,ratio\n");
    for r in records {
        let k = r.algo.k().map(|k| k.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            r.prefix_len,
            r.zone,
            r.algo.label(),
            k,
            r.output_bits,
            r.ratio
        ));
    }
    out
}

/// Bits the star model spends on each whole zone S_n, n in
/// `n_lo..=n_hi`, against the closed-form zone bound.
pub fn zone_bound_records(n_lo: u32, n_hi: u32) -> Vec<BoundRecord> {
    let points: Vec<u64> = (n_lo..=n_hi + 1).map(zone_start).collect();
    let at = ideal_bits_at_points(Mode::Star, &points);
    (n_lo..=n_hi)
        .map(|n| {
            let i = (n - n_lo) as usize;
            BoundRecord {
                n,
                measured_bits: at[i + 1] - at[i],
                bound_bits: zone_bound_bits(n),
            }
        })
        .collect()
}

/// Bits the star model spends on each bad zone (the first 2^n + 2n bits
/// of S_n) against its bound.
pub fn bad_zone_records(n_lo: u32, n_hi: u32) -> Vec<BoundRecord> {
    let mut points = Vec::new();
    for n in n_lo..=n_hi {
        points.push(zone_start(n));
        points.push(zone_start(n) + bad_zone_len(n));
    }
    let at = ideal_bits_at_points(Mode::Star, &points);
    (n_lo..=n_hi)
        .map(|n| {
            let i = 2 * (n - n_lo) as usize;
            BoundRecord {
                n,
                measured_bits: at[i + 1] - at[i],
                bound_bits: bad_zone_bound_bits(n),
            }
        })
        .collect()
}

/// Largest per-bit cost (−log2 p) the star model pays inside zone S_n,
/// for each n in `n_lo..=n_hi`.
pub fn max_bit_cost_per_zone(n_lo: u32, n_hi: u32) -> Vec<(u32, f64)> {
    let mut enc = Encoder::new(Mode::Star, false);
    let mut stream = sequence::Stream::new();
    let mut pos = 0u64;
    while pos < zone_start(n_lo) {
        enc.step(stream.next().unwrap());
        pos += 1;
    }
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        let end = zone_start(n + 1);
        let mut max_cost = 0.0f64;
        while pos < end {
            let before = enc.ideal_bits();
            enc.step(stream.next().unwrap());
            pos += 1;
            max_cost = max_cost.max(enc.ideal_bits() - before);
        }
        out.push((n, max_cost));
    }
    out
}

/// After S↾|S_1…S_{n−1}| plus the first 2^n + n bits of S_n, does the star
/// model store every context of length n?
pub fn all_length_n_contexts_present(n: u32) -> bool {
    let limit = zone_start(n) + (1u64 << n) + n as u64;
    let mut model = ContextModel::new(Mode::Star);
    for b in sequence::Stream::new().take(limit as usize) {
        model.update(b);
    }
    let mut w = vec![0u8; n as usize];
    loop {
        if !model.context_exists(&BitString::from_bits(&w)) {
            return false;
        }
        // next word in lexicographic order
        let mut i = n as usize;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if w[i] == 0 {
                w[i] = 1;
                break;
            }
            w[i] = 0;
        }
    }
}

/// Machine-format snapshot of the bounded k=3 model after 0100110110.
pub const EXPECTED_BOUNDED_SNAPSHOT: &str = "\
001\t1\t1\t1/2\n001\t$\t1\t1/2\n\
010\t0\t1\t1/2\n010\t$\t1\t1/2\n\
011\t0\t2\t2/3\n011\t$\t1\t1/3\n\
100\t1\t1\t1/2\n100\t$\t1\t1/2\n\
101\t1\t1\t1/2\n101\t$\t1\t1/2\n\
110\t1\t1\t1/2\n110\t$\t1\t1/2\n\
00\t1\t1\t1/2\n00\t$\t1\t1/2\n\
01\t0\t1\t1/5\n01\t1\t2\t2/5\n01\t$\t2\t2/5\n\
10\t0\t1\t1/4\n10\t1\t1\t1/4\n10\t$\t2\t1/2\n\
11\t0\t2\t2/3\n11\t$\t1\t1/3\n\
0\t0\t1\t1/6\n0\t1\t3\t1/2\n0\t$\t2\t1/3\n\
1\t0\t3\t3/7\n1\t1\t2\t2/7\n1\t$\t2\t2/7\n\
\u{3bb}\t0\t5\t5/12\n\u{3bb}\t1\t5\t5/12\n\u{3bb}\t$\t2\t1/6\n\
\u{22a5}\t0\t1\t1/2\n\u{22a5}\t1\t1\t1/2\n";

/// Machine-format snapshot of the star model after 0100110110.
pub const EXPECTED_STAR_SNAPSHOT: &str = "\
01101\t1\t1\t1/2\n01101\t$\t1\t1/2\n\
0110\t1\t1\t1/2\n0110\t$\t1\t1/2\n\
1101\t1\t1\t1/2\n1101\t$\t1\t1/2\n\
010\t0\t1\t1/2\n010\t$\t1\t1/2\n\
011\t0\t2\t2/3\n011\t$\t1\t1/3\n\
100\t1\t1\t1/2\n100\t$\t1\t1/2\n\
101\t1\t1\t1/2\n101\t$\t1\t1/2\n\
110\t1\t1\t1/2\n110\t$\t1\t1/2\n\
00\t1\t1\t1/2\n00\t$\t1\t1/2\n\
01\t0\t1\t1/5\n01\t1\t2\t2/5\n01\t$\t2\t2/5\n\
10\t0\t1\t1/4\n10\t1\t1\t1/4\n10\t$\t2\t1/2\n\
11\t0\t2\t2/3\n11\t$\t1\t1/3\n\
0\t0\t1\t1/6\n0\t1\t3\t1/2\n0\t$\t2\t1/3\n\
1\t0\t3\t3/7\n1\t1\t2\t2/7\n1\t$\t2\t2/7\n\
\u{3bb}\t0\t5\t5/12\n\u{3bb}\t1\t5\t5/12\n\u{3bb}\t$\t2\t1/6\n\
\u{22a5}\t0\t1\t1/2\n\u{22a5}\t1\t1\t1/2\n";

/// The input both reference snapshots describe.
pub const SNAPSHOT_INPUT: &str = "0100110110";

/// Result of one verification suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl SuiteReport {
    fn check(&mut self, label: &str, ok: bool) {
        self.passed &= ok;
        self.lines
            .push(format!("{}: {label}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.lines.push(line);
    }
}

pub const SUITES: &[&str] = &[
    "enumeration",
    "tables",
    "debruijn",
    "theorem1",
    "badzone",
    "lemma3",
    "lemma5",
    "oracle",
];

/// Runs one named verification suite at its desk scale.
pub fn run_suite(name: &str) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport {
        name: name.to_string(),
        passed: true,
        lines: Vec::new(),
    };
    match name {
        "enumeration" => {
            for n in 1..=14 {
                let ok = check_enumeration(n)?;
                report.check(&format!("every length-{n} word once in block position in S_{n}"), ok);
            }
        }
        "tables" => {
            let input = BitString::parse(SNAPSHOT_INPUT)?;
            let mut bounded = ContextModel::new(Mode::Bounded(3));
            let mut star = ContextModel::new(Mode::Star);
            for &b in input.as_slice() {
                bounded.update(b);
                star.update(b);
            }
            report.check(
                "bounded k=3 snapshot matches the reference table",
                bounded.snapshot(None).render_machine() == EXPECTED_BOUNDED_SNAPSHOT,
            );
            report.check(
                "star snapshot matches the reference table",
                star.snapshot(None).render_machine() == EXPECTED_STAR_SNAPSHOT,
            );
        }
        "debruijn" => {
            report.check(
                "db(6) equals the known value",
                martin_db(6)?.data().to_ascii()
                    == "0000001000011000101000111001001011001101001111010101110110111111",
            );
            for n in 1..=14 {
                report.check(
                    &format!("db({n}) passes the cyclic window scan"),
                    verify_db(martin_db(n)?.data(), n)?,
                );
            }
            for n in 3..=14u32 {
                let db = martin_db(n)?;
                let d = db.data().as_slice();
                let mut pre = vec![0u8; n as usize];
                pre.push(1);
                pre.extend(vec![0u8; n as usize - 2]);
                pre.extend([1, 1]);
                let prefix_ok = d[..pre.len()] == pre[..];
                let suffix_ok = d[(1usize << n) - n as usize..].iter().all(|&b| b == 1);
                report.check(&format!("db({n}) prefix/suffix identities"), prefix_ok && suffix_ok);
            }
            for n in 1..=5 {
                report.check(
                    &format!("db({n}) is the lexicographic minimum (independent search)"),
                    oracle::exhaustive_db_check(n),
                );
            }
        }
        "theorem1" => {
            for r in zone_bound_records(8, 13) {
                report.note(format!(
                    "zone {}: {:.1} bits measured, {:.1} bound",
                    r.n, r.measured_bits, r.bound_bits
                ));
                report.check(&format!("zone {} within the zone bound", r.n), r.holds());
            }
        }
        "badzone" => {
            for r in bad_zone_records(8, 13) {
                report.note(format!(
                    "bad zone {}: {:.1} bits measured, {:.1} bound",
                    r.n, r.measured_bits, r.bound_bits
                ));
                report.check(&format!("bad zone {} within its bound", r.n), r.holds());
            }
        }
        "lemma3" => {
            for n in 3..=10 {
                report.check(
                    &format!("all 2^{n} length-{n} contexts present after 2^{n}+{n} bits of S_{n}"),
                    all_length_n_contexts_present(n),
                );
            }
        }
        "lemma5" => {
            for (n, cost) in max_bit_cost_per_zone(8, 13) {
                let bound = 5.0 * (n as f64).log2();
                report.note(format!(
                    "zone {n}: max per-bit cost {cost:.3}, bound {bound:.3}"
                ));
                report.check(&format!("zone {n} per-bit cost within log2(n^5)"), cost <= bound);
            }
        }
        "oracle" => {
            let prefix = sequence::prefix(2000);
            for mode in [Mode::Star, Mode::Bounded(3)] {
                let r = oracle::certify_model(mode, &prefix, 8, 250);
                report.check(
                    &format!("{mode:?} model agrees with the slow rebuild on S\u{21be}2000"),
                    r.is_none(),
                );
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown suite '{other}'; available: {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_points_are_boundaries_and_bad_zone_ends() {
        let pts = sample_points(3);
        // boundaries: 2, 10, 34; bad-zone ends: 10+8? zone2 start 2 + (4+4)=10,
        // zone3 start 10 + (8+6)=24
        assert_eq!(pts, vec![2, 10, 24, 34]);
    }

    #[test]
    fn bounds_are_positive_and_grow() {
        assert!(zone_bound_bits(8) > 0.0);
        assert!(bad_zone_bound_bits(8) < zone_bound_bits(8));
        assert!(zone_bound_bits(9) > zone_bound_bits(8));
    }

    #[test]
    fn snapshot_constants_match_model() {
        let input = BitString::parse(SNAPSHOT_INPUT).unwrap();
        let mut bounded = ContextModel::new(Mode::Bounded(3));
        let mut star = ContextModel::new(Mode::Star);
        for &b in input.as_slice() {
            bounded.update(b);
            star.update(b);
        }
        assert_eq!(bounded.snapshot(None).render_machine(), EXPECTED_BOUNDED_SNAPSHOT);
        assert_eq!(star.snapshot(None).render_machine(), EXPECTED_STAR_SNAPSHOT);
    }

    #[test]
    fn ratio_curve_is_deterministic_and_ordered() {
        let algos = [Algo::PpmStar, Algo::PpmK(2), Algo::Lz78];
        let pts = sample_points(6);
        let a = ratio_csv(&ratio_curve(&algos, &pts));
        let b = ratio_csv(&ratio_curve(&algos, &pts));
        assert_eq!(a, b);
        assert!(a.starts_with("prefix_len,zone,algo,k,output_bits,ratio\n"));
        // one row per (algo, point), plus header
        assert_eq!(a.lines().count(), 1 + 3 * pts.len());
    }

    #[test]
    fn zero_point_skipped() {
        let recs = ratio_curve(&[Algo::Lz78], &[0, 2]);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].prefix_len, 2);
    }

    #[test]
    fn context_building_holds_at_small_orders() {
        for n in 3..=6 {
            assert!(all_length_n_contexts_present(n), "n={n}");
        }
    }

    #[test]
    fn small_suites_pass() {
        for name in ["tables", "lemma3"] {
            let r = run_suite(name).unwrap();
            assert!(r.passed, "{name}: {:?}", r.lines);
        }
        assert!(run_suite("nonsense").is_err());
    }
}
