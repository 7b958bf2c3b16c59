//! Lexicographically least de Bruijn strings.
//!
//! `db(n)` is the least binary string of length 2^n that, viewed cyclically,
//! contains every length-n word exactly once. It is generated by Martin's
//! greedy construction: start from 1^(n-1), repeatedly append the smallest
//! bit that keeps all length-n windows distinct, then strip the 1^(n-1)
//! prefix once the working string has reached length 2^n + n - 1.

use crate::bits::BitString;
use crate::error::Error;

/// Default refusal threshold for the order `n`; 2^24 bits is the practical
/// ceiling for the downstream experiments.
pub const DEFAULT_MAX_ORDER: u32 = 24;

/// A (possibly rotated) de Bruijn string of a given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeBruijnString {
    order: u32,
    data: BitString,
    /// Which left rotation of `db(n)` this is.
    shift: u64,
}

impl DeBruijnString {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn data(&self) -> &BitString {
        &self.data
    }

    pub fn shift_amount(&self) -> u64 {
        self.shift
    }

    /// Left rotation by `i` bits: `db(n)[i..] · db(n)[..i]` relative to this
    /// string, with the shift bookkeeping composed modulo 2^n.
    pub fn shift(&self, i: u64) -> Result<DeBruijnString, Error> {
        let len = self.data.len() as u64;
        if i >= len {
            return Err(Error::Domain(format!(
                "shift {i} out of range for order {} (length {len})",
                self.order
            )));
        }
        let bits = self.data.as_slice();
        let mut rotated = Vec::with_capacity(bits.len());
        rotated.extend_from_slice(&bits[i as usize..]);
        rotated.extend_from_slice(&bits[..i as usize]);
        Ok(DeBruijnString {
            order: self.order,
            data: BitString::from_bits(&rotated),
            shift: (self.shift + i) % len,
        })
    }
}

/// Generates `db(n)` via Martin's algorithm with the default order budget.
pub fn martin_db(n: u32) -> Result<DeBruijnString, Error> {
    martin_db_with_budget(n, DEFAULT_MAX_ORDER)
}

/// Generates `db(n)`, refusing orders above `max_order`.
pub fn martin_db_with_budget(n: u32, max_order: u32) -> Result<DeBruijnString, Error> {
    if n == 0 {
        return Err(Error::Domain("de Bruijn order must be at least 1".into()));
    }
    if n > max_order {
        return Err(Error::ResourceLimit(format!(
            "order {n} exceeds the budget of {max_order} (2^{n} bits)"
        )));
    }

    let len = 1usize << n;
    let mask = (len - 1) as u64;
    // Direct-indexed table of the length-n windows already present.
    let mut seen = vec![false; len];
    let mut x: Vec<u8> = vec![1; n as usize - 1];
    let mut window: u64 = if n > 1 { mask >> 1 } else { 0 }; // value of 1^(n-1)

    // Greedy extension, 0 before 1. The working string stops growing at
    // length 2^n + n - 1.
    while x.len() < len + n as usize - 1 {
        let zero = (window << 1) & mask;
        let one = zero | 1;
        let bit = if !seen[zero as usize] {
            0u8
        } else if !seen[one as usize] {
            1u8
        } else {
            unreachable!("Martin's construction stalled before length 2^n + n - 1")
        };
        window = if bit == 0 { zero } else { one };
        seen[window as usize] = true;
        x.push(bit);
    }

    Ok(DeBruijnString {
        order: n,
        data: BitString::from_bits(&x[n as usize - 1..]),
        shift: 0,
    })
}

/// Exhaustive window scan: true iff every length-n word occurs exactly once
/// in `x · x[0..n-2]`.
pub fn verify_db(x: &BitString, n: u32) -> Result<bool, Error> {
    if n == 0 {
        return Err(Error::Domain("de Bruijn order must be at least 1".into()));
    }
    let len = 1usize << n;
    if x.len() != len {
        return Err(Error::Domain(format!(
            "expected length {len} for order {n}, got {}",
            x.len()
        )));
    }
    let mask = (len - 1) as u64;
    let mut counts = vec![0u32; len];
    let mut window: u64 = 0;
    for i in 0..len + n as usize - 1 {
        let bit = x.get(i % len); // wrap-around covers x[0..n-2]
        window = ((window << 1) | bit as u64) & mask;
        if i + 1 >= n as usize {
            counts[window as usize] += 1;
        }
    }
    Ok(counts.iter().all(|&c| c == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db3_is_the_least_de_bruijn_string() {
        // Hand trace: 11 -> 110 -> 1100 -> 11000 -> 110001 -> 1100010
        // -> 11000101 -> 110001011 -> 1100010111, strip the 11 prefix.
        assert_eq!(martin_db(3).unwrap().data().to_ascii(), "00010111");
    }

    #[test]
    fn db1_is_01() {
        assert_eq!(martin_db(1).unwrap().data().to_ascii(), "01");
    }

    #[test]
    fn db6_matches_known_value() {
        assert_eq!(
            martin_db(6).unwrap().data().to_ascii(),
            "0000001000011000101000111001001011001101001111010101110110111111"
        );
    }

    #[test]
    fn shift_examples() {
        let db3 = martin_db(3).unwrap();
        assert_eq!(db3.shift(0).unwrap().data().to_ascii(), "00010111");
        assert_eq!(db3.shift(1).unwrap().data().to_ascii(), "00101110");
        let db6 = martin_db(6).unwrap();
        assert_eq!(
            db6.shift(1).unwrap().data().to_ascii(),
            "0000010000110001010001110010010110011010011110101011101101111110"
        );
    }

    #[test]
    fn shift_out_of_range_rejected() {
        let db3 = martin_db(3).unwrap();
        assert!(db3.shift(8).is_err());
    }

    #[test]
    fn verify_db_accepts_and_rejects() {
        let db3 = martin_db(3).unwrap();
        assert!(verify_db(db3.data(), 3).unwrap());
        let zeros = BitString::parse("00000000").unwrap();
        assert!(!verify_db(&zeros, 3).unwrap());
        assert!(verify_db(&zeros, 2).is_err()); // length mismatch
    }

    #[test]
    fn all_orders_up_to_14_verify() {
        for n in 1..=14 {
            let db = martin_db(n).unwrap();
            assert_eq!(db.data().len(), 1 << n);
            assert!(verify_db(db.data(), n).unwrap(), "order {n}");
        }
    }

    #[test]
    fn prefix_and_suffix_identities() {
        // db(n) starts with 0^n 1 0^(n-2) 1 1 and ends with 1^n, n >= 3.
        for n in 3..=14u32 {
            let db = martin_db(n).unwrap();
            let mut expected_prefix = vec![0u8; n as usize];
            expected_prefix.push(1);
            expected_prefix.extend(vec![0u8; n as usize - 2]);
            expected_prefix.extend([1, 1]);
            assert_eq!(
                &db.data().as_slice()[..2 * n as usize + 1],
                &expected_prefix[..],
                "prefix identity at n={n}"
            );
            let tail = &db.data().as_slice()[(1usize << n) - n as usize..];
            assert!(tail.iter().all(|&b| b == 1), "suffix identity at n={n}");
        }
    }

    #[test]
    fn shift_composition_round_trips() {
        let db4 = martin_db(4).unwrap();
        for i in 1..16u64 {
            let back = db4.shift(i).unwrap().shift(16 - i).unwrap();
            assert_eq!(back.data(), db4.data());
            assert_eq!(back.shift_amount(), 0);
        }
    }

    #[test]
    fn rejects_order_zero_and_over_budget() {
        assert!(martin_db(0).is_err());
        assert!(matches!(martin_db(25), Err(Error::ResourceLimit(_))));
        assert!(matches!(
            martin_db_with_budget(15, 14),
            Err(Error::ResourceLimit(_))
        ));
        assert!(martin_db_with_budget(15, 15).is_ok());
    }
}
