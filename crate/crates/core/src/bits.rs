//! Bitstring helpers shared by every module that enumerates inputs.
//!
//! An input `x ∈ {0,1}^n` is a `Vec<bool>` with `x[0]` the first variable.
//! Its enumeration index reads the string left to right as a binary
//! number, so `x_0` is the most significant bit of the index.

use crate::error::{Error, Result};

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Malformed(format!("invalid bit {other:?} in {s:?}"))),
        })
        .collect()
}

pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn index_to_bits(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect()
}

pub fn bits_to_index(x: &[bool]) -> u64 {
    x.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

/// All `2^n` inputs in index order. Callers are expected to have checked
/// the enumeration limit.
pub fn all_inputs(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |i| index_to_bits(i, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for i in 0..32 {
            assert_eq!(bits_to_index(&index_to_bits(i, 5)), i);
        }
        assert_eq!(format_bits(&index_to_bits(5, 3)), "101");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_bits("10x").is_err());
        assert_eq!(parse_bits(" 011 ").unwrap(), vec![false, true, true]);
    }
}
