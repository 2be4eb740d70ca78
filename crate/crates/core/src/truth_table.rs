//! Truth tables of Boolean functions on up to [`MAX_TABLE_N`] variables.
//!
//! Hex encoding: the table is read as one big integer whose bit `i` is
//! `f` on the input with index `i` (see [`crate::bits`]). So `FE` on three
//! bits is OR and `80` is AND.

use crate::bits::index_to_bits;
use crate::dtree::DTree;
use crate::error::{Error, Result};

pub const MAX_TABLE_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl TruthTable {
    pub fn zeros(n: usize) -> Result<Self> {
        if n > MAX_TABLE_N {
            return Err(Error::EnumerationLimit {
                n,
                limit: MAX_TABLE_N,
            });
        }
        Ok(TruthTable {
            n,
            words: vec![0; word_count(n)],
        })
    }

    pub fn from_fn<F: FnMut(&[bool]) -> bool>(n: usize, mut f: F) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for i in 0..1u64 << n {
            if f(&index_to_bits(i, n)) {
                t.set(i, true);
            }
        }
        Ok(t)
    }

    /// The function computed by a tree whose leaves all carry 0/1 outputs.
    pub fn from_tree(t: &DTree) -> Result<Self> {
        let mut out = Self::zeros(t.n())?;
        for i in 0..1u64 << t.n() {
            let leaf = t.eval_leaf_ix(&index_to_bits(i, t.n()))?;
            out.set(i, t.leaf_output_bit(leaf)?);
        }
        Ok(out)
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        let s = hex.trim();
        let s = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
        if s.is_empty() {
            return Err(Error::Malformed("empty truth table".into()));
        }
        let len = 1u64 << n;
        for (k, c) in s.chars().rev().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::Malformed(format!("invalid hex digit {c:?} in truth table")))?;
            for b in 0..4u64 {
                if d >> b & 1 == 1 {
                    let i = 4 * k as u64 + b;
                    if i >= len {
                        return Err(Error::Malformed(format!(
                            "truth table {hex:?} does not fit in 2^{n} bits"
                        )));
                    }
                    t.set(i, true);
                }
            }
        }
        Ok(t)
    }

    /// Inverse of [`TruthTable::from_hex`], with exactly ceil(2^n / 4) digits.
    pub fn to_hex(&self) -> String {
        let len = 1u64 << self.n;
        let digits = len.div_ceil(4) as usize;
        (0..digits)
            .rev()
            .map(|k| {
                let d = (0..4u64)
                    .filter(|b| 4 * k as u64 + b < len && self.get(4 * k as u64 + b))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(d, 16).expect("digit < 16").to_ascii_uppercase()
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, index: u64) -> bool {
        self.words[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: u64, v: bool) {
        let w = &mut self.words[(index / 64) as usize];
        if v {
            *w |= 1 << (index % 64);
        } else {
            *w &= !(1 << (index % 64));
        }
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.get(crate::bits::bits_to_index(x))
    }

    /// `Some(b)` if the function is constantly `b`.
    pub fn constant(&self) -> Option<bool> {
        let len = 1u64 << self.n;
        let ones: u64 = self.words.iter().map(|w| u64::from(w.count_ones())).sum();
        if ones == 0 {
            Some(false)
        } else if ones == len {
            Some(true)
        } else {
            None
        }
    }

    /// The subfunction on the remaining `n - 1` variables after fixing
    /// variable `var` to `b`. Variables keep their relative order.
    pub fn restrict(&self, var: usize, b: bool) -> TruthTable {
        assert!(var < self.n && self.n > 0);
        let m = self.n - 1;
        let mut out = TruthTable {
            n: m,
            words: vec![0; word_count(m)],
        };
        // In the index, x_var sits at bit position n-1-var.
        let pos = self.n - 1 - var;
        let low_mask = (1u64 << pos) - 1;
        for j in 0..1u64 << m {
            let hi = (j & !low_mask) << 1;
            let i = hi | (u64::from(b) << pos) | (j & low_mask);
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Raw words, for use as a memo key.
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}
