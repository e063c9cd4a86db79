use std::cmp::Ordering;
use std::fmt;

use crate::error::{check_len, Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Dense vector over GF(2) with an explicit length.
///
/// Bit `i` doubles as the coefficient of `Z^i` when the vector is read as
/// an element of `F2[Z]/(Z^n + 1)`. Storage bits at positions `>= len` are
/// always zero, so equality and hashing are bit-exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from explicit positions; out-of-range positions are an error.
    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(Error::invalid(format!("position {p} out of range for length {len}")));
            }
            v.set(p, true);
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Low `len` bits of `value`; higher bits must be clear.
    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        if len < WORD && value >> len != 0 {
            return Err(Error::invalid(format!("value {value:#x} does not fit in {len} bits")));
        }
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
        } else if value != 0 {
            return Err(Error::invalid("nonzero value for empty vector"));
        }
        Ok(v)
    }

    pub(crate) fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVec { words, len };
        v.clear_tail();
        v
    }

    /// Parses a `0`/`1` string, leftmost character is position 0.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Parse(format!("not a bit string: {s:?}"))),
            }
        }
        Ok(Self::from_bools(&bits))
    }

    /// Parses the packed hex form written by [`BitVec::to_hex`]. The `0x`
    /// prefix is optional.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        if digits.is_empty() {
            return Err(Error::Parse(format!("empty hex string {s:?}")));
        }
        let mut v = Self::zeros(len);
        for (k, c) in digits.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?} in {s:?}")))?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let pos = 4 * k + b;
                    if pos >= len {
                        return Err(Error::Parse(format!("hex {s:?} exceeds length {len}")));
                    }
                    v.set(pos, true);
                }
            }
        }
        Ok(v)
    }

    /// Hex of the integer `sum bit_i 2^i`, lowercase, `0x` prefixed, minimal digits.
    pub fn to_hex(&self) -> String {
        let mut nibbles: Vec<u8> = (0..self.len.div_ceil(4))
            .map(|k| {
                let mut nib = 0u8;
                for b in 0..4 {
                    let pos = 4 * k + b;
                    if pos < self.len && self.get(pos) {
                        nib |= 1 << b;
                    }
                }
                nib
            })
            .collect();
        while nibbles.len() > 1 && *nibbles.last().unwrap() == 0 {
            nibbles.pop();
        }
        if nibbles.is_empty() {
            nibbles.push(0);
        }
        let body: String = nibbles
            .iter()
            .rev()
            .map(|&n| char::from_digit(n as u32, 16).unwrap())
            .collect();
        format!("0x{body}")
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The vector as a single machine word, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<()> {
        check_len(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn and(&self, other: &BitVec) -> Result<BitVec> {
        check_len(self.len, other.len)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(BitVec { words, len: self.len })
    }

    /// Cyclic shift towards higher indices: bit `i` moves to `(i + k) mod len`.
    /// As a ring element this is multiplication by `Z^k`.
    pub fn rotate_right(&self, k: usize) -> BitVec {
        if self.len == 0 {
            return self.clone();
        }
        let k = k % self.len;
        if k == 0 {
            return self.clone();
        }
        let mut out = self.shl_truncate(k);
        let wrapped = self.shr(self.len - k);
        for (a, b) in out.words.iter_mut().zip(&wrapped.words) {
            *a |= b;
        }
        out
    }

    pub fn rotate_left(&self, k: usize) -> BitVec {
        if self.len == 0 {
            return self.clone();
        }
        self.rotate_right(self.len - k % self.len)
    }

    fn shl_truncate(&self, k: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let (ws, bs) = (k / WORD, k % WORD);
        for i in (ws..self.words.len()).rev() {
            let src = i - ws;
            let mut v = self.words[src] << bs;
            if bs > 0 && src > 0 {
                v |= self.words[src - 1] >> (WORD - bs);
            }
            out.words[i] = v;
        }
        out.clear_tail();
        out
    }

    fn shr(&self, k: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let (ws, bs) = (k / WORD, k % WORD);
        for i in 0..self.words.len() {
            let src = i + ws;
            if src >= self.words.len() {
                break;
            }
            let mut v = self.words[src] >> bs;
            if bs > 0 && src + 1 < self.words.len() {
                v |= self.words[src + 1] << (WORD - bs);
            }
            out.words[i] = v;
        }
        out
    }

    /// `(self, other)` as one vector of length `self.len + other.len`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Splits into `[0, at)` and `[at, len)`.
    pub fn split_at(&self, at: usize) -> (BitVec, BitVec) {
        assert!(at <= self.len);
        let mut left = BitVec::zeros(at);
        let mut right = BitVec::zeros(self.len - at);
        for i in self.iter_ones() {
            if i < at {
                left.set(i, true);
            } else {
                right.set(i - at, true);
            }
        }
        (left, right)
    }

    /// Lexicographic comparison of the bit sequences read from position 0,
    /// with `0 < 1`. Lengths must match.
    pub fn lex_cmp(&self, other: &BitVec) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                // the lowest differing position decides
                let low = (a ^ b).trailing_zeros();
                return if a >> low & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({}:{})", self.len, self.to_bitstring())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}
