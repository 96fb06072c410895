//! Dense subsets of F₂ⁿ stored as 2ⁿ-bit arrays.
//!
//! Element `x` is bit `x & 63` of word `x >> 6`. Bit `i` of `x` is coordinate
//! `i` in the standard basis, and group addition is XOR. The same bit array
//! doubles as a subset of the cube Qₙ.

use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicRational;
use crate::error::{Error, Result};

/// Elements of F₂ⁿ, coordinate `i` in bit `i`.
pub type GroupElement = u32;

/// Largest ambient dimension the dense representation accepts (2²⁸ bits = 32 MiB).
pub const MAX_DIM: u32 = 28;

const BLOCK_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Number of ones of `x` in the standard basis.
#[inline]
pub fn weight(x: GroupElement) -> u32 {
    x.count_ones()
}

/// Applies `x ↦ x XOR low` to the 64 positions of one word (`low < 64`).
#[inline]
fn permute_word(mut w: u64, low: u32) -> u64 {
    for (k, &m) in BLOCK_MASKS.iter().enumerate() {
        if low >> k & 1 == 1 {
            let s = 1u32 << k;
            w = ((w & m) << s) | ((w >> s) & m);
        }
    }
    w
}

pub(crate) fn check_dim(n: u32) -> Result<()> {
    if n > MAX_DIM {
        Err(Error::Capacity { n, max: MAX_DIM })
    } else {
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseSet {
    n: u32,
    words: Vec<u64>,
    card: u64,
}

impl std::fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.n <= 6 {
            f.debug_struct("DenseSet")
                .field("n", &self.n)
                .field("elements", &self.elements())
                .finish()
        } else {
            f.debug_struct("DenseSet")
                .field("n", &self.n)
                .field("card", &self.card)
                .finish()
        }
    }
}

impl DenseSet {
    fn word_count(n: u32) -> usize {
        if n >= 6 {
            1 << (n - 6)
        } else {
            1
        }
    }

    /// Mask of valid bits in each word (only below 2⁶ bits is it partial).
    fn word_mask(n: u32) -> u64 {
        if n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1u32 << n)) - 1
        }
    }

    pub(crate) fn from_words(n: u32, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), Self::word_count(n));
        let mask = Self::word_mask(n);
        for w in &mut words {
            *w &= mask;
        }
        let card = words.iter().map(|w| u64::from(w.count_ones())).sum();
        Self { n, words, card }
    }

    pub fn empty(n: u32) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::from_words(n, vec![0; Self::word_count(n)]))
    }

    pub fn full(n: u32) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::from_words(n, vec![u64::MAX; Self::word_count(n)]))
    }

    pub fn from_elements<I>(n: u32, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        check_dim(n)?;
        let mut words = vec![0u64; Self::word_count(n)];
        for x in elements {
            if u64::from(x) >> n != 0 {
                return Err(Error::OutOfRange { value: u64::from(x), n });
            }
            words[(x >> 6) as usize] |= 1 << (x & 63);
        }
        Ok(Self::from_words(n, words))
    }

    pub fn from_predicate(n: u32, mut pred: impl FnMut(GroupElement) -> bool) -> Result<Self> {
        check_dim(n)?;
        let size = 1u64 << n;
        let mut words = vec![0u64; Self::word_count(n)];
        for x in 0..size {
            if pred(x as GroupElement) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(Self::from_words(n, words))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Cardinality.
    pub fn card(&self) -> u64 {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card == 1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: GroupElement) -> bool {
        u64::from(x) >> self.n == 0 && self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i as u32) << 6;
            BitIter(w).map(move |b| base | b)
        })
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.iter().collect()
    }

    /// Exact density |A| / 2ⁿ.
    pub fn density(&self) -> DyadicRational {
        DyadicRational::from_count(self.card, self.n)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.same_dim(other)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_words(self.n, words))
    }

    pub fn complement(&self) -> Self {
        Self::from_words(self.n, self.words.iter().map(|w| !w).collect())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    /// The translate `a + A`.
    pub fn translate(&self, a: GroupElement) -> Self {
        let mut out = vec![0u64; self.words.len()];
        or_translate_into(&mut out, &self.words, a);
        Self::from_words(self.n, out)
    }

    /// The sumset `{a XOR b : a ∈ A, b ∈ B}`.
    ///
    /// ORs together translates of the larger set by every element of the
    /// smaller one, one word at a time.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let (small, large) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![0u64; self.words.len()];
        if small.is_empty() {
            return Ok(Self::from_words(self.n, out));
        }
        let mask = Self::word_mask(self.n);
        for (i, a) in small.iter().enumerate() {
            or_translate_into(&mut out, &large.words, a);
            if i % 64 == 63 && out.iter().all(|&w| w == mask) {
                break;
            }
        }
        Ok(Self::from_words(self.n, out))
    }

    /// Text document form: `{"n": .., "elements": [..]}` with sorted elements.
    pub fn to_document(&self) -> SetDocument {
        SetDocument {
            n: self.n,
            elements: self.elements(),
        }
    }

    pub fn from_document(doc: &SetDocument) -> Result<Self> {
        check_dim(doc.n)?;
        if doc.elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("elements must be sorted and duplicate-free".into()));
        }
        Self::from_elements(doc.n, doc.elements.iter().copied())
    }

    /// Raw binary form: magic, one byte `n`, then ⌈2ⁿ/8⌉ bytes, bit `x` at
    /// byte `x / 8`, position `x % 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let len = Self::byte_len(self.n);
        let mut out = Vec::with_capacity(BINARY_MAGIC.len() + 1 + len);
        out.extend_from_slice(BINARY_MAGIC);
        out.push(self.n as u8);
        out.extend(self.words.iter().flat_map(|w| w.to_le_bytes()).take(len));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = BINARY_MAGIC.len() + 1;
        if bytes.len() < header || &bytes[..BINARY_MAGIC.len()] != BINARY_MAGIC {
            return Err(Error::Parse("missing F2SET magic".into()));
        }
        let n = u32::from(bytes[BINARY_MAGIC.len()]);
        check_dim(n)?;
        let body = &bytes[header..];
        let len = Self::byte_len(n);
        if body.len() != len {
            return Err(Error::Parse(format!(
                "expected {len} payload bytes, found {}",
                body.len()
            )));
        }
        let mut words = vec![0u64; Self::word_count(n)];
        for (i, chunk) in body.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words[i] = u64::from_le_bytes(buf);
        }
        if words[0] & !Self::word_mask(n) != 0 {
            return Err(Error::Parse("bits set beyond 2^n".into()));
        }
        Ok(Self::from_words(n, words))
    }

    fn byte_len(n: u32) -> usize {
        (1usize << n).div_ceil(8)
    }
}

pub const BINARY_MAGIC: &[u8; 8] = b"F2SET\0\0\0";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDocument {
    pub n: u32,
    pub elements: Vec<GroupElement>,
}

/// `out |= src` translated by `a`.
pub(crate) fn or_translate_into(out: &mut [u64], src: &[u64], a: GroupElement) {
    let high = (a >> 6) as usize;
    let low = a & 63;
    if low == 0 {
        for (w, &s) in src.iter().enumerate() {
            out[w ^ high] |= s;
        }
    } else {
        for (w, &s) in src.iter().enumerate() {
            out[w ^ high] |= permute_word(s, low);
        }
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros();
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}
