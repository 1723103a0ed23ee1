//! Ultimately-constant binary sequences and the diagonalizable-algebra
//! operations on them.
//!
//! An [`Element`] is stored as a finite prefix (coordinates `1..=n`) plus a
//! tail bit repeated forever. The representation is canonical: either the
//! prefix is empty or its last bit differs from the tail, so structural
//! equality is semantic equality.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

/// A canonical ultimately-constant binary sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    // Bit `j` of the prefix (coordinate `j + 1`) lives at `words[j / 64] >> (j % 64)`.
    // Bits at or beyond `len` are always zero.
    words: Words,
    len: usize,
    tail: bool,
}

/// A length-`n` truncation of a sequence, used by oracles and the
/// truncation homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bitvector(pub Vec<bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementParseError {
    #[error("element `{0}` must have the form bits(tail), e.g. 010(1)")]
    Shape(String),
    #[error("invalid bit `{ch}` in element `{text}`")]
    Bit { text: String, ch: char },
}

fn mask(bits: usize) -> u64 {
    if bits >= WORD {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl Element {
    /// The zero element `(0, 0, ...)`.
    pub fn zero() -> Self {
        Self::constant(false)
    }

    /// The unit element `(1, 1, ...)`.
    pub fn one() -> Self {
        Self::constant(true)
    }

    pub fn constant(bit: bool) -> Self {
        Element {
            words: Words::new(),
            len: 0,
            tail: bit,
        }
    }

    /// Builds the unique canonical element whose coordinates are `prefix`
    /// followed by `tail` forever.
    pub fn canonicalize(prefix: &[bool], tail: bool) -> Self {
        let mut words: Words = SmallVec::from_elem(0, words_for(prefix.len()));
        for (j, &b) in prefix.iter().enumerate() {
            if b {
                words[j / WORD] |= 1 << (j % WORD);
            }
        }
        Self::from_raw(words, prefix.len(), tail)
    }

    /// `count` ones followed by zeros.
    pub fn ones_then_zeros(count: usize) -> Self {
        let mut words: Words = SmallVec::from_elem(u64::MAX, words_for(count));
        if let Some(last) = words.last_mut() {
            *last = mask(count - (words_for(count) - 1) * WORD);
        }
        Element {
            words,
            len: count,
            tail: false,
        }
    }

    // Trims trailing prefix bits equal to the tail. `words` must be zero
    // beyond `len`.
    fn from_raw(mut words: Words, len: usize, tail: bool) -> Self {
        let fill = if tail { u64::MAX } else { 0 };
        let mut new_len = 0;
        for w in (0..words.len()).rev() {
            let valid = mask(len.saturating_sub(w * WORD).min(WORD));
            let diff = (words[w] ^ fill) & valid;
            if diff != 0 {
                new_len = w * WORD + (WORD - diff.leading_zeros() as usize);
                break;
            }
        }
        words.truncate(words_for(new_len));
        if let Some(last) = words.last_mut() {
            *last &= mask(new_len - (words_for(new_len) - 1) * WORD);
        }
        Element {
            words,
            len: new_len,
            tail,
        }
    }

    /// Length of the canonical prefix.
    pub fn prefix_len(&self) -> usize {
        self.len
    }

    pub fn tail(&self) -> bool {
        self.tail
    }

    pub fn prefix(&self) -> Vec<bool> {
        (1..=self.len).map(|k| self.coordinate(k)).collect()
    }

    /// The bit at position `k` (1-based).
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn coordinate(&self, k: usize) -> bool {
        assert!(k >= 1, "coordinates are 1-based");
        let j = k - 1;
        if j < self.len {
            (self.words[j / WORD] >> (j % WORD)) & 1 == 1
        } else {
            self.tail
        }
    }

    // Prefix word `w`, with positions at or past `len` filled by the tail.
    fn word(&self, w: usize) -> u64 {
        let fill = if self.tail { u64::MAX } else { 0 };
        let start = w * WORD;
        if start >= self.len {
            return fill;
        }
        let valid = mask(self.len - start);
        (self.words[w] & valid) | (fill & !valid)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        let len = self.len.max(other.len);
        let words: Words = (0..words_for(len))
            .map(|w| {
                let valid = mask(len.saturating_sub(w * WORD).min(WORD));
                op(self.word(w), other.word(w)) & valid
            })
            .collect();
        let tail = op(self.tail as u64, other.tail as u64) & 1 == 1;
        Self::from_raw(words, len, tail)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn implies(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !a | b)
    }

    /// Boolean equivalence, `(a ⊃ b) & (b ⊃ a)`.
    pub fn iff(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !(a ^ b))
    }

    /// Complement. Flipping every bit keeps the prefix/tail distinction
    /// intact, so the result is already canonical.
    pub fn not(&self) -> Self {
        let mut words = self.words.clone();
        for (w, word) in words.iter_mut().enumerate() {
            *word = !*word & mask(self.len.saturating_sub(w * WORD).min(WORD));
        }
        Element {
            words,
            len: self.len,
            tail: !self.tail,
        }
    }

    /// Position (1-based) of the first zero coordinate, if any.
    pub fn first_zero(&self) -> Option<usize> {
        for w in 0..words_for(self.len) {
            let valid = mask(self.len.saturating_sub(w * WORD).min(WORD));
            let zeros = !self.words[w] & valid;
            if zeros != 0 {
                return Some(w * WORD + zeros.trailing_zeros() as usize + 1);
            }
        }
        (!self.tail).then_some(self.len + 1)
    }

    /// `Δa = (1, a₁, a₁&a₂, ...)`: all ones if `a` has no zero, otherwise
    /// `k` ones followed by zeros where `k` is the position of the first zero.
    pub fn delta(&self) -> Self {
        match self.first_zero() {
            None => Self::one(),
            Some(k) => Self::ones_then_zeros(k),
        }
    }

    /// `□a = a & Δa`, the cumulative conjunction including the current
    /// coordinate.
    pub fn boxed(&self) -> Self {
        self.meet(&self.delta())
    }

    /// `∇a = □¬□¬□a`.
    pub fn nabla(&self) -> Self {
        self.boxed().not().boxed().not().boxed()
    }

    /// Pointwise order of the Boolean algebra.
    pub fn leq(&self, other: &Self) -> bool {
        self.meet(other) == *self
    }

    /// `Δ^i 0`: `i` ones then zeros.
    pub fn delta_power(i: usize) -> Self {
        Self::ones_then_zeros(i)
    }

    /// `¬Δ^i 0`: `i` zeros then ones.
    pub fn neg_delta_power(i: usize) -> Self {
        Self::delta_power(i).not()
    }

    /// Coordinates `1..=n`.
    pub fn project(&self, n: usize) -> Bitvector {
        Bitvector((1..=n).map(|k| self.coordinate(k)).collect())
    }

    /// Enumerates every canonical element with prefix length at most
    /// `max_prefix`, shortest first. There are `2^(max_prefix + 1)` of them.
    pub fn enumerate(max_prefix: usize) -> impl Iterator<Item = Element> {
        (0..=max_prefix).flat_map(|len| {
            (0u64..(1u64 << len)).flat_map(move |bits| {
                let prefix: Vec<bool> = (0..len).map(|j| (bits >> j) & 1 == 1).collect();
                let tails: Vec<bool> = match prefix.last() {
                    None => vec![false, true],
                    Some(&b) => vec![!b],
                };
                tails
                    .into_iter()
                    .map(move |t| Element::canonicalize(&prefix, t))
            })
        })
    }
}

impl Bitvector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinatewise Δ on a truncation: `(1, ν₁, ..., ν_{n-1})` with
    /// `ν_i` the conjunction of the first `i` input bits.
    pub fn delta_reference(&self) -> Bitvector {
        let mut out = Vec::with_capacity(self.0.len());
        let mut acc = true;
        for &b in &self.0 {
            out.push(acc);
            acc &= b;
        }
        Bitvector(out)
    }
}

impl Default for Element {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.len {
            f.write_str(if self.coordinate(k) { "1" } else { "0" })?;
        }
        write!(f, "({})", self.tail as u8)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

fn parse_bit(text: &str, ch: char) -> Result<bool, ElementParseError> {
    match ch {
        '0' => Ok(false),
        '1' => Ok(true),
        _ => Err(ElementParseError::Bit {
            text: text.to_string(),
            ch,
        }),
    }
}

impl FromStr for Element {
    type Err = ElementParseError;

    /// Accepts `bits(t)`; non-canonical prefixes such as `011(1)` are
    /// normalized.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let shape = || ElementParseError::Shape(text.to_string());
        let open = text.find('(').ok_or_else(shape)?;
        let inner = text[open + 1..].strip_suffix(')').ok_or_else(shape)?;
        let mut tail_chars = inner.chars();
        let tail = match (tail_chars.next(), tail_chars.next()) {
            (Some(c), None) => parse_bit(text, c)?,
            _ => return Err(shape()),
        };
        let prefix = text[..open]
            .chars()
            .map(|c| parse_bit(text, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Element::canonicalize(&prefix, tail))
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
