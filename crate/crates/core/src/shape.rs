//! Relative configurations of the walker chain: points of `{-1, +1}^K`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Widest shape the bit encoding can carry.
pub const MAX_SHAPE_LEN: usize = 32;

/// A vertex of the shape graph.
///
/// Stored as a bit mask: bit `i` is set iff entry `i` (0-based) equals `+1`.
/// The encoding never leaves the crate boundary; serialized forms use
/// explicit `±1` arrays.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    bits: u32,
    len: u8,
}

impl Shape {
    pub fn from_signs<I>(signs: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<i64>,
    {
        let mut bits = 0u32;
        let mut len = 0usize;
        for s in signs {
            if len == MAX_SHAPE_LEN {
                return Err(Error::Dimension { expected: MAX_SHAPE_LEN, found: len + 1 });
            }
            match s.into() {
                1 => bits |= 1 << len,
                -1 => {}
                other => return Err(Error::InvalidEntry(other)),
            }
            len += 1;
        }
        Ok(Shape { bits, len: len as u8 })
    }

    /// Builds a shape from its mask. Bits above `len` are discarded.
    pub fn from_bits(bits: u32, len: usize) -> Self {
        assert!(len <= MAX_SHAPE_LEN, "shape length {len} exceeds {MAX_SHAPE_LEN}");
        Shape { bits: bits & mask(len), len: len as u8 }
    }

    pub fn all_ones(len: usize) -> Self {
        Self::from_bits(u32::MAX, len)
    }

    pub fn all_minus_ones(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    /// Parses the compact `+--+` notation.
    pub fn parse_compact(s: &str) -> Result<Self> {
        let signs: Vec<i64> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidArgument(format!("unexpected character {other:?} in shape"))),
            })
            .collect::<Result<_>>()?;
        Self::from_signs(signs)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Entry `i` (0-based) as `+1` or `-1`.
    #[inline]
    pub fn entry(self, i: usize) -> i8 {
        debug_assert!(i < self.len());
        if self.bits >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn signs(self) -> Vec<i8> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    /// Number of `+1` entries.
    pub fn count_plus(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(self, other: Shape) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }

    /// The concatenation `(sign) self`: a new leading entry.
    pub fn prepend(self, sign: i8) -> Shape {
        let lead = u32::from(sign > 0);
        Shape::from_bits(self.bits << 1 | lead, self.len() + 1)
    }

    /// Drops the leading entry.
    pub fn tail(self) -> Shape {
        Shape::from_bits(self.bits >> 1, self.len().saturating_sub(1))
    }

    pub fn negated(self) -> Shape {
        Shape::from_bits(!self.bits, self.len())
    }

    /// Key whose numeric order is the lexicographic order of the entry
    /// sequence with `-1 < +1`.
    #[inline]
    pub(crate) fn lex_key(self) -> u32 {
        if self.len == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (32 - self.len as u32)
        }
    }

    /// Inverse of [`Shape::lex_key`].
    #[inline]
    pub(crate) fn from_lex_key(key: u32, len: usize) -> Shape {
        if len == 0 {
            Shape { bits: 0, len: 0 }
        } else {
            Shape::from_bits(key.reverse_bits() >> (32 - len as u32), len)
        }
    }

    pub fn compact(self) -> String {
        (0..self.len()).map(|i| if self.entry(i) > 0 { '+' } else { '-' }).collect()
    }

    /// Every shape of length `len`, in lexicographic order.
    pub fn enumerate(len: usize) -> impl Iterator<Item = Shape> {
        assert!(len < MAX_SHAPE_LEN);
        (0..1u32 << len).map(move |key| Shape::from_lex_key(key, len))
    }
}

#[inline]
pub(crate) fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl Ord for Shape {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len().min(other.len());
        for i in 0..common {
            match self.entry(i).cmp(&other.entry(i)) {
                Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape({})", self.compact())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.signs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let signs = Vec::<i64>::deserialize(deserializer)?;
        Shape::from_signs(signs).map_err(serde::de::Error::custom)
    }
}
