//! Ternary letters and words over the alphabet `{0, 1, 2}`.
//!
//! A [`TernaryWord`] is an immutable letter sequence. Its text form is the
//! plain digit string (`"2102012"`); [`TernaryWord::ingest`] additionally
//! accepts strings copied from typeset tables, where words are broken across
//! lines with hyphen continuations.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A letter of the ternary alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const ZERO: Letter = Letter(0);
    pub const ONE: Letter = Letter(1);
    pub const TWO: Letter = Letter(2);
    pub const ALL: [Letter; 3] = [Letter::ZERO, Letter::ONE, Letter::TWO];

    pub fn new(value: u8) -> Result<Self> {
        if value < 3 {
            Ok(Letter(value))
        } else {
            Err(Error::InvalidLetter(char::from(b'0'.wrapping_add(value))))
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    /// The letter `i` steps further along the cycle `0 -> 1 -> 2 -> 0`.
    #[inline]
    pub fn shifted(self, i: usize) -> Letter {
        Letter(((self.0 as usize + i) % 3) as u8)
    }

    pub fn to_char(self) -> char {
        char::from(b'0' + self.0)
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Letter::ZERO),
            '1' => Ok(Letter::ONE),
            '2' => Ok(Letter::TWO),
            other => Err(Error::InvalidLetter(other)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One occurrence of a factor inside a host word.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub index: usize,
    /// Neither a prefix nor a suffix occurrence.
    pub internal: bool,
}

/// A finite word over `{0, 1, 2}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord {
    letters: Vec<u8>,
}

impl TernaryWord {
    pub fn empty() -> Self {
        TernaryWord::default()
    }

    /// Parses a plain digit string. Any character other than `0`, `1`, `2`
    /// is rejected.
    pub fn from_digits(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| Letter::try_from(c).map(Letter::value))
            .collect::<Result<Vec<_>>>()?;
        Ok(TernaryWord { letters })
    }

    /// Parses a word transcribed from typeset text: whitespace, line breaks
    /// and hyphens are dropped before parsing.
    pub fn ingest(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '-')
            .collect();
        Self::from_digits(&cleaned)
    }

    /// Builds a word from raw letter values, validating each one.
    pub fn from_values(values: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v > 2) {
            return Err(Letter::new(bad).unwrap_err());
        }
        Ok(TernaryWord { letters: values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<u8>) -> Self {
        debug_assert!(values.iter().all(|&v| v < 3));
        TernaryWord { letters: values }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        TernaryWord {
            letters: letters.into_iter().map(Letter::value).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter values, each in `0..3`.
    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.letters
    }

    pub fn get(&self, i: usize) -> Option<Letter> {
        self.letters.get(i).map(|&v| Letter(v))
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        self.letters.iter().map(|&v| Letter(v))
    }

    /// Applies the letter successor map `i` times.
    pub fn cyclic_shift(&self, i: usize) -> TernaryWord {
        let i = (i % 3) as u8;
        if i == 0 {
            return self.clone();
        }
        TernaryWord {
            letters: self.letters.iter().map(|&v| (v + i) % 3).collect(),
        }
    }

    pub fn reverse(&self) -> TernaryWord {
        TernaryWord {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn concat(&self, other: &TernaryWord) -> TernaryWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        TernaryWord { letters }
    }

    pub fn slice(&self, range: Range<usize>) -> TernaryWord {
        TernaryWord {
            letters: self.letters[range].to_vec(),
        }
    }

    /// The first `len` letters, or the whole word if it is shorter.
    pub fn prefix(&self, len: usize) -> TernaryWord {
        self.slice(0..len.min(self.len()))
    }

    /// The last `len` letters, or the whole word if it is shorter.
    pub fn suffix(&self, len: usize) -> TernaryWord {
        let len = len.min(self.len());
        self.slice(self.len() - len..self.len())
    }

    pub fn starts_with(&self, other: &TernaryWord) -> bool {
        self.letters.starts_with(&other.letters)
    }

    pub fn ends_with(&self, other: &TernaryWord) -> bool {
        self.letters.ends_with(&other.letters)
    }

    /// All start indices of `pattern` in `self`, in ascending order.
    /// Overlapping occurrences are all reported.
    pub fn factor_indices(&self, pattern: &TernaryWord) -> Result<Vec<Occurrence>> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let (n, m) = (self.len(), pattern.len());
        if m > n {
            return Ok(Vec::new());
        }
        Ok(self
            .letters
            .windows(m)
            .enumerate()
            .filter(|(_, w)| *w == pattern.as_slice())
            .map(|(index, _)| Occurrence {
                index,
                internal: index > 0 && index + m < n,
            })
            .collect())
    }

    pub fn contains_factor(&self, pattern: &TernaryWord) -> bool {
        pattern.is_empty()
            || (pattern.len() <= self.len()
                && self
                    .letters
                    .windows(pattern.len())
                    .any(|w| w == pattern.as_slice()))
    }

    pub fn has_internal_occurrence(&self, pattern: &TernaryWord) -> bool {
        self.factor_indices(pattern)
            .map(|hits| hits.iter().any(|o| o.internal))
            .unwrap_or(false)
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().map(|&v| char::from(b'0' + v)).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryWord({self})")
    }
}

impl FromStr for TernaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_digits(s)
    }
}

impl Serialize for TernaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TernaryWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        TernaryWord::from_digits(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn letter_rejects_out_of_range() {
        assert!(Letter::new(3).is_err());
        assert!(Letter::try_from('3').is_err());
        assert_eq!(Letter::new(2).unwrap(), Letter::TWO);
        assert!(TernaryWord::from_values(vec![0, 1, 5]).is_err());
    }

    #[test]
    fn cyclic_shift_examples() {
        assert_eq!(w("012").cyclic_shift(1), w("120"));
        assert_eq!(w("21020").cyclic_shift(1), w("02101"));
        let x = w("2102010210");
        assert_eq!(x.cyclic_shift(3), x);
        assert_eq!(TernaryWord::empty().cyclic_shift(2), TernaryWord::empty());
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(w("012").reverse(), w("210"));
        assert_eq!(TernaryWord::empty().reverse(), TernaryWord::empty());
        assert_eq!(w("210201021012010").reverse(), w("010210120102012"));
    }

    #[test]
    fn factor_indices_examples() {
        let pi = w("210201021012010");
        let hits = pi.factor_indices(&w("010")).unwrap();
        assert_eq!(
            hits.iter().map(|o| o.index).collect::<Vec<_>>(),
            vec![4, 12]
        );
        assert!(hits[0].internal);
        // 12 + 3 == 15: suffix occurrence
        assert!(!hits[1].internal);

        let hits = w("000").factor_indices(&w("00")).unwrap();
        assert_eq!(hits.iter().map(|o| o.index).collect::<Vec<_>>(), vec![0, 1]);
        assert!(hits.iter().all(|o| !o.internal));

        assert!(matches!(
            w("012").factor_indices(&TernaryWord::empty()),
            Err(Error::EmptyPattern)
        ));
        assert!(w("01").factor_indices(&w("012")).unwrap().is_empty());
    }

    #[test]
    fn ingest_strips_typesetting() {
        let s = "2102010210120102012021012010210120210201021012010201202101201021012021020102120210120212010201\n -2";
        let word = TernaryWord::ingest(s).unwrap();
        assert!(word.to_string().ends_with("12"));
        assert!(TernaryWord::ingest("01a2").is_err());
        assert!(TernaryWord::from_digits("01 2").is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = w("2101201021012");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"2101201021012\"");
        assert_eq!(serde_json::from_str::<TernaryWord>(&s).unwrap(), x);
        assert!(serde_json::from_str::<TernaryWord>("\"013\"").is_err());
    }
}
