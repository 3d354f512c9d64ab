//! The Thue-Morse word and the bracketed middle words `x`.
//!
//! `r = 2102012·x·2102012` is obtained as the 1-count of `h³(01v01)`, where
//! `01v01` is a length-`k` factor of the Thue-Morse word and
//! `h(0) = 01, h(1) = 10`. Then `|r| = 4k - 1` and `|x| = 4k - 15`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alpha::BRACKET;
use crate::error::{Error, Result};
use crate::squarefree::{avoids, find_square};
use crate::word::TernaryWord;

/// A word over `{0, 1}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Precondition(
                "binary word letters must be 0 or 1".into(),
            ));
        }
        Ok(BinaryWord(bits))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image under `h(0) = 01`, `h(1) = 10`.
    pub fn thue_morse_image(&self) -> BinaryWord {
        BinaryWord(self.0.iter().flat_map(|&b| [b, 1 - b]).collect())
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| char::from(b'0' + b)).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Precondition(format!(
                    "{other:?} is not a binary letter"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(BinaryWord(bits))
    }
}

/// Thue-Morse letter at position `i`: parity of the number of ones in `i`.
#[inline]
pub fn thue_morse_bit(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

/// The Thue-Morse word, letter by letter.
#[derive(Clone, Debug, Default)]
pub struct ThueMorseStream {
    emitted: u64,
}

impl ThueMorseStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }
}

impl Iterator for ThueMorseStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let bit = thue_morse_bit(self.emitted);
        self.emitted += 1;
        Some(bit)
    }
}

pub fn tm_prefix(n: usize) -> BinaryWord {
    BinaryWord(ThueMorseStream::new().take(n).collect())
}

/// Shape of a bracketed Thue-Morse factor.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorShape {
    /// `01 v 01`
    Ends01,
    /// `01 v 10`
    Ends10,
}

impl FactorShape {
    fn matches(self, f: &[u8]) -> bool {
        let n = f.len();
        let tail = match self {
            FactorShape::Ends01 => [0, 1],
            FactorShape::Ends10 => [1, 0],
        };
        f[..2] == [0, 1] && f[n - 2..] == tail
    }
}

/// First length-`k` factor of the Thue-Morse word with the given shape.
///
/// The scan starts on a prefix of length `max(4k + 64, 1024)` and doubles
/// the window until a factor is found; one always exists for `k >= 6`.
pub fn find_bracketed_factor(k: usize, shape: FactorShape) -> Result<BinaryWord> {
    Ok(bracketed_factors(k, shape, 1)?.remove(0))
}

/// The first `count` distinct length-`k` factors of the given shape, in
/// order of first occurrence.
pub fn bracketed_factors(k: usize, shape: FactorShape, count: usize) -> Result<Vec<BinaryWord>> {
    if k < 6 {
        return Err(Error::Precondition(format!("factor length {k} is below 6")));
    }
    let count = count.max(1);
    let mut window = (4 * k + 64).max(1024);
    loop {
        let t = tm_prefix(window);
        let mut found: Vec<BinaryWord> = Vec::new();
        for f in t.as_slice().windows(k).filter(|f| shape.matches(f)) {
            if !found.iter().any(|g| g.as_slice() == f) {
                found.push(BinaryWord(f.to_vec()));
                if found.len() == count {
                    return Ok(found);
                }
            }
        }
        // t has finitely many factors of each length; stop once the window
        // is large enough to contain all of them.
        if !found.is_empty() && window > 64 * k.max(16) {
            return Ok(found);
        }
        window *= 2;
    }
}

/// Lengths of the runs of ones between consecutive zeros of `u`.
///
/// `u` must begin and end with 0 and have no run of ones longer than 2.
pub fn one_count(u: &BinaryWord) -> Result<TernaryWord> {
    let bits = u.as_slice();
    if bits.first() != Some(&0) || bits.last() != Some(&0) {
        return Err(Error::Precondition(format!(
            "{u} must begin and end with 0"
        )));
    }
    let mut out = Vec::new();
    let mut run = 0u8;
    for &b in &bits[1..] {
        if b == 1 {
            run += 1;
            if run > 2 {
                return Err(Error::Precondition(format!(
                    "{u} has a run of more than two ones"
                )));
            }
        } else {
            out.push(run);
            run = 0;
        }
    }
    Ok(TernaryWord::from_values_unchecked(out))
}

/// 1-count of the infinite Thue-Morse word, produced online. Square-free and
/// free of 010 and 212; it begins `2102012`.
#[derive(Clone, Debug, Default)]
pub struct OneCountStream {
    bits: ThueMorseStream,
    started: bool,
}

impl OneCountStream {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for OneCountStream {
    type Item = crate::word::Letter;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            // t begins with 0
            let first = self.bits.next();
            debug_assert_eq!(first, Some(0));
            self.started = true;
        }
        let mut run = 0;
        loop {
            match self.bits.next()? {
                1 => run += 1,
                _ => return crate::word::Letter::new(run).ok(),
            }
        }
    }
}

/// `r = 2102012·x·2102012` together with the parameter it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketedX {
    pub r: TernaryWord,
    pub x: TernaryWord,
    pub k: usize,
}

impl BracketedX {
    /// Re-checks every invariant of the bracketed word.
    pub fn verify(&self) -> Result<()> {
        let bracket: TernaryWord = BRACKET.parse()?;
        let fail = |m: String| Err(Error::Verification(m));
        if self.r.len() != 4 * self.k - 1 {
            return fail(format!(
                "|r| = {} but 4k - 1 = {}",
                self.r.len(),
                4 * self.k - 1
            ));
        }
        if bracket.concat(&self.x).concat(&bracket) != self.r {
            return fail("r is not 2102012·x·2102012".into());
        }
        if let Some(s) = find_square(&self.r) {
            return fail(format!(
                "r has a square at {} (half {})",
                s.start, s.half_length
            ));
        }
        if !avoids(&self.r, &["010".parse()?, "212".parse()?]) {
            return fail("r contains 010 or 212".into());
        }
        Ok(())
    }
}

/// Builds the bracketed word of length `4k - 1` for `k >= 6`.
pub fn make_x(k: usize) -> Result<BracketedX> {
    bracketed_x_from_factor(&find_bracketed_factor(k, FactorShape::Ends01)?)
}

/// `r` = 1-count of `h³(factor)` for a `01v01` factor of the Thue-Morse
/// word, split into its brackets and core.
pub fn bracketed_x_from_factor(factor: &BinaryWord) -> Result<BracketedX> {
    let k = factor.len();
    if k < 6 || !FactorShape::Ends01.matches(factor.as_slice()) {
        return Err(Error::Precondition(format!(
            "{factor} is not of the form 01v01 with length >= 6"
        )));
    }
    let u = factor
        .thue_morse_image()
        .thue_morse_image()
        .thue_morse_image();
    let r = one_count(&u)?;
    let b = BRACKET.len();
    if r.len() < 2 * b {
        return Err(Error::Verification(format!(
            "1-count {r} shorter than its brackets"
        )));
    }
    let x = r.slice(b..r.len() - b);
    let out = BracketedX { r, x, k };
    out.verify()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(tm_prefix(16), bw("0110100110010110"));
        assert!(tm_prefix(0).is_empty());
        assert_eq!(tm_prefix(2), bw("01"));
    }

    #[test]
    fn fixed_point_law() {
        for n in [1, 5, 64, 300] {
            assert_eq!(tm_prefix(n).thue_morse_image(), tm_prefix(2 * n));
        }
    }

    #[test]
    fn bracketed_factor_examples() {
        let f = find_bracketed_factor(6, FactorShape::Ends01).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.as_slice().starts_with(&[0, 1]) && f.as_slice().ends_with(&[0, 1]));
        let g = find_bracketed_factor(6, FactorShape::Ends10).unwrap();
        assert!(g.as_slice().starts_with(&[0, 1]) && g.as_slice().ends_with(&[1, 0]));
        // both are genuine factors of t
        let t = tm_prefix(4 * 6 + 16);
        for h in [&f, &g] {
            assert!(t.as_slice().windows(6).any(|w| w == h.as_slice()));
        }
        assert!(find_bracketed_factor(5, FactorShape::Ends01).is_err());
    }

    #[test]
    fn one_count_examples() {
        assert_eq!(one_count(&bw("010")).unwrap().to_string(), "1");
        assert_eq!(
            one_count(&bw("0110100110010110")).unwrap().to_string(),
            "2102012"
        );
        assert_eq!(one_count(&bw("00")).unwrap().to_string(), "0");
        assert!(one_count(&bw("0111")).is_err());
        assert!(one_count(&bw("01110")).is_err());
        assert!(one_count(&bw("10")).is_err());
    }

    #[test]
    fn bracket_is_one_count_of_h3_01() {
        let u = bw("01")
            .thue_morse_image()
            .thue_morse_image()
            .thue_morse_image();
        assert_eq!(u, bw("0110100110010110"));
        assert_eq!(one_count(&u).unwrap().to_string(), BRACKET);
    }

    #[test]
    fn make_x_lengths() {
        let bx = make_x(6).unwrap();
        assert_eq!((bx.r.len(), bx.x.len()), (23, 9));
        let bx = make_x(38).unwrap();
        assert_eq!((bx.r.len(), bx.x.len()), (151, 137));
        assert!(make_x(5).is_err());
    }

    #[test]
    fn distinct_factor_variants() {
        let fs = bracketed_factors(10, FactorShape::Ends01, 4).unwrap();
        assert!(fs.len() >= 2);
        for (i, f) in fs.iter().enumerate() {
            assert!(fs[..i].iter().all(|g| g != f));
            let bx = bracketed_x_from_factor(f).unwrap();
            assert_eq!(bx.x.len(), 4 * 10 - 15);
        }
        assert_eq!(
            fs[0],
            find_bracketed_factor(10, FactorShape::Ends01).unwrap()
        );
        assert!(bracketed_x_from_factor(&"0110100".parse().unwrap()).is_err());
    }

    #[test]
    fn one_count_stream_prefix() {
        let s: TernaryWord = TernaryWord::from_letters(OneCountStream::new().take(7));
        assert_eq!(s.to_string(), BRACKET);
        let long = TernaryWord::from_letters(OneCountStream::new().take(2000));
        assert!(find_square(&long).is_none());
    }
}
