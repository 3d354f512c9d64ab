//! n-stem factorizations.
//!
//! A word `w` has an n-stem factorization if `w = p · w₁ · w₂ ⋯` with
//! `|p| = n` and every block `wᵢ = μᵢ(p)` for a letter permutation `μᵢ`.
//! Applying a cyclic shift morphism `f` to a square-free word yields such a
//! word with stem `f(a₀)`, every `μᵢ` being a cyclic shift.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constructor::CertifiedMorphism;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::morphism::{crochemore_test, SquarefreeCertificate};
use crate::squarefree::{find_square_in, IncrementalChecker, SquareWitness};
use crate::thue_morse::OneCountStream;
use crate::word::{Letter, TernaryWord};

/// A permutation of {0, 1, 2}, stored as the images of 0, 1, 2.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation3([u8; 3]);

impl Permutation3 {
    pub const IDENTITY: Permutation3 = Permutation3([0, 1, 2]);

    pub fn new(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &b in &images {
            if b > 2 || std::mem::replace(&mut seen[b as usize], true) {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation of 0, 1, 2"
                )));
            }
        }
        Ok(Permutation3(images))
    }

    /// `σ^i`.
    pub fn cyclic(i: usize) -> Self {
        let i = (i % 3) as u8;
        Permutation3([i, (1 + i) % 3, (2 + i) % 3])
    }

    pub fn all() -> [Permutation3; 6] {
        [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .map(Permutation3)
    }

    pub fn images(self) -> [u8; 3] {
        self.0
    }

    pub fn apply_letter(self, a: Letter) -> Letter {
        Letter::new(self.0[a.value() as usize]).expect("permutation images are letters")
    }

    pub fn apply(self, w: &TernaryWord) -> TernaryWord {
        TernaryWord::from_values_unchecked(
            w.as_slice().iter().map(|&a| self.0[a as usize]).collect(),
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Permutation3) -> Permutation3 {
        Permutation3(other.0.map(|b| self.0[b as usize]))
    }

    pub fn inverse(self) -> Permutation3 {
        let mut inv = [0u8; 3];
        for (a, &b) in self.0.iter().enumerate() {
            inv[b as usize] = a as u8;
        }
        Permutation3(inv)
    }

    /// The exponent i if this is `σ^i`.
    pub fn cyclic_exponent(self) -> Option<usize> {
        (0..3).find(|&i| Permutation3::cyclic(i) == self)
    }

    pub fn is_cyclic_shift(self) -> bool {
        self.cyclic_exponent().is_some()
    }
}

impl fmt::Display for Permutation3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for Permutation3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation3({self})")
    }
}

impl FromStr for Permutation3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let w = TernaryWord::from_digits(s)?;
        let [a, b, c] = w.as_slice()[..] else {
            return Err(Error::Precondition(format!(
                "permutation {s:?} must have 3 letters"
            )));
        };
        Permutation3::new([a, b, c])
    }
}

impl TryFrom<String> for Permutation3 {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation3> for String {
    fn from(p: Permutation3) -> String {
        p.to_string()
    }
}

/// `stem · μ₁(stem) · μ₂(stem) ⋯`, truncated to `covered_length`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemFactorization {
    pub stem: TernaryWord,
    #[serde(rename = "permutations")]
    pub block_permutations: Vec<Permutation3>,
    pub covered_length: usize,
}

impl StemFactorization {
    pub fn block_count(&self) -> usize {
        1 + self.block_permutations.len()
    }

    pub fn reconstruct(&self) -> TernaryWord {
        let mut out = self.stem.as_slice().to_vec();
        for p in &self.block_permutations {
            out.extend(p.apply(&self.stem).as_slice());
        }
        out.truncate(self.covered_length);
        TernaryWord::from_values_unchecked(out)
    }

    /// The covered length is consistent with the block count and the
    /// reconstruction equals `w`.
    pub fn certifies(&self, w: &TernaryWord) -> bool {
        let n = self.stem.len();
        n > 0
            && self.covered_length <= n * self.block_count()
            && self.covered_length + n > n * self.block_count()
            && w.len() == self.covered_length
            && self.reconstruct() == *w
    }

    pub fn all_cyclic(&self) -> bool {
        self.block_permutations.iter().all(|p| p.is_cyclic_shift())
    }
}

/// Concatenates permuted copies of `stem` as a factorized word.
pub fn encode(stem: &TernaryWord, permutations: &[Permutation3]) -> StemFactorization {
    let f = StemFactorization {
        stem: stem.clone(),
        block_permutations: permutations.to_vec(),
        covered_length: stem.len() * (1 + permutations.len()),
    };
    debug_assert_eq!(f.reconstruct().len(), f.covered_length);
    f
}

/// Where decoding stopped: the block index and the offset in the word.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMismatch {
    pub block: usize,
    pub offset: usize,
}

/// The letter permutation sending `stem` to `block`, if one exists. Letters
/// absent from `stem` are sent to the smallest free images in order.
pub fn block_permutation(stem: &[u8], block: &[u8]) -> Option<Permutation3> {
    if stem.len() != block.len() {
        return None;
    }
    let mut map = [None::<u8>; 3];
    for (&a, &b) in stem.iter().zip(block) {
        match map[a as usize] {
            None => map[a as usize] = Some(b),
            Some(prev) if prev == b => {}
            Some(_) => return None,
        }
    }
    let mut used = [false; 3];
    for b in map.iter().flatten() {
        if std::mem::replace(&mut used[*b as usize], true) {
            return None;
        }
    }
    let mut images = [0u8; 3];
    for (a, slot) in map.iter().enumerate() {
        images[a] = match slot {
            Some(b) => *b,
            None => {
                let b = (0..3)
                    .find(|&b| !used[b as usize])
                    .expect("a free image remains");
                used[b as usize] = true;
                b
            }
        };
    }
    Some(Permutation3(images))
}

/// Permutations for every length-|stem| block of `w`, first block included.
pub fn block_permutations(
    w: &TernaryWord,
    stem: &TernaryWord,
) -> Result<std::result::Result<Vec<Permutation3>, BlockMismatch>> {
    let n = stem.len();
    if n == 0 || !w.len().is_multiple_of(n) {
        return Err(Error::Precondition(format!(
            "word length {} is not a multiple of stem length {n}",
            w.len()
        )));
    }
    Ok(w.as_slice()
        .chunks(n)
        .enumerate()
        .map(|(i, block)| {
            block_permutation(stem.as_slice(), block).ok_or(BlockMismatch {
                block: i,
                offset: i * n,
            })
        })
        .collect())
}

/// The n-stem factorization of `w` with stem `w[..n]`, or `None` if some
/// block is not a permuted copy of the stem.
pub fn decode_stem(w: &TernaryWord, n: usize) -> Result<Option<StemFactorization>> {
    if n == 0 || !w.len().is_multiple_of(n) || w.len() < 2 * n {
        return Err(Error::Precondition(format!(
            "word length {} must be a multiple of n = {n} and at least 2n",
            w.len()
        )));
    }
    let stem = w.prefix(n);
    let rest = w.suffix(w.len() - n);
    Ok(block_permutations(&rest, &stem)?
        .ok()
        .map(|perms| StemFactorization {
            stem,
            block_permutations: perms,
            covered_length: w.len(),
        }))
}

/// Factorization of `w` over a given stem. `w` must start with the stem; a
/// trailing partial block must be a permuted prefix of the stem.
pub fn factor_with_stem(
    w: &TernaryWord,
    stem: &TernaryWord,
) -> std::result::Result<StemFactorization, BlockMismatch> {
    let n = stem.len();
    let fail = |block: usize| BlockMismatch {
        block,
        offset: block * n,
    };
    if n == 0 || !w.starts_with(stem) {
        return Err(fail(0));
    }
    let mut perms = Vec::with_capacity(w.len() / n);
    for (i, block) in w.as_slice().chunks(n).enumerate().skip(1) {
        let p = block_permutation(&stem.as_slice()[..block.len()], block).ok_or(fail(i))?;
        perms.push(p);
    }
    Ok(StemFactorization {
        stem: stem.clone(),
        block_permutations: perms,
        covered_length: w.len(),
    })
}

/// Records of a streamed stem word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StreamCertificate {
    pub n: usize,
    pub length: usize,
    pub source_letters: usize,
    pub checker_rejections: usize,
    pub morphism: CertifiedMorphism,
    #[serde(flatten)]
    pub factorization: StemFactorization,
}

/// Streams the first `length` letters of `f(c)`, where `f` is the certified
/// n-uniform morphism and `c` the 1-count of the Thue-Morse word. Every
/// letter passes an incremental square check before it reaches `sink`.
pub fn stream_stem_word<F: FnMut(Letter)>(
    n: usize,
    length: usize,
    sink: F,
) -> Result<StreamCertificate> {
    let certified = crate::constructor::construct(n)?;
    stream_with_morphism(certified, length, sink)
}

pub fn stream_with_morphism<F: FnMut(Letter)>(
    certified: CertifiedMorphism,
    length: usize,
    mut sink: F,
) -> Result<StreamCertificate> {
    let morphism = &certified.morphism;
    let n = morphism
        .uniform_length()
        .filter(|_| morphism.is_cyclic_shift_form())
        .ok_or_else(|| {
            Error::Precondition("streaming needs a uniform cyclic shift morphism".into())
        })?;
    if length == 0 {
        return Err(Error::Precondition("stream length must be positive".into()));
    }
    let mut checker = IncrementalChecker::without_history();
    checker.reserve(length);
    let mut source = OneCountStream::new();
    let first = source.next().expect("the source is infinite");
    let stem = morphism.image(first).clone();
    let mut perms = Vec::with_capacity(length / n);
    let mut emitted = 0usize;
    let mut source_letters = 0usize;
    let mut tail: Vec<u8> = Vec::with_capacity(4 * n);

    let mut next = Some(first);
    while emitted < length {
        let a = next
            .take()
            .or_else(|| source.next())
            .expect("the source is infinite");
        source_letters += 1;
        let block = morphism.image(a);
        if source_letters > 1 {
            let p = Permutation3::cyclic((a.value() as usize + 3 - first.value() as usize) % 3);
            if p.apply(&stem) != *block {
                return Err(Error::Verification(format!(
                    "block {} is not σ^{}(stem)",
                    source_letters - 1,
                    p.cyclic_exponent().unwrap_or_default()
                )));
            }
            perms.push(p);
        }
        for b in block.letters() {
            if emitted == length {
                break;
            }
            if !checker.push(b) {
                tail.push(b.value());
                let window = TernaryWord::from_values_unchecked(tail).to_string();
                return Err(Error::StreamRejected {
                    position: emitted,
                    window,
                });
            }
            if tail.len() == 4 * n {
                tail.remove(0);
            }
            tail.push(b.value());
            sink(b);
            emitted += 1;
        }
    }
    Ok(StreamCertificate {
        n,
        length,
        source_letters,
        checker_rejections: 0,
        factorization: StemFactorization {
            stem,
            block_permutations: perms,
            covered_length: length,
        },
        morphism: certified,
    })
}

/// Batch square search over windows of `width` letters overlapping by half.
/// Finds every square of length at most `width / 2` (and possibly longer
/// ones); positions are absolute.
pub fn sliding_window_square(w: &[u8], width: usize) -> Option<SquareWitness> {
    let width = width.max(2);
    let step = width / 2;
    let mut start = 0;
    loop {
        let end = (start + width).min(w.len());
        if let Some(s) = find_square_in(&w[start..end]) {
            return Some(SquareWitness {
                start: s.start + start,
                half_length: s.half_length,
            });
        }
        if end == w.len() {
            return None;
        }
        start += step;
    }
}

/// Where the stem used for a bundled morphism came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StemSource {
    /// The stem 01210201021012102120 stated for n = 20.
    Quoted,
    /// The length-n prefix of h(0).
    PrefixOfImage0,
    /// Found by trying every aligned block of the images.
    Searched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDecoding {
    pub letter: u8,
    pub length: usize,
    pub blocks: Option<usize>,
    pub permutations: Vec<Permutation3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<BlockMismatch>,
}

impl ImageDecoding {
    pub fn decoded(&self) -> bool {
        self.failure.is_none() && self.blocks.is_some()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MullerReport {
    pub n: usize,
    pub crochemore: SquarefreeCertificate,
    pub candidate: TernaryWord,
    pub candidate_source: StemSource,
    pub candidate_decodes: bool,
    /// Decodings against `candidate`.
    pub candidate_images: Vec<ImageDecoding>,
    /// Set when the primary candidate failed and a search found another.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub searched_stem: Option<TernaryWord>,
    pub images: Vec<ImageDecoding>,
}

impl MullerReport {
    pub fn stem(&self) -> &TernaryWord {
        self.searched_stem.as_ref().unwrap_or(&self.candidate)
    }

    /// Square-free by the Crochemore test and every image decodes. For
    /// n = 20 the quoted stem itself must work.
    pub fn passed(&self) -> bool {
        self.crochemore.verdict
            && self.images.iter().all(ImageDecoding::decoded)
            && (self.candidate_source != StemSource::Quoted || self.candidate_decodes)
    }
}

/// Stem of the n = 20 morphism as stated in the literature.
pub const MULLER_20_STEM: &str = "01210201021012102120";

fn decode_images(images: &[TernaryWord; 3], stem: &TernaryWord) -> Vec<ImageDecoding> {
    let n = stem.len();
    images
        .iter()
        .enumerate()
        .map(|(letter, image)| {
            let base = ImageDecoding {
                letter: letter as u8,
                length: image.len(),
                blocks: None,
                permutations: Vec::new(),
                failure: None,
            };
            if image.len() % n != 0 {
                return ImageDecoding {
                    failure: Some(BlockMismatch {
                        block: image.len() / n,
                        offset: image.len() - image.len() % n,
                    }),
                    ..base
                };
            }
            match block_permutations(image, stem).expect("length checked") {
                Ok(perms) => ImageDecoding {
                    blocks: Some(perms.len()),
                    permutations: perms,
                    ..base
                },
                Err(m) => ImageDecoding {
                    failure: Some(m),
                    ..base
                },
            }
        })
        .collect()
}

/// Checks a bundled non-uniform morphism (n ∈ {20, 21, 22}): Crochemore
/// square-freeness and the decomposition of every image into permuted
/// copies of a length-n stem.
pub fn verify_muller(fixtures: &Fixtures, n: usize) -> Result<MullerReport> {
    if !(20..=22).contains(&n) {
        return Err(Error::Precondition(format!(
            "no bundled morphism for n = {n} (expected 20, 21 or 22)"
        )));
    }
    let m = fixtures
        .muller
        .get(n)
        .ok_or_else(|| Error::Precondition(format!("fixture has no morphism for n = {n}")))?;
    let crochemore = crochemore_test(m);
    let (candidate, candidate_source) = if n == 20 {
        (MULLER_20_STEM.parse()?, StemSource::Quoted)
    } else {
        (m.images()[0].prefix(n), StemSource::PrefixOfImage0)
    };
    let candidate_images = decode_images(m.images(), &candidate);
    let candidate_decodes = candidate_images.iter().all(ImageDecoding::decoded);
    let (searched_stem, images) = if candidate_decodes {
        (None, candidate_images.clone())
    } else {
        let found = m
            .images()
            .iter()
            .flat_map(|img| img.as_slice().chunks_exact(n))
            .map(|b| TernaryWord::from_values_unchecked(b.to_vec()))
            .find_map(|stem| {
                let d = decode_images(m.images(), &stem);
                d.iter().all(ImageDecoding::decoded).then_some((stem, d))
            });
        match found {
            Some((stem, d)) => (Some(stem), d),
            None => (None, candidate_images.clone()),
        }
    };
    Ok(MullerReport {
        n,
        crochemore,
        candidate,
        candidate_source,
        candidate_decodes,
        candidate_images,
        searched_stem,
        images,
    })
}
