//! Ternary morphisms and square-freeness certificates.
//!
//! A uniform morphism is square-free as soon as it maps every square-free
//! word of length 3 to a square-free word ([`berstel_test`]). For arbitrary
//! ternary morphisms [`crochemore_test`] checks all square-free words of
//! length at most 5.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::squarefree::{find_square, square_free_words, SquareWitness};
use crate::word::{Letter, TernaryWord};

/// A morphism on `{0, 1, 2}*`, given by its three letter images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[TernaryWord; 3]", into = "[TernaryWord; 3]")]
pub struct TernaryMorphism {
    images: [TernaryWord; 3],
}

impl TryFrom<[TernaryWord; 3]> for TernaryMorphism {
    type Error = Error;

    fn try_from(images: [TernaryWord; 3]) -> Result<Self> {
        TernaryMorphism::new(images)
    }
}

impl From<TernaryMorphism> for [TernaryWord; 3] {
    fn from(m: TernaryMorphism) -> Self {
        m.images
    }
}

impl TernaryMorphism {
    pub fn new(images: [TernaryWord; 3]) -> Result<Self> {
        if let Some(i) = images.iter().position(TernaryWord::is_empty) {
            return Err(Error::EmptyImage(i as u8));
        }
        Ok(TernaryMorphism { images })
    }

    /// The cyclic shift morphism with `f(0) = seed`, `f(1) = σ(seed)`,
    /// `f(2) = σ²(seed)`.
    pub fn from_seed(seed: &TernaryWord) -> Result<Self> {
        if seed.is_empty() {
            return Err(Error::Precondition("seed must be nonempty".into()));
        }
        Ok(TernaryMorphism {
            images: [seed.clone(), seed.cyclic_shift(1), seed.cyclic_shift(2)],
        })
    }

    pub fn image(&self, a: Letter) -> &TernaryWord {
        &self.images[a.value() as usize]
    }

    pub fn images(&self) -> &[TernaryWord; 3] {
        &self.images
    }

    pub fn image_lengths(&self) -> [usize; 3] {
        [
            self.images[0].len(),
            self.images[1].len(),
            self.images[2].len(),
        ]
    }

    pub fn is_uniform(&self) -> bool {
        let [a, b, c] = self.image_lengths();
        a == b && b == c
    }

    /// Common image length of a uniform morphism.
    pub fn uniform_length(&self) -> Option<usize> {
        self.is_uniform().then(|| self.images[0].len())
    }

    pub fn is_cyclic_shift_form(&self) -> bool {
        self.images[1] == self.images[0].cyclic_shift(1)
            && self.images[2] == self.images[1].cyclic_shift(1)
    }

    pub fn apply(&self, w: &TernaryWord) -> TernaryWord {
        let total: usize = w
            .as_slice()
            .iter()
            .map(|&a| self.images[a as usize].len())
            .sum();
        let mut out = Vec::with_capacity(total);
        for &a in w.as_slice() {
            out.extend_from_slice(self.images[a as usize].as_slice());
        }
        TernaryWord::from_values_unchecked(out)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateMethod {
    #[serde(rename = "berstel-3")]
    Berstel3,
    #[serde(rename = "crochemore-5")]
    Crochemore5,
}

impl CertificateMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateMethod::Berstel3 => "berstel-3",
            CertificateMethod::Crochemore5 => "crochemore-5",
        }
    }
}

impl fmt::Display for CertificateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CertificateMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "berstel-3" => Ok(CertificateMethod::Berstel3),
            "crochemore-5" => Ok(CertificateMethod::Crochemore5),
            other => Err(Error::Record(format!("unknown method {other:?}"))),
        }
    }
}

/// A square-free source word whose image contains a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub word: TernaryWord,
    /// Position of the square inside the image of `word`.
    pub witness: SquareWitness,
}

/// Outcome of a finite square-freeness test on a morphism.
///
/// `tested_words` counts the source words examined; on failure enumeration
/// stops at the first counterexample, so it is the index of that word plus
/// one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeCertificate {
    pub method: CertificateMethod,
    pub tested_words: usize,
    pub verdict: bool,
    pub counterexample: Option<Counterexample>,
}

impl SquarefreeCertificate {
    /// A certificate is consistent if a negative verdict carries a real
    /// square inside the image of its counterexample.
    pub fn is_consistent_for(&self, m: &TernaryMorphism) -> bool {
        match (&self.counterexample, self.verdict) {
            (None, true) => true,
            (Some(c), false) => c.witness.is_valid_for(m.apply(&c.word).as_slice()),
            _ => false,
        }
    }
}

impl fmt::Display for SquarefreeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: {}", self.method)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        write!(f, "tested_words: {}", self.tested_words)?;
        if let Some(c) = &self.counterexample {
            write!(
                f,
                "\ncounterexample: {}\nwitness: start={} half_length={}",
                c.word, c.witness.start, c.witness.half_length
            )?;
        }
        Ok(())
    }
}

impl FromStr for SquarefreeCertificate {
    type Err = Error;

    /// Parses the record produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let mut method = None;
        let mut verdict = None;
        let mut tested_words = None;
        let mut word = None;
        let mut witness = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Record(format!("expected `key: value`, got {line:?}")))?;
            let value = value.trim();
            match key.trim() {
                "method" => method = Some(value.parse()?),
                "verdict" => {
                    verdict = Some(
                        value
                            .parse::<bool>()
                            .map_err(|e| Error::Record(e.to_string()))?,
                    )
                }
                "tested_words" => {
                    tested_words = Some(
                        value
                            .parse::<usize>()
                            .map_err(|e| Error::Record(e.to_string()))?,
                    )
                }
                "counterexample" => word = Some(value.parse::<TernaryWord>()?),
                "witness" => witness = Some(parse_witness(value)?),
                other => return Err(Error::Record(format!("unknown key {other:?}"))),
            }
        }
        let counterexample = match (word, witness) {
            (Some(word), Some(witness)) => Some(Counterexample { word, witness }),
            (None, None) => None,
            _ => return Err(Error::Record("counterexample without witness".into())),
        };
        let missing = |k: &str| Error::Record(format!("missing {k}"));
        Ok(SquarefreeCertificate {
            method: method.ok_or_else(|| missing("method"))?,
            verdict: verdict.ok_or_else(|| missing("verdict"))?,
            tested_words: tested_words.ok_or_else(|| missing("tested_words"))?,
            counterexample,
        })
    }
}

fn parse_witness(value: &str) -> Result<SquareWitness> {
    let mut start = None;
    let mut half = None;
    for part in value.split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Record(format!("bad witness field {part:?}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::Record(format!("bad number {v:?}")))?;
        match k {
            "start" => start = Some(v),
            "half_length" => half = Some(v),
            _ => return Err(Error::Record(format!("bad witness field {part:?}"))),
        }
    }
    match (start, half) {
        (Some(start), Some(half_length)) => Ok(SquareWitness { start, half_length }),
        _ => Err(Error::Record("incomplete witness".into())),
    }
}

fn test_words<'a, I>(
    m: &TernaryMorphism,
    method: CertificateMethod,
    words: I,
) -> SquarefreeCertificate
where
    I: IntoIterator<Item = &'a TernaryWord>,
{
    let mut tested = 0;
    for w in words {
        tested += 1;
        if let Some(witness) = find_square(&m.apply(w)) {
            return SquarefreeCertificate {
                method,
                tested_words: tested,
                verdict: false,
                counterexample: Some(Counterexample {
                    word: w.clone(),
                    witness,
                }),
            };
        }
    }
    SquarefreeCertificate {
        method,
        tested_words: tested,
        verdict: true,
        counterexample: None,
    }
}

/// The 12 square-free ternary words of length 3, lexicographically ordered.
pub fn length3_test_words() -> &'static [TernaryWord] {
    use std::sync::OnceLock;
    static WORDS: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    WORDS.get_or_init(|| square_free_words(3))
}

/// Square-free ternary words of lengths 1 through 5, shortest first.
pub fn crochemore_test_words() -> &'static [TernaryWord] {
    use std::sync::OnceLock;
    static WORDS: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    WORDS.get_or_init(|| (1..=5).flat_map(square_free_words).collect())
}

/// Certifies a uniform morphism by the images of the 12 square-free words of
/// length 3. A positive verdict means the morphism is square-free.
pub fn berstel_test(m: &TernaryMorphism) -> Result<SquarefreeCertificate> {
    if !m.is_uniform() {
        return Err(Error::NonUniform(m.image_lengths()));
    }
    Ok(test_words(
        m,
        CertificateMethod::Berstel3,
        length3_test_words(),
    ))
}

/// Certifies an arbitrary ternary morphism by the images of all square-free
/// words of length at most 5.
pub fn crochemore_test(m: &TernaryMorphism) -> SquarefreeCertificate {
    test_words(m, CertificateMethod::Crochemore5, crochemore_test_words())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn from_seed_examples() {
        let m = TernaryMorphism::from_seed(&w("012")).unwrap();
        assert_eq!(m.images(), &[w("012"), w("120"), w("201")]);
        assert!(m.is_cyclic_shift_form() && m.is_uniform());

        let m = TernaryMorphism::from_seed(&w("2")).unwrap();
        assert_eq!(m.images(), &[w("2"), w("0"), w("1")]);

        assert!(TernaryMorphism::from_seed(&TernaryWord::empty()).is_err());
        assert!(matches!(
            TernaryMorphism::new([w("0"), TernaryWord::empty(), w("1")]),
            Err(Error::EmptyImage(1))
        ));
    }

    #[test]
    fn apply_examples() {
        let m = TernaryMorphism::from_seed(&w("012")).unwrap();
        assert_eq!(m.apply(&w("0")), w("012"));
        let img = m.apply(&w("01"));
        assert_eq!(img, w("012120"));
        assert_eq!(
            find_square(&img),
            Some(SquareWitness {
                start: 1,
                half_length: 2
            })
        );
        assert_eq!(m.apply(&TernaryWord::empty()), TernaryWord::empty());
    }

    #[test]
    fn berstel_failure_carries_counterexample() {
        let m = TernaryMorphism::from_seed(&w("012")).unwrap();
        let cert = berstel_test(&m).unwrap();
        assert!(!cert.verdict);
        // first length-3 word is 010, its image 012120012 contains 1212
        let c = cert.counterexample.as_ref().unwrap();
        assert_eq!(c.word, w("010"));
        assert_eq!(
            c.witness,
            SquareWitness {
                start: 1,
                half_length: 2
            }
        );
        assert_eq!(cert.tested_words, 1);
        assert!(cert.is_consistent_for(&m));
    }

    #[test]
    fn crochemore_failure_on_two_letter_word() {
        let m = TernaryMorphism::from_seed(&w("012")).unwrap();
        let cert = crochemore_test(&m);
        assert!(!cert.verdict);
        assert_eq!(cert.counterexample.as_ref().unwrap().word, w("01"));
        assert_eq!(cert.method, CertificateMethod::Crochemore5);
    }

    #[test]
    fn identity_like_morphisms_pass() {
        let m = TernaryMorphism::from_seed(&w("0")).unwrap();
        let cert = berstel_test(&m).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.tested_words, 12);
        let id = TernaryMorphism::new([w("0"), w("1"), w("2")]).unwrap();
        let cert = crochemore_test(&id);
        assert!(cert.verdict);
        assert_eq!(cert.tested_words, 3 + 6 + 12 + 18 + 30);
    }

    #[test]
    fn berstel_rejects_non_uniform() {
        let m = TernaryMorphism::new([w("0"), w("12"), w("2")]).unwrap();
        assert!(matches!(
            berstel_test(&m),
            Err(Error::NonUniform([1, 2, 1]))
        ));
    }

    #[test]
    fn certificate_record_parses_back() {
        let m = TernaryMorphism::from_seed(&w("012")).unwrap();
        for cert in [
            berstel_test(&m).unwrap(),
            berstel_test(&TernaryMorphism::from_seed(&w("1")).unwrap()).unwrap(),
        ] {
            let text = cert.to_string();
            assert_eq!(text.parse::<SquarefreeCertificate>().unwrap(), cert);
        }
        assert!("method: berstel-3"
            .parse::<SquarefreeCertificate>()
            .is_err());
        assert!("method: other\nverdict: true\ntested_words: 1"
            .parse::<SquarefreeCertificate>()
            .is_err());
    }
}
