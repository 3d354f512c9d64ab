//! Certified n-uniform square-free cyclic shift morphisms for every
//! admissible n.
//!
//! For 13 <= n <= 122 the seed `f(0)` comes from the appendix fixture. For
//! n >= 123 it is assembled as `y = α_q · x · α_r`, where the pair `(q, r)`
//! fixes `|α_q| + |α_r|` modulo 4 and `x` comes from the Thue-Morse
//! construction. Either way the seed is only returned after
//! [`berstel_test`] accepts it.

use serde::{Deserialize, Serialize};

use crate::alpha::alpha;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::morphism::{berstel_test, SquarefreeCertificate, TernaryMorphism};
use crate::search::{search_seeds, SearchMode, SearchOptions};
use crate::thue_morse::{bracketed_factors, bracketed_x_from_factor, FactorShape};
use crate::word::TernaryWord;

/// Lengths for which no n-uniform square-free cyclic shift morphism exists.
pub const EXCEPTIONS: [usize; 6] = [14, 15, 16, 20, 21, 22];

/// Smallest n served by assembly instead of the appendix.
pub const ASSEMBLY_THRESHOLD: usize = 123;

/// Number of distinct Thue-Morse factors tried per α order before the
/// assembly route gives up.
pub const X_VARIANTS: usize = 4;

/// `(|α_q| + |α_r|, q, r)`; the four sums cover every residue mod 4.
pub const PAIR_SUMS: [(usize, usize, usize); 4] =
    [(96, 1, 2), (117, 2, 3), (110, 1, 4), (103, 1, 3)];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSelection {
    pub pair_sum: usize,
    pub q: usize,
    pub r: usize,
    pub x_length: usize,
    pub k: usize,
}

/// Picks the α pair whose length sum leaves `n - sum ≡ 1 (mod 4)`, and the
/// smallest matching `x`.
pub fn select_pair(n: usize) -> Result<PairSelection> {
    if n < ASSEMBLY_THRESHOLD {
        return Err(Error::Unsupported {
            n,
            reason: format!("assembly needs n >= {ASSEMBLY_THRESHOLD}"),
        });
    }
    let (pair_sum, q, r) = PAIR_SUMS
        .into_iter()
        .find(|&(s, _, _)| (n - s) % 4 == 1)
        .expect("pair sums cover all residues");
    let x_length = n - pair_sum;
    debug_assert!(x_length >= 9);
    Ok(PairSelection {
        pair_sum,
        q,
        r,
        x_length,
        k: (x_length + 15) / 4,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecipeSource {
    Appendix,
    Assembled,
}

/// How a certified seed was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub n: usize,
    pub source: RecipeSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Number of seeds submitted to the certificate (1 unless the retry
    /// ladder was climbed).
    pub attempts: usize,
}

impl ConstructionRecipe {
    /// Checks `n = |α_q| + |x| + |α_r|`, `|x| ≡ 1 (mod 4)` and `|x| = 4k - 15`
    /// for assembled recipes.
    pub fn is_consistent(&self) -> bool {
        match self.source {
            RecipeSource::Appendix => self.q.is_none() && self.k.is_none(),
            RecipeSource::Assembled => {
                let (Some(q), Some(r), Some(x), Some(k)) = (self.q, self.r, self.x_length, self.k)
                else {
                    return false;
                };
                let (Ok(aq), Ok(ar)) = (alpha(q), alpha(r)) else {
                    return false;
                };
                q != r && self.n == aq.len() + x + ar.len() && x % 4 == 1 && x + 15 == 4 * k
            }
        }
    }
}

/// A cyclic shift morphism with a positive square-freeness certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifiedMorphism {
    pub morphism: TernaryMorphism,
    pub recipe: ConstructionRecipe,
    pub certificate: SquarefreeCertificate,
}

impl CertifiedMorphism {
    pub fn seed(&self) -> &TernaryWord {
        &self.morphism.images()[0]
    }

    pub fn n(&self) -> usize {
        self.recipe.n
    }
}

/// Assembles `α_q · x · α_r` for the given pair without certifying it,
/// using the first `01v01` factor of length `k`.
pub fn assemble_seed(selection: &PairSelection) -> Result<TernaryWord> {
    let factor = bracketed_factors(selection.k, FactorShape::Ends01, 1)?.remove(0);
    let x = bracketed_x_from_factor(&factor)?;
    Ok(alpha(selection.q)?
        .concat(&x.x)
        .concat(&alpha(selection.r)?))
}

/// Constructor bound to a fixture set.
#[derive(Clone, Copy, Debug)]
pub struct Constructor<'a> {
    fixtures: &'a Fixtures,
}

impl<'a> Constructor<'a> {
    pub fn new(fixtures: &'a Fixtures) -> Self {
        Constructor { fixtures }
    }

    pub fn construct(&self, n: usize) -> Result<CertifiedMorphism> {
        if EXCEPTIONS.contains(&n) {
            return Err(Error::Nonexistent { n });
        }
        if n < 13 {
            return Err(Error::Unsupported {
                n,
                reason: "lengths below 13 are only covered by exhaustive search".into(),
            });
        }
        if n < ASSEMBLY_THRESHOLD {
            let seed = self
                .fixtures
                .appendix
                .get(n)
                .ok_or_else(|| Error::Unsupported {
                    n,
                    reason: "no appendix entry".into(),
                })?;
            let morphism = TernaryMorphism::from_seed(seed)?;
            let certificate = berstel_test(&morphism)?;
            if !certificate.verdict {
                return Err(Error::Verification(format!(
                    "appendix seed for n = {n} fails the length-3 test:\n{certificate}"
                )));
            }
            return Ok(CertifiedMorphism {
                morphism,
                recipe: ConstructionRecipe {
                    n,
                    source: RecipeSource::Appendix,
                    q: None,
                    r: None,
                    x_length: None,
                    k: None,
                    attempts: 1,
                },
                certificate,
            });
        }
        assemble(n)
    }
}

/// Certified morphism from the embedded fixtures.
pub fn construct(n: usize) -> Result<CertifiedMorphism> {
    Constructor::new(Fixtures::embedded()).construct(n)
}

/// Assembly route for n >= 123.
///
/// The first attempt uses the pair from [`select_pair`] and the first
/// `01v01` factor. If its certificate fails, the ladder keeps `|x|` (and so
/// `n`) fixed and tries the swapped order `α_r x α_q`, then later distinct
/// Thue-Morse factors of the same length, up to [`X_VARIANTS`] of them.
pub fn assemble(n: usize) -> Result<CertifiedMorphism> {
    let first = select_pair(n)?;
    let factors = bracketed_factors(first.k, FactorShape::Ends01, X_VARIANTS)?;
    let mut attempts = 0;
    for factor in &factors {
        let x = bracketed_x_from_factor(factor)?;
        for (q, r) in [(first.q, first.r), (first.r, first.q)] {
            attempts += 1;
            let seed = alpha(q)?.concat(&x.x).concat(&alpha(r)?);
            debug_assert_eq!(seed.len(), n);
            let morphism = TernaryMorphism::from_seed(&seed)?;
            let certificate = berstel_test(&morphism)?;
            if certificate.verdict {
                return Ok(CertifiedMorphism {
                    morphism,
                    recipe: ConstructionRecipe {
                        n,
                        source: RecipeSource::Assembled,
                        q: Some(q),
                        r: Some(r),
                        x_length: Some(first.x_length),
                        k: Some(first.k),
                        attempts,
                    },
                    certificate,
                });
            }
        }
    }
    Err(Error::ConstructionFailed {
        n,
        attempts,
        x_length: first.x_length,
    })
}

/// Why an infinite square-free word with an n-stem factorization is known
/// to exist.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StemBasis {
    /// An n-uniform square-free cyclic shift morphism (appendix, assembly,
    /// or exhaustive search for small n).
    UniformMorphism,
    /// One of the bundled non-uniform morphisms (n = 20, 21, 22).
    BundledMorphism,
    /// Known from the literature but not bundled (n = 14, 15, 16).
    CitedOnly,
    /// No cyclic shift morphism of this length exists and nothing else is
    /// bundled; no claim is made.
    Undetermined,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemEvidence {
    pub n: usize,
    pub exists: bool,
    pub basis: StemBasis,
}

/// Existence of an infinite square-free ternary word with an n-stem
/// factorization. For n < 13 a length-n search is run; a negative search
/// result is reported as `Undetermined`, not as nonexistence.
pub fn stem_word_exists(n: usize) -> StemEvidence {
    let (exists, basis) = match n {
        0 => (false, StemBasis::Undetermined),
        14..=16 => (true, StemBasis::CitedOnly),
        20..=22 => (true, StemBasis::BundledMorphism),
        n if n >= 13 => (true, StemBasis::UniformMorphism),
        n => {
            let outcome = search_seeds(n, SearchMode::First, &SearchOptions::default());
            if outcome.solutions.is_empty() {
                (false, StemBasis::Undetermined)
            } else {
                (true, StemBasis::UniformMorphism)
            }
        }
    };
    StemEvidence { n, exists, basis }
}
