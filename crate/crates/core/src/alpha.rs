//! The four α-words used as the outer pieces of assembled seeds, and finite
//! checks of the combinatorial properties the assembly relies on.
//!
//! Each property is checked on concrete words, so the same routines run on
//! deliberately corrupted copies in the tests to show they can fail.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::squarefree::{avoids, find_square, palindrome3_centers, triple_letter_5_factors};
use crate::word::{Letter, TernaryWord};

pub const ALPHA_1: &str = "21020102101201021201210212010210120102012";
pub const ALPHA_2: &str = "2102010210120102120121020120210201210212010210120102012";
pub const ALPHA_3: &str = "21020102101201021201210201202101201021201210212010210120102012";
pub const ALPHA_4: &str = "210201021012010212012102012021012010210120210201210212010210120102012";

/// Common prefix of every α-word; its reversal is their common suffix.
pub const PI: &str = "210201021012010";

/// Lengths of α₁..α₄.
pub const ALPHA_LENGTHS: [usize; 4] = [41, 55, 62, 69];

/// The bracket word flanking every `x` (see [`crate::thue_morse::make_x`]).
pub const BRACKET: &str = "2102012";

/// `α_q` for `q` in `1..=4`.
pub fn alpha(q: usize) -> Result<TernaryWord> {
    let s = match q {
        1 => ALPHA_1,
        2 => ALPHA_2,
        3 => ALPHA_3,
        4 => ALPHA_4,
        _ => return Err(Error::InvalidAlphaIndex(q)),
    };
    Ok(s.parse().expect("α constants are ternary"))
}

pub fn all_alphas() -> [TernaryWord; 4] {
    [1, 2, 3, 4].map(|q| alpha(q).expect("valid index"))
}

fn word(s: &str) -> TernaryWord {
    s.parse().expect("constant is ternary")
}

/// One named property check with an optional explanation of the failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn new(name: impl Into<String>, witness: Option<String>) -> Self {
        PropertyCheck {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        }
    }
}

/// Results of the five α properties for one α-word and for its reversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaPropertyReport {
    pub q: usize,
    pub checks: Vec<PropertyCheck>,
}

impl AlphaPropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for AlphaPropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "alpha{} {}: {}",
                self.q,
                c.name,
                if c.passed { "pass" } else { "FAIL" }
            )?;
            if let Some(w) = &c.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs the five properties on `subject`. `partners` are the words whose
/// prefixes and suffixes must not overlap the subject's (item 5); the
/// subject itself should be among them.
///
/// Reversed α-words are checked with the same expectations: they still
/// begin with π, and reversal swaps 02010 with 01020.
pub fn check_alpha_properties(
    subject: &TernaryWord,
    partners: &[TernaryWord],
) -> Vec<PropertyCheck> {
    let mut checks = Vec::with_capacity(5);

    checks.push(PropertyCheck::new(
        "square-free",
        find_square(subject).map(|s| format!("square at {} half {}", s.start, s.half_length)),
    ));

    let pi = word(PI);
    let item2 = if !subject.starts_with(&pi) {
        Some(format!("does not start with {PI}"))
    } else {
        let idx: Vec<usize> = pi
            .factor_indices(&word("010"))
            .expect("nonempty pattern")
            .iter()
            .map(|o| o.index)
            .collect();
        (idx != [4, 12]).then(|| format!("010 at {idx:?}"))
    };
    checks.push(PropertyCheck::new("pi-010-indices", item2));

    // The literal length-10 claim fails: 101 first occurs at index 8, so
    // the three centers need 11 letters. Both lengths are reported.
    checks.push(PropertyCheck::new(
        "palindrome-centers",
        centers_witness(subject, 10),
    ));
    checks.push(PropertyCheck::new(
        "palindrome-centers-11",
        centers_witness(subject, 11),
    ));

    checks.push(PropertyCheck::new(
        "triple-letter-5-factors",
        triple_letter_witness(subject),
    ));

    checks.push(PropertyCheck::new(
        "borders",
        border_witness(subject, partners),
    ));
    checks
}

fn centers_witness(subject: &TernaryWord, len: usize) -> Option<String> {
    let all: BTreeSet<Letter> = Letter::ALL.into_iter().collect();
    [
        ("prefix", subject.prefix(len)),
        ("suffix", subject.suffix(len)),
    ]
    .into_iter()
    .find_map(|(label, part)| {
        let centers = palindrome3_centers(&part);
        (centers != all).then(|| {
            let c: Vec<String> = centers.iter().map(|l| l.to_string()).collect();
            let c = c.join(",");
            format!("length-{len} {label} {part} has centers {{{c}}}")
        })
    })
}

fn triple_letter_witness(subject: &TernaryWord) -> Option<String> {
    let hits = triple_letter_5_factors(subject);
    let n = subject.len();
    let descr = || {
        hits.iter()
            .map(|h| format!("{}@{}", h.factor, h.index))
            .collect::<Vec<_>>()
            .join(",")
    };
    if hits.len() != 2 {
        return Some(format!("hits [{}]", descr()));
    }
    let (first, second) = (&hits[0], &hits[1]);
    // Inside the length-7 prefix: index + 5 <= 7. Inside the suffix: index >= n - 7.
    let ok = first.factor == word("02010")
        && first.index + 5 <= 7
        && second.factor == word("01020")
        && second.index + 7 >= n;
    (!ok).then(|| format!("hits [{}]", descr()))
}

fn border_witness(subject: &TernaryWord, partners: &[TernaryWord]) -> Option<String> {
    // Proper prefixes that are suffixes of a partner, and vice versa; only
    // length 1 (the letter 2) may qualify.
    let bad: Vec<usize> = (1..subject.len())
        .filter(|&len| {
            let p = subject.prefix(len);
            let s = subject.suffix(len);
            let hit = partners
                .iter()
                .any(|r| r.ends_with(&p) || r.starts_with(&s));
            hit != (len == 1)
        })
        .collect();
    (!bad.is_empty()).then(|| format!("border lengths {bad:?}"))
}

/// Checks the five properties for `α_q` against all four α-words, then for
/// its reversal against the reversed α-words.
pub fn verify_remark2(q: usize) -> Result<AlphaPropertyReport> {
    let subject = alpha(q)?;
    let partners = all_alphas();
    let reversed_partners = partners.clone().map(|a| a.reverse());
    let mut checks = check_alpha_properties(&subject, &partners);
    for mut c in check_alpha_properties(&subject.reverse(), &reversed_partners) {
        c.name = format!("reversed {}", c.name);
        checks.push(c);
    }
    Ok(AlphaPropertyReport { q, checks })
}

/// No cyclic shift of the length-7 prefix of `subject` occurs in a host
/// except as the host's prefix, and no cyclic shift of the length-7 suffix
/// occurs except as the host's suffix.
pub fn check_shift_isolation(subject: &TernaryWord, hosts: &[TernaryWord]) -> bool {
    let prefix = subject.prefix(7);
    let suffix = subject.suffix(7);
    hosts.iter().all(|host| {
        (0..3).all(|i| {
            let p_ok = host
                .factor_indices(&prefix.cyclic_shift(i))
                .expect("nonempty")
                .iter()
                .all(|o| o.index == 0);
            let s_ok = host
                .factor_indices(&suffix.cyclic_shift(i))
                .expect("nonempty")
                .iter()
                .all(|o| o.index + 7 == host.len());
            p_ok && s_ok
        })
    })
}

pub fn verify_shift_isolation(q: usize) -> Result<bool> {
    Ok(check_shift_isolation(&alpha(q)?, &all_alphas()))
}

/// Square-freeness of `σ^i(α_r) σ^j(α_q)` for one case.
pub fn lemma_aa_case(q: usize, r: usize, i: usize, j: usize) -> Result<bool> {
    let w = alpha(r)?.cyclic_shift(i).concat(&alpha(q)?.cyclic_shift(j));
    Ok(find_square(&w).is_none())
}

/// Number of `(q, r, i, j)` cases in [`verify_lemma_aa`].
pub const LEMMA_AA_CASES: usize = 72;

/// Sweeps all ordered pairs `q != r` and shifts `i != j`.
pub fn verify_lemma_aa() -> bool {
    lemma_aa_cases()
        .into_iter()
        .all(|(q, r, i, j)| lemma_aa_case(q, r, i, j).expect("valid indices"))
}

pub fn lemma_aa_cases() -> Vec<(usize, usize, usize, usize)> {
    let mut cases = Vec::with_capacity(LEMMA_AA_CASES);
    for q in 1..=4 {
        for r in (1..=4).filter(|&r| r != q) {
            for i in 0..3 {
                for j in (0..3).filter(|&j| j != i) {
                    cases.push((q, r, i, j));
                }
            }
        }
    }
    cases
}

/// For cyclic shifts α, β of α_q and γ, δ of α_r (all `q != r`): α is
/// not an internal factor of γβ, and γ is not an internal factor of δβ.
pub fn verify_lemma_qr() -> bool {
    let alphas = all_alphas();
    for q in 0..4 {
        for r in (0..4).filter(|&r| r != q) {
            for a in 0..3 {
                let alpha_shift = alphas[q].cyclic_shift(a);
                let gamma_shift = alphas[r].cyclic_shift(a);
                for b in 0..3 {
                    let beta = alphas[q].cyclic_shift(b);
                    for c in 0..3 {
                        let gamma_beta = alphas[r].cyclic_shift(c).concat(&beta);
                        if gamma_beta.has_internal_occurrence(&alpha_shift)
                            || gamma_beta.has_internal_occurrence(&gamma_shift)
                        {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Whether `x` may be placed between α-words: `2102012·x·2102012` must be
/// square-free and avoid 010 and 212.
pub fn is_admissible_x(x: &TernaryWord) -> bool {
    let bracket = word(BRACKET);
    let r = bracket.concat(x).concat(&bracket);
    find_square(&r).is_none() && avoids(&r, &[word("010"), word("212")])
}

/// Finite check of the square-freeness and isolation properties of `α_q x`
/// and `x α_r` for one admissible `x`.
pub fn verify_lemmas_with_x(x: &TernaryWord, q: usize, r: usize) -> Result<bool> {
    if q == r {
        return Err(Error::Precondition(format!(
            "q and r must differ (both {q})"
        )));
    }
    if !is_admissible_x(x) {
        return Err(Error::Precondition(format!(
            "x = {x} is not admissible: 2102012·x·2102012 must be square-free and avoid 010, 212"
        )));
    }
    let aq = alpha(q)?;
    let ar = alpha(r)?;
    let left = aq.concat(x);
    let right = x.concat(&ar);
    if find_square(&left).is_some() || find_square(&right).is_some() {
        return Ok(false);
    }
    for i in 0..3 {
        for beta in [aq.cyclic_shift(i), ar.cyclic_shift(i)] {
            if left.has_internal_occurrence(&beta) || right.has_internal_occurrence(&beta) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
