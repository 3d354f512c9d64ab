//! Square-free morphisms and square-free stem words over the alphabet
//! {0, 1, 2}.
//!
//! The crate constructs, for every admissible length n, a certified
//! n-uniform square-free morphism of cyclic shift form
//! `f(1) = σ(f(0))`, `f(2) = σ²(f(0))`, with `σ(a) = a + 1 mod 3`.
//! It also searches for them exhaustively, decodes stem words of infinite
//! square-free words, and streams stem words of length n letter by letter.

pub mod alpha;
pub mod cli;
pub mod constructor;
pub mod error;
pub mod fixtures;
pub mod morphism;
pub mod search;
pub mod squarefree;
pub mod stems;
pub mod thue_morse;
pub mod word;

pub use constructor::{construct, CertifiedMorphism, ConstructionRecipe, Constructor};
pub use error::{Error, Result};
pub use fixtures::Fixtures;
pub use morphism::{berstel_test, crochemore_test, SquarefreeCertificate, TernaryMorphism};
pub use search::{search_seeds, SearchMode, SearchOptions, SearchOutcome};
pub use squarefree::{find_square, is_square_free, IncrementalChecker, SquareWitness};
pub use word::{Letter, TernaryWord};
