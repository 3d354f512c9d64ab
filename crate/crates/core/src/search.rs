//! Exhaustive search over seeds `f(0)` of n-uniform cyclic shift morphisms.
//!
//! If `f` is square-free then so is the morphism seeded by `σ(f(0))`, so the
//! three shifts of a solution are solutions and exactly one of them starts
//! with 2. The search fixes the first letter to 2 and reports one
//! representative per orbit.
//!
//! A seed is the image of the letter 0, so it must itself be square-free;
//! the tree is pruned by an [`IncrementalChecker`] on the seed prefix.
//! Leaves are decided by [`berstel_test`].
//!
//! The tree below a fixed split depth is cut into independent work units
//! that run on a rayon pool. Units are merged in tree order, which makes
//! every outcome (solutions, node counts, budget cuts) independent of the
//! number of workers.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::morphism::{berstel_test, TernaryMorphism};
use crate::squarefree::IncrementalChecker;
use crate::word::{Letter, TernaryWord};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    First,
    All,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of tree nodes to visit.
    pub budget: Option<u64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Depth at which the tree is split into work units.
    pub split_depth: usize,
    /// Fix the first letter to 2 (orbit representatives only).
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: None,
            jobs: None,
            split_depth: 6,
            symmetry: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub mode: SearchMode,
    /// Seeds in lexicographic order; orbit representatives when
    /// `symmetry_factor` is 3.
    pub solutions: Vec<TernaryWord>,
    /// Square-free seed prefixes visited, including complete seeds.
    pub nodes_explored: u64,
    pub symmetry_factor: u8,
    /// No budget cut occurred.
    pub exhaustive: bool,
}

impl SearchOutcome {
    /// An exhaustive search with no solution proves that no n-uniform
    /// square-free cyclic shift morphism exists.
    pub fn proves_nonexistence(&self) -> bool {
        self.exhaustive && self.mode == SearchMode::All && self.solutions.is_empty()
    }

    /// All solutions, with the letterwise shifts of the representatives
    /// added back, sorted.
    pub fn expanded_solutions(&self) -> Vec<TernaryWord> {
        let mut all: Vec<TernaryWord> = if self.symmetry_factor == 3 {
            self.solutions
                .iter()
                .flat_map(|s| (0..3).map(move |i| s.cyclic_shift(i)))
                .collect()
        } else {
            self.solutions.clone()
        };
        all.sort();
        all.dedup();
        all
    }
}

#[derive(Debug, Default)]
struct UnitResult {
    nodes: u64,
    /// `(node index within the unit, seed)`
    solutions: Vec<(u64, TernaryWord)>,
    truncated: bool,
}

fn is_solution(seed: &[u8]) -> bool {
    let morphism = TernaryMorphism::from_seed(&TernaryWord::from_values_unchecked(seed.to_vec()))
        .expect("seed is nonempty");
    berstel_test(&morphism)
        .expect("cyclic shift morphisms are uniform")
        .verdict
}

struct Walker {
    n: usize,
    mode: SearchMode,
    cap: Option<u64>,
    checker: IncrementalChecker,
    out: UnitResult,
}

impl Walker {
    /// Depth-first walk below the current checker state. Returns `false`
    /// once the walk must stop (budget reached, or first solution found).
    fn walk(&mut self) -> bool {
        if self.checker.len() == self.n {
            if is_solution(self.checker.committed_slice()) {
                let seed = self.checker.committed();
                self.out.solutions.push((self.out.nodes, seed));
                if self.mode == SearchMode::First {
                    return false;
                }
            }
            return true;
        }
        for a in Letter::ALL {
            if self.cap.is_some_and(|cap| self.out.nodes >= cap) {
                self.out.truncated = true;
                return false;
            }
            if self.checker.push(a) {
                self.out.nodes += 1;
                let go_on = self.walk();
                self.checker.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn run_unit(prefix: &[u8], n: usize, mode: SearchMode, cap: Option<u64>) -> UnitResult {
    let mut checker = IncrementalChecker::new();
    for &a in prefix {
        let accepted = checker.push(Letter::new(a).expect("valid letter"));
        debug_assert!(accepted);
    }
    let mut walker = Walker {
        n,
        mode,
        cap,
        checker,
        out: UnitResult::default(),
    };
    walker.walk();
    walker.out
}

/// Square-free prefixes of length `depth` (or complete seeds if shorter),
/// in tree order, plus the number of nodes visited to reach them.
fn frontier(n: usize, depth: usize, symmetry: bool) -> (Vec<Vec<u8>>, u64) {
    fn go(c: &mut IncrementalChecker, depth: usize, units: &mut Vec<Vec<u8>>, nodes: &mut u64) {
        if c.len() == depth {
            units.push(c.committed_slice().to_vec());
            return;
        }
        for a in Letter::ALL {
            if c.push(a) {
                *nodes += 1;
                go(c, depth, units, nodes);
                c.pop();
            }
        }
    }
    let depth = depth.clamp(1, n);
    let mut units = Vec::new();
    let mut nodes = 0;
    let mut c = IncrementalChecker::new();
    if symmetry {
        c.push(Letter::TWO);
        nodes += 1;
    }
    go(&mut c, depth, &mut units, &mut nodes);
    (units, nodes)
}

/// Depth-first search for seeds of length `n` whose cyclic shift morphism
/// is square-free.
pub fn search_seeds(n: usize, mode: SearchMode, options: &SearchOptions) -> SearchOutcome {
    let symmetry_factor = if options.symmetry { 3 } else { 1 };
    let mut outcome = SearchOutcome {
        n,
        mode,
        solutions: Vec::new(),
        nodes_explored: 0,
        symmetry_factor,
        exhaustive: true,
    };
    if n == 0 {
        return outcome;
    }
    let (units, frontier_nodes) = frontier(n, options.split_depth, options.symmetry);
    let budget = options.budget;
    if budget.is_some_and(|b| frontier_nodes > b) {
        outcome.nodes_explored = budget.unwrap_or_default();
        outcome.exhaustive = false;
        return outcome;
    }

    let run = || -> Vec<UnitResult> {
        units
            .par_iter()
            .map(|prefix| run_unit(prefix, n, mode, budget))
            .collect()
    };
    let results = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };

    let mut total = frontier_nodes;
    for unit in results {
        let remaining = budget.map(|b| b - total);
        for (idx, seed) in &unit.solutions {
            if remaining.is_some_and(|r| *idx > r) {
                break;
            }
            outcome.solutions.push(seed.clone());
            if mode == SearchMode::First {
                outcome.nodes_explored = total + idx;
                return outcome;
            }
        }
        match remaining {
            Some(r) if unit.truncated || unit.nodes > r => {
                outcome.nodes_explored = total + r;
                outcome.exhaustive = false;
                return outcome;
            }
            _ => total += unit.nodes,
        }
    }
    outcome.nodes_explored = total;
    outcome
}

/// Per-entry result of [`cross_check_appendix`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixEntryCheck {
    pub n: usize,
    pub seed: TernaryWord,
    pub certified: bool,
    /// Whether exhaustive search found the seed's orbit representative;
    /// `None` above the search ceiling.
    pub found_by_search: Option<bool>,
}

impl AppendixEntryCheck {
    pub fn passed(&self) -> bool {
        self.certified && self.found_by_search != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub entries: Vec<AppendixEntryCheck>,
    pub search_ceiling: usize,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(AppendixEntryCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AppendixEntryCheck> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

/// Default length up to which appendix entries are regenerated by search.
pub const DEFAULT_SEARCH_CEILING: usize = 30;

fn orbit_representative(seed: &TernaryWord) -> TernaryWord {
    match seed.get(0) {
        Some(first) => seed.cyclic_shift((2 + 3 - first.value() as usize) % 3),
        None => seed.clone(),
    }
}

/// Certifies every appendix entry in `range`; entries with `n <= ceiling`
/// must moreover be rediscovered by exhaustive search.
pub fn cross_check_appendix(
    fixtures: &Fixtures,
    range: RangeInclusive<usize>,
    ceiling: usize,
    options: &SearchOptions,
) -> Result<AppendixReport> {
    if *range.start() < 13 || *range.end() > 122 {
        return Err(Error::Precondition(format!(
            "appendix range {}..={} is outside 13..=122",
            range.start(),
            range.end()
        )));
    }
    let options = SearchOptions {
        symmetry: true,
        budget: None,
        ..options.clone()
    };
    let mut searched: BTreeMap<usize, Vec<TernaryWord>> = BTreeMap::new();
    let mut entries = Vec::new();
    for (n, seed) in fixtures.appendix.iter().filter(|(n, _)| range.contains(n)) {
        let morphism = TernaryMorphism::from_seed(seed)?;
        let certified = berstel_test(&morphism)?.verdict;
        let found_by_search = (n <= ceiling).then(|| {
            let solutions = searched
                .entry(n)
                .or_insert_with(|| search_seeds(n, SearchMode::All, &options).solutions);
            solutions.binary_search(&orbit_representative(seed)).is_ok()
        });
        entries.push(AppendixEntryCheck {
            n,
            seed: seed.clone(),
            certified,
            found_by_search,
        });
    }
    Ok(AppendixReport {
        entries,
        search_ceiling: ceiling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn finds_appendix_seed_for_13() {
        let out = search_seeds(13, SearchMode::All, &SearchOptions::default());
        assert!(out.exhaustive);
        assert!(out.solutions.contains(&w("2101201021012")));
        assert!(out.solutions.iter().all(|s| s.get(0) == Some(Letter::TWO)));
        assert!(out.solutions.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn nonexistence_for_14() {
        let out = search_seeds(14, SearchMode::All, &SearchOptions::default());
        assert!(out.proves_nonexistence());
        assert!(out.nodes_explored > 0);
    }

    #[test]
    fn first_mode_stops_early() {
        let all = search_seeds(13, SearchMode::All, &SearchOptions::default());
        let first = search_seeds(13, SearchMode::First, &SearchOptions::default());
        assert_eq!(first.solutions, all.solutions[..1]);
        assert!(first.nodes_explored <= all.nodes_explored);
    }

    #[test]
    fn budget_cut_is_reported() {
        let out = search_seeds(
            17,
            SearchMode::All,
            &SearchOptions {
                budget: Some(50),
                ..SearchOptions::default()
            },
        );
        assert!(!out.exhaustive);
        assert_eq!(out.nodes_explored, 50);
        assert!(!out.proves_nonexistence());
    }

    #[test]
    fn worker_count_does_not_change_outcome() {
        for budget in [None, Some(300), Some(5)] {
            let reference = search_seeds(
                18,
                SearchMode::All,
                &SearchOptions {
                    jobs: Some(1),
                    budget,
                    ..SearchOptions::default()
                },
            );
            for jobs in [2, 4] {
                let out = search_seeds(
                    18,
                    SearchMode::All,
                    &SearchOptions {
                        jobs: Some(jobs),
                        budget,
                        ..SearchOptions::default()
                    },
                );
                assert_eq!(out, reference);
            }
        }
    }

    #[test]
    fn split_depth_does_not_change_outcome() {
        let a = search_seeds(19, SearchMode::All, &SearchOptions::default());
        for depth in [1, 3, 10, 40] {
            let b = search_seeds(
                19,
                SearchMode::All,
                &SearchOptions {
                    split_depth: depth,
                    ..SearchOptions::default()
                },
            );
            assert_eq!(a, b, "split depth {depth}");
        }
    }

    #[test]
    fn tiny_lengths() {
        let out = search_seeds(1, SearchMode::All, &SearchOptions::default());
        assert_eq!(out.solutions, vec![w("2")]);
        assert_eq!(out.expanded_solutions(), vec![w("0"), w("1"), w("2")]);
        let out = search_seeds(0, SearchMode::All, &SearchOptions::default());
        assert!(out.solutions.is_empty());
    }

    #[test]
    fn appendix_cross_check_small() {
        let report = cross_check_appendix(
            Fixtures::embedded(),
            13..=19,
            DEFAULT_SEARCH_CEILING,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(report.entries.len(), 4);
        assert!(report.passed());
        assert!(
            cross_check_appendix(Fixtures::embedded(), 12..=20, 30, &SearchOptions::default())
                .is_err()
        );
    }

    #[test]
    fn orbit_representatives() {
        assert_eq!(orbit_representative(&w("012")), w("201"));
        assert_eq!(orbit_representative(&w("2")), w("2"));
        assert_eq!(orbit_representative(&w("10")), w("21"));
    }
}
