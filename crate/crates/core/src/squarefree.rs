//! Square detection and the small factor scans used to audit the α-words.
//!
//! [`IncrementalChecker`] keeps a square-free word and decides, per appended
//! letter, whether the extension is still square-free. It is backed by a
//! suffix automaton whose states also record the most recent end position of
//! their factors. A square `vv` ends at the new position `m` exactly when some
//! suffix `u` of the extended word has an earlier occurrence ending at `e`
//! with `m - e <= |u|`; in that case `m - e` is itself the half-length of a
//! suffix square. Only the states on the suffix-link chain of the new suffix
//! need to be inspected, so a push costs the length of that chain rather
//! than the length of the word.
//!
//! Every mutation of the automaton is journaled, so [`IncrementalChecker::pop`]
//! restores the exact previous state. Search code relies on this.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::word::{Letter, TernaryWord};

/// An occurrence of a square `vv` with `|v| = half_length` starting at `start`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareWitness {
    pub start: usize,
    pub half_length: usize,
}

impl SquareWitness {
    /// Whether the witness describes a real square of `word`.
    pub fn is_valid_for(&self, word: &[u8]) -> bool {
        let h = self.half_length;
        h > 0
            && self.start + 2 * h <= word.len()
            && word[self.start..self.start + h] == word[self.start + h..self.start + 2 * h]
    }
}

/// Leftmost square of `w` (ties broken by the smallest half length), or
/// `None` if `w` is square-free.
pub fn find_square(w: &TernaryWord) -> Option<SquareWitness> {
    find_square_in(w.as_slice())
}

pub fn is_square_free(w: &TernaryWord) -> bool {
    is_square_free_slice(w.as_slice())
}

pub(crate) fn is_square_free_slice(w: &[u8]) -> bool {
    let mut checker = IncrementalChecker::without_history();
    checker.reserve(w.len());
    w.iter().all(|&a| checker.push_value(a))
}

pub(crate) fn find_square_in(w: &[u8]) -> Option<SquareWitness> {
    if is_square_free_slice(w) {
        None
    } else {
        leftmost_square(w)
    }
}

/// Direct scan for the leftmost-then-shortest square.
fn leftmost_square(w: &[u8]) -> Option<SquareWitness> {
    let n = w.len();
    for start in 0..n {
        for half_length in 1..=(n - start) / 2 {
            let mid = start + half_length;
            if w[start..mid] == w[mid..mid + half_length] {
                return Some(SquareWitness { start, half_length });
            }
        }
    }
    None
}

/// Half length of the shortest square that is a suffix of `w`, found by
/// comparing every candidate directly. Quadratic over a whole word; kept as
/// the reference the automaton-backed checker is tested against.
pub fn shortest_suffix_square(w: &[u8]) -> Option<usize> {
    let n = w.len();
    (1..=n / 2).find(|&h| w[n - 2 * h..n - h] == w[n - h..])
}

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct State {
    next: [u32; 3],
    link: u32,
    len: u32,
    /// Largest end position (index of the last letter) of any occurrence.
    last_end: u32,
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Next { state: u32, letter: u8, old: u32 },
    Link { state: u32, old: u32 },
    LastEnd { state: u32, old: u32 },
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    states: u32,
    last: u32,
    undo: usize,
}

/// Online square-freeness checker with exact backtracking.
///
/// The committed word is square-free at all times: a push that would create
/// a square is rejected and leaves the checker untouched.
#[derive(Clone, Debug)]
pub struct IncrementalChecker {
    word: Vec<u8>,
    states: Vec<State>,
    last: u32,
    undo: Vec<Undo>,
    frames: Vec<Frame>,
    history: bool,
}

impl Default for IncrementalChecker {
    fn default() -> Self {
        Self::new()
    }
}

impl IncrementalChecker {
    pub fn new() -> Self {
        IncrementalChecker {
            word: Vec::new(),
            states: vec![State {
                next: [NIL; 3],
                link: NIL,
                len: 0,
                last_end: 0,
            }],
            last: 0,
            undo: Vec::new(),
            frames: Vec::new(),
            history: true,
        }
    }

    /// A checker that does not journal its mutations. `pop` is unavailable
    /// (it returns `None`); used for long one-way streams.
    pub fn without_history() -> Self {
        IncrementalChecker {
            history: false,
            ..Self::new()
        }
    }

    pub fn reserve(&mut self, letters: usize) {
        self.word.reserve(letters);
        self.states.reserve(2 * letters);
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn committed(&self) -> TernaryWord {
        TernaryWord::from_values_unchecked(self.word.clone())
    }

    pub fn committed_slice(&self) -> &[u8] {
        &self.word
    }

    /// Appends `a` if the result stays square-free. Returns whether the
    /// letter was accepted.
    pub fn push(&mut self, a: Letter) -> bool {
        self.push_value(a.value())
    }

    /// Whether pushing `a` would be accepted, without changing state.
    pub fn accepts(&self, a: Letter) -> bool {
        self.square_on_push(a.value(), false).is_none()
    }

    /// The shortest square that appending `a` would create, as a witness in
    /// the extended word.
    pub fn square_on(&self, a: Letter) -> Option<SquareWitness> {
        let m = self.word.len();
        self.square_on_push(a.value(), true)
            .map(|half_length| SquareWitness {
                start: m + 1 - 2 * half_length,
                half_length,
            })
    }

    pub(crate) fn push_value(&mut self, a: u8) -> bool {
        debug_assert!(a < 3);
        if self.square_on_push(a, false).is_some() {
            return false;
        }
        self.extend(a);
        true
    }

    /// Removes the most recently accepted letter, restoring the checker to
    /// exactly the state it had before that push.
    pub fn pop(&mut self) -> Option<Letter> {
        let frame = self.frames.pop()?;
        while self.undo.len() > frame.undo {
            match self.undo.pop().expect("journal underflow") {
                Undo::Next { state, letter, old } => {
                    self.states[state as usize].next[letter as usize] = old
                }
                Undo::Link { state, old } => self.states[state as usize].link = old,
                Undo::LastEnd { state, old } => self.states[state as usize].last_end = old,
            }
        }
        self.states.truncate(frame.states as usize);
        self.last = frame.last;
        self.word
            .pop()
            .map(|v| Letter::new(v).expect("committed letters are valid"))
    }

    /// Half length of a square ending at the new position if `a` were
    /// appended. With `shortest` unset the first hit is returned.
    fn square_on_push(&self, a: u8, shortest: bool) -> Option<usize> {
        let m = self.word.len() as u32;
        let a = a as usize;
        let mut p = self.last;
        while p != NIL && self.states[p as usize].next[a] == NIL {
            p = self.states[p as usize].link;
        }
        if p == NIL {
            return None;
        }
        // Longest suffix of the extended word seen before has length len(p)+1
        // and lives in state q; all shorter suffixes live on q's link chain.
        let mut s = self.states[p as usize].next[a];
        let mut reach = self.states[p as usize].len + 1;
        let mut best: Option<u32> = None;
        while s != 0 {
            let st = &self.states[s as usize];
            let gap = m - st.last_end;
            if gap <= reach {
                if !shortest {
                    return Some(gap as usize);
                }
                best = Some(best.map_or(gap, |b| b.min(gap)));
            }
            s = st.link;
            reach = self.states[s as usize].len;
        }
        best.map(|b| b as usize)
    }

    fn log(&mut self, entry: Undo) {
        if self.history {
            self.undo.push(entry);
        }
    }

    fn extend(&mut self, a: u8) {
        let m = self.word.len() as u32;
        if self.history {
            self.frames.push(Frame {
                states: self.states.len() as u32,
                last: self.last,
                undo: self.undo.len(),
            });
        }
        let c = a as usize;
        let cur = self.states.len() as u32;
        self.states.push(State {
            next: [NIL; 3],
            link: NIL,
            len: self.states[self.last as usize].len + 1,
            last_end: m,
        });
        let mut p = self.last;
        while p != NIL && self.states[p as usize].next[c] == NIL {
            self.log(Undo::Next {
                state: p,
                letter: a,
                old: NIL,
            });
            self.states[p as usize].next[c] = cur;
            p = self.states[p as usize].link;
        }
        if p == NIL {
            self.states[cur as usize].link = 0;
        } else {
            let q = self.states[p as usize].next[c];
            if self.states[p as usize].len + 1 == self.states[q as usize].len {
                self.states[cur as usize].link = q;
            } else {
                let clone = self.states.len() as u32;
                let mut copy = self.states[q as usize];
                copy.len = self.states[p as usize].len + 1;
                self.states.push(copy);
                while p != NIL && self.states[p as usize].next[c] == q {
                    self.log(Undo::Next {
                        state: p,
                        letter: a,
                        old: q,
                    });
                    self.states[p as usize].next[c] = clone;
                    p = self.states[p as usize].link;
                }
                let old = self.states[q as usize].link;
                self.log(Undo::Link { state: q, old });
                self.states[q as usize].link = clone;
                self.states[cur as usize].link = clone;
            }
        }
        self.last = cur;
        let mut s = self.states[cur as usize].link;
        while s != 0 {
            let old = self.states[s as usize].last_end;
            self.log(Undo::LastEnd { state: s, old });
            self.states[s as usize].last_end = m;
            s = self.states[s as usize].link;
        }
        self.word.push(a);
    }
}

/// All square-free ternary words of length `len`, in lexicographic order.
pub fn square_free_words(len: usize) -> Vec<TernaryWord> {
    fn go(checker: &mut IncrementalChecker, len: usize, out: &mut Vec<TernaryWord>) {
        if checker.len() == len {
            out.push(checker.committed());
            return;
        }
        for a in Letter::ALL {
            if checker.push(a) {
                go(checker, len, out);
                checker.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut IncrementalChecker::new(), len, &mut out);
    out
}

/// Letters `b` such that some length-3 palindrome `aba` with `a != b` is a
/// factor of `w`.
pub fn palindrome3_centers(w: &TernaryWord) -> BTreeSet<Letter> {
    w.as_slice()
        .windows(3)
        .filter(|f| f[0] == f[2] && f[0] != f[1])
        .map(|f| Letter::new(f[1]).expect("valid letter"))
        .collect()
}

/// A length-5 factor in which one letter appears at least three times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleLetterHit {
    pub factor: TernaryWord,
    pub index: usize,
}

pub fn triple_letter_5_factors(w: &TernaryWord) -> Vec<TripleLetterHit> {
    w.as_slice()
        .windows(5)
        .enumerate()
        .filter(|(_, f)| {
            let mut counts = [0u8; 3];
            f.iter().for_each(|&v| counts[v as usize] += 1);
            counts.iter().any(|&c| c >= 3)
        })
        .map(|(index, f)| TripleLetterHit {
            factor: TernaryWord::from_values_unchecked(f.to_vec()),
            index,
        })
        .collect()
}

/// True iff no word of `forbidden` is a factor of `w`.
pub fn avoids<'a, I>(w: &TernaryWord, forbidden: I) -> bool
where
    I: IntoIterator<Item = &'a TernaryWord>,
{
    forbidden.into_iter().all(|f| !w.contains_factor(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn find_square_examples() {
        assert_eq!(find_square(&w("0102010")), None);
        assert_eq!(
            find_square(&w("0101")),
            Some(SquareWitness {
                start: 0,
                half_length: 2
            })
        );
        assert_eq!(find_square(&TernaryWord::empty()), None);
        // two squares: 00 at 3 and 1212 at 1; leftmost wins
        assert_eq!(
            find_square(&w("0121200")),
            Some(SquareWitness {
                start: 1,
                half_length: 2
            })
        );
    }

    #[test]
    fn push_examples() {
        let mut c = IncrementalChecker::new();
        assert!(c.push(Letter::ZERO));
        assert!(c.push(Letter::ONE));
        assert!(c.push(Letter::ZERO));
        assert!(!c.push(Letter::ONE));
        assert_eq!(c.committed(), w("010"));
        assert_eq!(
            c.square_on(Letter::ONE),
            Some(SquareWitness {
                start: 0,
                half_length: 2
            })
        );
        assert!(!c.accepts(Letter::ZERO));
        assert!(c.accepts(Letter::TWO));
    }

    #[test]
    fn pop_restores_state() {
        let mut c = IncrementalChecker::new();
        for a in w("0102012").letters() {
            assert!(c.push(a));
        }
        let snapshot = c.clone();
        assert!(c.push(Letter::ONE));
        assert_eq!(c.pop(), Some(Letter::ONE));
        for a in Letter::ALL {
            assert_eq!(c.accepts(a), snapshot.accepts(a));
        }
        assert_eq!(c.states.len(), snapshot.states.len());
        assert_eq!(c.committed(), snapshot.committed());
        while c.pop().is_some() {}
        assert!(c.is_empty());
        assert_eq!(c.states.len(), 1);
        assert!(IncrementalChecker::without_history().pop().is_none());
    }

    #[test]
    fn shortest_suffix_square_reference() {
        assert_eq!(shortest_suffix_square(&[0, 1, 0, 1]), Some(2));
        assert_eq!(shortest_suffix_square(&[0, 1, 1]), Some(1));
        assert_eq!(shortest_suffix_square(&[0, 1, 0]), None);
    }

    #[test]
    fn palindrome_centers() {
        // the length-10 prefix of the α-words lacks 101
        let centers: Vec<u8> = palindrome3_centers(&w("2102010210"))
            .iter()
            .map(|l| l.value())
            .collect();
        assert_eq!(centers, [1, 2]);
        assert_eq!(
            palindrome3_centers(&w("21020102101")),
            Letter::ALL.into_iter().collect::<BTreeSet<_>>()
        );
        assert!(palindrome3_centers(&w("012012")).is_empty());
        // aaa is not counted
        assert!(palindrome3_centers(&w("000")).is_empty());
    }

    #[test]
    fn triple_letter_factors() {
        assert!(triple_letter_5_factors(&w("01201")).is_empty());
        let hits = triple_letter_5_factors(&w("00000"));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].index, 0);
    }

    #[test]
    fn avoidance() {
        let forbidden = [w("010"), w("212")];
        assert!(avoids(&w("2102012"), &forbidden));
        assert!(!avoids(&w("0102"), &[w("010")]));
        assert!(avoids(&TernaryWord::empty(), &forbidden));
    }

    #[test]
    fn square_free_word_counts() {
        // 3, 6, 12, 18, 30 square-free ternary words of lengths 1..=5
        let counts: Vec<usize> = (1..=5).map(|n| square_free_words(n).len()).collect();
        assert_eq!(counts, vec![3, 6, 12, 18, 30]);
        let three = square_free_words(3);
        assert_eq!(three[0], w("010"));
        assert!(three.windows(2).all(|p| p[0] < p[1]));
    }
}
