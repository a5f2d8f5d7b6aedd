//! Freely reduced words in the free group on `a`, `b`.
//!
//! Words are written as ASCII strings over `a A b B`, with the capital letter
//! denoting the inverse generator.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?}: words use only a, A, b, B")]
    InvalidLetter(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Self {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Self, WordError> {
        match c {
            'a' => Ok(Letter::A),
            'A' => Ok(Letter::AInv),
            'b' => Ok(Letter::B),
            'B' => Ok(Letter::BInv),
            other => Err(WordError::InvalidLetter(other)),
        }
    }

    /// `±1` exponent of the letter.
    pub fn exponent(self) -> i64 {
        match self {
            Letter::A | Letter::B => 1,
            Letter::AInv | Letter::BInv => -1,
        }
    }

    pub fn is_a(self) -> bool {
        matches!(self, Letter::A | Letter::AInv)
    }
}

/// A freely reduced word. Construction always reduces, so no value of this
/// type contains an adjacent inverse pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Self { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(letters: &[Letter]) -> bool {
        letters.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::free_reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// `xᵏ` for a single letter `x` and `k ≥ 0`.
    pub fn power(letter: Letter, k: usize) -> Self {
        Self {
            letters: vec![letter; k],
        }
    }

    /// `a^k` for any integer `k`.
    pub fn a_pow(k: i64) -> Self {
        let l = if k >= 0 { Letter::A } else { Letter::AInv };
        Self::power(l, k.unsigned_abs() as usize)
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`, reduced.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// `v u v⁻¹`, reduced.
    pub fn conjugate(u: &Self, v: &Self) -> Self {
        v.concat(u).concat(&v.inverse())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::free_reduce(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Word(ε)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

/// Number of reduced words of length exactly `k`.
pub fn reduced_count(k: usize) -> u64 {
    if k == 0 {
        1
    } else {
        4 * 3u64.pow(k as u32 - 1)
    }
}

/// Streams every reduced word of length `≤ max_len` exactly once, shortest
/// first and lexicographic (in `a < A < b < B`) within a length.
pub fn enumerate_reduced(max_len: usize) -> ReducedWords {
    ReducedWords {
        max_len,
        current: Some(Vec::new()),
    }
}

pub struct ReducedWords {
    max_len: usize,
    current: Option<Vec<Letter>>,
}

fn letter_index(l: Letter) -> usize {
    Letter::ALL.iter().position(|&x| x == l).unwrap()
}

/// Smallest letter allowed after `prev`, at or after index `from`.
fn next_allowed(prev: Option<Letter>, from: usize) -> Option<Letter> {
    Letter::ALL[from.min(4)..]
        .iter()
        .copied()
        .find(|&l| prev.map_or(true, |p| l != p.inverse()))
}

fn first_of_length(len: usize) -> Vec<Letter> {
    let mut w = Vec::with_capacity(len);
    for _ in 0..len {
        let l = next_allowed(w.last().copied(), 0).unwrap();
        w.push(l);
    }
    w
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let out = Word {
            letters: cur.clone(),
        };
        // Odometer increment from the right, keeping the word reduced.
        let mut w = cur;
        let mut pos = w.len();
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(w[pos - 1]) };
            if let Some(l) = next_allowed(prev, letter_index(w[pos]) + 1) {
                w[pos] = l;
                for i in pos + 1..w.len() {
                    w[i] = next_allowed(Some(w[i - 1]), 0).unwrap();
                }
                break true;
            }
        };
        self.current = if advanced {
            Some(w)
        } else if w.len() < self.max_len {
            Some(first_of_length(w.len() + 1))
        } else {
            None
        };
        Some(out)
    }
}

/// A uniformly random reduced word of length exactly `len`; the same seed
/// always yields the same word.
pub fn random_reduced(len: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_reduced_with(&mut rng, len)
}

pub fn random_reduced_with<R: Rng>(rng: &mut R, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let l = match letters.last() {
            None => Letter::ALL[rng.gen_range(0..4)],
            Some(&prev) => {
                let choices: Vec<Letter> = Letter::ALL
                    .iter()
                    .copied()
                    .filter(|&l| l != prev.inverse())
                    .collect();
                choices[rng.gen_range(0..3)]
            }
        };
        letters.push(l);
    }
    Word { letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert!(w("aA").is_empty());
        assert!(w("baAB").is_empty());
        assert_eq!(w("abBa").to_string(), "aa");
        assert_eq!(w("abBa"), w("aa"));
    }

    #[test]
    fn parse_rejects_other_letters() {
        assert_eq!("abx".parse::<Word>(), Err(WordError::InvalidLetter('x')));
    }

    #[test]
    fn commutator_convention() {
        assert_eq!(Word::commutator(&w("b"), &w("a")).to_string(), "BAba");
        assert_eq!(Word::conjugate(&w("b"), &w("aa")).to_string(), "aabAA");
        assert!(Word::commutator(&w("ab"), &w("ab")).is_empty());
    }

    #[test]
    fn enumeration_counts() {
        let mut by_len = [0u64; 6];
        let mut seen = HashSet::new();
        for word in enumerate_reduced(5) {
            assert!(Word::is_reduced(word.letters()));
            by_len[word.len()] += 1;
            assert!(seen.insert(word));
        }
        for k in 0..=5 {
            assert_eq!(by_len[k], reduced_count(k));
        }
        assert_eq!(reduced_count(3), 36);
        assert_eq!(enumerate_reduced(0).count(), 1);
        assert_eq!(enumerate_reduced(2).count(), 17);
    }

    #[test]
    fn enumeration_is_restartable() {
        let a: Vec<Word> = enumerate_reduced(3).collect();
        let b: Vec<Word> = enumerate_reduced(3).collect();
        assert_eq!(a, b);
        assert_eq!(a[1].to_string(), "a");
    }

    #[test]
    fn random_words_are_reduced_and_seeded() {
        let x = random_reduced(64, 7);
        assert_eq!(x.len(), 64);
        assert!(Word::is_reduced(x.letters()));
        assert_eq!(x, random_reduced(64, 7));
        assert_ne!(x, random_reduced(64, 8));
    }
}
