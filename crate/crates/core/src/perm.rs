//! Permutations of `1..=n` in one-line notation.
//!
//! Positions and values are 1-indexed at every public boundary: `apply(1)`
//! is the first letter of the word, descents are reported as positions in
//! `1..n`, and so on. The dense `Vec` underneath is an implementation detail.
//!
//! Composition is `(p ∘ q)(x) = p(q(x))`. With this orientation
//! `p.compose(&Permutation::gamma(n))` is the word of `p` rotated one step
//! to the left, which is what the circular-class constructions rely on.
//! Flipping the convention would silently turn every rotation into a
//! relabelling of values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<usize>,
}

/// Descent positions of a permutation, strictly increasing, each in `1..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DescentSet {
    positions: Vec<usize>,
}

impl DescentSet {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.positions.binary_search(&position).is_ok()
    }

    /// Sum of the positions, i.e. the major index.
    pub fn sum(&self) -> usize {
        self.positions.iter().sum()
    }
}

/// Major index of a raw one-line word (values may be any totally ordered
/// letters).
pub fn word_maj(word: &[usize]) -> usize {
    word.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(p, _)| p + 1)
        .sum()
}

/// Major index of the inverse of a raw word over `1..=n`, computed without
/// building the inverse: `i` is a descent of the inverse exactly when `i + 1`
/// sits to the left of `i`. `positions` is scratch space of length `n + 1`.
pub fn word_inverse_maj(word: &[usize], positions: &mut [usize]) -> usize {
    for (p, &v) in word.iter().enumerate() {
        positions[v] = p;
    }
    (1..word.len())
        .filter(|&i| positions[i] > positions[i + 1])
        .sum()
}

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=n`.
    pub fn from_word(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::OutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(Error::Duplicate(v));
            }
            seen[v] = true;
        }
        Ok(Self { word: values })
    }

    pub(crate) fn from_word_unchecked(word: Vec<usize>) -> Self {
        debug_assert!(Self::from_word(word.clone()).is_ok());
        Self { word }
    }

    /// # Panics
    /// If `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self {
            word: (1..=n).collect(),
        }
    }

    /// The word `n (n-1) ... 1`, which carries every descent.
    pub fn reverse(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self {
            word: (1..=n).rev().collect(),
        }
    }

    /// The n-cycle sending `i` to `i + 1` and `n` back to `1`.
    pub fn gamma(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self {
            word: (2..=n).chain(std::iter::once(1)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn into_word(self) -> Vec<usize> {
        self.word
    }

    /// `σ(x)` for `x` in `1..=n`.
    pub fn apply(&self, x: usize) -> usize {
        self.word[x - 1]
    }

    /// `σ⁻¹(value)`: the 1-indexed position holding `value`.
    pub fn position_of(&self, value: usize) -> usize {
        self.word
            .iter()
            .position(|&v| v == value)
            .map(|p| p + 1)
            .expect("value within 1..=n")
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(p, &v)| v == p + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.word.len()];
        for (p, &v) in self.word.iter().enumerate() {
            inv[v - 1] = p + 1;
        }
        Self { word: inv }
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Self {
            word: other.word.iter().map(|&x| self.word[x - 1]).collect(),
        })
    }

    /// `self · γᵗ`: the word rotated `t` steps to the left.
    pub fn rotate(&self, t: usize) -> Self {
        let mut word = self.word.clone();
        let n = word.len();
        word.rotate_left(t % n);
        Self { word }
    }

    /// The `n` members `σγᵗ`, `t = 0..n`, in exponent order.
    pub fn circular_class(&self) -> Vec<Self> {
        (0..self.degree()).map(|t| self.rotate(t)).collect()
    }

    pub fn descent_set(&self) -> DescentSet {
        DescentSet {
            positions: self
                .word
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[0] > w[1])
                .map(|(p, _)| p + 1)
                .collect(),
        }
    }

    pub fn maj(&self) -> usize {
        word_maj(&self.word)
    }

    /// `maj(σ⁻¹)`.
    pub fn inverse_maj(&self) -> usize {
        let mut scratch = vec![0; self.word.len() + 1];
        word_inverse_maj(&self.word, &mut scratch)
    }

    /// True when the largest symbol is a fixed point (`σ(n) = n`).
    pub fn fixes_max(&self) -> bool {
        self.word.last() == Some(&self.word.len())
    }

    /// Removes the letter `n`, giving a permutation of degree `n - 1`.
    pub fn erase_max(&self) -> Result<Self> {
        let n = self.degree();
        if n < 2 {
            return Err(Error::Precondition(
                "cannot erase the maximum of a degree-1 permutation".into(),
            ));
        }
        Ok(Self {
            word: self.word.iter().copied().filter(|&v| v != n).collect(),
        })
    }

    /// Digit-string form (`"345261"`), available for degree at most 9.
    pub fn compact(&self) -> Option<String> {
        (self.degree() <= 9).then(|| self.word.iter().map(|v| v.to_string()).collect())
    }

    /// Compact form when it exists, comma-separated otherwise.
    pub fn display_word(&self) -> String {
        self.compact().unwrap_or_else(|| self.to_string())
    }
}

/// Every permutation of degree `n` in lexicographic word order.
pub fn all_permutations(n: usize) -> LexPermutations {
    LexPermutations::new(n)
}

/// Lexicographic successor iteration over `S_n`.
pub struct LexPermutations {
    current: Option<Vec<usize>>,
}

impl LexPermutations {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Self {
            current: Some((1..=n).collect()),
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let word = self.current.take()?;
        let mut succ = word.clone();
        if next_lex(&mut succ) {
            self.current = Some(succ);
        }
        Some(Permutation { word })
    }
}

/// Advances `slice` to its lexicographic successor in place. Returns false
/// (leaving the slice untouched) if it is already the last arrangement.
pub fn next_lex(slice: &mut [usize]) -> bool {
    let n = slice.len();
    if n < 2 {
        return false;
    }
    let Some(pivot) = (0..n - 1).rev().find(|&i| slice[i] < slice[i + 1]) else {
        return false;
    };
    let swap = (pivot + 1..n)
        .rev()
        .find(|&j| slice[j] > slice[pivot])
        .expect("successor exists right of the pivot");
    slice.swap(pivot, swap);
    slice[pivot + 1..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.word.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.display_word())
    }
}

/// Accepts `"3,4,5,2,6,1"`, `"3 4 5 2 6 1"`, or, for degree at most 9, the
/// compact digit string `"345261"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let parse_err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if trimmed.is_empty() {
            return Err(Error::EmptyWord);
        }
        let values: Vec<usize> = if trimmed.contains(|c: char| c == ',' || c.is_whitespace()) {
            trimmed
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err("expected integers"))
                })
                .collect::<Result<_>>()?
        } else if trimmed.chars().all(|c| c.is_ascii_digit()) {
            if trimmed.len() > 9 {
                return Err(parse_err(
                    "digit strings are limited to degree 9; separate letters with commas",
                ));
            }
            trimmed
                .chars()
                .map(|c| c.to_digit(10).expect("ascii digit") as usize)
                .collect()
        } else {
            return Err(parse_err("expected digits, commas or spaces"));
        };
        Self::from_word(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
