//! Value types for the game: configurations, repetition-free codes, partial
//! solutions, black/white feedback and the cyclic family of initial guesses.
//!
//! Colors are the integers `1..=k`. Positions are 0-based throughout the API;
//! every *serialized* form (display strings, wire protocol, error messages)
//! is 1-based.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for code construction and feedback computation. Position numbers in
/// messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("game config requires 1 <= n <= k, got n={n}, k={k}")]
    InvalidConfig { n: usize, k: usize },
    #[error("expected {expected} colors, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("color {color} at position {position} is outside 1..={k}")]
    ColorOutOfRange { position: usize, color: u32, k: usize },
    #[error("color {color} repeated at position {position}")]
    RepeatedColor { position: usize, color: u32 },
    #[error("codes of different lengths ({left} vs {right} positions)")]
    ConfigMismatch { left: usize, right: usize },
    #[error("position {position} is already fixed")]
    AlreadyFixed { position: usize },
    #[error("color {color} is already fixed at another position")]
    ColorAlreadyUsed { color: u32 },
}

/// A game instance: `n` positions filled with distinct colors from `1..=k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub k: usize,
}

impl GameConfig {
    pub fn new(n: usize, k: usize) -> Result<Self, CodeError> {
        if n < 1 || n > k {
            return Err(CodeError::InvalidConfig { n, k });
        }
        Ok(GameConfig { n, k })
    }

    /// Validates a raw color sequence as a code for this configuration:
    /// exactly `n` entries, all within `1..=k`, no repeats.
    pub fn validate_code(&self, raw: &[u32]) -> Result<Code, CodeError> {
        if raw.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: raw.len(),
            });
        }
        let mut seen = vec![false; self.k + 1];
        for (i, &color) in raw.iter().enumerate() {
            if color < 1 || color as usize > self.k {
                return Err(CodeError::ColorOutOfRange {
                    position: i + 1,
                    color,
                    k: self.k,
                });
            }
            if seen[color as usize] {
                return Err(CodeError::RepeatedColor {
                    position: i + 1,
                    color,
                });
            }
            seen[color as usize] = true;
        }
        Ok(Code(raw.to_vec()))
    }

    /// Number of repetition-free codes, `k * (k-1) * ... * (k-n+1)`, or
    /// `None` on u128 overflow.
    pub fn code_space(&self) -> Option<u128> {
        let mut total: u128 = 1;
        for i in 0..self.n {
            total = total.checked_mul((self.k - i) as u128)?;
        }
        Some(total)
    }
}

/// A repetition-free code: `n` pairwise-distinct colors. The unit of both
/// guesses and secrets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Code(Vec<u32>);

impl Code {
    /// Builds a code the caller has already proven distinct and in range.
    /// Only checked in debug builds.
    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(
            {
                let mut sorted = entries.clone();
                sorted.sort_unstable();
                sorted.windows(2).all(|w| w[0] != w[1])
            },
            "code has repeated colors: {entries:?}"
        );
        Code(entries)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for Code {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for Code {
    /// Space-separated 1-based colors, e.g. `4 1 2 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses a space-separated color list ("4 1 2 3") without validating it
/// against a configuration.
pub fn parse_colors(text: &str) -> Result<Vec<u32>, std::num::ParseIntError> {
    text.split_whitespace().map(str::parse).collect()
}

/// Black feedback: the number of positions where guess and secret agree.
pub fn black(x: &Code, y: &Code) -> Result<u32, CodeError> {
    if x.len() != y.len() {
        return Err(CodeError::ConfigMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y.iter()).filter(|(a, b)| a == b).count() as u32)
}

/// White feedback: shared colors at wrong positions. For repetition-free
/// codes every shared color can be matched, so this is
/// `|colors(x) ∩ colors(y)| - black(x, y)`.
pub fn white(x: &Code, y: &Code) -> Result<u32, CodeError> {
    let b = black(x, y)?;
    let colors: HashSet<u32> = x.iter().copied().collect();
    let shared = y.iter().filter(|c| colors.contains(c)).count() as u32;
    Ok(shared - b)
}

/// A partial solution: per-position knowledge of the secret. `None` is an
/// open (unknown) position; fixed entries are pairwise distinct.
///
/// Open positions serialize as `0` in text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSolution {
    slots: Vec<Option<u32>>,
}

impl PartialSolution {
    pub fn empty(n: usize) -> Self {
        PartialSolution {
            slots: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, position: usize) -> Option<u32> {
        self.slots[position]
    }

    pub fn is_open(&self, position: usize) -> bool {
        self.slots[position].is_none()
    }

    pub fn open_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_none()).count()
    }

    pub fn open_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.is_none().then_some(i))
    }

    /// Fixed `(position, color)` pairs in position order.
    pub fn fixed(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|c| (i, c)))
    }

    pub fn uses_color(&self, color: u32) -> bool {
        self.slots.iter().any(|s| *s == Some(color))
    }

    /// Returns a copy with `position` fixed to `color`. The position must be
    /// open and the color unused elsewhere.
    pub fn fix(&self, position: usize, color: u32) -> Result<Self, CodeError> {
        let mut next = self.clone();
        next.fix_in_place(position, color)?;
        Ok(next)
    }

    pub(crate) fn fix_in_place(&mut self, position: usize, color: u32) -> Result<(), CodeError> {
        if self.slots[position].is_some() {
            return Err(CodeError::AlreadyFixed {
                position: position + 1,
            });
        }
        if self.uses_color(color) {
            return Err(CodeError::ColorAlreadyUsed { color });
        }
        self.slots[position] = Some(color);
        Ok(())
    }

    /// Number of fixed positions where `guess` agrees with this partial
    /// solution. This is the codebreaker-computable part of a black answer.
    pub fn matched_fixed(&self, guess: &Code) -> u32 {
        self.slots
            .iter()
            .zip(guess.iter())
            .filter(|(slot, g)| **slot == Some(**g))
            .count() as u32
    }

    /// The completed code, if no position is open.
    pub fn to_code(&self) -> Option<Code> {
        let entries: Option<Vec<u32>> = self.slots.iter().copied().collect();
        entries.map(Code::from_vec_unchecked)
    }
}

impl fmt::Display for PartialSolution {
    /// Space-separated colors with `0` for open positions, e.g. `0 3 0 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", s.unwrap_or(0))?;
        }
        Ok(())
    }
}

/// Black feedback as revealed by the codemaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feedback {
    pub black: u32,
}

/// The `k` initial codes: right-circular shifts of the identity on `1..=k`,
/// truncated to the first `n` positions. Entry `i` of family code `j`
/// (0-based) is `((i - j) mod k) + 1`.
///
/// Every color appears exactly once at every position across the family, and
/// consecutive codes satisfy the shift relation `code(j)[i] ==
/// code(j+1)[i+1]`; both properties drive the solver's binary searches.
///
/// Codes are materialized on demand so large configurations stay O(n) in
/// memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftFamily {
    config: GameConfig,
}

/// Builds the family of `k` cyclically shifted initial codes for `config`.
pub fn shift_family(config: GameConfig) -> ShiftFamily {
    ShiftFamily { config }
}

impl ShiftFamily {
    pub fn config(&self) -> GameConfig {
        self.config
    }

    /// Number of codes in the family (= k).
    pub fn len(&self) -> usize {
        self.config.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Color at position `i` of family code `j`, both 0-based.
    pub fn color_at(&self, j: usize, i: usize) -> u32 {
        let k = self.config.k;
        debug_assert!(j < k && i < self.config.n);
        ((i + k - j % k) % k) as u32 + 1
    }

    /// Materializes family code `j` (0-based).
    pub fn code(&self, j: usize) -> Code {
        Code::from_vec_unchecked((0..self.config.n).map(|i| self.color_at(j, i)).collect())
    }

    /// All `k` codes in family order.
    pub fn codes(&self) -> impl Iterator<Item = Code> + '_ {
        (0..self.config.k).map(|j| self.code(j))
    }

    /// Position of `color` within family code `j`, if the truncated code
    /// contains it.
    pub fn position_of(&self, j: usize, color: u32) -> Option<usize> {
        let k = self.config.k;
        let i = (color as usize - 1 + j) % k;
        (i < self.config.n).then_some(i)
    }

    /// The unique family index whose code carries `color` at `position`.
    pub fn family_with(&self, position: usize, color: u32) -> usize {
        let k = self.config.k;
        (position + k - (color as usize - 1) % k) % k
    }

    /// Cyclic successor of a family index.
    pub fn successor(&self, j: usize) -> usize {
        (j + 1) % self.config.k
    }
}

/// Draws a uniform random secret: a seeded Fisher-Yates shuffle of `1..=k`,
/// truncated to the first `n` entries.
pub fn random_code<R: Rng + ?Sized>(config: GameConfig, rng: &mut R) -> Code {
    let mut colors: Vec<u32> = (1..=config.k as u32).collect();
    for i in 0..config.n {
        let j = rng.random_range(i..config.k);
        colors.swap(i, j);
    }
    colors.truncate(config.n);
    Code::from_vec_unchecked(colors)
}
