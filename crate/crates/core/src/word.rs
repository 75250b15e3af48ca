use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest alphabet that still renders as one decimal digit per letter.
pub const MAX_ALPHABET: usize = 10;

/// A finite word over `T_k = {0, .., k-1}`.
///
/// Equality, ordering and hashing look at the letters only; the alphabet size
/// is a validation bound, so the factor `01` of a ternary word equals the
/// binary word `01`.
#[derive(Debug, Clone)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(letters: Vec<u8>, alphabet: usize) -> Result<Self> {
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(Error::AlphabetSize(alphabet));
        }
        if let Some((position, &letter)) = letters
            .iter()
            .enumerate()
            .find(|(_, &l)| l as usize >= alphabet)
        {
            return Err(Error::LetterOutOfRange {
                position,
                letter,
                alphabet: alphabet as u8,
            });
        }
        Ok(Word {
            letters,
            alphabet: alphabet as u8,
        })
    }

    /// Wraps letters already known to be in range. Panics otherwise.
    pub fn from_letters(letters: Vec<u8>, alphabet: usize) -> Self {
        Word::new(letters, alphabet).expect("letters within alphabet")
    }

    pub fn binary(letters: Vec<u8>) -> Self {
        Word::from_letters(letters, 2)
    }

    pub fn empty(alphabet: usize) -> Self {
        Word::from_letters(Vec::new(), alphabet)
    }

    /// Parses a digit string over an explicit alphabet.
    pub fn parse_with_alphabet(text: &str, alphabet: usize) -> Result<Self> {
        let letters = parse_digits(text)?;
        Word::new(letters, alphabet)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet as usize
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn reversal(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
            alphabet: self.alphabet,
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        self.factor(0, len)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn contains(&self, needle: &[u8]) -> bool {
        needle.is_empty() || self.letters.windows(needle.len()).any(|w| w == needle)
    }

    /// Start positions of every occurrence of `needle`.
    pub fn occurrences<'a>(&'a self, needle: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
        self.letters
            .windows(needle.len().max(1))
            .enumerate()
            .filter(move |(_, w)| *w == needle)
            .map(|(i, _)| i)
    }

    /// Applies a permutation of the alphabet letterwise.
    pub fn rename(&self, permutation: &[u8]) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|&l| permutation[l as usize])
                .collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            alphabet: self.alphabet.max(other.alphabet),
        }
    }
}

fn parse_digits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .enumerate()
        .map(|(position, c)| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or(Error::WordSyntax { position, found: c })
        })
        .collect()
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Word {}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses a digit string; the alphabet is the smallest `k >= 2` covering
/// every letter.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = parse_digits(s)?;
        let alphabet = letters
            .iter()
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(2)
            .max(2);
        Word::new(letters, alphabet)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
