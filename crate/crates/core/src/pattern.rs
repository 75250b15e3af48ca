//! Binary patterns with reversal and their symmetry algebra.
//!
//! A pattern is a word over the four symbols `x`, `x^R`, `y`, `y^R`. In text
//! form the reversed symbols are written in upper case, so `xyxY` denotes
//! `x y x y^R`.
//!
//! Three involutions act on patterns:
//!
//! * [`Iota::SwapReversal`] exchanges `x` and `x^R` (leaving `y`, `y^R` alone),
//! * [`Iota::SwapVariables`] exchanges `x` with `y` and `x^R` with `y^R`,
//! * [`Iota::Reverse`] reverses the symbol sequence.
//!
//! Two patterns are equivalent when one is reachable from the other through
//! these maps. Equivalent patterns have the same avoidability index, so every
//! classification question can be asked of the [`canonical`] representative,
//! the lexicographically least member of the class.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four pattern letters. The derived order is `x < x^R < y < y^R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Symbol {
    X,
    XR,
    Y,
    YR,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::X, Symbol::XR, Symbol::Y, Symbol::YR];

    /// Swaps the reversal mark: `x <-> x^R`, `y <-> y^R`.
    pub fn reverse_mark(self) -> Symbol {
        match self {
            Symbol::X => Symbol::XR,
            Symbol::XR => Symbol::X,
            Symbol::Y => Symbol::YR,
            Symbol::YR => Symbol::Y,
        }
    }

    pub fn is_reversed(self) -> bool {
        matches!(self, Symbol::XR | Symbol::YR)
    }

    pub fn is_x(self) -> bool {
        matches!(self, Symbol::X | Symbol::XR)
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::X => 'x',
            Symbol::XR => 'X',
            Symbol::Y => 'y',
            Symbol::YR => 'Y',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'x' => Some(Symbol::X),
            'X' => Some(Symbol::XR),
            'y' => Some(Symbol::Y),
            'Y' => Some(Symbol::YR),
            _ => None,
        }
    }

    /// Dense index in `0..4`, following the symbol order.
    pub fn index(self) -> usize {
        self as usize
    }

    fn swap_variables(self) -> Symbol {
        match self {
            Symbol::X => Symbol::Y,
            Symbol::XR => Symbol::YR,
            Symbol::Y => Symbol::X,
            Symbol::YR => Symbol::XR,
        }
    }

    fn swap_x_reversal(self) -> Symbol {
        match self {
            Symbol::X => Symbol::XR,
            Symbol::XR => Symbol::X,
            other => other,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite word over [`Symbol`], possibly empty.
///
/// The derived `Ord` is the lexicographic order on symbols, with a proper
/// prefix sorting before its extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<Symbol>);

impl Pattern {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Pattern(symbols)
    }

    pub fn empty() -> Self {
        Pattern(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `x` and `x^R` occurrences.
    pub fn x_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_x()).count()
    }

    /// Number of `y` and `y^R` occurrences.
    pub fn y_count(&self) -> usize {
        self.0.len() - self.x_count()
    }

    pub fn uses_x(&self) -> bool {
        self.x_count() > 0
    }

    pub fn uses_y(&self) -> bool {
        self.y_count() > 0
    }

    pub fn factor(&self, start: usize, end: usize) -> Pattern {
        Pattern(self.0[start..end].to_vec())
    }

    /// Appends one symbol, returning the extended pattern.
    pub fn with(&self, symbol: Symbol) -> Pattern {
        let mut symbols = self.0.clone();
        symbols.push(symbol);
        Pattern(symbols)
    }

    /// Every pattern of exactly `len` symbols, in lexicographic order.
    pub fn all_of_length(len: usize) -> Vec<Pattern> {
        let mut out = vec![Pattern::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|p| Symbol::ALL.iter().map(move |&s| p.with(s)))
                .collect();
        }
        out
    }
}

impl From<Vec<Symbol>> for Pattern {
    fn from(symbols: Vec<Symbol>) -> Self {
        Pattern(symbols)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pattern(s)
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_pattern(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses the `x`/`X`/`y`/`Y` text format.
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    text.chars()
        .enumerate()
        .map(|(position, c)| {
            Symbol::from_char(c).ok_or(Error::PatternSyntax { position, found: c })
        })
        .collect::<Result<Vec<_>>>()
        .map(Pattern)
}

/// The three generating involutions of pattern equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iota {
    /// Exchanges `x` and `x^R`.
    SwapReversal,
    /// Exchanges the two variables.
    SwapVariables,
    /// Reverses the order of symbols.
    Reverse,
}

impl Iota {
    pub const ALL: [Iota; 3] = [Iota::SwapReversal, Iota::SwapVariables, Iota::Reverse];

    /// Maps 1, 2, 3 to the corresponding involution.
    pub fn from_index(j: u8) -> Option<Iota> {
        match j {
            1 => Some(Iota::SwapReversal),
            2 => Some(Iota::SwapVariables),
            3 => Some(Iota::Reverse),
            _ => None,
        }
    }

    pub fn apply(self, p: &Pattern) -> Pattern {
        match self {
            Iota::SwapReversal => Pattern(p.0.iter().map(|s| s.swap_x_reversal()).collect()),
            Iota::SwapVariables => Pattern(p.0.iter().map(|s| s.swap_variables()).collect()),
            Iota::Reverse => Pattern(p.0.iter().rev().copied().collect()),
        }
    }
}

pub fn iota(j: Iota, p: &Pattern) -> Pattern {
    j.apply(p)
}

/// Closure of `{p}` under the three involutions, as an ordered set.
pub fn equivalence_class(p: &Pattern) -> BTreeSet<Pattern> {
    let mut class = BTreeSet::new();
    let mut queue = VecDeque::new();
    class.insert(p.clone());
    queue.push_back(p.clone());
    while let Some(q) = queue.pop_front() {
        for j in Iota::ALL {
            let image = j.apply(&q);
            if class.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    class
}

/// Lexicographically least member of the equivalence class of `p`.
pub fn canonical(p: &Pattern) -> Pattern {
    // The class has at most 16 members, so materializing it is cheap.
    equivalence_class(p)
        .into_iter()
        .next()
        .expect("class contains p")
}

pub fn is_canonical(p: &Pattern) -> bool {
    canonical(p) == *p
}

/// All distinct non-empty contiguous factors of `p`.
pub fn factors(p: &Pattern) -> BTreeSet<Pattern> {
    let n = p.len();
    (0..n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| p.factor(i, j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        parse_pattern(s).unwrap()
    }

    #[test]
    fn parses_case_encoding() {
        assert_eq!(
            pat("xyxY").symbols(),
            &[Symbol::X, Symbol::Y, Symbol::X, Symbol::YR]
        );
        assert_eq!(
            pat("xXyY").symbols(),
            &[Symbol::X, Symbol::XR, Symbol::Y, Symbol::YR]
        );
        assert!(pat("").is_empty());
    }

    #[test]
    fn parse_error_names_position() {
        match parse_pattern("xyz") {
            Err(Error::PatternSyntax { position, found }) => {
                assert_eq!(position, 2);
                assert_eq!(found, 'z');
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symbol_order_and_mark() {
        assert!(Symbol::X < Symbol::XR && Symbol::XR < Symbol::Y && Symbol::Y < Symbol::YR);
        for s in Symbol::ALL {
            assert_eq!(s.reverse_mark().reverse_mark(), s);
        }
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(Iota::SwapReversal, &pat("x")), pat("X"));
        assert_eq!(iota(Iota::SwapVariables, &pat("xy")), pat("yx"));
        assert_eq!(iota(Iota::Reverse, &pat("xyXy")), pat("yXyx"));
        assert_eq!(Iota::from_index(2), Some(Iota::SwapVariables));
        assert_eq!(Iota::from_index(4), None);
    }

    #[test]
    fn class_of_single_letter_and_empty() {
        let class: Vec<String> = equivalence_class(&pat("x"))
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(class, ["x", "X", "y", "Y"]);
        assert_eq!(equivalence_class(&Pattern::empty()).len(), 1);
    }

    /// Orbit by brute force: apply every word over the three generators up
    /// to a length where no new pattern can appear.
    fn orbit_by_words(p: &Pattern, max_word: usize) -> BTreeSet<Pattern> {
        let mut out = BTreeSet::new();
        let mut frontier = BTreeSet::from([p.clone()]);
        out.insert(p.clone());
        for _ in 0..max_word {
            frontier = frontier
                .iter()
                .flat_map(|q| Iota::ALL.iter().map(move |j| j.apply(q)))
                .collect();
            out.extend(frontier.iter().cloned());
        }
        out
    }

    #[test]
    fn class_matches_word_orbit() {
        // The generated group has order 16, so words of length 16 reach every element.
        for text in ["xyXy", "xxy", "xXyY", "xyxyX"] {
            let p = pat(text);
            assert_eq!(equivalence_class(&p), orbit_by_words(&p, 16), "{text}");
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical(&pat("Xyy")), pat("xxy"));
        assert_eq!(canonical(&pat("xyXy")), pat("xyxY"));
        assert_eq!(canonical(&pat("yy")), pat("xx"));
        assert_eq!(canonical(&pat("yY")), pat("xX"));
        assert_eq!(canonical(&Pattern::empty()), Pattern::empty());
    }

    #[test]
    fn factor_examples() {
        let set = |v: &[&str]| v.iter().map(|s| pat(s)).collect::<BTreeSet<_>>();
        assert_eq!(factors(&pat("xy")), set(&["x", "y", "xy"]));
        assert_eq!(factors(&pat("x")), set(&["x"]));
        assert_eq!(factors(&pat("xxx")), set(&["x", "xx", "xxx"]));
        assert!(factors(&Pattern::empty()).is_empty());
    }

    #[test]
    fn cross_length_order_puts_prefix_first() {
        assert!(pat("x") < pat("xx"));
        assert!(pat("xy") < pat("xyx"));
        assert!(pat("xY") > pat("xyx"));
    }
}
