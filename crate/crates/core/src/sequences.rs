//! Concrete infinite words (as prefixes) and factor machinery.
//!
//! * the Thue–Morse word `t`, fixed point of `0 -> 01, 1 -> 10`,
//! * the alternating word `(01)^ω`,
//! * a square-limited binary word whose only square factors are `00`, `11`
//!   and `0101`, produced as the lexicographically least such word by a
//!   backtracking generator with a fixed lookahead,
//! * the ternary word `g`, obtained by rewriting every `10` as `12220`,
//! * the images `w_i = f_i(t)` of Thue–Morse under four binary morphisms.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SequenceId {
    ThueMorse,
    Alternating01,
    SquareLimited,
    GTernary,
    W1,
    W2,
    W3,
    W4,
}

impl SequenceId {
    pub const ALL: [SequenceId; 8] = [
        SequenceId::ThueMorse,
        SequenceId::Alternating01,
        SequenceId::SquareLimited,
        SequenceId::GTernary,
        SequenceId::W1,
        SequenceId::W2,
        SequenceId::W3,
        SequenceId::W4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceId::ThueMorse => "thue-morse",
            SequenceId::Alternating01 => "alternating",
            SequenceId::SquareLimited => "square-limited",
            SequenceId::GTernary => "g",
            SequenceId::W1 => "w1",
            SequenceId::W2 => "w2",
            SequenceId::W3 => "w3",
            SequenceId::W4 => "w4",
        }
    }

    /// The morphism whose image of Thue–Morse defines this sequence, if any.
    pub fn morphism(self) -> Option<BinaryMorphism> {
        match self {
            SequenceId::W1 => Some(BinaryMorphism::f1()),
            SequenceId::W2 => Some(BinaryMorphism::f2()),
            SequenceId::W3 => Some(BinaryMorphism::f3()),
            SequenceId::W4 => Some(BinaryMorphism::f4()),
            _ => None,
        }
    }

    fn uses_lookahead(self) -> bool {
        matches!(self, SequenceId::SquareLimited | SequenceId::GTernary)
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownSequence(s.to_string()))
    }
}

/// A morphism on binary words given by the images of 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryMorphism {
    pub image0: Word,
    pub image1: Word,
}

impl BinaryMorphism {
    pub fn new(image0: Word, image1: Word) -> Result<Self> {
        if image0.is_empty() || image1.is_empty() {
            return Err(Error::NonErasing(
                "binary morphism images must be non-empty",
            ));
        }
        Ok(BinaryMorphism { image0, image1 })
    }

    fn from_strs(image0: &str, image1: &str) -> Self {
        BinaryMorphism::new(
            image0.parse().expect("digits"),
            image1.parse().expect("digits"),
        )
        .expect("non-empty images")
    }

    /// The Thue–Morse morphism `0 -> 01, 1 -> 10`.
    pub fn thue_morse() -> Self {
        Self::from_strs("01", "10")
    }

    pub fn f1() -> Self {
        Self::from_strs("0", "00101101111")
    }

    pub fn f2() -> Self {
        Self::from_strs("0", "00101111")
    }

    pub fn f3() -> Self {
        Self::from_strs("0", "001011")
    }

    pub fn f4() -> Self {
        Self::from_strs("0", "1000010011")
    }

    pub fn image(&self, letter: u8) -> &Word {
        match letter {
            0 => &self.image0,
            1 => &self.image1,
            _ => panic!("binary morphism applied to letter {letter}"),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        let letters = w
            .letters()
            .iter()
            .flat_map(|&l| self.image(l).letters().iter().copied())
            .collect();
        Word::from_letters(letters, 2)
    }

    /// Image of `w` together with the block each image letter came from.
    pub fn apply_with_blocks(&self, w: &Word) -> (Word, Vec<ImageBlock>) {
        let mut letters = Vec::new();
        let mut blocks = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let image = self.image(l);
            blocks.push(ImageBlock {
                start: letters.len(),
                len: image.len(),
                source: l,
            });
            letters.extend_from_slice(image.letters());
        }
        (Word::from_letters(letters, 2), blocks)
    }

    /// Splits `w` into images of single letters, when that is possible
    /// unambiguously by reading `w` left to right. Only meaningful when the
    /// two images start with different letters.
    pub fn decode(&self, w: &Word) -> Option<Word> {
        debug_assert_ne!(self.image0.letters()[0], self.image1.letters()[0]);
        let mut rest = w.letters();
        let mut source = Vec::new();
        while let Some(&first) = rest.first() {
            let letter = if first == self.image0.letters()[0] {
                0
            } else {
                1
            };
            let image = self.image(letter).letters();
            if !rest.starts_with(image) {
                return None;
            }
            source.push(letter);
            rest = &rest[image.len()..];
        }
        Some(Word::binary(source))
    }
}

pub fn apply_binary_morphism(m: &BinaryMorphism, w: &Word) -> Word {
    m.apply(w)
}

/// Position of one letter's image inside a morphic image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ImageBlock {
    pub start: usize,
    pub len: usize,
    pub source: u8,
}

impl ImageBlock {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

pub fn thue_morse_prefix(n: usize) -> Word {
    Word::binary((0..n).map(|i| (i.count_ones() % 2) as u8).collect())
}

pub fn alternating_prefix(n: usize) -> Word {
    Word::binary((0..n).map(|i| (i % 2) as u8).collect())
}

/// Length `7 * 2^m` of a Thue–Morse prefix containing every factor of length
/// `2^m + 1`, for the least `m` with `2^m + 1 >= factor_len`.
pub fn thue_morse_covering_prefix(factor_len: usize) -> usize {
    let mut m = 0u32;
    while (1usize << m) + 1 < factor_len {
        m += 1;
    }
    7 << m
}

/// All distinct factors of Thue–Morse of length `len`.
pub fn thue_morse_factors(len: usize) -> BTreeSet<Word> {
    let prefix = thue_morse_prefix(thue_morse_covering_prefix(len).max(len));
    factor_set(&prefix, len)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Letters that must be extendable past the returned prefix.
    pub lookahead: usize,
    pub cache_path: Option<PathBuf>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            lookahead: 100,
            cache_path: None,
        }
    }
}

impl GeneratorConfig {
    pub fn with_lookahead(lookahead: usize) -> Self {
        GeneratorConfig {
            lookahead: lookahead.max(1),
            cache_path: None,
        }
    }
}

/// Whether appending the last letter of `w` creates a square outside
/// `{00, 11, 0101}`. Assumes `w` without its last letter is fine.
fn closes_forbidden_square(w: &[u8]) -> bool {
    let n = w.len();
    // Period 1 squares are 00 or 11, both allowed.
    for period in 2..=n / 2 {
        if w[n - 2 * period..n - period] == w[n - period..] {
            let allowed = period == 2 && w[n - 4..] == [0, 1, 0, 1];
            if !allowed {
                return true;
            }
        }
    }
    false
}

/// Prefix of the lexicographically least binary word whose squares all lie in
/// `{00, 11, 0101}`.
///
/// Depth-first search in letter order. Position `i` is committed once the
/// search has reached depth `i + lookahead + 1`; needing to revise a committed
/// letter is reported as [`Error::GeneratorBacktrack`]. The trajectory of the
/// search does not depend on `n`, so outputs for one lookahead are prefixes of
/// each other.
pub fn square_limited_prefix(n: usize, cfg: &GeneratorConfig) -> Result<Word> {
    if let Some(dir) = &cfg.cache_path {
        let key = cache_file_name(SequenceId::SquareLimited, n, Some(cfg.lookahead));
        return cached(dir, &key, 2, || square_limited_uncached(n, cfg.lookahead));
    }
    square_limited_uncached(n, cfg.lookahead)
}

fn square_limited_uncached(n: usize, lookahead: usize) -> Result<Word> {
    let target = n + lookahead;
    let mut w: Vec<u8> = Vec::with_capacity(target);
    let mut committed = 0usize;
    while w.len() < target {
        w.push(0);
        loop {
            if !closes_forbidden_square(&w) {
                break;
            }
            // Advance the last letter, popping exhausted positions.
            loop {
                let Some(last) = w.len().checked_sub(1).filter(|&l| l >= committed) else {
                    return Err(Error::GeneratorBacktrack {
                        position: committed.saturating_sub(1),
                        target: n,
                    });
                };
                if w[last] == 0 {
                    w[last] = 1;
                    break;
                }
                w.pop();
            }
        }
        committed = committed.max(w.len().saturating_sub(lookahead));
    }
    w.truncate(n);
    Ok(Word::binary(w))
}

/// Replaces every factor `10` of a binary word by `12220`.
pub fn g_from(f: &Word) -> Word {
    let w = f.letters();
    let mut out = Vec::with_capacity(w.len() * 2);
    for (i, &l) in w.iter().enumerate() {
        out.push(l);
        if l == 1 && w.get(i + 1) == Some(&0) {
            out.extend_from_slice(&[2, 2, 2]);
        }
    }
    Word::from_letters(out, 3)
}

/// Prefix of length `n` of the named sequence.
pub fn sequence_prefix(id: SequenceId, n: usize, cfg: &GeneratorConfig) -> Result<Word> {
    if let (Some(dir), false) = (&cfg.cache_path, id == SequenceId::SquareLimited) {
        let lookahead = id.uses_lookahead().then_some(cfg.lookahead);
        let key = cache_file_name(id, n, lookahead);
        let alphabet = if id == SequenceId::GTernary { 3 } else { 2 };
        return cached(dir, &key, alphabet, || sequence_prefix_uncached(id, n, cfg));
    }
    sequence_prefix_uncached(id, n, cfg)
}

fn sequence_prefix_uncached(id: SequenceId, n: usize, cfg: &GeneratorConfig) -> Result<Word> {
    Ok(match id {
        SequenceId::ThueMorse => thue_morse_prefix(n),
        SequenceId::Alternating01 => alternating_prefix(n),
        SequenceId::SquareLimited => square_limited_prefix(n, cfg)?,
        // g(f[..n]) is a prefix of g of length >= n.
        SequenceId::GTernary => g_from(&square_limited_prefix(n, cfg)?).prefix(n),
        SequenceId::W1 | SequenceId::W2 | SequenceId::W3 | SequenceId::W4 => {
            let m = id.morphism().expect("morphic sequence");
            m.apply(&thue_morse_prefix(n)).prefix(n)
        }
    })
}

/// `<seqid>-<n>[-la<lookahead>].txt`
pub fn cache_file_name(id: SequenceId, n: usize, lookahead: Option<usize>) -> String {
    match lookahead {
        Some(la) => format!("{id}-{n}-la{la}.txt"),
        None => format!("{id}-{n}.txt"),
    }
}

fn cached(
    dir: &Path,
    key: &str,
    alphabet: usize,
    make: impl FnOnce() -> Result<Word>,
) -> Result<Word> {
    let path = dir.join(key);
    if let Ok(text) = fs::read_to_string(&path) {
        return Word::parse_with_alphabet(text.trim_end_matches('\n'), alphabet);
    }
    let word = make()?;
    fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    // Same key gives the same bytes, so concurrent writers are harmless.
    let tmp = dir.join(format!(".{key}.{}", std::process::id()));
    fs::write(&tmp, format!("{word}\n")).map_err(|e| Error::Cache(e.to_string()))?;
    fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(word)
}

/// Distinct factors of `w` of length `len`.
pub fn factor_set(w: &Word, len: usize) -> BTreeSet<Word> {
    assert!(
        len <= w.len(),
        "factor length {len} exceeds word length {}",
        w.len()
    );
    (0..=w.len() - len).map(|i| w.factor(i, i + len)).collect()
}

/// Factors `z` of length `len` whose reversal is also a factor.
pub fn reversible_factors(w: &Word, len: usize) -> BTreeSet<Word> {
    let all = factor_set(w, len);
    all.iter()
        .filter(|z| all.contains(&z.reversal()))
        .cloned()
        .collect()
}

/// Every left completion of `u` with respect to `m`.
///
/// A left completion is `v = m(t)` for a Thue–Morse factor `t` such that `u`
/// is a suffix of `v` but not of `m(t')` for any proper suffix `t'` of `t`.
/// Since `|m(t')| >= |t'|`, only `|t| <= |u|` can qualify; `factor_bound`
/// additionally caps `|t|`.
pub fn left_completions(u: &Word, m: &BinaryMorphism, factor_bound: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for len in 1..=u.len().min(factor_bound) {
        for t in thue_morse_factors(len) {
            let v = m.apply(&t);
            if !v.letters().ends_with(u.letters()) {
                continue;
            }
            let tail = m.apply(&t.factor(1, t.len()));
            if tail.len() < u.len() {
                out.insert(v);
            }
        }
    }
    out
}

/// The shortest (then least) left completion, if any.
pub fn left_completion(u: &Word, m: &BinaryMorphism, factor_bound: usize) -> Option<Word> {
    left_completions(u, m, factor_bound)
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

/// Binary factors `y` of `w`, `1 <= |y| <= max_len`, with `0y`, `1y`, `y0`
/// and `y1` all factors of `w`.
pub fn bispecial_factors(w: &Word, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for len in 1..=max_len.min(w.len().saturating_sub(1)) {
        let longer = factor_set(w, len + 1);
        for y in factor_set(w, len) {
            let ext = |before: Option<u8>, after: Option<u8>| {
                let mut l = Vec::with_capacity(len + 1);
                l.extend(before);
                l.extend_from_slice(y.letters());
                l.extend(after);
                longer.contains(&Word::binary(l))
            };
            if ext(Some(0), None) && ext(Some(1), None) && ext(None, Some(0)) && ext(None, Some(1))
            {
                out.insert(y);
            }
        }
    }
    out
}
