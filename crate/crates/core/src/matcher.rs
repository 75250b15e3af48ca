//! Instances of patterns with reversal inside finite words.
//!
//! An instance of `p` is its image under a non-erasing morphism `h` with
//! `h(x^R) = h(x)^R` and `h(y^R) = h(y)^R`. The search here is exhaustive over
//! start positions and image lengths; candidate images are read off the first
//! slot of each variable and every other slot is compared against it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::{Iota, Pattern};
use crate::word::Word;

/// A located instance of a pattern.
///
/// `x` is present iff the pattern uses `x` or `x^R`, `y` likewise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceWitness {
    pub start: usize,
    pub x: Option<Word>,
    pub y: Option<Word>,
}

impl InstanceWitness {
    /// Length of the matched factor for pattern `p`.
    pub fn image_len(&self, p: &Pattern) -> usize {
        p.x_count() * self.x.as_ref().map_or(0, Word::len)
            + p.y_count() * self.y.as_ref().map_or(0, Word::len)
    }
}

/// Image of `p` under the reversal-respecting morphism `x -> x_image`, `y -> y_image`.
pub fn apply_morphism(p: &Pattern, x_image: Option<&Word>, y_image: Option<&Word>) -> Result<Word> {
    let x = required(p.uses_x(), x_image, "x image must be present and non-empty")?;
    let y = required(p.uses_y(), y_image, "y image must be present and non-empty")?;
    let alphabet = [x, y]
        .iter()
        .flatten()
        .map(|w| w.alphabet())
        .max()
        .unwrap_or(2);
    let mut letters = Vec::new();
    for &s in p.symbols() {
        let image = if s.is_x() { x } else { y }.expect("checked above");
        if s.is_reversed() {
            letters.extend(image.letters().iter().rev());
        } else {
            letters.extend_from_slice(image.letters());
        }
    }
    Ok(Word::from_letters(letters, alphabet))
}

fn required<'a>(
    used: bool,
    image: Option<&'a Word>,
    msg: &'static str,
) -> Result<Option<&'a Word>> {
    match image {
        _ if !used => Ok(None),
        Some(w) if !w.is_empty() => Ok(Some(w)),
        _ => Err(Error::NonErasing(msg)),
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    is_x: bool,
    reversed: bool,
    x_before: usize,
    y_before: usize,
}

/// A pattern preprocessed for repeated matching.
///
/// Patterns without `x` are rewritten by swapping variables, so the compiled
/// form always uses `x`; witnesses are mapped back on the way out.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    slots: Vec<Slot>,
    x_count: usize,
    y_count: usize,
    swapped: bool,
    first_x: usize,
    first_y: Option<usize>,
}

impl CompiledPattern {
    pub fn new(p: &Pattern) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let swapped = !p.uses_x();
        let normalized = if swapped {
            Iota::SwapVariables.apply(p)
        } else {
            p.clone()
        };
        let mut slots = Vec::with_capacity(normalized.len());
        let (mut xs, mut ys) = (0, 0);
        for &s in normalized.symbols() {
            slots.push(Slot {
                is_x: s.is_x(),
                reversed: s.is_reversed(),
                x_before: xs,
                y_before: ys,
            });
            if s.is_x() {
                xs += 1;
            } else {
                ys += 1;
            }
        }
        let first_x = slots
            .iter()
            .position(|s| s.is_x)
            .expect("normalized pattern uses x");
        let first_y = slots.iter().position(|s| !s.is_x);
        Ok(CompiledPattern {
            slots,
            x_count: xs,
            y_count: ys,
            swapped,
            first_x,
            first_y,
        })
    }

    fn uses_y(&self) -> bool {
        self.y_count > 0
    }

    fn offset(&self, slot: &Slot, start: usize, lx: usize, ly: usize) -> usize {
        start + slot.x_before * lx + slot.y_before * ly
    }

    /// Whether `w[start..]` begins with an instance with `|X| = lx`, `|Y| = ly`.
    /// The caller guarantees the image fits.
    fn matches_at(&self, w: &[u8], start: usize, lx: usize, ly: usize) -> bool {
        let fx = &self.slots[self.first_x];
        let fx_off = self.offset(fx, start, lx, ly);
        let fy = self.first_y.map(|i| {
            let s = &self.slots[i];
            (s.reversed, self.offset(s, start, lx, ly))
        });
        for (i, slot) in self.slots.iter().enumerate() {
            if i == self.first_x || Some(i) == self.first_y {
                continue;
            }
            let off = self.offset(slot, start, lx, ly);
            let (ref_rev, ref_off, len) = if slot.is_x {
                (fx.reversed, fx_off, lx)
            } else {
                let (r, o) = fy.expect("y slot implies first y");
                (r, o, ly)
            };
            let ok = if ref_rev == slot.reversed {
                w[ref_off..ref_off + len] == w[off..off + len]
            } else {
                (0..len).all(|k| w[ref_off + k] == w[off + len - 1 - k])
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn witness(&self, word: &Word, start: usize, lx: usize, ly: usize) -> InstanceWitness {
        let read = |slot: &Slot, len: usize| {
            let off = self.offset(slot, start, lx, ly);
            let f = word.factor(off, off + len);
            if slot.reversed {
                f.reversal()
            } else {
                f
            }
        };
        let x = Some(read(&self.slots[self.first_x], lx));
        let y = self.first_y.map(|i| read(&self.slots[i], ly));
        if self.swapped {
            InstanceWitness {
                start,
                x: None,
                y: x,
            }
        } else {
            InstanceWitness { start, x, y }
        }
    }

    /// Exhaustive search in tie-break order: start, then `|X|`, then `|Y|`.
    pub fn find(&self, word: &Word, max_x: usize, max_y: usize) -> Option<InstanceWitness> {
        let w = word.letters();
        let n = w.len();
        let (a, b) = (self.x_count, self.y_count);
        // `max_x`/`max_y` refer to the caller's variables.
        let (max_x, max_y) = if self.swapped {
            (max_y, max_x)
        } else {
            (max_x, max_y)
        };
        for start in 0..n {
            let room = n - start;
            for lx in 1..=max_x {
                if a * lx + b > room {
                    break;
                }
                if !self.uses_y() {
                    if self.matches_at(w, start, lx, 0) {
                        return Some(self.witness(word, start, lx, 0));
                    }
                    continue;
                }
                for ly in 1..=max_y {
                    if a * lx + b * ly > room {
                        break;
                    }
                    if self.matches_at(w, start, lx, ly) {
                        return Some(self.witness(word, start, lx, ly));
                    }
                }
            }
        }
        None
    }

    /// Whether some instance ends exactly at the end of `w`.
    ///
    /// This is the incremental test used by tree searches: when every proper
    /// prefix of `w` avoids the pattern, `w` avoids it iff this returns false.
    pub fn ends_with_instance(&self, w: &[u8]) -> bool {
        let n = w.len();
        let (a, b) = (self.x_count, self.y_count);
        if !self.uses_y() {
            return (1..=n / a).any(|lx| self.matches_at(w, n - a * lx, lx, 0));
        }
        let mut lx = 1;
        while a * lx + b <= n {
            let mut ly = 1;
            while a * lx + b * ly <= n {
                if self.matches_at(w, n - a * lx - b * ly, lx, ly) {
                    return true;
                }
                ly += 1;
            }
            lx += 1;
        }
        false
    }
}

/// First instance of `p` in `w`, or `None` when `w` avoids `p`.
pub fn find_instance(w: &Word, p: &Pattern) -> Result<Option<InstanceWitness>> {
    let compiled = CompiledPattern::new(p)?;
    Ok(compiled.find(w, usize::MAX, usize::MAX))
}

/// As [`find_instance`] with `|X| <= max_x` and `|Y| <= max_y`.
pub fn find_instance_bounded(
    w: &Word,
    p: &Pattern,
    max_x: usize,
    max_y: usize,
) -> Result<Option<InstanceWitness>> {
    let compiled = CompiledPattern::new(p)?;
    Ok(compiled.find(w, max_x, max_y))
}

pub fn avoids(w: &Word, p: &Pattern) -> Result<bool> {
    find_instance(w, p).map(|found| found.is_none())
}
