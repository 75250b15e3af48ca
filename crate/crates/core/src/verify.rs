//! Finite searches behind the classification, each producing a
//! [`VerificationReport`].
//!
//! Prefix lengths for the morphic words are derived at run time from the
//! factor-length bound ([`bound_factor_length`]) and the Thue–Morse covering
//! prefix ([`thue_morse_covering_prefix`]); the expected values 56 and 112 are
//! asserted as regressions inside the reports.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::engine::{
    bipartite_check, build_graph, classify, instance_in_alternating, prove_k_unavoidable,
    search_avoider, AvoidabilityIndex, AvoiderSearch, DEFAULT_DEPTH_TERNARY, S2_1,
};
use crate::error::{Error, Result};
use crate::matcher::{apply_morphism, find_instance, CompiledPattern, InstanceWitness};
use crate::pattern::{canonical, parse_pattern, Pattern};
use crate::sequences::{
    alternating_prefix, bispecial_factors, factor_set, g_from, left_completions,
    reversible_factors, square_limited_prefix, thue_morse_covering_prefix, thue_morse_factors,
    thue_morse_prefix, BinaryMorphism, GeneratorConfig,
};
use crate::word::Word;

/// Outcome of one check. Apart from `elapsed_ms`, the JSON rendering is
/// identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    /// The statement being checked, in words.
    pub claim: String,
    pub parameters: BTreeMap<String, Value>,
    pub passed: bool,
    /// First failure found; present exactly when `passed` is false.
    pub counterexample: Option<String>,
    pub elapsed_ms: u64,
    pub searched_bound: BTreeMap<String, Value>,
    /// Pass/fail per labelled part, for checks made of several parts.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub clauses: BTreeMap<String, bool>,
}

struct Check {
    report: VerificationReport,
    clause: Option<String>,
    started: Instant,
}

impl Check {
    fn new(id: &str, claim: &str) -> Self {
        Check {
            report: VerificationReport {
                check_id: id.to_string(),
                claim: claim.to_string(),
                parameters: BTreeMap::new(),
                passed: true,
                counterexample: None,
                elapsed_ms: 0,
                searched_bound: BTreeMap::new(),
                clauses: BTreeMap::new(),
            },
            clause: None,
            started: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.report
            .parameters
            .insert(key.to_string(), to_value(value));
    }

    fn bound(&mut self, key: &str, value: impl Serialize) {
        self.report
            .searched_bound
            .insert(key.to_string(), to_value(value));
    }

    /// Labels the failures that follow until the next call.
    fn clause(&mut self, label: &str) {
        self.report.clauses.insert(label.to_string(), true);
        self.clause = Some(label.to_string());
    }

    fn fail(&mut self, counterexample: impl Into<String>) {
        let mut text = counterexample.into();
        if let Some(label) = &self.clause {
            self.report.clauses.insert(label.clone(), false);
            text = format!("({label}) {text}");
        }
        if self.report.counterexample.is_none() {
            self.report.counterexample = Some(text);
        }
        self.report.passed = false;
    }

    fn expect(&mut self, ok: bool, counterexample: impl FnOnce() -> String) {
        if !ok {
            self.fail(counterexample());
        }
    }

    fn finish(mut self) -> VerificationReport {
        self.report.elapsed_ms = self.started.elapsed().as_millis() as u64;
        self.report
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn pat(text: &str) -> Pattern {
    parse_pattern(text).expect("pattern literal")
}

fn bin(text: &str) -> Word {
    Word::parse_with_alphabet(text, 2).expect("binary literal")
}

fn render_witness(p: &Pattern, w: &InstanceWitness) -> String {
    let mut out = format!("{p} at position {}", w.start);
    if let Some(x) = &w.x {
        out.push_str(&format!(" with X={x}"));
    }
    if let Some(y) = &w.y {
        out.push_str(&format!(" Y={y}"));
    }
    out
}

/// `floor(2 (u + 3 f1 - 3) / (f1 + 1))`: a factor of length `u_len` of
/// `m(t)`, with `|m(1)| = f1_len`, lies in `m(v)` for a Thue–Morse factor `v`
/// no longer than this.
pub fn bound_factor_length(u_len: usize, f1_len: usize) -> usize {
    assert!(f1_len >= 1, "image of 1 must be non-empty");
    2 * (u_len + 3 * f1_len - 3) / (f1_len + 1)
}

/// Length of the Thue–Morse prefix `τ` such that `m(τ)` contains every factor
/// of `m(t)` of length `factor_len`.
pub fn covering_prefix_for(m: &BinaryMorphism, factor_len: usize) -> usize {
    thue_morse_covering_prefix(bound_factor_length(factor_len, m.image(1).len()))
}

/// Longest image of `p` with `|X| <= max_x` and `|Y| <= max_y`.
pub fn max_instance_len(p: &Pattern, max_x: usize, max_y: usize) -> usize {
    p.x_count() * max_x + p.y_count() * max_y
}

/// Distinct squares `uu` of `w`, each with its first start position.
///
/// Scans each period with a running count of matching letters, so the cost
/// is `O(|w|^2)` plus the output.
pub fn square_factors(w: &Word) -> BTreeMap<Word, usize> {
    let l = w.letters();
    let mut out = BTreeMap::new();
    for period in 1..=l.len() / 2 {
        let mut run = 0;
        for j in period..l.len() {
            run = if l[j] == l[j - period] { run + 1 } else { 0 };
            if run >= period {
                let start = j + 1 - 2 * period;
                out.entry(Word::from_letters(l[start..=j].to_vec(), w.alphabet()))
                    .or_insert(start);
            }
        }
    }
    out
}

const ALLOWED_SQUARES: [&str; 3] = ["00", "11", "0101"];

/// The square-set checks on an arbitrary binary word.
pub fn vf_square_limited_word(w: &Word) -> VerificationReport {
    let mut check = Check::new(
        "square-limited",
        "the word has no squares other than 00, 11 and 0101, all three occur, and 1010 does not occur",
    );
    check.param("n", w.len());
    let allowed: BTreeSet<Word> = ALLOWED_SQUARES.iter().map(|s| bin(s)).collect();
    let squares = square_factors(w);
    let forbidden = squares
        .iter()
        .filter(|(sq, _)| !allowed.contains(*sq))
        .min_by_key(|(sq, &pos)| (pos, sq.len()));
    if let Some((sq, pos)) = forbidden {
        check.fail(format!(
            "({})^2 at position {pos}",
            sq.factor(0, sq.len() / 2)
        ));
    }
    for sq in &allowed {
        check.expect(squares.contains_key(sq), || {
            format!("square {sq} does not occur")
        });
    }
    if let Some(pos) = w.occurrences(&[1, 0, 1, 0]).next() {
        check.fail(format!("1010 at position {pos}"));
    }
    check.bound("square_periods", w.len() / 2);
    check.finish()
}

pub fn vf_square_limited(n: usize, cfg: &GeneratorConfig) -> Result<VerificationReport> {
    let f = square_limited_prefix(n, cfg)?;
    let mut report = vf_square_limited_word(&f);
    report
        .parameters
        .insert("lookahead".into(), to_value(cfg.lookahead));
    Ok(report)
}

const G_FORBIDDEN: [[u8; 9]; 2] = [[2, 2, 0, 1, 2, 2, 2, 0, 1], [0, 1, 2, 2, 2, 0, 1, 2, 2]];

/// The avoidance and structure checks on an arbitrary ternary word.
pub fn vf_g_word(g: &Word) -> VerificationReport {
    let mut check = Check::new(
        "g-avoidance",
        "the ternary word avoids xyxY and xyXY, has no factor cd with c = d+1 mod 3, \
         and contains neither 220122201 nor 012220122",
    );
    check.param("length", g.len());
    let cap = (g.len() / 4).min(15);
    check.bound("max_x", cap);
    check.bound("max_y", cap);
    for p in [pat("xyxY"), pat("xyXY")] {
        let compiled = CompiledPattern::new(&p).expect("non-empty pattern");
        if let Some(w) = compiled.find(g, cap, cap) {
            check.fail(render_witness(&p, &w));
        }
    }
    if let Some((i, cd)) = g
        .letters()
        .windows(2)
        .enumerate()
        .find(|(_, cd)| cd[0] % 3 == (cd[1] + 1) % 3)
    {
        check.fail(format!("factor {}{} at position {i}", cd[0], cd[1]));
    }
    for bad in &G_FORBIDDEN {
        if let Some(i) = g.occurrences(bad).next() {
            let text: String = bad.iter().map(|d| char::from(b'0' + d)).collect();
            check.fail(format!("factor {text} at position {i}"));
        }
    }
    check.finish()
}

pub fn vf_g_avoidance(n: usize, cfg: &GeneratorConfig) -> Result<VerificationReport> {
    let f = square_limited_prefix(n, cfg)?;
    let g = g_from(&f);
    let mut report = vf_g_word(&g);
    report.parameters.insert("n".into(), to_value(n));
    report
        .parameters
        .insert("lookahead".into(), to_value(cfg.lookahead));
    // Used in the argument that the forbidden factors cannot appear.
    let probe: Word = "201222012".parse().expect("literal");
    let squares: BTreeSet<Word> = square_factors(&probe).into_keys().collect();
    let expected: BTreeSet<Word> = ["22".parse().expect("literal")].into();
    if squares != expected && report.passed {
        report.passed = false;
        let list: Vec<String> = squares.iter().map(Word::to_string).collect();
        report.counterexample = Some(format!("squares of 201222012 are {{{}}}", list.join(", ")));
    }
    Ok(report)
}

pub fn vf_f_avoids_xyxyxr(n: usize, cfg: &GeneratorConfig) -> Result<VerificationReport> {
    let mut check = Check::new(
        "f-avoids-xyxyxR",
        "the square-limited word avoids xyxyX and does not contain 1010",
    );
    check.param("n", n);
    check.param("lookahead", cfg.lookahead);
    let f = square_limited_prefix(n, cfg)?;
    let cap = (n / 5).min(15);
    check.bound("max_x", cap);
    check.bound("max_y", cap);
    let p = pat("xyxyX");
    if let Some(w) = CompiledPattern::new(&p)?.find(&f, cap, cap) {
        check.fail(render_witness(&p, &w));
    }
    if let Some(i) = f.occurrences(&[1, 0, 1, 0]).next() {
        check.fail(format!("1010 at position {i}"));
    }
    Ok(check.finish())
}

/// Records the derived prefix length under `key` and checks it against the
/// expected regression value.
fn derived_prefix(
    check: &mut Check,
    key: &str,
    m: &BinaryMorphism,
    factor_len: usize,
    expected: usize,
) -> usize {
    let len = covering_prefix_for(m, factor_len);
    check.bound(key, len);
    check.expect(len == expected, || {
        format!("derived prefix {key} = {len}, expected {expected}")
    });
    len
}

fn no_reversible(check: &mut Check, image: &Word, len: usize) {
    if let Some(z) = reversible_factors(image, len).into_iter().next() {
        check.fail(format!("{z} and its reversal are both factors"));
    }
}

fn no_instance(check: &mut Check, image: &Word, p: &Pattern, max_x: usize, max_y: usize) {
    let compiled = CompiledPattern::new(p).expect("non-empty pattern");
    if let Some(w) = compiled.find(image, max_x, max_y) {
        check.fail(render_witness(p, &w));
    }
}

pub fn vf_w1() -> Result<VerificationReport> {
    let mut check = Check::new(
        "w1",
        "f1(t) has no factor z of length 7 with z^R also a factor, and the image of the \
         112-prefix of t has no instance of xyxYX with |X|,|Y| <= 6",
    );
    let m = BinaryMorphism::f1();
    let p = pat("xyxYX");
    check.param("pattern", p.to_string());
    check.bound("reversible_len", 7);
    check.bound("max_x", 6);
    check.bound("max_y", 6);
    check.clause("bounds");
    let a = bound_factor_length(7, 11);
    let b = bound_factor_length(30, 11);
    check.expect(a < 7, || {
        format!("bound_factor_length(7, 11) = {a}, expected < 7")
    });
    check.expect(b == 10, || {
        format!("bound_factor_length(30, 11) = {b}, expected 10")
    });
    let short = derived_prefix(&mut check, "prefix_reversible", &m, 7, 56);
    let long = derived_prefix(
        &mut check,
        "prefix_instance",
        &m,
        max_instance_len(&p, 6, 6),
        112,
    );
    check.clause("reversible");
    no_reversible(&mut check, &m.apply(&thue_morse_prefix(short)), 7);
    check.clause("instance");
    no_instance(&mut check, &m.apply(&thue_morse_prefix(long)), &p, 6, 6);
    Ok(check.finish())
}

pub fn vf_w2() -> Result<VerificationReport> {
    let mut check = Check::new(
        "w2",
        "the f2-image of the 112-prefix of t has no instance of xyXYx with |X|,|Y| <= 6",
    );
    let m = BinaryMorphism::f2();
    let p = pat("xyXYx");
    check.param("pattern", p.to_string());
    check.bound("max_x", 6);
    check.bound("max_y", 6);
    let len = derived_prefix(
        &mut check,
        "prefix_instance",
        &m,
        max_instance_len(&p, 6, 6),
        112,
    );
    let image = m.apply(&thue_morse_prefix(len));
    check.bound("image_len", image.len());
    check.expect(image.len() == 504, || {
        format!("image length {} != 504", image.len())
    });
    no_instance(&mut check, &image, &p, 6, 6);
    Ok(check.finish())
}

/// The 22 words that can occur in the third word together with their
/// reversals.
pub const UPSILON: [&str; 22] = [
    "1", "0", "11", "10", "00", "01", "010", "011", "001", "000", "110", "100", "101", "0110",
    "0000", "0001", "1001", "1000", "00001", "10000", "10001", "100001",
];

pub fn upsilon() -> BTreeSet<Word> {
    UPSILON.iter().map(|s| bin(s)).collect()
}

/// `{χ : |χ| = 3, χY and χY^R are factors}` and the same with `χ` on the right.
pub fn chi_sets(image: &Word, y: &Word) -> (BTreeSet<Word>, BTreeSet<Word>) {
    let yr = y.reversal();
    let threes = factor_set(image, 3);
    let left = threes
        .iter()
        .filter(|c| {
            image.contains(c.concat(y).letters()) && image.contains(c.concat(&yr).letters())
        })
        .cloned()
        .collect();
    let right = threes
        .iter()
        .filter(|c| image.contains(y.concat(c).letters()) && image.contains(yr.concat(c).letters()))
        .cloned()
        .collect();
    (left, right)
}

pub const LEFT_COMPLETION_BOUND: usize = 64;

/// `(max |X|, max |Y|)` for the wider instance search in f3(t).
pub const W3_WIDE: (usize, usize) = (40, 6);

pub fn vf_w3() -> Result<VerificationReport> {
    let mut check = Check::new(
        "w3",
        "in f3(t): reversible factors lie in the 22-word set, the chi-set condition holds for \
         every member except 0, 1, 00, there is no xyxYx with |X| <= 8 and |Y| <= 2, every \
         length-9 factor contains 11, and factors ending in 11 have a unique left completion",
    );
    let m = BinaryMorphism::f3();
    let p = pat("xyxYx");
    check.param("pattern", p.to_string());
    check.bound("reversible_len", 7);
    check.bound("chi_len", 3);
    check.bound("max_x", 8);
    check.bound("max_y", 2);
    check.bound("left_completion_len", 24);
    check.bound("left_completion_factor_bound", LEFT_COMPLETION_BOUND);
    check.bound("wide_max_x", W3_WIDE.0);
    check.bound("wide_max_y", W3_WIDE.1);

    check.clause("bounds");
    let ups = upsilon();
    check.expect(ups.len() == 22, || {
        format!("upsilon has {} members", ups.len())
    });
    let lens = [
        derived_prefix(&mut check, "prefix_reversible", &m, 7, 56),
        derived_prefix(&mut check, "prefix_chi", &m, 3 + 6, 56),
        derived_prefix(
            &mut check,
            "prefix_instance",
            &m,
            max_instance_len(&p, 8, 2),
            112,
        ),
        derived_prefix(&mut check, "prefix_contains_11", &m, 9, 56),
        derived_prefix(&mut check, "prefix_left_completion", &m, 24, 112),
    ];
    let image = m.apply(&thue_morse_prefix(lens.into_iter().max().unwrap_or(0)));

    check.clause("a");
    for len in 1..=6 {
        if let Some(z) = reversible_factors(&image, len)
            .into_iter()
            .find(|z| !ups.contains(z))
        {
            check.fail(format!(
                "{z} and its reversal are both factors but {z} is not in upsilon"
            ));
        }
    }
    no_reversible(&mut check, &image, 7);

    check.clause("b");
    for y in ups
        .iter()
        .filter(|y| !["0", "1", "00"].contains(&y.to_string().as_str()))
    {
        let (left, right) = chi_sets(&image, y);
        if !left.is_empty() && !right.is_empty() {
            check.fail(format!(
                "Y={y}: both chi sets non-empty ({} in left, {} in right)",
                left.first().expect("non-empty"),
                right.first().expect("non-empty")
            ));
        }
    }

    check.clause("c");
    no_instance(&mut check, &image, &p, 8, 2);

    check.clause("d");
    if let Some(chi) = factor_set(&image, 9)
        .into_iter()
        .find(|c| !c.contains(&[1, 1]))
    {
        check.fail(format!("length-9 factor {chi} does not contain 11"));
    }

    check.clause("e");
    for len in 2..=24 {
        for u in factor_set(&image, len)
            .into_iter()
            .filter(|u| u.letters().ends_with(&[1, 1]))
        {
            let completions = left_completions(&u, &m, LEFT_COMPLETION_BOUND);
            if completions.len() != 1 {
                let list: Vec<String> = completions.iter().map(Word::to_string).collect();
                check.fail(format!("{u} has left completions {{{}}}", list.join(", ")));
            }
        }
    }

    // Direct search with wider bounds, independent of the chi-set argument.
    check.clause("wide");
    let (wx, wy) = W3_WIDE;
    let wide = derived_prefix(
        &mut check,
        "prefix_wide",
        &m,
        max_instance_len(&p, wx, wy),
        448,
    );
    no_instance(&mut check, &m.apply(&thue_morse_prefix(wide)), &p, wx, wy);
    Ok(check.finish())
}

/// Factors of `image` with length in `[min_len, |image|)` that are neither a
/// prefix nor a suffix of it.
pub fn internal_factors(image: &Word, min_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for len in min_len..image.len() {
        for start in 1..image.len() - len {
            let f = image.factor(start, start + len);
            if !f.is_prefix_of(image) && !image.letters().ends_with(f.letters()) {
                out.insert(f);
            }
        }
    }
    out
}

pub const W4_INTERNAL: [&str; 6] = [
    "000010", "000100", "001001", "0000100", "0001001", "00001001",
];

pub fn vf_w4() -> Result<VerificationReport> {
    let mut check = Check::new(
        "w4",
        "in f4(t): no length-21 factor has its reversal as a factor, f4(h^4(0110100)) has no \
         xyXyx with |X| <= 20 and |Y| <= 5, 011 only ends f4(1) blocks, the six internal \
         factors of f4(1) occur only inside f4(1) blocks, and bispecial factors of length \
         6 to 24 are images of Thue-Morse factors",
    );
    let m = BinaryMorphism::f4();
    let p = pat("xyXyx");
    check.param("pattern", p.to_string());
    check.bound("reversible_len", 21);
    check.bound("max_x", 20);
    check.bound("max_y", 5);
    check.bound("bispecial_len", [6, 24]);

    check.clause("bounds");
    let short = derived_prefix(&mut check, "prefix_reversible", &m, 21, 56);
    let long = derived_prefix(
        &mut check,
        "prefix_instance",
        &m,
        max_instance_len(&p, 20, 5),
        112,
    );
    let special = covering_prefix_for(&m, 25);
    check.bound("prefix_bispecial", special);
    let len = long.max(special);

    check.clause("a");
    no_reversible(&mut check, &m.apply(&thue_morse_prefix(short)), 21);

    check.clause("b");
    let h = BinaryMorphism::thue_morse();
    let mut tau = bin("0110100");
    for _ in 0..4 {
        tau = h.apply(&tau);
    }
    check.expect(tau == thue_morse_prefix(long), || {
        "h^4(0110100) is not the Thue-Morse prefix of the derived length".to_string()
    });
    let image = m.apply(&tau);
    check.bound("image_len", image.len());
    check.expect(image.len() == 616, || {
        format!("image length {} != 616", image.len())
    });
    no_instance(&mut check, &image, &p, 20, 5);

    check.clause("c");
    let (image, blocks) = m.apply_with_blocks(&thue_morse_prefix(len));
    let one_blocks: Vec<_> = blocks.iter().filter(|b| b.source == 1).collect();
    let one_ends: HashSet<usize> = one_blocks.iter().map(|b| b.end()).collect();
    if let Some(i) = image
        .occurrences(&[0, 1, 1])
        .find(|i| !one_ends.contains(&(i + 3)))
    {
        check.fail(format!("011 at position {i} does not end an f4(1) block"));
    }

    check.clause("d");
    let internal = internal_factors(m.image(1), 6);
    let expected: BTreeSet<Word> = W4_INTERNAL.iter().map(|s| bin(s)).collect();
    if internal != expected {
        let list: Vec<String> = internal.iter().map(Word::to_string).collect();
        check.fail(format!(
            "internal factors of f4(1) are {{{}}}",
            list.join(", ")
        ));
    }
    let inside_one_block = |start: usize, end: usize| {
        let k = one_blocks.partition_point(|b| b.end() <= start);
        one_blocks
            .get(k)
            .is_some_and(|b| b.start <= start && end <= b.end())
    };
    for f in &expected {
        if let Some(i) = image
            .occurrences(f.letters())
            .find(|&i| !inside_one_block(i, i + f.len()))
        {
            check.fail(format!("{f} at position {i} is not inside an f4(1) block"));
        }
    }

    check.clause("e");
    for y in bispecial_factors(&image, 24)
        .into_iter()
        .filter(|y| y.len() >= 6)
    {
        let ok = m
            .decode(&y)
            .is_some_and(|v| thue_morse_factors(v.len()).contains(&v));
        check.expect(ok, || {
            format!("bispecial factor {y} is not f4 of a Thue-Morse factor")
        });
    }
    Ok(check.finish())
}

/// All words of length `n` over `{0, .., k-1}`, or only those in which the
/// letters first appear in increasing order when `reduced`.
fn all_words(k: usize, n: usize, reduced: bool) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(n);
    fn go(k: usize, n: usize, reduced: bool, w: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if w.len() == n {
            out.push(w.clone());
            return;
        }
        let top = if reduced {
            (w.iter().copied().max().map_or(0, |m| m as usize + 1) + 1).min(k)
        } else {
            k
        };
        for l in 0..top as u8 {
            w.push(l);
            go(k, n, reduced, w, out);
            w.pop();
        }
    }
    go(k, n, reduced, &mut w, &mut out);
    out
}

pub fn vf_pigeonhole(k: usize) -> Result<VerificationReport> {
    let mut check = Check::new(
        "pigeonhole",
        "every word of length 2k+1 over k letters contains instances of xyx and xyX, \
         and some word of length 2k avoids both",
    );
    check.param("k", k);
    if !(1..=3).contains(&k) {
        check.fail(format!("k = {k} outside 1..=3"));
        return Ok(check.finish());
    }
    let patterns = [
        CompiledPattern::new(&pat("xyx"))?,
        CompiledPattern::new(&pat("xyX"))?,
    ];
    let contains_both = |w: &[u8]| {
        let w = Word::from_letters(w.to_vec(), k);
        patterns
            .iter()
            .all(|c| c.find(&w, usize::MAX, usize::MAX).is_some())
    };
    let n = 2 * k + 1;
    check.bound("word_len", n);
    let reduced = all_words(k, n, true);
    let reduced_ok = reduced.iter().find(|w| !contains_both(w));
    check.bound("reduced_words", reduced.len());
    if let Some(w) = reduced_ok {
        check.fail(format!(
            "{} avoids xyx or xyX",
            Word::from_letters(w.clone(), k)
        ));
    }
    if k == 2 {
        let full = all_words(k, n, false);
        check.bound("full_words", full.len());
        let full_ok = full.iter().all(|w| contains_both(w));
        check.expect(full_ok == reduced_ok.is_none(), || {
            "full and reduced enumerations disagree".to_string()
        });
    }
    let tight = all_words(k, n - 1, true)
        .into_iter()
        .find(|w| !contains_both(w));
    match tight {
        Some(w) => check.param("tight_witness", Word::from_letters(w, k).to_string()),
        None => check.fail(format!(
            "every word of length {} contains xyx or xyX",
            n - 1
        )),
    }
    Ok(check.finish())
}

/// Whether some image of `p` with `|X|, |Y|` in `{1, 2}` is a factor of `w`.
fn brute_instance(p: &Pattern, w: &Word) -> bool {
    let images: Vec<Word> = ["0", "1", "00", "01", "10", "11"]
        .iter()
        .map(|s| bin(s))
        .collect();
    let ys: Vec<Option<&Word>> = if p.uses_y() {
        images.iter().map(Some).collect()
    } else {
        vec![None]
    };
    let xs: Vec<Option<&Word>> = if p.uses_x() {
        images.iter().map(Some).collect()
    } else {
        vec![None]
    };
    xs.iter().any(|x| {
        ys.iter().any(|y| {
            let image = apply_morphism(p, *x, *y).expect("non-empty images");
            w.contains(image.letters())
        })
    })
}

pub fn vf_alternating_graph(max_len: usize) -> Result<VerificationReport> {
    let mut check = Check::new(
        "alternating",
        "an instance of p occurs in (01)^omega if and only if G(p) is bipartite",
    );
    check.param("max_len", max_len);
    check.bound("max_x", 2);
    check.bound("max_y", 2);
    let mut count = 0;
    for len in 2..=max_len {
        let alt = alternating_prefix(4 * len + 4);
        for p in Pattern::all_of_length(len) {
            count += 1;
            let bipartite = bipartite_check(&build_graph(&p)).coloring().is_some();
            let found = brute_instance(&p, &alt);
            check.expect(bipartite == found, || {
                format!("{p}: bipartite = {bipartite}, instance in alternating prefix = {found}")
            });
            if bipartite {
                check.expect(instance_in_alternating(&p)?.is_some(), || {
                    format!("{p}: no instance built from the 2-coloring")
                });
            }
        }
    }
    check.param("patterns", count);
    Ok(check.finish())
}

pub const ORACLE_AVOIDER_LEN: usize = 200;
pub const ORACLE_NODE_BUDGET: u64 = 100_000;
pub const ORACLE_RESTARTS: u64 = 4;

pub fn vf_classifier_oracle(max_len: usize) -> Result<VerificationReport> {
    let mut check = Check::new(
        "classifier-oracle",
        "the classifier agrees with search: index 2 iff a binary avoider of length 200 is \
         found, unavoidable iff the ternary tree is finite by depth 60, index 3 iff the binary \
         tree is finite and a ternary avoider of length 200 is found",
    );
    check.param("max_len", max_len);
    check.bound("avoider_len", ORACLE_AVOIDER_LEN);
    check.bound("ternary_depth", DEFAULT_DEPTH_TERNARY);
    check.bound("node_budget", ORACLE_NODE_BUDGET);
    check.bound("restarts", ORACLE_RESTARTS);
    if !(1..=5).contains(&max_len) {
        check.fail(format!("max_len = {max_len} outside 1..=5"));
        return Ok(check.finish());
    }
    let mut reps = BTreeSet::new();
    let mut total = 0;
    for len in 1..=max_len {
        for p in Pattern::all_of_length(len) {
            total += 1;
            reps.insert(canonical(&p));
        }
    }
    check.param("patterns", total);
    check.param("classes", reps.len());
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for p in &reps {
        let index = classify(p);
        *tally.entry(index.to_string()).or_default() += 1;
        let binary = search_avoider(
            p,
            2,
            ORACLE_AVOIDER_LEN,
            ORACLE_NODE_BUDGET,
            ORACLE_RESTARTS,
        )?;
        let binary_found = match &binary {
            AvoiderSearch::Found(w) => {
                check.expect(find_instance(w, p)?.is_none(), || {
                    format!("{p}: binary witness {w} fails")
                });
                true
            }
            AvoiderSearch::Exhausted { .. } => false,
            AvoiderSearch::Inconclusive { attempts } => {
                check.fail(format!(
                    "{p}: binary search inconclusive after {attempts} attempts"
                ));
                continue;
            }
        };
        let ternary_finite =
            !binary_found && prove_k_unavoidable(p, 3, DEFAULT_DEPTH_TERNARY)?.terminated;
        let ternary_found = if binary_found || ternary_finite {
            false
        } else {
            match search_avoider(
                p,
                3,
                ORACLE_AVOIDER_LEN,
                ORACLE_NODE_BUDGET,
                ORACLE_RESTARTS,
            )? {
                AvoiderSearch::Found(w) => {
                    check.expect(find_instance(&w, p)?.is_none(), || {
                        format!("{p}: ternary witness {w} fails")
                    });
                    true
                }
                _ => false,
            }
        };
        check.expect((index == AvoidabilityIndex::Index2) == binary_found, || {
            format!("{p}: classified {index}, binary avoider found = {binary_found}")
        });
        check.expect(
            (index == AvoidabilityIndex::Unavoidable) == ternary_finite,
            || format!("{p}: classified {index}, ternary tree finite = {ternary_finite}"),
        );
        check.expect(
            (index == AvoidabilityIndex::Index3) == (!binary_found && ternary_found),
            || format!("{p}: classified {index}, ternary avoider found = {ternary_found}"),
        );
    }
    check.param("classes_by_index", tally);
    Ok(check.finish())
}

pub fn vf_s21_avoiders(cfg: &GeneratorConfig) -> Result<VerificationReport> {
    let mut check = Check::new(
        "s21-avoiders",
        "each of xxx, xxyxyy, xxyyx, xyxxy, xyxyx has a binary avoider of length 200, \
         the Thue-Morse prefix of length 2000 avoids xxx and xyxyx, and the square-limited \
         word avoids xyxyX",
    );
    check.bound("avoider_len", ORACLE_AVOIDER_LEN);
    check.bound("thue_morse_len", 2000);
    for text in S2_1 {
        let p = pat(text);
        match search_avoider(
            &p,
            2,
            ORACLE_AVOIDER_LEN,
            ORACLE_NODE_BUDGET,
            ORACLE_RESTARTS,
        )? {
            AvoiderSearch::Found(w) => {
                if let Some(i) = find_instance(&w, &p)? {
                    check.fail(format!("witness {w}: {}", render_witness(&p, &i)));
                }
            }
            other => check.fail(format!("{p}: no binary avoider ({other:?})")),
        }
    }
    let t = thue_morse_prefix(2000);
    for p in [pat("xxx"), pat("xyxyx")] {
        if let Some(i) = find_instance(&t, &p)? {
            check.fail(format!("Thue-Morse prefix: {}", render_witness(&p, &i)));
        }
    }
    let f = vf_f_avoids_xyxyxr(400, cfg)?;
    if let Some(c) = f.counterexample {
        check.fail(format!("square-limited word: {c}"));
    }
    Ok(check.finish())
}

/// Every factor of `m(t)` of length at most `n` lies in `m(v)` for a
/// Thue–Morse factor `v` of length at most the bound.
pub fn vf_factor_bound(name: &str, m: &BinaryMorphism, n: usize) -> Result<VerificationReport> {
    let mut check = Check::new(
        &format!("factor-bound-{name}"),
        "every factor u of m(t) is a factor of m(v) for a Thue-Morse factor v with \
         |v| <= floor(2(|u| + 3|m(1)| - 3) / (|m(1)| + 1))",
    );
    check.param("morphism", name);
    check.param("n", n);
    // A long image so that the sample is not itself limited by the bound.
    let sample_prefix = thue_morse_covering_prefix(n.max(2) * 4);
    check.bound("sample_prefix", sample_prefix);
    let sample = m.apply(&thue_morse_prefix(sample_prefix));
    for len in 1..=n.min(sample.len()) {
        let bound = bound_factor_length(len, m.image(1).len());
        let mut reachable: HashSet<Vec<u8>> = HashSet::new();
        for vlen in 1..=bound {
            for v in thue_morse_factors(vlen) {
                let image = m.apply(&v);
                for f in image.letters().windows(len) {
                    reachable.insert(f.to_vec());
                }
            }
        }
        if let Some(u) = factor_set(&sample, len)
            .into_iter()
            .find(|u| !reachable.contains(u.letters()))
        {
            check.fail(format!(
                "{u} is not in m(v) for any Thue-Morse factor |v| <= {bound}"
            ));
        }
    }
    Ok(check.finish())
}

/// Every Thue–Morse factor of length `2^n + 1` occurs in the prefix of length
/// `7 * 2^n`, checked against a prefix four times longer.
pub fn vf_covering_prefix(max_n: u32) -> Result<VerificationReport> {
    let mut check = Check::new(
        "covering-prefix",
        "every factor of t of length 2^n + 1 is a factor of the prefix of t of length 7(2^n)",
    );
    check.param("max_n", max_n);
    let big = 7usize << (max_n + 2);
    check.bound("reference_prefix", big);
    let reference = thue_morse_prefix(big);
    for n in 0..=max_n {
        let len = (1usize << n) + 1;
        let small = factor_set(&thue_morse_prefix(7 << n), len);
        if let Some(u) = factor_set(&reference, len)
            .into_iter()
            .find(|u| !small.contains(u))
        {
            check.fail(format!(
                "n={n}: {u} missing from the prefix of length {}",
                7 << n
            ));
        }
    }
    Ok(check.finish())
}

/// Every odd-length factor `v` of the prefix lies in `h(v')` for a factor `v'`
/// of length `(|v| + 1) / 2`.
pub fn vf_odd_factor_preimage(n: usize) -> Result<VerificationReport> {
    let mut check = Check::new(
        "odd-factors",
        "every odd-length factor v of t is a factor of h(v') for a factor v' of t with \
         |v'| = (|v| + 1) / 2",
    );
    check.param("n", n);
    let t = thue_morse_prefix(n);
    let h = BinaryMorphism::thue_morse();
    for len in (1..=n).step_by(2) {
        let half = len.div_ceil(2);
        let mut covered: HashSet<&[u8]> = HashSet::new();
        let images: Vec<Word> = factor_set(&t, half).iter().map(|v| h.apply(v)).collect();
        for image in &images {
            for f in image.letters().windows(len) {
                covered.insert(f);
            }
        }
        if let Some(i) = (0..=n - len).find(|&i| !covered.contains(&t.letters()[i..i + len])) {
            check.fail(format!(
                "{} is not a factor of h(v') with |v'| = {half}",
                t.factor(i, i + len)
            ));
        }
    }
    check.bound("max_factor_len", n);
    Ok(check.finish())
}

pub const CHECK_IDS: [&str; 17] = [
    "square-limited",
    "g-avoidance",
    "f-avoids-xyxyxR",
    "w1",
    "w2",
    "w3",
    "w4",
    "pigeonhole",
    "alternating",
    "classifier-oracle",
    "s21-avoiders",
    "factor-bound-f1",
    "factor-bound-f2",
    "factor-bound-f3",
    "factor-bound-f4",
    "covering-prefix",
    "odd-factors",
];

/// Numeric overrides for the suite, e.g. `n=1000` or `max-len=5`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteParams {
    values: BTreeMap<String, usize>,
}

impl SuiteParams {
    pub const KEYS: [&'static str; 3] = ["n", "k", "max-len"];

    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for item in items {
            let item = item.as_ref();
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::BadParameter(item.to_string()))?;
            if !Self::KEYS.contains(&key) {
                return Err(Error::BadParameter(item.to_string()));
            }
            let value = value
                .parse()
                .map_err(|_| Error::BadParameter(item.to_string()))?;
            values.insert(key.to_string(), value);
        }
        Ok(SuiteParams { values })
    }

    fn get(&self, key: &str, default: usize) -> usize {
        self.values.get(key).copied().unwrap_or(default)
    }
}

pub fn run_check(
    id: &str,
    params: &SuiteParams,
    cfg: &GeneratorConfig,
) -> Result<VerificationReport> {
    match id {
        "square-limited" => vf_square_limited(params.get("n", 2000), cfg),
        "g-avoidance" => vf_g_avoidance(params.get("n", 400).max(20), cfg),
        "f-avoids-xyxyxR" => vf_f_avoids_xyxyxr(params.get("n", 400).max(20), cfg),
        "w1" => vf_w1(),
        "w2" => vf_w2(),
        "w3" => vf_w3(),
        "w4" => vf_w4(),
        "pigeonhole" => vf_pigeonhole(params.get("k", 2)),
        "alternating" => vf_alternating_graph(params.get("max-len", 4)),
        "classifier-oracle" => vf_classifier_oracle(params.get("max-len", 4)),
        "s21-avoiders" => vf_s21_avoiders(cfg),
        "factor-bound-f1" => vf_factor_bound("f1", &BinaryMorphism::f1(), params.get("n", 30)),
        "factor-bound-f2" => vf_factor_bound("f2", &BinaryMorphism::f2(), params.get("n", 30)),
        "factor-bound-f3" => vf_factor_bound("f3", &BinaryMorphism::f3(), params.get("n", 9)),
        "factor-bound-f4" => vf_factor_bound("f4", &BinaryMorphism::f4(), params.get("n", 21)),
        "covering-prefix" => vf_covering_prefix(params.get("n", 6) as u32),
        "odd-factors" => vf_odd_factor_preimage(params.get("n", 512)),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

/// Runs every check, or only `only`, in [`CHECK_IDS`] order.
pub fn run_suite(
    only: Option<&str>,
    params: &SuiteParams,
    cfg: &GeneratorConfig,
) -> Result<Vec<VerificationReport>> {
    match only {
        Some(id) => Ok(vec![run_check(id, params, cfg)?]),
        None => CHECK_IDS
            .iter()
            .map(|id| run_check(id, params, cfg))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_arithmetic() {
        assert_eq!(bound_factor_length(7, 11), 6);
        assert_eq!(bound_factor_length(30, 11), 10);
        assert_eq!(bound_factor_length(0, 1), 0);
        assert_eq!(covering_prefix_for(&BinaryMorphism::f1(), 7), 56);
        assert_eq!(covering_prefix_for(&BinaryMorphism::f1(), 30), 112);
    }

    fn squares_oracle(w: &Word) -> BTreeSet<Word> {
        let l = w.letters();
        let mut out = BTreeSet::new();
        for i in 0..l.len() {
            for half in 1..=(l.len() - i) / 2 {
                if l[i..i + half] == l[i + half..i + 2 * half] {
                    out.insert(w.factor(i, i + 2 * half));
                }
            }
        }
        out
    }

    #[test]
    fn square_scan_matches_naive() {
        for text in [
            "00110011",
            "0110100110010110",
            "201222012",
            "0100101001001010010",
            "",
        ] {
            let w: Word = text.parse().unwrap();
            let fast: BTreeSet<Word> = square_factors(&w).into_keys().collect();
            assert_eq!(fast, squares_oracle(&w), "{text}");
        }
        let g: Word = "201222012".parse().unwrap();
        assert_eq!(
            square_factors(&g).into_keys().collect::<Vec<_>>(),
            vec!["22".parse().unwrap()]
        );
    }

    #[test]
    fn square_limited_negative_controls() {
        let r = vf_square_limited_word(&bin("00110011"));
        assert!(!r.passed);
        assert_eq!(r.counterexample.as_deref(), Some("(0011)^2 at position 0"));
        let r = vf_square_limited_word(&bin("0101"));
        assert!(!r.passed);
        assert!(r.counterexample.unwrap().contains("does not occur"));
    }

    #[test]
    fn g_structure_negative_control() {
        let r = vf_g_word(&"0121".parse().unwrap());
        assert!(!r.passed);
        assert_eq!(r.counterexample.as_deref(), Some("factor 21 at position 2"));
        let r = vf_g_word(&"012220122".parse().unwrap());
        assert_eq!(
            r.counterexample.as_deref(),
            Some("factor 012220122 at position 0")
        );
    }

    #[test]
    fn matcher_controls_for_morphic_checks() {
        let w = find_instance(&bin("01010"), &pat("xyxyX"))
            .unwrap()
            .unwrap();
        assert_eq!((w.x.unwrap(), w.y.unwrap()), (bin("0"), bin("1")));
        let p = pat("xyXYx");
        let image = apply_morphism(&p, Some(&bin("01")), Some(&bin("0"))).unwrap();
        assert!(find_instance(&image, &p).unwrap().is_some());
    }

    #[test]
    fn internal_factors_of_f4_image() {
        let expected: BTreeSet<Word> = W4_INTERNAL.iter().map(|s| bin(s)).collect();
        assert_eq!(internal_factors(&bin("1000010011"), 6), expected);
    }

    #[test]
    fn chi_sets_match_direct_scan() {
        let image = BinaryMorphism::f3().apply(&thue_morse_prefix(112));
        let text = image.to_string();
        for y in ["0110", "000", "011", "10"] {
            let yr: String = y.chars().rev().collect();
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            for i in 0..text.len() - 3 {
                let c = &text[i..i + 3];
                if text.contains(&format!("{c}{y}")) && text.contains(&format!("{c}{yr}")) {
                    left.insert(bin(c));
                }
                if text.contains(&format!("{y}{c}")) && text.contains(&format!("{yr}{c}")) {
                    right.insert(bin(c));
                }
            }
            assert_eq!(chi_sets(&image, &bin(y)), (left, right), "{y}");
        }
        // Palindromes give two non-empty sets.
        let (l, r) = chi_sets(&image, &bin("0110"));
        assert!(!l.is_empty() && !r.is_empty());
        let (l, r) = chi_sets(&image, &bin("011"));
        assert!(l.is_empty() || r.is_empty());
    }

    #[test]
    fn pigeonhole_small_k() {
        for k in 1..=3 {
            assert!(vf_pigeonhole(k).unwrap().passed, "k={k}");
        }
        assert!(!vf_pigeonhole(4).unwrap().passed);
        assert_eq!(all_words(2, 5, false).len(), 32);
        assert_eq!(all_words(3, 3, true).len(), 5);
    }

    #[test]
    fn brute_instances_in_alternating() {
        let alt = alternating_prefix(12);
        assert!(!brute_instance(&pat("xX"), &alt));
        assert!(brute_instance(&pat("xy"), &alt));
    }

    #[test]
    fn reports_are_deterministic() {
        let strip = |mut r: VerificationReport| {
            r.elapsed_ms = 0;
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(strip(vf_w1().unwrap()), strip(vf_w1().unwrap()));
        assert_eq!(
            strip(vf_covering_prefix(4).unwrap()),
            strip(vf_covering_prefix(4).unwrap())
        );
    }

    #[test]
    fn suite_params() {
        let p = SuiteParams::parse(&["n=100", "max-len=3"]).unwrap();
        assert_eq!(p.get("n", 1), 100);
        assert_eq!(p.get("k", 7), 7);
        assert!(matches!(
            SuiteParams::parse(&["depth=3"]),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            SuiteParams::parse(&["n"]),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            run_check("nope", &p, &GeneratorConfig::default()),
            Err(Error::UnknownCheck(_))
        ));
    }
}
