//! Classification of patterns by avoidability index, the tables of canonical
//! patterns without 2-avoidable factors, the backtracking prover, and the
//! pattern graph criterion for occurrence in `(01)^ω`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::matcher::{apply_morphism, CompiledPattern, InstanceWitness};
use crate::pattern::{canonical, equivalence_class, factors, parse_pattern, Pattern, Symbol};
use crate::sequences::alternating_prefix;
use crate::word::Word;

/// Least alphabet size over which a pattern is avoidable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AvoidabilityIndex {
    Index2,
    Index3,
    Unavoidable,
}

impl fmt::Display for AvoidabilityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AvoidabilityIndex::Index2 => "2",
            AvoidabilityIndex::Index3 => "3",
            AvoidabilityIndex::Unavoidable => "inf",
        })
    }
}

pub const S2_1: [&str; 5] = ["xxx", "xxyxyy", "xxyyx", "xyxxy", "xyxyx"];
pub const S2_2: [&str; 1] = ["xyxyX"];
pub const S2_3: [&str; 7] = ["xxyxY", "xxyXy", "xxyXY", "xxyyX", "xX", "xyXXy", "xyyX"];
pub const S2_4: [&str; 4] = ["xyxYX", "xyXYx", "xyxYx", "xyXyx"];
pub const S3: [&str; 4] = ["xx", "xyxy", "xyxY", "xyXY"];
/// Canonical forms of the unavoidable patterns: the prefixes of `xyx` and `xyx^R`.
pub const UNAVOIDABLE: [&str; 5] = ["", "x", "xy", "xyx", "xyX"];

fn pattern_set(texts: &[&str]) -> BTreeSet<Pattern> {
    texts
        .iter()
        .map(|t| parse_pattern(t).expect("constant pattern"))
        .collect()
}

/// The 2-avoidable and 3-avoidable seed patterns, with the partition of the
/// 2-avoidable seeds by the construction that avoids them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationSets {
    pub s2: BTreeSet<Pattern>,
    pub s3: BTreeSet<Pattern>,
    /// In order: ordinary binary patterns, the one avoided by the
    /// square-limited word, those avoided by `(01)^ω`, and those avoided by
    /// morphic images of Thue–Morse.
    pub s2_parts: [BTreeSet<Pattern>; 4],
}

impl ClassificationSets {
    pub fn new() -> Self {
        let s2_parts = [
            pattern_set(&S2_1),
            pattern_set(&S2_2),
            pattern_set(&S2_3),
            pattern_set(&S2_4),
        ];
        let s2 = s2_parts.iter().flatten().cloned().collect();
        ClassificationSets {
            s2,
            s3: pattern_set(&S3),
            s2_parts,
        }
    }
}

impl Default for ClassificationSets {
    fn default() -> Self {
        Self::new()
    }
}

pub fn s2() -> BTreeSet<Pattern> {
    ClassificationSets::new().s2
}

pub fn s3() -> BTreeSet<Pattern> {
    pattern_set(&S3)
}

pub fn unavoidable_canonical_forms() -> BTreeSet<Pattern> {
    pattern_set(&UNAVOIDABLE)
}

/// Whether some factor of `p` is equivalent to a member of `s2`.
fn has_2_avoidable_factor(p: &Pattern, s2: &BTreeSet<Pattern>) -> bool {
    factors(p).iter().any(|u| s2.contains(&canonical(u)))
}

/// Avoidability index by lookup in the classification sets.
///
/// Unavoidable iff the canonical form is a prefix of `xyx` or `xyx^R`;
/// otherwise index 2 iff some factor is equivalent to a member of S2, and
/// index 3 else.
pub fn classify(p: &Pattern) -> AvoidabilityIndex {
    if unavoidable_canonical_forms().contains(&canonical(p)) {
        AvoidabilityIndex::Unavoidable
    } else if has_2_avoidable_factor(p, &s2()) {
        AvoidabilityIndex::Index2
    } else {
        AvoidabilityIndex::Index3
    }
}

/// Canonical patterns of length `n` with no factor equivalent to a member of S2.
///
/// Built by the recurrence: every member is `r·a` for `r` in the class of a
/// member of the previous table.
pub fn compute_a(n: usize) -> BTreeSet<Pattern> {
    compute_a_tables(n).pop().expect("table 0 always present")
}

/// Tables `A_0 ..= A_max`.
pub fn compute_a_tables(max: usize) -> Vec<BTreeSet<Pattern>> {
    let s2 = s2();
    let mut tables = vec![BTreeSet::from([Pattern::empty()])];
    for _ in 0..max {
        let prev = tables.last().expect("non-empty");
        let next = prev
            .iter()
            .flat_map(equivalence_class)
            .flat_map(|r| Symbol::ALL.map(|a| r.with(a)))
            .filter(|q| canonical(q) == *q && !has_2_avoidable_factor(q, &s2))
            .collect();
        tables.push(next);
    }
    tables
}

/// Outcome of a tree search for long avoiding words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BacktrackReport {
    pub pattern: Pattern,
    pub alphabet: usize,
    /// The whole tree of avoiding words lies below `depth_limit`.
    pub terminated: bool,
    /// The node budget ran out before either outcome was settled.
    pub budget_exhausted: bool,
    pub nodes_visited: u64,
    pub longest_word_length: usize,
    pub longest_word: Word,
    pub depth_limit: usize,
}

/// Order in which the children of a node are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildOrder {
    Ascending,
    Descending,
    /// A fresh pseudo-random permutation at every node, from this seed.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BacktrackOptions {
    /// Fix the first letter to 0. Sound because renaming letters preserves avoidance.
    pub symmetry_reduction: bool,
    pub child_order: ChildOrder,
    /// Give up after this many accepted nodes. The report is then neither
    /// terminated nor at the depth limit.
    pub node_budget: Option<u64>,
}

impl Default for BacktrackOptions {
    fn default() -> Self {
        BacktrackOptions {
            symmetry_reduction: true,
            child_order: ChildOrder::Ascending,
            node_budget: None,
        }
    }
}

pub const DEFAULT_DEPTH_BINARY: usize = 400;
pub const DEFAULT_DEPTH_TERNARY: usize = 60;

/// Depth-first search of the tree of words over `T_k` avoiding `p`.
pub fn prove_k_unavoidable(p: &Pattern, k: usize, depth_limit: usize) -> Result<BacktrackReport> {
    prove_k_unavoidable_with(p, k, depth_limit, BacktrackOptions::default())
}

pub fn prove_k_unavoidable_with(
    p: &Pattern,
    k: usize,
    depth_limit: usize,
    options: BacktrackOptions,
) -> Result<BacktrackReport> {
    let compiled = CompiledPattern::new(p)?;
    let rng = match options.child_order {
        ChildOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut search = TreeSearch {
        pattern: &compiled,
        k: k as u8,
        depth_limit,
        order: options.child_order,
        rng,
        budget: options.node_budget.unwrap_or(u64::MAX),
        word: Vec::with_capacity(depth_limit),
        longest: Vec::new(),
        nodes: 0,
        stop: None,
    };
    let roots: Vec<u8> = if options.symmetry_reduction {
        vec![0]
    } else {
        search.children()
    };
    for root in roots {
        if search.visit(root) {
            break;
        }
    }
    Ok(BacktrackReport {
        pattern: p.clone(),
        alphabet: k,
        terminated: search.stop.is_none(),
        budget_exhausted: search.stop == Some(Stop::Budget),
        nodes_visited: search.nodes,
        longest_word_length: search.longest.len(),
        longest_word: Word::from_letters(search.longest, k),
        depth_limit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    DepthReached,
    Budget,
}

struct TreeSearch<'a> {
    pattern: &'a CompiledPattern,
    k: u8,
    depth_limit: usize,
    order: ChildOrder,
    rng: Option<ChaCha8Rng>,
    budget: u64,
    word: Vec<u8>,
    longest: Vec<u8>,
    nodes: u64,
    stop: Option<Stop>,
}

impl TreeSearch<'_> {
    fn children(&mut self) -> Vec<u8> {
        let mut letters: Vec<u8> = (0..self.k).collect();
        match self.order {
            ChildOrder::Ascending => {}
            ChildOrder::Descending => letters.reverse(),
            ChildOrder::Shuffled(_) => {
                letters.shuffle(self.rng.as_mut().expect("seeded for shuffled order"))
            }
        }
        letters
    }

    /// Appends `letter` and explores below it. Returns true once the search
    /// must stop.
    fn visit(&mut self, letter: u8) -> bool {
        if self.depth_limit == 0 {
            self.stop = Some(Stop::DepthReached);
            return true;
        }
        self.word.push(letter);
        if !self.pattern.ends_with_instance(&self.word) {
            self.nodes += 1;
            if self.word.len() > self.longest.len() {
                self.longest.clone_from(&self.word);
            }
            if self.word.len() >= self.depth_limit {
                self.stop = Some(Stop::DepthReached);
            } else if self.nodes >= self.budget {
                self.stop = Some(Stop::Budget);
            } else {
                for child in self.children() {
                    if self.visit(child) {
                        break;
                    }
                }
            }
        }
        self.word.pop();
        self.stop.is_some()
    }
}

/// Outcome of [`search_avoider`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AvoiderSearch {
    /// An avoiding word of the requested length.
    Found(Word),
    /// The tree of avoiding words is finite; the longest has this length.
    Exhausted { longest: usize },
    /// Every attempt ran out of budget.
    Inconclusive { attempts: usize },
}

impl AvoiderSearch {
    pub fn found(&self) -> Option<&Word> {
        match self {
            AvoiderSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Looks for a word of length `len` over `T_k` avoiding `p`.
///
/// Attempts, each limited to `node_budget` accepted nodes:
///
/// 1. lexicographic DFS for `p`; if it exhausts the tree the answer is settled,
/// 2. lexicographic DFS for each proper factor `u` of `p`, shortest first,
///    since a word avoiding `u` avoids `p`,
/// 3. DFS for `p` with shuffled child order, seeds `1..=restarts`.
///
/// A word found through a factor is re-checked against `p` before it is returned.
pub fn search_avoider(
    p: &Pattern,
    k: usize,
    len: usize,
    node_budget: u64,
    restarts: u64,
) -> Result<AvoiderSearch> {
    let budgeted = |q: &Pattern, order| {
        let options = BacktrackOptions {
            symmetry_reduction: true,
            child_order: order,
            node_budget: Some(node_budget),
        };
        prove_k_unavoidable_with(q, k, len, options)
    };
    let reached = |r: &BacktrackReport| !r.terminated && !r.budget_exhausted;

    let first = budgeted(p, ChildOrder::Ascending)?;
    if first.terminated {
        return Ok(AvoiderSearch::Exhausted {
            longest: first.longest_word_length,
        });
    }
    if reached(&first) {
        return Ok(AvoiderSearch::Found(first.longest_word));
    }
    let mut attempts = 1;
    let mut proper: Vec<Pattern> = factors(p)
        .into_iter()
        .filter(|u| u.len() < p.len())
        .collect();
    proper.sort_by_key(Pattern::len);
    for u in &proper {
        attempts += 1;
        let r = budgeted(u, ChildOrder::Ascending)?;
        if reached(&r)
            && CompiledPattern::new(p)?
                .find(&r.longest_word, usize::MAX, usize::MAX)
                .is_none()
        {
            return Ok(AvoiderSearch::Found(r.longest_word));
        }
    }
    for seed in 1..=restarts {
        attempts += 1;
        let r = budgeted(p, ChildOrder::Shuffled(seed))?;
        if reached(&r) {
            return Ok(AvoiderSearch::Found(r.longest_word));
        }
    }
    Ok(AvoiderSearch::Inconclusive { attempts })
}

/// Unordered edge of the pattern graph; endpoints stored in symbol order.
pub type Edge = (Symbol, Symbol);

/// Graph on the four pattern symbols with an edge `{a^R, b}` for every
/// length-two factor `ab` of the source pattern. Edges form a multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternGraph {
    pub edges: Vec<Edge>,
}

impl PatternGraph {
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }

    pub fn has_edge(&self, a: Symbol, b: Symbol) -> bool {
        let e = if a <= b { (a, b) } else { (b, a) };
        self.edges.contains(&e)
    }

    fn adjacency(&self) -> [[bool; 4]; 4] {
        let mut adj = [[false; 4]; 4];
        for &(a, b) in &self.edges {
            adj[a.index()][b.index()] = true;
            adj[b.index()][a.index()] = true;
        }
        adj
    }
}

pub fn build_graph(p: &Pattern) -> PatternGraph {
    let mut edges: Vec<Edge> = p
        .symbols()
        .windows(2)
        .map(|ab| {
            let (u, v) = (ab[0].reverse_mark(), ab[1]);
            if u <= v {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    edges.sort();
    PatternGraph { edges }
}

/// Result of trying to 2-colour a pattern graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Bipartition {
    /// Colour of each symbol, indexed by [`Symbol::index`].
    Coloring([u8; 4]),
    /// A closed walk `v0 v1 .. vm` with `v0 == vm` and an odd number `m` of edges.
    OddCycle(Vec<Symbol>),
}

impl Bipartition {
    pub fn coloring(&self) -> Option<[u8; 4]> {
        match self {
            Bipartition::Coloring(c) => Some(*c),
            Bipartition::OddCycle(_) => None,
        }
    }
}

pub fn bipartite_check(g: &PatternGraph) -> Bipartition {
    let adj = g.adjacency();
    if let Some(v) = Symbol::ALL.into_iter().find(|v| adj[v.index()][v.index()]) {
        return Bipartition::OddCycle(vec![v, v]);
    }
    let mut color: [Option<u8>; 4] = [None; 4];
    let mut parent: [Option<usize>; 4] = [None; 4];
    for root in 0..4 {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in 0..4 {
                if !adj[u][v] {
                    continue;
                }
                match color[v] {
                    None => {
                        color[v] = Some(1 - color[u].expect("coloured"));
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                    Some(c) if c == color[u].expect("coloured") => {
                        return Bipartition::OddCycle(odd_walk(&parent, u, v));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Bipartition::Coloring(color.map(|c| c.expect("every vertex coloured")))
}

/// Tree path root..u, edge u-v, tree path v..root.
fn odd_walk(parent: &[Option<usize>; 4], u: usize, v: usize) -> Vec<Symbol> {
    let path_to_root = |mut x: usize| {
        let mut path = vec![x];
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let mut walk: Vec<usize> = path_to_root(u);
    walk.reverse();
    walk.extend(path_to_root(v));
    walk.into_iter().map(|i| Symbol::ALL[i]).collect()
}

/// Builds an instance of `p` inside `(01)^ω` from a 2-colouring of its graph.
///
/// `X` is the shortest word starting with the colour of `x` and ending with
/// the colour of `x^R`; `Y` likewise. Returns `None` when the graph has an
/// odd cycle, in which case no instance exists.
pub fn instance_in_alternating(p: &Pattern) -> Result<Option<InstanceWitness>> {
    let Some(c) = bipartite_check(&build_graph(p)).coloring() else {
        return Ok(None);
    };
    let image = |a: Symbol| {
        let (first, last) = (c[a.index()], c[a.reverse_mark().index()]);
        let letters = if first == last {
            vec![first]
        } else {
            vec![first, last]
        };
        Word::binary(letters)
    };
    let x = p.uses_x().then(|| image(Symbol::X));
    let y = p.uses_y().then(|| image(Symbol::Y));
    let img = apply_morphism(p, x.as_ref(), y.as_ref())?;
    let start = img.letters().first().map_or(0, |&l| l as usize);
    let host = alternating_prefix(start + img.len());
    assert_eq!(
        &host.letters()[start..],
        img.letters(),
        "coloured image of {p} is not a factor of (01)^ω"
    );
    Ok(Some(InstanceWitness { start, x, y }))
}
