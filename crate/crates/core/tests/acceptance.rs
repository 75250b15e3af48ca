//! The ten acceptance criteria, one line of output each.
//!
//! Run with `cargo test -p revpat --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use revpat::engine::{
    classify, compute_a_tables, prove_k_unavoidable, s2, s3, unavoidable_canonical_forms,
    AvoidabilityIndex,
};
use revpat::matcher::avoids;
use revpat::pattern::{equivalence_class, parse_pattern, Pattern};
use revpat::sequences::GeneratorConfig;
use revpat::verify::{
    bound_factor_length, vf_alternating_graph, vf_classifier_oracle, vf_covering_prefix,
    vf_f_avoids_xyxyxr, vf_g_avoidance, vf_odd_factor_preimage, vf_pigeonhole, vf_square_limited,
    vf_w1, vf_w2, vf_w3, vf_w4, VerificationReport,
};
use revpat::Word;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn pat(s: &str) -> Pattern {
    parse_pattern(s).unwrap()
}

fn set(items: &[&str]) -> BTreeSet<Pattern> {
    items.iter().map(|s| pat(s)).collect()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let elapsed = start.elapsed();
    if elapsed > limit {
        return Err(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Ok(())
}

fn require(report: &VerificationReport) -> Result<(), String> {
    if report.passed {
        Ok(())
    } else {
        Err(format!(
            "{} failed: {} (clauses {:?})",
            report.check_id,
            report
                .counterexample
                .as_deref()
                .unwrap_or("no counterexample"),
            report.clauses
        ))
    }
}

fn classifier_table() -> Outcome {
    let start = Instant::now();
    let groups = [
        (s2(), AvoidabilityIndex::Index2, 17),
        (s3(), AvoidabilityIndex::Index3, 4),
        (
            unavoidable_canonical_forms(),
            AvoidabilityIndex::Unavoidable,
            5,
        ),
    ];
    let mut checked = 0;
    for (members, expected, size) in groups {
        if members.len() != size {
            return Err(format!(
                "expected {size} members for {expected}, got {}",
                members.len()
            ));
        }
        for p in &members {
            for q in equivalence_class(p) {
                let got = classify(&q);
                if got != expected {
                    return Err(format!(
                        "{q} (class of {p}) classified {got}, expected {expected}"
                    ));
                }
                checked += 1;
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{checked} patterns in {:?}", start.elapsed()))
}

fn a_tables() -> Outcome {
    let start = Instant::now();
    let expected = [
        set(&[""]),
        set(&["x"]),
        set(&["xx", "xy"]),
        set(&["xxy", "xyx", "xyX"]),
        set(&["xxyx", "xxyX", "xxyy", "xyxy", "xyxY", "xyXY", "xyyx"]),
        set(&["xxyxx", "xxyxy", "xxyXX"]),
        set(&[]),
    ];
    let tables = compute_a_tables(6);
    if tables.len() != 7 {
        return Err(format!("expected 7 tables, got {}", tables.len()));
    }
    for (n, (got, want)) in tables.iter().zip(&expected).enumerate() {
        if got != want {
            return Err(format!("A_{n} = {got:?}, expected {want:?}"));
        }
    }
    within(Duration::from_secs(5), start)?;
    let sizes: Vec<usize> = tables.iter().map(BTreeSet::len).collect();
    Ok(format!("sizes {sizes:?}"))
}

/// Longest binary word avoiding each pattern, recorded from the first run.
const LONGEST_BINARY_AVOIDER: [(&str, usize); 16] = [
    ("x", 0),
    ("xx", 3),
    ("xy", 1),
    ("xxy", 4),
    ("xyx", 4),
    ("xyX", 4),
    ("xxyx", 9),
    ("xxyX", 9),
    ("xxyy", 11),
    ("xyxy", 18),
    ("xyxY", 13),
    ("xyXY", 10),
    ("xyyx", 10),
    ("xxyxx", 18),
    ("xxyxy", 38),
    ("xxyXX", 18),
];

fn certificates() -> Outcome {
    let start = Instant::now();
    let patterns: Vec<Pattern> = compute_a_tables(6)
        .into_iter()
        .flatten()
        .filter(|p| !p.is_empty())
        .collect();
    if patterns.len() != LONGEST_BINARY_AVOIDER.len() {
        return Err(format!("{} patterns, expected 16", patterns.len()));
    }
    for (text, longest) in LONGEST_BINARY_AVOIDER {
        let p = pat(text);
        if !patterns.contains(&p) {
            return Err(format!("{p} is not in the A tables"));
        }
        let report = prove_k_unavoidable(&p, 2, 400).map_err(|e| e.to_string())?;
        if !report.terminated {
            return Err(format!("{p}: binary tree not finite by depth 400"));
        }
        if report.longest_word_length != longest {
            return Err(format!(
                "{p}: longest avoider {} != {longest}",
                report.longest_word_length
            ));
        }
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("16 patterns terminate in {:?}", start.elapsed()))
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let report = vf_classifier_oracle(4).map_err(|e| e.to_string())?;
    require(&report)?;
    let patterns = &report.parameters["patterns"];
    if patterns != 340 {
        return Err(format!("checked {patterns} patterns, expected 340"));
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!(
        "340 patterns, {} classes in {:?}",
        report.parameters["classes"],
        start.elapsed()
    ))
}

fn alternating() -> Outcome {
    let start = Instant::now();
    let report = vf_alternating_graph(4).map_err(|e| e.to_string())?;
    require(&report)?;
    if report.parameters["patterns"] != 336 {
        return Err(format!(
            "checked {} patterns, expected 336",
            report.parameters["patterns"]
        ));
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("336 patterns in {:?}", start.elapsed()))
}

fn square_limited() -> Outcome {
    let start = Instant::now();
    let report = vf_square_limited(2000, &GeneratorConfig::default()).map_err(|e| e.to_string())?;
    require(&report)?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("n = 2000 in {:?}", start.elapsed()))
}

fn ternary_constructions() -> Outcome {
    let start = Instant::now();
    let cfg = GeneratorConfig::default();
    require(&vf_g_avoidance(400, &cfg).map_err(|e| e.to_string())?)?;
    require(&vf_f_avoids_xyxyxr(400, &cfg).map_err(|e| e.to_string())?)?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("g and f at n = 400 in {:?}", start.elapsed()))
}

fn morphic_searches() -> Outcome {
    let start = Instant::now();
    let reports = [vf_w1(), vf_w2(), vf_w3(), vf_w4()];
    let mut failures = Vec::new();
    for report in reports {
        let report = report.map_err(|e| e.to_string())?;
        if let Err(e) = require(&report) {
            failures.push(e);
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("w1-w4 in {:?}", start.elapsed()))
}

fn arithmetic_anchors() -> Outcome {
    let start = Instant::now();
    let a = bound_factor_length(7, 11);
    if a >= 7 {
        return Err(format!("bound_factor_length(7, 11) = {a}"));
    }
    let b = bound_factor_length(30, 11);
    if b != 10 {
        return Err(format!("bound_factor_length(30, 11) = {b}"));
    }
    let covering = vf_covering_prefix(6).map_err(|e| e.to_string())?;
    require(&covering)?;
    if covering.searched_bound["reference_prefix"] != 7 * 256 {
        return Err("reference prefix is not 7 * 2^8".into());
    }
    require(&vf_odd_factor_preimage(512).map_err(|e| e.to_string())?)?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "bounds {a} and {b}, factor containment n = 0..6, odd factors of 512"
    ))
}

fn pigeonhole() -> Outcome {
    let start = Instant::now();
    let report = vf_pigeonhole(2).map_err(|e| e.to_string())?;
    require(&report)?;
    if report.searched_bound["full_words"] != 32 {
        return Err("full enumeration did not cover 32 words".into());
    }
    let w: Word = "0011".parse().unwrap();
    if !avoids(&w, &pat("xyx")).map_err(|e| e.to_string())? {
        return Err("0011 contains xyx".into());
    }
    within(Duration::from_secs(1), start)?;
    Ok("32 words of length 5; 0011 avoids xyx".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("classifier table", classifier_table),
        ("A tables", a_tables),
        ("binary certificates", certificates),
        ("oracle cross-validation", oracle),
        ("alternating word and bipartite graphs", alternating),
        ("square-limited generator", square_limited),
        (
            "ternary and square-limited constructions",
            ternary_constructions,
        ),
        ("morphic word searches", morphic_searches),
        ("arithmetic anchors", arithmetic_anchors),
        ("pigeonhole", pigeonhole),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:2} FAIL {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
