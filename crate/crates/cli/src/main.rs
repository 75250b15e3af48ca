use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use revpat::engine::{bipartite_check, build_graph, classify, prove_k_unavoidable, Bipartition};
use revpat::matcher::avoids;
use revpat::pattern::{canonical, equivalence_class, parse_pattern, Symbol};
use revpat::sequences::{sequence_prefix, GeneratorConfig, SequenceId};
use revpat::verify::{run_suite, SuiteParams};
use revpat::word::MAX_ALPHABET;

/// Avoidability of binary patterns with reversal.
///
/// Patterns are written over x, X, y, Y where X and Y stand for the reversals
/// x^R and y^R. Words are digit strings.
#[derive(Parser)]
#[command(name = "revpat", version)]
struct Cli {
    /// Print JSON instead of text, including for errors.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Avoidability index: 2, 3 or inf.
    Classify { pattern: String },
    /// Lexicographically least member of the equivalence class.
    Canon { pattern: String },
    /// Every member of the equivalence class, sorted.
    Class { pattern: String },
    /// Edges of the pattern graph.
    Graph {
        pattern: String,
        /// Also report a 2-colouring or an odd closed walk.
        #[arg(long)]
        check_bipartite: bool,
    },
    /// Prefix of a sequence: thue-morse, alternating, square-limited, g, w1, w2, w3, w4.
    Generate {
        seqid: String,
        #[arg(long)]
        length: usize,
        /// Lookahead of the square-limited generator.
        #[arg(long, default_value_t = 100)]
        lookahead: usize,
        /// Cache directory. Defaults to $REVPAT_CACHE, then ./cache.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Depth-first search for a word over K letters avoiding the pattern.
    Search {
        pattern: String,
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        target_length: usize,
        /// Depth of the search tree; at least the target length, which is the default.
        #[arg(long)]
        depth_limit: Option<usize>,
    },
    /// Run the verification suite.
    Verify {
        /// Run one check only.
        #[arg(long)]
        only: Option<String>,
        /// Overrides such as n=1000 or max-len=5.
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
    },
}

enum Failure {
    Usage(String),
    Verification(Value, String),
}

impl From<revpat::Error> for Failure {
    fn from(e: revpat::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let json_requested = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if json_requested => {
            println!("{}", json!({ "error": e.to_string().trim_end() }));
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            emit(cli.json, &out.json, &out.text);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(json, text)) => {
            emit(cli.json, &json, &text);
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            if cli.json {
                println!("{}", json!({ "error": message }));
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(2)
        }
    }
}

fn emit(json: bool, value: &Value, text: &str) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("json output")
        );
    } else {
        println!("{text}");
    }
}

fn cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("REVPAT_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"))
}

fn symbol_pair(a: Symbol, b: Symbol) -> String {
    format!("{}-{}", a.as_char(), b.as_char())
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Classify { pattern } => {
            let p = parse_pattern(&pattern)?;
            let index = classify(&p);
            Ok(Output {
                json: json!({ "pattern": p, "canonical": canonical(&p), "index": index.to_string() }),
                text: index.to_string(),
            })
        }
        Command::Canon { pattern } => {
            let p = parse_pattern(&pattern)?;
            let c = canonical(&p);
            Ok(Output {
                json: json!({ "pattern": p, "canonical": c }),
                text: c.to_string(),
            })
        }
        Command::Class { pattern } => {
            let p = parse_pattern(&pattern)?;
            let members: Vec<String> = equivalence_class(&p)
                .iter()
                .map(|q| q.to_string())
                .collect();
            Ok(Output {
                json: json!({ "pattern": p, "size": members.len(), "members": members }),
                text: members.join("\n"),
            })
        }
        Command::Graph {
            pattern,
            check_bipartite,
        } => {
            let p = parse_pattern(&pattern)?;
            let graph = build_graph(&p);
            let edges: Vec<String> = graph
                .edges
                .iter()
                .map(|&(a, b)| symbol_pair(a, b))
                .collect();
            let mut json = json!({ "pattern": p, "edges": edges });
            let mut text = edges.join("\n");
            if check_bipartite {
                let (value, line) = match bipartite_check(&graph) {
                    Bipartition::Coloring(c) => {
                        let colors: serde_json::Map<String, Value> = Symbol::ALL
                            .iter()
                            .map(|s| (s.as_char().to_string(), json!(c[s.index()])))
                            .collect();
                        let line = Symbol::ALL
                            .iter()
                            .map(|s| format!("{}={}", s.as_char(), c[s.index()]))
                            .collect::<Vec<_>>()
                            .join(" ");
                        (
                            json!({ "bipartite": true, "coloring": colors }),
                            format!("bipartite: {line}"),
                        )
                    }
                    Bipartition::OddCycle(walk) => {
                        let walk: String = walk.iter().map(|s| s.as_char()).collect();
                        (
                            json!({ "bipartite": false, "odd_cycle": walk }),
                            format!("odd cycle: {walk}"),
                        )
                    }
                };
                json["bipartition"] = value;
                if !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(&line);
            }
            Ok(Output { json, text })
        }
        Command::Generate {
            seqid,
            length,
            lookahead,
            cache,
        } => {
            let id: SequenceId = seqid.parse()?;
            if length == 0 {
                return Err(Failure::Usage("--length must be positive".into()));
            }
            if lookahead == 0 {
                return Err(Failure::Usage("--lookahead must be positive".into()));
            }
            let cfg = GeneratorConfig {
                lookahead,
                cache_path: Some(cache_dir(cache)),
            };
            let word = sequence_prefix(id, length, &cfg)?;
            Ok(Output {
                json: json!({ "sequence": id.name(), "length": length, "lookahead": lookahead, "word": word }),
                text: word.to_string(),
            })
        }
        Command::Search {
            pattern,
            alphabet,
            target_length,
            depth_limit,
        } => {
            let p = parse_pattern(&pattern)?;
            if p.is_empty() {
                return Err(Failure::Usage(
                    "the empty pattern occurs in every word".into(),
                ));
            }
            if !(1..=MAX_ALPHABET).contains(&alphabet) {
                return Err(Failure::Usage(format!(
                    "--alphabet must be between 1 and {MAX_ALPHABET}"
                )));
            }
            if target_length == 0 {
                return Err(Failure::Usage("--target-length must be positive".into()));
            }
            let depth = depth_limit.unwrap_or(target_length);
            if depth < target_length {
                return Err(Failure::Usage(format!(
                    "--depth-limit {depth} is below --target-length {target_length}"
                )));
            }
            let report = prove_k_unavoidable(&p, alphabet, depth)?;
            if report.longest_word_length >= target_length {
                let witness = report.longest_word.prefix(target_length);
                assert!(
                    avoids(&witness, &p)?,
                    "search returned a word containing the pattern"
                );
                return Ok(Output {
                    json: json!({
                        "pattern": p, "alphabet": alphabet, "depth_limit": depth,
                        "found": true, "witness": witness, "nodes_visited": report.nodes_visited,
                    }),
                    text: witness.to_string(),
                });
            }
            Ok(Output {
                json: json!({
                    "pattern": p, "alphabet": alphabet, "depth_limit": depth,
                    "found": false, "longest_word_length": report.longest_word_length,
                    "longest_word": report.longest_word, "nodes_visited": report.nodes_visited,
                }),
                text: format!(
                    "exhausted at depth {depth}: longest avoiding word has length {} ({})",
                    report.longest_word_length, report.longest_word
                ),
            })
        }
        Command::Verify { only, params } => {
            let params = SuiteParams::parse(&params)?;
            let reports = run_suite(only.as_deref(), &params, &GeneratorConfig::default())?;
            let text = reports
                .iter()
                .map(|r| {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    let mut line = format!("{status} {} ({} ms)", r.check_id, r.elapsed_ms);
                    if let Some(c) = &r.counterexample {
                        line.push_str(&format!(": {c}"));
                    }
                    line
                })
                .collect::<Vec<_>>()
                .join("\n");
            let json = serde_json::to_value(&reports).expect("reports serialize");
            if reports.iter().all(|r| r.passed) {
                Ok(Output { json, text })
            } else {
                Err(Failure::Verification(json, text))
            }
        }
    }
}
