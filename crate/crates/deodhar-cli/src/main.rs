//! Command-line front end for the deodhar library.
//!
//! Six subcommands mirror the library entry points: `kl` and `mu` evaluate
//! Kazhdan-Lusztig data for a pair x, w; `deodhar` classifies a single
//! element; `verify01` sweeps a whole group and checks that mu-coefficients
//! of Deodhar targets stay within {0, 1}; `heap` renders the coalesced,
//! decorated heap of a word; `mumasks` lists the mu-masks on a reduced word
//! that evaluate to a given element.
//!
//! Exit codes: 0 on success (including a PASS verdict), 1 when a
//! verification sweep reports violations, 2 on usage or input errors.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use deodhar::coxeter::element_from_word;
use deodhar::heaps::{coalesce, decorate, defect_graph, heap_from_word, render_ascii, strings};
use deodhar::masks::{is_deodhar, mu_masks};
use deodhar::{
    build_system, kl_deodhar, kl_recursive, mu, verify_zero_one, CoxeterSystem, Element, Family,
    Mask, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "deodhar",
    version,
    about = "Mask calculus for Kazhdan-Lusztig polynomials of Deodhar elements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Kazhdan-Lusztig polynomial P(x, w)
    Kl(PairArgs),
    /// Print the mu-coefficient mu(x, w)
    Mu(PairArgs),
    /// Report whether w is a Deodhar element
    Deodhar(SingleArgs),
    /// Verify that mu(x, w) is 0 or 1 for every Deodhar w in a group
    Verify01(VerifyArgs),
    /// Render the coalesced decorated heap of a word
    Heap(HeapArgs),
    /// List the mu-masks on a reduced word that evaluate to x
    Mumasks(MuMasksArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SystemArgs {
    /// Weyl family: A, B, D, E, F, or G
    #[arg(long = "type", value_name = "FAMILY", default_value = "A")]
    family: String,

    /// Rank; inferred from the element input when omitted
    #[arg(long, value_name = "N")]
    rank: Option<usize>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    system: SystemArgs,

    /// w in signed one-line notation ("3 4 1 2"), or "id"
    #[arg(long, value_name = "ONE-LINE", allow_hyphen_values = true)]
    w: Option<String>,

    /// w as a word in generator labels ("0" is valid in type B, "1~" in type D)
    #[arg(long, value_name = "WORD", conflicts_with = "w")]
    w_word: Option<String>,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    target: SingleArgs,

    /// x in signed one-line notation, or "id"
    #[arg(long, value_name = "ONE-LINE", allow_hyphen_values = true)]
    x: Option<String>,

    /// x as a word in generator labels
    #[arg(long, value_name = "WORD", conflicts_with = "x")]
    x_word: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,

    /// Check only Deodhar targets (pass false to sweep every element)
    #[arg(long, value_name = "BOOL", default_value_t = true, action = ArgAction::Set)]
    deodhar_only: bool,

    /// Skip target elements longer than this
    #[arg(long, value_name = "N")]
    max_length: Option<usize>,

    /// Number of worker threads (output is identical for any value)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,

    /// Confirm a sweep that is beyond desk scale (required for type E)
    #[arg(long)]
    force_long: bool,
}

#[derive(Args)]
struct HeapArgs {
    #[command(flatten)]
    system: SystemArgs,

    /// The word, in generator labels
    #[arg(long, value_name = "WORD")]
    word: String,

    /// Mask bits over the word, e.g. "1010" (default: all ones)
    #[arg(long, value_name = "BITS")]
    mask: Option<String>,

    /// Append the string overlay's top and bottom boundary labels
    #[arg(long)]
    strings: bool,

    /// Append the defect graph (vertices are 1-based word positions)
    #[arg(long)]
    defect_graph: bool,
}

#[derive(Args)]
struct MuMasksArgs {
    #[command(flatten)]
    system: SystemArgs,

    /// The reduced word of w, in generator labels
    #[arg(long, value_name = "WORD")]
    word: String,

    /// x in signed one-line notation, or "id"
    #[arg(long, value_name = "ONE-LINE", allow_hyphen_values = true)]
    x: Option<String>,

    /// x as a word in generator labels
    #[arg(long, value_name = "WORD", conflicts_with = "x")]
    x_word: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Kl(args) => run_kl(args),
        Command::Mu(args) => run_mu(args),
        Command::Deodhar(args) => run_deodhar(args),
        Command::Verify01(args) => run_verify01(args),
        Command::Heap(args) => run_heap(args),
        Command::Mumasks(args) => run_mumasks(args),
    }
}

/// One element given on the command line, before a system exists to parse it.
struct ElementSpec {
    one_line: Option<String>,
    word: Option<String>,
}

impl ElementSpec {
    fn new(one_line: Option<String>, word: Option<String>, name: &str) -> Result<ElementSpec, String> {
        if one_line.is_none() && word.is_none() {
            return Err(format!("missing {name}: pass --{name} or --{name}-word"));
        }
        Ok(ElementSpec { one_line, word })
    }

    /// The smallest rank this input fits in, when the notation determines one.
    fn inferred_rank(&self, family: Family) -> Result<Option<usize>, String> {
        if let Some(line) = &self.one_line {
            if line.trim() == "id" {
                return Ok(None);
            }
            let entries = line.split_whitespace().count();
            return Ok(match family {
                Family::A => Some(entries.saturating_sub(1)),
                Family::B | Family::D => Some(entries),
                Family::E | Family::F | Family::G => None,
            });
        }
        word_rank(family, self.word.as_deref().unwrap_or(""))
    }

    fn resolve(&self, system: &Arc<CoxeterSystem>) -> Result<Element, String> {
        if let Some(line) = &self.one_line {
            if line.trim() == "id" {
                return Ok(Element::identity(system));
            }
            let entries: Vec<i32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| format!("bad one-line entry {t:?} (expected a signed integer)"))
                })
                .collect::<Result<_, _>>()?;
            return Element::from_one_line(system, entries).map_err(|e| e.to_string());
        }
        let text = self.word.as_ref().expect("one of the two inputs is set");
        let word = system.parse_word(text).map_err(|e| e.to_string())?;
        let (element, _) = element_from_word(system, &word).map_err(|e| e.to_string())?;
        Ok(element)
    }
}

/// Infers a rank from the generator labels appearing in a word.
fn word_rank(family: Family, text: &str) -> Result<Option<usize>, String> {
    match family {
        Family::G => return Ok(Some(2)),
        Family::F => return Ok(Some(4)),
        Family::E => return Ok(None),
        _ => {}
    }
    let mut max_label: Option<usize> = None;
    let mut has_fork = false;
    for token in text.split_whitespace() {
        if token == "1~" {
            has_fork = true;
            continue;
        }
        let label: usize = token
            .parse()
            .map_err(|_| format!("bad generator token {token:?}"))?;
        max_label = Some(max_label.map_or(label, |m| m.max(label)));
    }
    Ok(match family {
        Family::A => max_label,
        Family::B => max_label.map(|m| m + 1),
        Family::D => match max_label {
            Some(m) => Some((m + 1).max(2)),
            None if has_fork => Some(2),
            None => None,
        },
        Family::E | Family::F | Family::G => unreachable!("handled above"),
    })
}

fn parse_family(token: &str) -> Result<Family, String> {
    token
        .parse()
        .map_err(|_| format!("unknown family {token:?} (expected A, B, D, E, F, or G)"))
}

/// Resolves the family and rank from flags plus whatever the inputs imply.
fn build_from(system_args: &SystemArgs, specs: &[&ElementSpec]) -> Result<Arc<CoxeterSystem>, String> {
    let family = parse_family(&system_args.family)?;
    let mut rank = system_args.rank;
    if rank.is_none() {
        for spec in specs {
            if let Some(r) = spec.inferred_rank(family)? {
                rank = Some(rank.map_or(r, |have: usize| have.max(r)));
            }
        }
    }
    let rank = rank.ok_or_else(|| rank_required_message(family))?;
    build_system(family, rank).map_err(|e| e.to_string())
}

fn rank_required_message(family: Family) -> String {
    match family {
        Family::E => "rank is required for type E (pass --rank 6, 7, or 8)".to_string(),
        _ => "rank is required (pass --rank, or an element it can be inferred from)".to_string(),
    }
}

/// Canonical display for an element in reports: "id" or its one-line/word form.
fn display_element(x: &Element) -> String {
    if x.is_identity() {
        "id".to_string()
    } else {
        x.to_string()
    }
}

fn run_kl(args: PairArgs) -> Result<ExitCode, String> {
    let w_spec = ElementSpec::new(args.target.w, args.target.w_word, "w")?;
    let x_spec = ElementSpec::new(args.x, args.x_word, "x")?;
    let system = build_from(&args.target.system, &[&w_spec, &x_spec])?;
    let w = w_spec.resolve(&system)?;
    let x = x_spec.resolve(&system)?;
    let poly = if is_deodhar(&w) {
        kl_deodhar(&x, &w).map_err(|e| e.to_string())?
    } else {
        kl_recursive(&x, &w)
    };
    match args.target.system.format {
        Format::Text => println!("{poly}"),
        Format::Json => println!(
            "{}",
            json!({
                "command": "kl",
                "system": system.descriptor(),
                "x": display_element(&x),
                "w": display_element(&w),
                "polynomial": poly.to_string(),
                "coefficients": poly.coefficients(),
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_mu(args: PairArgs) -> Result<ExitCode, String> {
    let w_spec = ElementSpec::new(args.target.w, args.target.w_word, "w")?;
    let x_spec = ElementSpec::new(args.x, args.x_word, "x")?;
    let system = build_from(&args.target.system, &[&w_spec, &x_spec])?;
    let w = w_spec.resolve(&system)?;
    let x = x_spec.resolve(&system)?;
    let value = mu(&x, &w);
    match args.target.system.format {
        Format::Text => println!("{value}"),
        Format::Json => println!(
            "{}",
            json!({
                "command": "mu",
                "system": system.descriptor(),
                "x": display_element(&x),
                "w": display_element(&w),
                "mu": value,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_deodhar(args: SingleArgs) -> Result<ExitCode, String> {
    let w_spec = ElementSpec::new(args.w, args.w_word, "w")?;
    let system = build_from(&args.system, &[&w_spec])?;
    let w = w_spec.resolve(&system)?;
    let answer = is_deodhar(&w);
    match args.system.format {
        Format::Text => println!("{answer}"),
        Format::Json => println!(
            "{}",
            json!({
                "command": "deodhar",
                "system": system.descriptor(),
                "w": display_element(&w),
                "length": w.length(),
                "deodhar": answer,
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify01(args: VerifyArgs) -> Result<ExitCode, String> {
    let family = parse_family(&args.system.family)?;
    if family == Family::E && !args.force_long {
        return Err(
            "a type E sweep can run far beyond desk scale; pass --force-long to run it".to_string(),
        );
    }
    let rank = args
        .system
        .rank
        .or(match family {
            Family::G => Some(2),
            Family::F => Some(4),
            _ => None,
        })
        .ok_or_else(|| rank_required_message(family))?;
    let system = build_system(family, rank).map_err(|e| e.to_string())?;
    let options = VerifyOptions {
        deodhar_only: args.deodhar_only,
        max_length: args.max_length,
        jobs: args.jobs,
    };
    let report = verify_zero_one(&system, &options);
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    match args.system.format {
        Format::Text => {
            // Keep the elapsed footer as the very last line so that golden
            // comparisons can strip it without touching the data section.
            let text = report.to_text();
            let (body, footer) = text
                .rsplit_once('\n')
                .filter(|(_, tail)| tail.starts_with("elapsed_ms="))
                .map_or((text.as_str(), None), |(body, tail)| (body, Some(tail)));
            println!("{body}");
            println!(
                "deodhar={} violations={} {verdict}",
                report.deodhar_count,
                report.violations.len()
            );
            if let Some(footer) = footer {
                println!("{footer}");
            }
        }
        Format::Json => {
            let histogram: serde_json::Map<String, serde_json::Value> = report
                .mu_histogram
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            let violations: Vec<serde_json::Value> = report
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "x": v.x,
                        "w": v.w,
                        "mask_route": v.mask_route,
                        "recursion_route": v.recursion_route,
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "command": "verify01",
                    "system": report.system,
                    "elements": report.elements,
                    "deodhar": report.deodhar_count,
                    "targets": report.targets_checked,
                    "pairs": report.pairs_checked,
                    "recursion_only_pairs": report.recursion_only_pairs,
                    "mu_histogram": histogram,
                    "violations": violations,
                    "passed": report.passed(),
                    "elapsed_ms": report.elapsed.as_millis() as u64,
                })
            );
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_heap(args: HeapArgs) -> Result<ExitCode, String> {
    let family = parse_family(&args.system.family)?;
    let rank = match args.system.rank {
        Some(r) => r,
        None => word_rank(family, &args.word)?.ok_or_else(|| rank_required_message(family))?,
    };
    let system = build_system(family, rank).map_err(|e| e.to_string())?;
    let word = system.parse_word(&args.word).map_err(|e| e.to_string())?;
    let mask = match &args.mask {
        Some(bits) => Mask::parse(bits).map_err(|e| e.to_string())?,
        None => Mask::all_ones(word.len()),
    };
    let heap = coalesce(&heap_from_word(&system, &word).map_err(|e| e.to_string())?);
    let decorated = decorate(&heap, &mask).map_err(|e| e.to_string())?;
    let diagram = render_ascii(&decorated);
    let overlay = if args.strings {
        Some(strings(&decorated).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let graph = if args.defect_graph {
        Some(defect_graph(&decorated).map_err(|e| e.to_string())?)
    } else {
        None
    };
    match args.system.format {
        Format::Text => {
            println!("{diagram}");
            if let Some(d) = &overlay {
                println!("strings top: {}", join_labels(&d.top_assignment));
                println!("strings bottom: {}", join_labels(&d.bottom_assignment));
            }
            if let Some(g) = &graph {
                let vertices: Vec<String> =
                    g.vertices.iter().map(|v| (v + 1).to_string()).collect();
                let edges: Vec<String> = g
                    .edges
                    .iter()
                    .map(|&(a, b)| format!("({},{})", a + 1, b + 1))
                    .collect();
                println!(
                    "defect graph: v={{{}}}, e={{{}}}",
                    vertices.join(","),
                    edges.join(",")
                );
            }
        }
        Format::Json => {
            let mut doc = json!({
                "command": "heap",
                "system": system.descriptor(),
                "word": system.format_word(&word),
                "mask": mask.to_string(),
                "diagram": diagram.lines().collect::<Vec<_>>(),
            });
            if let Some(d) = &overlay {
                doc["strings"] = json!({
                    "top": d.top_assignment,
                    "bottom": d.bottom_assignment,
                });
            }
            if let Some(g) = &graph {
                doc["defect_graph"] = json!({
                    "vertices": g.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "edges": g
                        .edges
                        .iter()
                        .map(|&(a, b)| vec![a + 1, b + 1])
                        .collect::<Vec<_>>(),
                });
            }
            println!("{doc}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_mumasks(args: MuMasksArgs) -> Result<ExitCode, String> {
    let family = parse_family(&args.system.family)?;
    let x_spec = ElementSpec::new(args.x, args.x_word, "x")?;
    let mut rank = args.system.rank;
    if rank.is_none() {
        for candidate in [word_rank(family, &args.word)?, x_spec.inferred_rank(family)?] {
            if let Some(r) = candidate {
                rank = Some(rank.map_or(r, |have: usize| have.max(r)));
            }
        }
    }
    let rank = rank.ok_or_else(|| rank_required_message(family))?;
    let system = build_system(family, rank).map_err(|e| e.to_string())?;
    let word = system.parse_word(&args.word).map_err(|e| e.to_string())?;
    let x = x_spec.resolve(&system)?;
    let masks = mu_masks(&system, &word, &x).map_err(|e| e.to_string())?;
    match args.system.format {
        Format::Text => {
            for mask in &masks {
                println!("{mask}");
            }
        }
        Format::Json => println!(
            "{}",
            json!({
                "command": "mumasks",
                "system": system.descriptor(),
                "word": system.format_word(&word),
                "x": display_element(&x),
                "mu_masks": masks.iter().map(Mask::to_string).collect::<Vec<_>>(),
                "count": masks.len(),
            })
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn join_labels(labels: &[i32]) -> String {
    labels
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
