use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use ata_core::channels::{build_reduction_ata, validate_encoding, EncodingReport};
use ata_core::decision::{check_contains_with, check_empty_with, check_universal_with, Report, Search};
use ata_core::syntax::{parse_ata, parse_lcs, parse_word, print_ata, ChannelProblem};
use ata_core::{accepts, Ata, SearchOptions, TimedWord};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ata", version, about = "One-clock alternating timed automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    report: Format,
    /// Time limit for decision procedures, in seconds.
    #[arg(long, global = true)]
    budget: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exit 0 if the automaton accepts the word, 1 otherwise.
    Member { automaton: PathBuf, word: PathBuf },
    /// Exit 0 if the language is empty, 1 with a witness otherwise.
    Empty { automaton: PathBuf },
    /// Exit 0 if every word is accepted, 1 with a counterexample otherwise.
    Universal { automaton: PathBuf },
    /// Exit 0 if L(left) is contained in L(right), 1 with a counterexample otherwise.
    Contains { left: PathBuf, right: PathBuf },
    /// Write the automaton accepting the computation encodings of a channel system.
    GenLcs {
        system: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a timed word against the encoding conditions of a channel system.
    ValidateEncoding { system: PathBuf, word: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_ata(path: &Path) -> Result<Ata> {
    parse_ata(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_word(path: &Path) -> Result<TimedWord> {
    parse_word(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_lcs(path: &Path) -> Result<ChannelProblem> {
    parse_lcs(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn options(budget: Option<f64>) -> Result<SearchOptions> {
    let opts = SearchOptions::default();
    Ok(match budget {
        None => opts,
        Some(s) => {
            let d = Duration::try_from_secs_f64(s).context("--budget must be a nonnegative number of seconds")?;
            opts.with_budget(d)
        }
    })
}

fn emit_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Print a decision result; `positive` is the verdict name when the search
/// finds nothing.
fn emit_search(search: &Search, format: Format, positive: &str, negative: &str) -> Result<u8> {
    let found = !search.verdict.is_empty();
    let report: Report = search.report(if found { negative } else { positive });
    match format {
        Format::Json => emit_json(&report)?,
        Format::Text => {
            println!("{}", report.verdict);
            if let Some(w) = &report.witness {
                println!("witness: {}", if w.is_empty() { "<empty word>".to_string() } else { w.to_string() });
                println!("region path:");
                for step in &report.region_path {
                    match &step.letter {
                        Some(a) => println!("  --{}--> {}", a, step.word),
                        None => println!("  {}", step.word),
                    }
                }
            }
            println!("nodes expanded: {}, pruned: {}, {} ms", report.nodes_expanded, report.nodes_pruned, report.elapsed_ms);
        }
    }
    Ok(u8::from(found))
}

#[derive(Serialize)]
struct MemberReport<'a> {
    verdict: &'a str,
    word: &'a TimedWord,
}

#[derive(Serialize)]
struct GenReport {
    verdict: &'static str,
    locations: usize,
    rules: usize,
    out: Option<String>,
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    verdict: &'a str,
    #[serde(flatten)]
    report: &'a EncodingReport,
}

fn run(cli: Cli) -> Result<u8> {
    let opts = options(cli.budget)?;
    match cli.command {
        Command::Member { automaton, word } => {
            let a = load_ata(&automaton)?;
            let w = load_word(&word)?;
            let ok = accepts(&a, &w)?;
            let verdict = if ok { "accepted" } else { "rejected" };
            match cli.report {
                Format::Json => emit_json(&MemberReport { verdict, word: &w })?,
                Format::Text => println!("{}", verdict),
            }
            Ok(u8::from(!ok))
        }
        Command::Empty { automaton } => {
            let a = load_ata(&automaton)?;
            emit_search(&check_empty_with(&a, &opts)?, cli.report, "empty", "nonempty")
        }
        Command::Universal { automaton } => {
            let a = load_ata(&automaton)?;
            emit_search(&check_universal_with(&a, &opts)?, cli.report, "universal", "not universal")
        }
        Command::Contains { left, right } => {
            let (a, b) = (load_ata(&left)?, load_ata(&right)?);
            emit_search(&check_contains_with(&a, &b, &opts)?, cli.report, "contained", "not contained")
        }
        Command::GenLcs { system, out } => {
            let p = load_lcs(&system)?;
            let a = build_reduction_ata(&p.system, &p.goal.state, &p.goal.channel)?;
            let text = print_ata(&a);
            match &out {
                Some(path) => fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?,
                None if cli.report == Format::Text => print!("{}", text),
                None => {}
            }
            if cli.report == Format::Json {
                emit_json(&GenReport {
                    verdict: "generated",
                    locations: a.num_locations(),
                    rules: a.rule_count(),
                    out: out.map(|p| p.display().to_string()),
                })?;
            } else if let Some(path) = out {
                eprintln!("wrote {} ({} locations, {} rules)", path.display(), a.num_locations(), a.rule_count());
            }
            Ok(0)
        }
        Command::ValidateEncoding { system, word } => {
            let p = load_lcs(&system)?;
            let w = load_word(&word)?;
            let report = validate_encoding(&w, &p.system, &p.goal.state, &p.goal.channel);
            let verdict = if report.is_ok() { "ok" } else { "violated" };
            match cli.report {
                Format::Json => emit_json(&ValidationReport { verdict, report: &report })?,
                Format::Text => println!("{}", report),
            }
            Ok(u8::from(!report.is_ok()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
