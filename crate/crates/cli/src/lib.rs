//! The `sbgen` command line: parse, generate, translate and bench.
//!
//! Exit codes: 0 success, 1 no result, 2 input error, 3 edge budget exceeded.

pub mod bench;

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sbgen_core::generator::DEFAULT_MAX_EDGES;
use sbgen_core::parser::{extract_bag, tokenize};
use sbgen_core::syntax::{render_bag, render_category};
use sbgen_core::term::Name;
use sbgen_core::{
    generate, load_bag, load_bilingual, load_grammar, parse, transfer, Discipline, GenConfig,
    GenError, Grammar, Mode, ParseConfig, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sbgen",
    version,
    about = "Shake-and-Bake translation with a chart generator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a sentence and print each analysis with its bag of signs.
    Parse {
        grammar: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
        #[command(flatten)]
        chart: ChartArgs,
    },
    /// Generate every sentence that uses each sign of a bag exactly once.
    Generate {
        grammar: PathBuf,
        bag: PathBuf,
        /// Stop at the first sentence.
        #[arg(long, conflicts_with = "all")]
        first: bool,
        /// Find all sentences (the default).
        #[arg(long)]
        all: bool,
        /// Print edge counts to stderr.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        chart: ChartArgs,
    },
    /// Parse, transfer and generate.
    Translate {
        source_grammar: PathBuf,
        target_grammar: PathBuf,
        lexicon: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
        #[command(flatten)]
        chart: ChartArgs,
    },
    /// Time the chart generator against the exhaustive baseline.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ChartArgs {
    #[arg(long, default_value = "fifo", value_parser = parse_discipline)]
    pub agenda: Discipline,
    /// Keep edges that duplicate one already seen.
    #[arg(long)]
    pub no_redundancy_check: bool,
    #[arg(long, env = "SBGEN_MAX_EDGES", default_value_t = DEFAULT_MAX_EDGES)]
    pub max_edges: usize,
}

fn parse_discipline(s: &str) -> Result<Discipline, String> {
    s.parse::<Discipline>().map_err(|e| e.to_string())
}

impl ChartArgs {
    fn gen_config(&self, mode: Mode) -> GenConfig {
        GenConfig {
            mode,
            discipline: self.agenda,
            redundancy_check: !self.no_redundancy_check,
            max_edges: self.max_edges,
        }
    }

    fn parse_config(&self) -> ParseConfig {
        ParseConfig {
            discipline: self.agenda,
            redundancy_check: !self.no_redundancy_check,
            max_edges: self.max_edges,
        }
    }
}

/// A failure that ends a command, with the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Load {
        path: PathBuf,
        source: sbgen_core::LoadError,
    },
    #[error("{stage}: {msg}")]
    Input { stage: &'static str, msg: String },
    #[error("{stage}: {msg}")]
    Budget { stage: &'static str, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Budget { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Read {
        path: path.to_owned(),
        source,
    })
}

pub fn read_grammar(path: &Path) -> Result<Grammar, Failure> {
    load_grammar(&read(path)?).map_err(|source| Failure::Load {
        path: path.to_owned(),
        source,
    })
}

fn gen_failure(stage: &'static str, e: GenError) -> Failure {
    match e {
        GenError::BudgetExceeded { .. } => Failure::Budget {
            stage,
            msg: e.to_string(),
        },
        GenError::Bag(_) => Failure::Input {
            stage,
            msg: e.to_string(),
        },
    }
}

fn parse_failure(e: ParseError) -> Failure {
    match e {
        ParseError::BudgetExceeded { .. } => Failure::Budget {
            stage: "parse",
            msg: e.to_string(),
        },
        _ => Failure::Input {
            stage: "parse",
            msg: e.to_string(),
        },
    }
}

pub fn sentence(words: &[Name]) -> String {
    words
        .iter()
        .map(|w| w.as_ref())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Parse {
            grammar,
            words,
            chart,
        } => cmd_parse(&grammar, &words, &chart, out),
        Command::Generate {
            grammar,
            bag,
            first,
            all: _,
            stats,
            chart,
        } => cmd_generate(
            &grammar,
            &bag,
            if first { Mode::First } else { Mode::All },
            &chart,
            stats,
            out,
            err,
        ),
        Command::Translate {
            source_grammar,
            target_grammar,
            lexicon,
            words,
            chart,
        } => cmd_translate(
            &source_grammar,
            &target_grammar,
            &lexicon,
            &words,
            &chart,
            out,
        ),
        Command::Bench(args) => bench::cmd_bench(&args, out, err),
    };
    match result {
        Ok(found) => {
            if found {
                EXIT_OK
            } else {
                EXIT_NONE
            }
        }
        Err(f) => {
            let _ = writeln!(err, "sbgen: {f}");
            f.exit_code()
        }
    }
}

/// `Ok(false)` when the sentence has no analysis.
pub fn cmd_parse(
    grammar: &Path,
    words: &[String],
    chart: &ChartArgs,
    out: &mut dyn Write,
) -> Result<bool, Failure> {
    let g = read_grammar(grammar)?;
    let words: Vec<Name> = words.iter().flat_map(|w| tokenize(w)).collect();
    let result = parse(&words, &g, &chart.parse_config()).map_err(parse_failure)?;
    for (i, a) in result.analyses.iter().enumerate() {
        writeln!(
            out,
            "# analysis {}: {}",
            i + 1,
            render_category(&a.category)
        )?;
        let bag = extract_bag(&result, i).map_err(parse_failure)?;
        write!(out, "{}", render_bag(&bag))?;
    }
    Ok(!result.is_empty())
}

pub fn cmd_generate(
    grammar: &Path,
    bag: &Path,
    mode: Mode,
    chart: &ChartArgs,
    stats: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, Failure> {
    let g = read_grammar(grammar)?;
    let b = load_bag(&read(bag)?).map_err(|source| Failure::Load {
        path: bag.to_owned(),
        source,
    })?;
    let output =
        generate(&b, &g, chart.gen_config(mode)).map_err(|e| gen_failure("generate", e))?;
    for s in &output.sentences {
        writeln!(out, "{}", sentence(s))?;
    }
    if stats {
        writeln!(
            err,
            "edges created: {}, chart edges: {}, derivations: {}",
            output.edges_created, output.chart_edges, output.derivations
        )?;
    }
    Ok(!output.sentences.is_empty())
}

pub fn cmd_translate(
    source: &Path,
    target: &Path,
    lexicon: &Path,
    words: &[String],
    chart: &ChartArgs,
    out: &mut dyn Write,
) -> Result<bool, Failure> {
    let src = read_grammar(source)?;
    let tgt = read_grammar(target)?;
    let lex = load_bilingual(&read(lexicon)?).map_err(|source| Failure::Load {
        path: lexicon.to_owned(),
        source,
    })?;
    let words: Vec<Name> = words.iter().flat_map(|w| tokenize(w)).collect();

    let parsed = parse(&words, &src, &chart.parse_config()).map_err(parse_failure)?;
    if parsed.is_empty() {
        return Err(Failure::Input {
            stage: "parse",
            msg: format!("no analysis of `{}`", sentence(&words)),
        });
    }
    let mut target_bags = Vec::new();
    let mut first_error = None;
    for i in 0..parsed.len() {
        let bag = extract_bag(&parsed, i).map_err(parse_failure)?;
        match transfer(&bag, &lex) {
            Ok(r) => target_bags.extend(r.results.into_iter().map(|t| t.bag)),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if target_bags.is_empty() {
        let e = first_error.expect("every analysis failed to transfer");
        return Err(Failure::Input {
            stage: "transfer",
            msg: e.to_string(),
        });
    }

    let mut seen = HashSet::new();
    for bag in &target_bags {
        let output = generate(bag, &tgt, chart.gen_config(Mode::All))
            .map_err(|e| gen_failure("generate", e))?;
        for s in output.sentences {
            let s = sentence(&s);
            if seen.insert(s.clone()) {
                writeln!(out, "{s}")?;
            }
        }
    }
    Ok(!seen.is_empty())
}
