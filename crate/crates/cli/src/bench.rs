//! Chart generator versus exhaustive baseline on a family of growing bags.
//!
//! Bag `k` holds a transitive clause and `k - 3` adverbs whose event indices
//! form a chain `e0 -> e1 -> ...`, so each adverb has exactly one place to
//! attach and every bag has exactly one sentence. The search space still
//! grows with `k`.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::Args;
use sbgen_core::generator::DEFAULT_MAX_EDGES;
use sbgen_core::{
    generate, load_bag, load_grammar, oracle_generate_all, Bag, GenConfig, GenError, Grammar, Mode,
    OracleConfig, OracleError, MAX_BAG_SIZE,
};
use serde::Serialize;

use crate::Failure;

pub const FAMILY_GRAMMAR: &str = r#"
start s.
rule s(X|P) -> np(X) vp(X|P).
rule vp(X,Y|P) -> v(X,Y|P) np(Y).
rule vp(X,Y,E2) -> vp(X,Y,E1) adv(E1,E2).
lex np(j) -> "Jean".
lex np(m) -> "Marie".
lex v(X,Y,E) -> "aime".
lex adv(E1,E2) -> "souvent".
lex adv(E1,E2) -> "vraiment".
lex adv(E1,E2) -> "beaucoup".
lex adv(E1,E2) -> "encore".
lex adv(E1,E2) -> "toujours".
lex adv(E1,E2) -> "tendrement".
lex adv(E1,E2) -> "follement".
lex adv(E1,E2) -> "passionnément".
"#;

const ADVERBS: [&str; 8] = [
    "souvent",
    "vraiment",
    "beaucoup",
    "encore",
    "toujours",
    "tendrement",
    "follement",
    "passionnément",
];

pub fn family_grammar() -> Grammar {
    load_grammar(FAMILY_GRAMMAR).expect("family grammar is well formed")
}

/// Bag of size `k >= 3`.
pub fn family_bag(k: usize) -> Bag {
    assert!(
        (3..=MAX_BAG_SIZE).contains(&k),
        "family bag size {k} out of range"
    );
    let mut text = String::from("np(j) [\"Jean\"]\nv(j,m,e0) [\"aime\"]\nnp(m) [\"Marie\"]\n");
    for i in 1..=k - 3 {
        text += &format!(
            "adv(e{},e{i}) [\"{}\"]\n",
            i - 1,
            ADVERBS[(i - 1) % ADVERBS.len()]
        );
    }
    load_bag(&text).expect("family bag is well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BenchMode {
    #[serde(rename = "chart-first")]
    ChartFirst,
    #[serde(rename = "chart-all")]
    ChartAll,
    #[serde(rename = "baseline-first")]
    BaselineFirst,
    #[serde(rename = "baseline-all")]
    BaselineAll,
}

impl BenchMode {
    pub const ALL: [BenchMode; 4] = [
        BenchMode::ChartFirst,
        BenchMode::ChartAll,
        BenchMode::BaselineFirst,
        BenchMode::BaselineAll,
    ];

    fn mode(self) -> Mode {
        match self {
            BenchMode::ChartFirst | BenchMode::BaselineFirst => Mode::First,
            BenchMode::ChartAll | BenchMode::BaselineAll => Mode::All,
        }
    }
}

/// One CSV row. `sentences` is -1 when the run hit its budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub mode: BenchMode,
    pub seconds: f64,
    pub expansions: usize,
    pub sentences: i64,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    pub min: usize,
    #[arg(long, default_value_t = 11)]
    pub max: usize,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, env = "SBGEN_MAX_EDGES", default_value_t = DEFAULT_MAX_EDGES)]
    pub max_edges: usize,
    /// Wall-clock limit for each baseline run, in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub baseline_seconds: f64,
}

impl Default for BenchArgs {
    fn default() -> Self {
        BenchArgs {
            min: 3,
            max: 11,
            reps: 1,
            csv: None,
            max_edges: DEFAULT_MAX_EDGES,
            baseline_seconds: 60.0,
        }
    }
}

/// Runs one cell of the table.
pub fn run_one(size: usize, mode: BenchMode, args: &BenchArgs) -> BenchRow {
    let grammar = family_grammar();
    let bag = family_bag(size);
    let t0 = Instant::now();
    let (expansions, sentences) = match mode {
        BenchMode::ChartFirst | BenchMode::ChartAll => {
            let cfg = GenConfig {
                mode: mode.mode(),
                max_edges: args.max_edges,
                ..Default::default()
            };
            match generate(&bag, &grammar, cfg) {
                Ok(o) => (o.chart_edges, o.sentences.len() as i64),
                Err(GenError::BudgetExceeded { created, .. }) => (created, -1),
                Err(GenError::Bag(e)) => unreachable!("family bag within size limit: {e}"),
            }
        }
        BenchMode::BaselineFirst | BenchMode::BaselineAll => {
            let cfg = OracleConfig {
                mode: mode.mode(),
                max_depth: None,
                time_budget: Some(Duration::from_secs_f64(args.baseline_seconds)),
            };
            match oracle_generate_all(&bag, &grammar, &cfg) {
                Ok(r) => (r.expansions, r.sentences.len() as i64),
                Err(
                    OracleError::DepthLimit { expansions, .. }
                    | OracleError::TimeBudget { expansions, .. },
                ) => (expansions, -1),
                Err(e @ OracleError::DepthTooSmall { .. }) => unreachable!("{e}"),
            }
        }
    };
    BenchRow {
        size,
        mode,
        seconds: t0.elapsed().as_secs_f64(),
        expansions,
        sentences,
    }
}

pub fn run_bench(args: &BenchArgs) -> Result<Vec<BenchRow>, Failure> {
    if args.min < 3 || args.min > args.max || args.max > MAX_BAG_SIZE {
        return Err(Failure::Input {
            stage: "bench",
            msg: format!(
                "need 3 <= min <= max <= {MAX_BAG_SIZE}, got min {} max {}",
                args.min, args.max
            ),
        });
    }
    let mut rows = Vec::new();
    for size in args.min..=args.max {
        for _ in 0..args.reps {
            for mode in BenchMode::ALL {
                rows.push(run_one(size, mode, args));
            }
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], w: impl Write) -> Result<(), Failure> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn cmd_bench(
    args: &BenchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, Failure> {
    let rows = run_bench(args)?;
    match &args.csv {
        Some(path) => {
            write_csv(&rows, File::create(path)?)?;
            writeln!(err, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(true)
}
