//! Shake-and-Bake machine translation around an active chart generator.
//!
//! The pipeline: a source sentence is parsed with a unification grammar
//! ([`parser`]); the instantiated leaves form a bag of signs; a bilingual
//! lexicon rewrites it into target-language bags ([`transfer`]); the chart
//! generator ([`generator`]) assembles every target sentence whose semantic
//! indices are compatible with the bag. [`oracle`] is an independent
//! exhaustive generator used to check the chart generator and as the slow
//! baseline in benchmarks.

pub mod chart;
pub mod generator;
pub mod grammar;
pub mod oracle;
pub mod parser;
pub mod syntax;
pub mod term;
pub mod transfer;

pub use chart::{Agenda, Chart, Discipline, Edge, EdgeKind, NodeSet};
pub use generator::{generate, GenConfig, GenError, GenOutput, GenSession, Mode};
pub use grammar::{Bag, BilingualEntry, Grammar, Rule, RuleBody, Sign, MAX_BAG_SIZE};
pub use oracle::{oracle_generate_all, Hypotheses, OracleConfig, OracleError, OracleRun};
pub use parser::{parse, ParseConfig, ParseError, ParseResult};
pub use syntax::{load_bag, load_bilingual, load_grammar};
pub use term::{alpha_equal, unify, Category, IndexList, IndexTerm, Substitution, Var, VarGen};
pub use transfer::{transfer, TransferError, TransferResult};

/// Errors raised while reading or validating grammar, bag and lexicon files.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: rule for `{lhs}` has an empty right-hand side")]
    EpsilonRule { line: usize, lhs: String },
    #[error("start symbol `{0}` has no rule")]
    UndefinedStart(String),
    #[error("grammar has no `start` declaration")]
    MissingStart,
    #[error("bag is empty")]
    EmptyBag,
    #[error("bag has {len} signs; at most {max} are supported")]
    BagTooLarge { len: usize, max: usize },
    #[error("line {line}: target variable {var} does not occur in the source side")]
    UnboundTargetVariable { line: usize, var: String },
}
