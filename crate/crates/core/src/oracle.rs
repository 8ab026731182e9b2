//! Exhaustive top-down generator, used to cross-check the chart generator
//! and as the naive baseline in benchmarks.
//!
//! The search keeps a list of pending categories, leftmost first. The
//! leftmost one is either rewritten by a phrasal rule or consumed by an
//! unused bag sign, licensed by a lexical entry spelled like the sign.
//! Nothing is memoized: the same sub-derivation is rebuilt on every path
//! that needs it. Apart from the term and grammar types this shares no code
//! with [`crate::generator`].

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::generator::{GenOutput, Mode};
use crate::grammar::{Bag, Grammar};
use crate::term::{
    standardize_apart, unify_under, Category, IndexList, Name, Substitution, VarGen,
};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleConfig {
    pub mode: Mode,
    /// Most phrasal rule applications on one derivation; `None` means
    /// twice the bag size.
    pub max_depth: Option<usize>,
    pub time_budget: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("depth limit {limit} reached; {} sentences found before giving up", partial.len())]
    DepthLimit {
        limit: usize,
        partial: Vec<Vec<Name>>,
        expansions: usize,
    },
    #[error("time budget of {budget:?} exhausted; {} sentences found", partial.len())]
    TimeBudget {
        budget: Duration,
        partial: Vec<Vec<Name>>,
        expansions: usize,
    },
    #[error("depth limit {limit} is below the bag size {bag}")]
    DepthTooSmall { limit: usize, bag: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRun {
    /// Distinct sentences in discovery order.
    pub sentences: Vec<Vec<Name>>,
    /// Successful rule applications and sign consumptions.
    pub expansions: usize,
    pub elapsed: Duration,
}

/// Work done by one run, comparable across the chart and the baseline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Hypotheses {
    /// Chart edges for the chart generator, search steps for the baseline.
    pub expansions: usize,
    pub wall_time: Duration,
}

impl From<&GenOutput> for Hypotheses {
    fn from(o: &GenOutput) -> Self {
        Hypotheses {
            expansions: o.chart_edges,
            wall_time: o.elapsed,
        }
    }
}

impl From<&OracleRun> for Hypotheses {
    fn from(o: &OracleRun) -> Self {
        Hypotheses {
            expansions: o.expansions,
            wall_time: o.elapsed,
        }
    }
}

enum Halt {
    Done,
    Timeout,
}

struct Search<'a> {
    grammar: &'a Grammar,
    bag: &'a Bag,
    used: Vec<bool>,
    words: Vec<Name>,
    vars: VarGen,
    limit: usize,
    mode: Mode,
    deadline: Option<Instant>,
    expansions: usize,
    depth_hit: bool,
    sentences: Vec<Vec<Name>>,
    seen: HashSet<Vec<Name>>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), Halt> {
        self.expansions += 1;
        if self.expansions.is_multiple_of(1024)
            && self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            return Err(Halt::Timeout);
        }
        Ok(())
    }

    /// `stack` holds the pending categories with the leftmost on top.
    fn search(
        &mut self,
        stack: &mut Vec<Category>,
        s: &Substitution,
        depth: usize,
        unused: usize,
    ) -> Result<(), Halt> {
        // every pending category covers at least one sign
        if stack.len() > unused {
            return Ok(());
        }
        let Some(top) = stack.pop() else {
            if unused == 0 && self.seen.insert(self.words.clone()) {
                self.sentences.push(self.words.clone());
                if self.mode == Mode::First {
                    return Err(Halt::Done);
                }
            }
            return Ok(());
        };
        let r = self
            .consume(stack, &top, s, depth, unused)
            .and_then(|_| self.rewrite(stack, &top, s, depth, unused));
        stack.push(top);
        r
    }

    fn consume(
        &mut self,
        stack: &mut Vec<Category>,
        top: &Category,
        s: &Substitution,
        depth: usize,
        unused: usize,
    ) -> Result<(), Halt> {
        let bag = self.bag;
        for (j, sign) in bag.signs().iter().enumerate() {
            if self.used[j] {
                continue;
            }
            for entry in self.grammar.lexical_entries_for(&sign.phon) {
                let entry = standardize_apart(entry, &mut self.vars);
                let category = standardize_apart(&sign.category, &mut self.vars);
                let Some(s1) = unify_under(s, &entry.lhs, &category) else {
                    continue;
                };
                let Some(s2) = unify_under(&s1, &entry.lhs, top) else {
                    continue;
                };
                self.tick()?;
                self.used[j] = true;
                let mark = self.words.len();
                self.words.extend(sign.phon.iter().cloned());
                let r = self.search(stack, &s2, depth, unused - 1);
                self.words.truncate(mark);
                self.used[j] = false;
                r?;
            }
        }
        Ok(())
    }

    fn rewrite(
        &mut self,
        stack: &mut Vec<Category>,
        top: &Category,
        s: &Substitution,
        depth: usize,
        unused: usize,
    ) -> Result<(), Halt> {
        let grammar = self.grammar;
        for rule in grammar.rules_for(&top.functor) {
            if rule.rhs().is_none() {
                continue;
            }
            if depth == self.limit {
                self.depth_hit = true;
                continue;
            }
            let rule = standardize_apart(rule, &mut self.vars);
            let Some(s1) = unify_under(s, &rule.lhs, top) else {
                continue;
            };
            self.tick()?;
            let rhs = rule.rhs().unwrap();
            let mark = stack.len();
            stack.extend(rhs.iter().rev().cloned());
            let r = self.search(stack, &s1, depth + 1, unused);
            stack.truncate(mark);
            r?;
        }
        Ok(())
    }
}

/// Every sentence of `grammar` that uses each sign of `bag` exactly once.
pub fn oracle_generate_all(
    bag: &Bag,
    grammar: &Grammar,
    config: &OracleConfig,
) -> Result<OracleRun, OracleError> {
    let limit = config.max_depth.unwrap_or(2 * bag.len());
    if limit < bag.len() {
        return Err(OracleError::DepthTooSmall {
            limit,
            bag: bag.len(),
        });
    }
    let t0 = Instant::now();
    let mut vars = VarGen::new();
    vars.reserve_for(bag);
    for r in grammar.rules() {
        vars.reserve_for(r);
    }
    let root = Category::new(
        grammar.start(),
        IndexList::open(Vec::new(), vars.fresh("Top")),
    );
    let mut search = Search {
        grammar,
        bag,
        used: vec![false; bag.len()],
        words: Vec::new(),
        vars,
        limit,
        mode: config.mode,
        deadline: config.time_budget.map(|b| t0 + b),
        expansions: 0,
        depth_hit: false,
        sentences: Vec::new(),
        seen: HashSet::new(),
    };
    let halt = search.search(&mut vec![root], &Substitution::new(), 0, bag.len());
    let expansions = search.expansions;
    let partial = search.sentences;
    match halt {
        Err(Halt::Timeout) => Err(OracleError::TimeBudget {
            budget: config.time_budget.unwrap_or_default(),
            partial,
            expansions,
        }),
        Ok(()) if search.depth_hit => Err(OracleError::DepthLimit {
            limit,
            partial,
            expansions,
        }),
        _ => Ok(OracleRun {
            sentences: partial,
            expansions,
            elapsed: t0.elapsed(),
        }),
    }
}
