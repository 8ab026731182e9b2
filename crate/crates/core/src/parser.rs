//! Bottom-up active chart parser over contiguous spans.
//!
//! Edges carry the leaf signs they cover, instantiated by every unification
//! made along the derivation, so a finished analysis yields the source bag
//! directly.

use std::time::{Duration, Instant};

use crate::chart::{Agenda, Chart, ChartItem, Discipline, IndexKey, RedundancyIndex};
use crate::generator::DEFAULT_MAX_EDGES;
use crate::grammar::{Bag, Grammar, Rule, Sign};
use crate::syntax::{render_words, Namer};
use crate::term::{
    share_vars, standardize_apart, unify, Category, Name, Substitution, Term, Var, VarGen,
};
use crate::LoadError;

/// `<start, end, lhs -> found . remaining>` plus phrase and leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanEdge {
    pub start: usize,
    pub end: usize,
    pub lhs: Category,
    pub found: Vec<Category>,
    pub remaining: Vec<Category>,
    pub phrase: Vec<Name>,
    pub leaves: Vec<Sign>,
}

impl SpanEdge {
    pub fn is_active(&self) -> bool {
        !self.remaining.is_empty()
    }
}

impl ChartItem for SpanEdge {
    fn index_key(&self) -> IndexKey {
        match self.remaining.first() {
            Some(c) => IndexKey::Active(c.functor.clone()),
            None => IndexKey::Inactive(self.lhs.functor.clone()),
        }
    }
}

impl Term for SpanEdge {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.lhs.visit_vars(f);
        self.found.visit_vars(f);
        self.remaining.visit_vars(f);
        self.leaves.visit_vars(f);
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        SpanEdge {
            start: self.start,
            end: self.end,
            lhs: self.lhs.map_vars(f),
            found: self.found.map_vars(f),
            remaining: self.remaining.map_vars(f),
            phrase: self.phrase.clone(),
            leaves: self.leaves.map_vars(f),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        SpanEdge {
            start: self.start,
            end: self.end,
            lhs: self.lhs.apply(s),
            found: self.found.apply(s),
            remaining: self.remaining.apply(s),
            phrase: self.phrase.clone(),
            leaves: self.leaves.apply(s),
        }
    }
}

impl std::fmt::Display for SpanEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut n = Namer::new();
        write!(
            f,
            "<{}, {}, {} [{}] ->",
            self.start,
            self.end,
            n.category(&self.lhs),
            render_words(&self.phrase)
        )?;
        for c in &self.found {
            write!(f, " {}", n.category(c))?;
        }
        f.write_str(" .")?;
        for c in &self.remaining {
            write!(f, " {}", n.category(c))?;
        }
        f.write_str(">")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseConfig {
    pub discipline: Discipline,
    pub redundancy_check: bool,
    pub max_edges: usize,
}

impl Default for ParseConfig {
    fn default() -> Self {
        ParseConfig {
            discipline: Discipline::Fifo,
            redundancy_check: true,
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("no input words")]
    EmptyInput,
    #[error("unknown word `{word}` at position {position}")]
    UnknownWord { position: usize, word: String },
    #[error("edge budget of {limit} exceeded after {created} edges")]
    BudgetExceeded { limit: usize, created: usize },
    #[error("analysis {index} requested but only {count} found")]
    NoSuchAnalysis { index: usize, count: usize },
    #[error(transparent)]
    Bag(#[from] LoadError),
}

/// One spanning analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub category: Category,
    /// Leaf signs in surface order.
    pub leaves: Vec<Sign>,
    pub edge: SpanEdge,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseResult {
    pub analyses: Vec<Analysis>,
    pub chart_edges: usize,
    pub elapsed: Duration,
}

impl ParseResult {
    pub fn is_empty(&self) -> bool {
        self.analyses.is_empty()
    }

    pub fn len(&self) -> usize {
        self.analyses.len()
    }
}

/// Lexical edges for every entry matching the words at each position.
pub fn init_from_string(
    words: &[Name],
    g: &Grammar,
    vars: &mut VarGen,
) -> Result<Vec<SpanEdge>, ParseError> {
    if words.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let mut covered = vec![false; words.len()];
    let mut edges = Vec::new();
    for i in 0..words.len() {
        for r in g.lexical_rules() {
            let w = r.words().expect("lexical rule");
            if words[i..].starts_with(w) {
                let r = standardize_apart(r, vars);
                covered[i..i + w.len()].iter_mut().for_each(|c| *c = true);
                edges.push(SpanEdge {
                    start: i,
                    end: i + w.len(),
                    lhs: r.lhs.clone(),
                    found: Vec::new(),
                    remaining: Vec::new(),
                    phrase: w.to_vec(),
                    leaves: vec![Sign::new(r.lhs, w.to_vec())],
                });
            }
        }
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(ParseError::UnknownWord {
            position: i + 1,
            word: words[i].to_string(),
        });
    }
    Ok(edges)
}

/// Rule invocation on an inactive span edge for one rule.
pub fn invoke_span(inactive: &SpanEdge, rule: &Rule, vars: &mut VarGen) -> Option<SpanEdge> {
    let rule = standardize_apart(rule, vars);
    let rhs = rule.rhs()?;
    let s = unify(&rhs[0], &inactive.lhs)?;
    Some(
        SpanEdge {
            start: inactive.start,
            end: inactive.end,
            lhs: rule.lhs.clone(),
            found: vec![inactive.lhs.clone()],
            remaining: rhs[1..].to_vec(),
            phrase: inactive.phrase.clone(),
            leaves: inactive.leaves.clone(),
        }
        .apply(&s),
    )
}

/// Dot movement: the active edge must end where the inactive one starts.
pub fn combine_span(active: &SpanEdge, inactive: &SpanEdge, vars: &mut VarGen) -> Option<SpanEdge> {
    let expected = active.remaining.first()?;
    if inactive.is_active() || active.end != inactive.start {
        return None;
    }
    let renamed;
    let inactive = if share_vars(active, inactive) {
        renamed = standardize_apart(inactive, vars);
        &renamed
    } else {
        inactive
    };
    let s = unify(expected, &inactive.lhs)?;
    let mut found = active.found.clone();
    found.push(inactive.lhs.clone());
    let mut phrase = active.phrase.clone();
    phrase.extend(inactive.phrase.iter().cloned());
    let mut leaves = active.leaves.clone();
    leaves.extend(inactive.leaves.iter().cloned());
    Some(
        SpanEdge {
            start: active.start,
            end: inactive.end,
            lhs: active.lhs.clone(),
            found,
            remaining: active.remaining[1..].to_vec(),
            phrase,
            leaves,
        }
        .apply(&s),
    )
}

struct ParseSession<'a> {
    grammar: &'a Grammar,
    n: usize,
    chart: Chart<SpanEdge>,
    agenda: Agenda<SpanEdge>,
    seen: RedundancyIndex<SpanEdge>,
    vars: VarGen,
    config: &'a ParseConfig,
    created: usize,
}

impl ParseSession<'_> {
    fn admit(&mut self, e: SpanEdge) -> Result<(), ParseError> {
        if self.config.redundancy_check && !self.seen.admit(&e) {
            return Ok(());
        }
        self.created += 1;
        if self.created > self.config.max_edges {
            return Err(ParseError::BudgetExceeded {
                limit: self.config.max_edges,
                created: self.created,
            });
        }
        self.agenda.push(e);
        Ok(())
    }

    fn is_success(&self, e: &SpanEdge) -> bool {
        !e.is_active() && e.start == 0 && e.end == self.n && *e.lhs.functor == *self.grammar.start()
    }
}

/// All spanning analyses of `words`.
pub fn parse(words: &[Name], g: &Grammar, config: &ParseConfig) -> Result<ParseResult, ParseError> {
    let t0 = Instant::now();
    let mut vars = VarGen::new();
    for r in g.rules() {
        vars.reserve_for(r);
    }
    let initial = init_from_string(words, g, &mut vars)?;
    let mut s = ParseSession {
        grammar: g,
        n: words.len(),
        chart: Chart::new(),
        agenda: Agenda::new(config.discipline),
        seen: RedundancyIndex::new(),
        vars,
        config,
        created: 0,
    };
    for e in initial {
        s.admit(e)?;
    }
    let mut analyses = Vec::new();
    while let Some(edge) = s.agenda.pop() {
        let mut new = Vec::new();
        if edge.is_active() {
            let functor = &edge.remaining[0].functor;
            for i in s.chart.inactive_with(functor) {
                new.extend(combine_span(&edge, i, &mut s.vars));
            }
        } else {
            if s.is_success(&edge) {
                analyses.push(Analysis {
                    category: edge.lhs.clone(),
                    leaves: edge.leaves.clone(),
                    edge: edge.clone(),
                });
            }
            for r in g.rules_starting_with(&edge.lhs.functor) {
                new.extend(invoke_span(&edge, r, &mut s.vars));
            }
            for a in s.chart.active_expecting(&edge.lhs.functor) {
                new.extend(combine_span(a, &edge, &mut s.vars));
            }
        }
        for e in new {
            s.admit(e)?;
        }
        s.chart.insert(edge);
    }
    Ok(ParseResult {
        analyses,
        chart_edges: s.chart.len(),
        elapsed: t0.elapsed(),
    })
}

/// Leaf signs of analysis `which`, numbered in surface order.
pub fn extract_bag(p: &ParseResult, which: usize) -> Result<Bag, ParseError> {
    let a = p.analyses.get(which).ok_or(ParseError::NoSuchAnalysis {
        index: which,
        count: p.analyses.len(),
    })?;
    Ok(Bag::new(a.leaves.clone())?)
}

/// True when the leaves can be paired one-to-one with the bag signs so
/// that paired signs are spelled alike and have unifiable categories.
pub fn leaves_cover_bag(leaves: &[Sign], bag: &Bag) -> bool {
    let signs = bag.signs();
    if leaves.len() != signs.len() {
        return false;
    }
    let mut vars = VarGen::new();
    vars.reserve_for(bag);
    vars.reserve_for(&leaves.to_vec());
    let leaves: Vec<Sign> = leaves
        .iter()
        .map(|l| standardize_apart(l, &mut vars))
        .collect();
    let fits: Vec<Vec<usize>> = leaves
        .iter()
        .map(|l| {
            (0..signs.len())
                .filter(|&j| {
                    l.phon == signs[j].phon && unify(&l.category, &signs[j].category).is_some()
                })
                .collect()
        })
        .collect();
    // augmenting paths
    fn augment(
        i: usize,
        fits: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &j in &fits[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, fits, owner, seen)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; signs.len()];
    (0..leaves.len()).all(|i| augment(i, &fits, &mut owner, &mut vec![false; signs.len()]))
}

/// Splits on whitespace.
pub fn tokenize(sentence: &str) -> Vec<Name> {
    sentence.split_whitespace().map(Name::from).collect()
}
