//! Chart generation from a bag of signs.
//!
//! Nodes of the chart are bag positions; an edge covers an arbitrary subset
//! of them, kept as a [`NodeSet`]. The driver is the ordinary agenda loop of
//! a bottom-up chart parser with four steps swapped out:
//!
//! * initialization puts one sign edge `<{i}, C[w_i] -> .>` per bag sign on
//!   the agenda;
//! * a sign edge is lifted by every lexical entry `A -> w_i` whose mother
//!   unifies with the sign's category, giving `<{i}, A[w_i] -> C .>`;
//! * rule invocation turns an inactive `<N, C[w] -> a .>` into
//!   `<N, (A[w] -> C . g)s>` for each rule `A -> C' g` with `C' s = C s`;
//! * dot movement combines an active `<M, A[w] -> a . C b>` with an inactive
//!   `<N, C'[u] -> g .>` when `M` and `N` are disjoint, giving
//!   `<M | N, (A[wu] -> a C . b)s>`.
//!
//! An inactive edge over every node whose mother has the start functor is a
//! generated sentence. Word order comes only from the grammar rules.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::chart::{
    Agenda, Chart, Discipline, Edge, EdgeKind, NodeSet, NodeSetError, RedundancyIndex,
};
use crate::grammar::{Bag, Grammar, Rule};
use crate::term::{alpha_equal, share_vars, standardize_apart, unify, Name, VarGen};

pub const DEFAULT_MAX_EDGES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Stop at the first sentence.
    First,
    /// Run until the agenda is exhausted.
    #[default]
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub mode: Mode,
    pub discipline: Discipline,
    /// Refuse edges alpha-equal to one already in the chart or agenda.
    /// Turning this off can loop forever on unary-cyclic grammars; the edge
    /// budget is then the only stop.
    pub redundancy_check: bool,
    /// Abort once more than this many edges have been created.
    pub max_edges: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            mode: Mode::All,
            discipline: Discipline::Fifo,
            redundancy_check: true,
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("edge budget of {limit} exceeded: {created} edges created ({chart} in chart, {agenda} on agenda)")]
    BudgetExceeded {
        limit: usize,
        created: usize,
        chart: usize,
        agenda: usize,
    },
    #[error(transparent)]
    Bag(#[from] NodeSetError),
}

/// Result of a finished generation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenOutput {
    /// Distinct sentences in discovery order.
    pub sentences: Vec<Vec<Name>>,
    /// Success edges found, counting different derivations of one string.
    pub derivations: usize,
    /// Edges ever put on the agenda.
    pub edges_created: usize,
    /// Edges processed into the chart.
    pub chart_edges: usize,
    pub elapsed: Duration,
}

/// What one agenda step did.
#[derive(Clone, Debug)]
pub struct Step {
    pub edge: Edge,
    pub success: bool,
    /// New edges admitted to the agenda.
    pub produced: Vec<Edge>,
}

/// Lifts a sign edge by a lexical entry spelled the same way.
pub fn lexicalize(sign: &Edge, entry: &Rule, vars: &mut VarGen) -> Option<Edge> {
    if entry.words() != Some(sign.phrase.as_slice()) {
        return None;
    }
    let entry = standardize_apart(entry, vars);
    let s = unify(&entry.lhs, &sign.lhs)?;
    Some(
        Edge {
            nodes: sign.nodes,
            lhs: entry.lhs,
            phrase: sign.phrase.clone(),
            found: vec![sign.lhs.clone()],
            remaining: Vec::new(),
        }
        .apply_subst(&s),
    )
}

/// Rule invocation for one phrasal rule.
pub fn invoke(inactive: &Edge, rule: &Rule, vars: &mut VarGen) -> Option<Edge> {
    let rule = standardize_apart(rule, vars);
    let rhs = rule.rhs()?;
    let s = unify(&rhs[0], &inactive.lhs)?;
    Some(
        Edge {
            nodes: inactive.nodes,
            lhs: rule.lhs.clone(),
            phrase: inactive.phrase.clone(),
            found: vec![inactive.lhs.clone()],
            remaining: rhs[1..].to_vec(),
        }
        .apply_subst(&s),
    )
}

/// Dot movement over one active/inactive pair.
pub fn combine(active: &Edge, inactive: &Edge, vars: &mut VarGen) -> Option<Edge> {
    let expected = active.expected()?;
    if inactive.is_active() || !active.nodes.is_disjoint(inactive.nodes) {
        return None;
    }
    // chart edges are independent hypotheses; never let them share variables
    let renamed;
    let inactive = if share_vars(active, inactive) {
        renamed = standardize_apart(inactive, vars);
        &renamed
    } else {
        inactive
    };
    let s = unify(expected, &inactive.lhs)?;
    let mut phrase = active.phrase.clone();
    phrase.extend(inactive.phrase.iter().cloned());
    let mut found = active.found.clone();
    found.push(inactive.lhs.clone());
    let child = Edge {
        nodes: active.nodes.union(inactive.nodes),
        lhs: active.lhs.clone(),
        phrase,
        found,
        remaining: active.remaining[1..].to_vec(),
    }
    .apply_subst(&s);
    debug_assert_eq!(child.nodes.len(), active.nodes.len() + inactive.nodes.len());
    Some(child)
}

trait ApplySubst {
    fn apply_subst(self, s: &crate::term::Substitution) -> Self;
}

impl ApplySubst for Edge {
    fn apply_subst(self, s: &crate::term::Substitution) -> Self {
        use crate::term::Term;
        if s.is_empty() {
            self
        } else {
            self.apply(s)
        }
    }
}

/// One generation run over one bag.
pub struct GenSession<'a> {
    grammar: &'a Grammar,
    bag: &'a Bag,
    all_bits: NodeSet,
    chart: Chart<Edge>,
    agenda: Agenda<Edge>,
    seen: RedundancyIndex<Edge>,
    vars: VarGen,
    config: GenConfig,
    sentences: Vec<Vec<Name>>,
    sentence_set: HashSet<Vec<Name>>,
    derivations: usize,
    created: usize,
    finished: bool,
}

impl<'a> GenSession<'a> {
    /// Seeds the agenda with one sign edge per bag sign.
    pub fn new(grammar: &'a Grammar, bag: &'a Bag, config: GenConfig) -> Result<Self, GenError> {
        let all_bits = NodeSet::full(bag.len())?;
        let mut vars = VarGen::new();
        vars.reserve_for(bag);
        for r in grammar.rules() {
            vars.reserve_for(r);
        }
        let mut session = GenSession {
            grammar,
            bag,
            all_bits,
            chart: Chart::new(),
            agenda: Agenda::new(config.discipline),
            seen: RedundancyIndex::new(),
            vars,
            config,
            sentences: Vec::new(),
            sentence_set: HashSet::new(),
            derivations: 0,
            created: 0,
            finished: false,
        };
        for (i, sign) in bag.signs().iter().enumerate() {
            session.admit(Edge::from_sign(i + 1, sign)?)?;
        }
        Ok(session)
    }

    pub fn all_bits(&self) -> NodeSet {
        self.all_bits
    }

    pub fn bag(&self) -> &Bag {
        self.bag
    }

    pub fn chart(&self) -> &Chart<Edge> {
        &self.chart
    }

    pub fn agenda(&self) -> &Agenda<Edge> {
        &self.agenda
    }

    pub fn config(&self) -> &GenConfig {
        &self.config
    }

    pub fn sentences(&self) -> &[Vec<Name>] {
        &self.sentences
    }

    pub fn edges_created(&self) -> usize {
        self.created
    }

    pub fn is_success(&self, e: &Edge) -> bool {
        e.kind() == EdgeKind::Inactive
            && e.nodes == self.all_bits
            && *e.lhs.functor == *self.grammar.start()
    }

    /// Puts `e` on the agenda unless it is redundant. Returns whether it was added.
    fn admit(&mut self, e: Edge) -> Result<bool, GenError> {
        debug_assert!(e.nodes.is_subset(self.all_bits));
        if self.config.redundancy_check && !self.seen.admit(&e) {
            return Ok(false);
        }
        self.created += 1;
        if self.created > self.config.max_edges {
            return Err(GenError::BudgetExceeded {
                limit: self.config.max_edges,
                created: self.created,
                chart: self.chart.len(),
                agenda: self.agenda.len(),
            });
        }
        self.agenda.push(e);
        Ok(true)
    }

    /// Candidate edges from lexical lookup of a sign edge.
    pub fn lexical_invocation(&mut self, sign: &Edge) -> Vec<Edge> {
        let vars = &mut self.vars;
        self.grammar
            .lexical_entries_for(&sign.phrase)
            .filter_map(|r| lexicalize(sign, r, vars))
            .collect()
    }

    /// Candidate edges from rule invocation on an inactive edge.
    pub fn rule_invocation(&mut self, inactive: &Edge) -> Vec<Edge> {
        let vars = &mut self.vars;
        self.grammar
            .rules_starting_with(&inactive.lhs.functor)
            .filter_map(|r| invoke(inactive, r, vars))
            .collect()
    }

    /// Candidate edges from dot movement of `e` against the chart.
    pub fn dot_movement(&mut self, e: &Edge) -> Vec<Edge> {
        let vars = &mut self.vars;
        match e.kind() {
            EdgeKind::Sign => Vec::new(),
            EdgeKind::Inactive => self
                .chart
                .active_expecting(&e.lhs.functor)
                .iter()
                .filter_map(|a| combine(a, e, vars))
                .collect(),
            EdgeKind::Active => self
                .chart
                .inactive_with(&e.remaining[0].functor)
                .iter()
                .filter_map(|i| combine(e, i, vars))
                .collect(),
        }
    }

    /// Processes the next agenda edge. `Ok(None)` once the run is over.
    pub fn step(&mut self) -> Result<Option<Step>, GenError> {
        if self.finished {
            return Ok(None);
        }
        let Some(edge) = self.agenda.pop() else {
            self.finished = true;
            return Ok(None);
        };
        let mut success = false;
        let candidates = match edge.kind() {
            EdgeKind::Sign => self.lexical_invocation(&edge),
            EdgeKind::Inactive => {
                if self.is_success(&edge) {
                    success = true;
                    self.derivations += 1;
                    if self.sentence_set.insert(edge.phrase.clone()) {
                        self.sentences.push(edge.phrase.clone());
                    }
                    if self.config.mode == Mode::First {
                        self.finished = true;
                        self.chart.insert(edge.clone());
                        return Ok(Some(Step {
                            edge,
                            success,
                            produced: Vec::new(),
                        }));
                    }
                }
                let mut c = self.rule_invocation(&edge);
                c.extend(self.dot_movement(&edge));
                c
            }
            EdgeKind::Active => self.dot_movement(&edge),
        };
        let mut produced = Vec::new();
        for c in candidates {
            if self.admit(c.clone())? {
                produced.push(c);
            }
        }
        self.chart.insert(edge.clone());
        Ok(Some(Step {
            edge,
            success,
            produced,
        }))
    }

    pub fn run(mut self) -> Result<GenOutput, GenError> {
        let t0 = Instant::now();
        while self.step()?.is_some() {}
        Ok(self.output(t0.elapsed()))
    }

    fn output(&self, elapsed: Duration) -> GenOutput {
        GenOutput {
            sentences: self.sentences.clone(),
            derivations: self.derivations,
            edges_created: self.created,
            chart_edges: self.chart.len(),
            elapsed,
        }
    }

    /// Pairs of chart edges with equal node sets that are alpha-equal.
    /// Empty whenever the redundancy check is on.
    pub fn duplicate_pairs(&self) -> Vec<(Edge, Edge)> {
        let mut edges: Vec<&Edge> = self.chart.iter().collect();
        edges.sort_by_key(|e| e.nodes);
        let mut dups = Vec::new();
        for (i, a) in edges.iter().enumerate() {
            for b in edges[i + 1..].iter().take_while(|b| b.nodes == a.nodes) {
                if alpha_equal(*a, *b) {
                    dups.push(((*a).clone(), (*b).clone()));
                }
            }
        }
        dups
    }
}

/// Generates the sentences licensed by `grammar` that use every sign of
/// `bag` exactly once.
pub fn generate(bag: &Bag, grammar: &Grammar, config: GenConfig) -> Result<GenOutput, GenError> {
    GenSession::new(grammar, bag, config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{load_bag, load_grammar};

    const FR: &str = r#"
        start s.
        rule s(X|P) -> np(X) vp(X|P).
        rule vp(X,Y|P) -> v(X,Y|P) np(Y).
        lex np(j) -> "Jean".
        lex np(m) -> "Marie".
        lex v(X,Y,E) -> "aime".
    "#;

    fn words(s: &[Name]) -> String {
        s.iter().map(|w| w.as_ref()).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn jean_aime_marie() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]\nv(j,m,l) [\"aime\"]").unwrap();
        let out = generate(&bag, &g, GenConfig::default()).unwrap();
        let got: Vec<String> = out.sentences.iter().map(|s| words(s)).collect();
        assert_eq!(got, vec!["Jean aime Marie"]);
        assert_eq!(out.chart_edges, 11);
    }

    #[test]
    fn single_sign_bag() {
        let g = load_grammar("start np. lex np(j) -> \"Jean\".").unwrap();
        let bag = load_bag("np(j) [\"Jean\"]").unwrap();
        let s = GenSession::new(&g, &bag, GenConfig::default()).unwrap();
        assert_eq!(s.agenda().len(), 1);
        assert_eq!(s.agenda().iter().next().unwrap().nodes.bits(), 1);
        let out = s.run().unwrap();
        assert_eq!(out.sentences, vec![vec![Name::from("Jean")]]);
    }

    #[test]
    fn nothing_applies() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]").unwrap();
        let out = generate(&bag, &g, GenConfig::default()).unwrap();
        assert!(out.sentences.is_empty());
    }

    #[test]
    fn sign_without_lexical_entry_is_inert() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Pierre\"]\nv(j,m,l) [\"aime\"]").unwrap();
        let out = generate(&bag, &g, GenConfig::default()).unwrap();
        assert!(out.sentences.is_empty());
    }

    #[test]
    fn first_mode_stops_early() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]\nv(j,m,l) [\"aime\"]").unwrap();
        let out = generate(
            &bag,
            &g,
            GenConfig {
                mode: Mode::First,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.sentences.len(), 1);
        assert_eq!(out.derivations, 1);
    }

    #[test]
    fn lifo_finds_the_same_sentences() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]\nv(j,m,l) [\"aime\"]").unwrap();
        let out = generate(
            &bag,
            &g,
            GenConfig {
                discipline: Discipline::Lifo,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.sentences.len(), 1);
        assert_eq!(out.chart_edges, 11);
    }

    #[test]
    fn budget_trips() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]\nv(j,m,l) [\"aime\"]").unwrap();
        match GenSession::new(
            &g,
            &bag,
            GenConfig {
                max_edges: 1,
                ..Default::default()
            },
        ) {
            Err(GenError::BudgetExceeded {
                limit: 1,
                created: 2,
                ..
            }) => {}
            Err(e) => panic!("{e}"),
            Ok(_) => panic!("budget should trip during initialization"),
        }
    }

    #[test]
    fn unary_cycle_terminates_with_redundancy_check() {
        let g = load_grammar("start a. rule a(X) -> b(X). rule b(X) -> a(X). lex b(x) -> \"w\".")
            .unwrap();
        let bag = load_bag("b(x) [\"w\"]").unwrap();
        let out = generate(&bag, &g, GenConfig::default()).unwrap();
        assert_eq!(out.sentences, vec![vec![Name::from("w")]]);
        let err = generate(
            &bag,
            &g,
            GenConfig {
                redundancy_check: false,
                max_edges: 500,
                ..Default::default()
            },
        );
        assert!(matches!(
            err,
            Err(GenError::BudgetExceeded { limit: 500, .. })
        ));
    }

    #[test]
    fn success_requires_start_functor_and_full_cover() {
        let g = load_grammar(FR).unwrap();
        let bag = load_bag("np(m) [\"Marie\"]\nnp(j) [\"Jean\"]\nv(j,m,l) [\"aime\"]").unwrap();
        let s = GenSession::new(&g, &bag, GenConfig::default()).unwrap();
        assert_eq!(s.all_bits().bits(), 7);
        let partial = Edge {
            nodes: NodeSet::from_bits(3),
            lhs: crate::term::Category::ground("s", &["j", "m", "l"]),
            phrase: vec!["Jean".into(), "Marie".into()],
            found: vec![crate::term::Category::ground("np", &["j"])],
            remaining: vec![],
        };
        assert!(!s.is_success(&partial));
        let full = Edge {
            nodes: NodeSet::from_bits(7),
            ..partial.clone()
        };
        assert!(s.is_success(&full));
        let not_start = Edge {
            lhs: crate::term::Category::ground("vp", &["j", "m", "l"]),
            ..full
        };
        assert!(!s.is_success(&not_start));
    }
}
