//! Grammar, lexicon, bag and bilingual-lexicon data types.

use std::collections::HashMap;
use std::fmt;

use crate::term::{Category, Name, Substitution, Term, Var};
use crate::LoadError;

/// Largest bag the generator accepts: one bit per sign in a machine word.
pub const MAX_BAG_SIZE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleBody {
    /// Nonempty sequence of daughter categories.
    Phrasal(Vec<Category>),
    /// Nonempty word sequence; the rule is a lexical entry.
    Lexical(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Category,
    pub body: RuleBody,
    /// 1-based source line, 0 when built in code.
    pub line: usize,
}

impl Rule {
    pub fn phrasal(lhs: Category, rhs: Vec<Category>) -> Self {
        Rule {
            lhs,
            body: RuleBody::Phrasal(rhs),
            line: 0,
        }
    }

    pub fn lexical(lhs: Category, words: Vec<Name>) -> Self {
        Rule {
            lhs,
            body: RuleBody::Lexical(words),
            line: 0,
        }
    }

    pub fn rhs(&self) -> Option<&[Category]> {
        match &self.body {
            RuleBody::Phrasal(r) => Some(r),
            RuleBody::Lexical(_) => None,
        }
    }

    pub fn words(&self) -> Option<&[Name]> {
        match &self.body {
            RuleBody::Lexical(w) => Some(w),
            RuleBody::Phrasal(_) => None,
        }
    }
}

impl Term for Rule {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.lhs.visit_vars(f);
        if let RuleBody::Phrasal(r) = &self.body {
            r.visit_vars(f);
        }
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        let lhs = self.lhs.map_vars(f);
        let body = match &self.body {
            RuleBody::Phrasal(r) => RuleBody::Phrasal(r.map_vars(f)),
            b => b.clone(),
        };
        Rule {
            lhs,
            body,
            line: self.line,
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        let body = match &self.body {
            RuleBody::Phrasal(r) => RuleBody::Phrasal(r.apply(s)),
            b => b.clone(),
        };
        Rule {
            lhs: self.lhs.apply(s),
            body,
            line: self.line,
        }
    }
}

/// A validated grammar with lookup tables for the chart algorithms.
#[derive(Clone, Debug)]
pub struct Grammar {
    rules: Vec<Rule>,
    start: Name,
    by_first_daughter: HashMap<Name, Vec<usize>>,
    by_lhs: HashMap<Name, Vec<usize>>,
    lexical: Vec<usize>,
}

impl Grammar {
    /// Validates and indexes. Rejects empty right-hand sides and a start
    /// symbol that heads no rule.
    pub fn new(rules: Vec<Rule>, start: impl Into<Name>) -> Result<Self, LoadError> {
        let start = start.into();
        for r in &rules {
            let empty = match &r.body {
                RuleBody::Phrasal(rhs) => rhs.is_empty(),
                RuleBody::Lexical(ws) => ws.is_empty(),
            };
            if empty {
                return Err(LoadError::EpsilonRule {
                    line: r.line,
                    lhs: r.lhs.to_string(),
                });
            }
        }
        if !rules.iter().any(|r| r.lhs.functor == start) {
            return Err(LoadError::UndefinedStart(start.to_string()));
        }
        let mut by_first_daughter: HashMap<Name, Vec<usize>> = HashMap::new();
        let mut by_lhs: HashMap<Name, Vec<usize>> = HashMap::new();
        let mut lexical = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            match &r.body {
                RuleBody::Phrasal(rhs) => {
                    by_first_daughter
                        .entry(rhs[0].functor.clone())
                        .or_default()
                        .push(i);
                    by_lhs.entry(r.lhs.functor.clone()).or_default().push(i);
                }
                RuleBody::Lexical(_) => lexical.push(i),
            }
        }
        Ok(Grammar {
            rules,
            start,
            by_first_daughter,
            by_lhs,
            lexical,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    /// Phrasal rules whose first daughter has the given functor, in file order.
    pub fn rules_starting_with<'a>(&'a self, functor: &str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.by_first_daughter
            .get(functor)
            .into_iter()
            .flatten()
            .map(move |&i| &self.rules[i])
    }

    /// Phrasal rules with the given mother functor, in file order.
    pub fn rules_for<'a>(&'a self, functor: &str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.by_lhs
            .get(functor)
            .into_iter()
            .flatten()
            .map(move |&i| &self.rules[i])
    }

    pub fn phrasal_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.rhs().is_some())
    }

    pub fn lexical_rules(&self) -> impl Iterator<Item = &Rule> {
        self.lexical.iter().map(|&i| &self.rules[i])
    }

    /// Lexical entries spelled exactly `words`.
    pub fn lexical_entries_for<'a>(
        &'a self,
        words: &'a [Name],
    ) -> impl Iterator<Item = &'a Rule> + 'a {
        self.lexical_rules()
            .filter(move |r| r.words() == Some(words))
    }
}

/// A category paired with its orthography.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sign {
    pub category: Category,
    pub phon: Vec<Name>,
}

impl Sign {
    pub fn new(category: Category, phon: Vec<Name>) -> Self {
        Sign { category, phon }
    }

    pub fn word(category: Category, word: &str) -> Self {
        Sign {
            category,
            phon: vec![word.into()],
        }
    }
}

impl Term for Sign {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.category.visit_vars(f)
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        Sign {
            category: self.category.map_vars(f),
            phon: self.phon.clone(),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        Sign {
            category: self.category.apply(s),
            phon: self.phon.clone(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_sign(self))
    }
}

/// Numbered multiset of signs; sign `i` (1-based) is node `i` of the chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bag {
    signs: Vec<Sign>,
}

impl Bag {
    pub fn new(signs: Vec<Sign>) -> Result<Self, LoadError> {
        if signs.is_empty() {
            return Err(LoadError::EmptyBag);
        }
        if signs.len() > MAX_BAG_SIZE {
            return Err(LoadError::BagTooLarge {
                len: signs.len(),
                max: MAX_BAG_SIZE,
            });
        }
        Ok(Bag { signs })
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Sign at 1-based position `i`.
    pub fn get(&self, i: usize) -> Option<&Sign> {
        i.checked_sub(1).and_then(|i| self.signs.get(i))
    }
}

impl Term for Bag {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.signs.visit_vars(f)
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        Bag {
            signs: self.signs.map_vars(f),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        Bag {
            signs: self.signs.apply(s),
        }
    }
}

/// Associates a set of source signs with a set of target signs; shared
/// variables equate semantic indices across the two languages.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilingualEntry {
    pub source: Vec<Sign>,
    pub target: Vec<Sign>,
    pub line: usize,
}

impl BilingualEntry {
    /// Every target variable must occur in the source side.
    pub fn new(source: Vec<Sign>, target: Vec<Sign>, line: usize) -> Result<Self, LoadError> {
        if source.is_empty() || target.is_empty() {
            return Err(LoadError::Syntax {
                line,
                col: 1,
                msg: "bilingual entry sides must be nonempty".into(),
            });
        }
        let mut src_ids = Vec::new();
        source.visit_vars(&mut |v| src_ids.push(v.id()));
        let mut unbound = None;
        target.visit_vars(&mut |v| {
            if unbound.is_none() && !src_ids.contains(&v.id()) {
                unbound = Some(v.name().to_string());
            }
        });
        if let Some(var) = unbound {
            return Err(LoadError::UnboundTargetVariable { line, var });
        }
        Ok(BilingualEntry {
            source,
            target,
            line,
        })
    }
}

impl Term for BilingualEntry {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.source.visit_vars(f);
        self.target.visit_vars(f);
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        BilingualEntry {
            source: self.source.map_vars(f),
            target: self.target.map_vars(f),
            line: self.line,
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        BilingualEntry {
            source: self.source.apply(s),
            target: self.target.apply(s),
            line: self.line,
        }
    }
}
