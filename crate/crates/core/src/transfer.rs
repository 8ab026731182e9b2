//! Bilingual lexical transfer from a source bag to target bags.

use std::collections::HashSet;

use crate::grammar::{Bag, BilingualEntry, Sign};
use crate::term::{
    canonicalize, standardize_apart, unify, unify_under, Substitution, Term, VarGen,
};
use crate::LoadError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransferError {
    #[error("bilingual lexicon is empty")]
    EmptyLexicon,
    #[error("source sign {position} `{sign}` matches no bilingual entry")]
    Unmatchable { position: usize, sign: Sign },
    #[error("no combination of bilingual entries covers the source bag exactly")]
    NoPartition,
    #[error(transparent)]
    Bag(#[from] LoadError),
}

/// One use of a bilingual entry: its index in the lexicon and the 1-based
/// source positions it consumed, in pattern order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub entry: usize,
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub bag: Bag,
    pub trace: Vec<Match>,
}

/// Distinct target bags in discovery order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransferResult {
    pub results: Vec<Transfer>,
}

impl TransferResult {
    pub fn bags(&self) -> impl Iterator<Item = &Bag> {
        self.results.iter().map(|t| &t.bag)
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

fn matches_under(s: &Substitution, pattern: &Sign, sign: &Sign) -> Option<Substitution> {
    (pattern.phon == sign.phon)
        .then(|| unify_under(s, &pattern.category, &sign.category))
        .flatten()
}

struct Search<'a> {
    src: &'a [Sign],
    lexicon: &'a [BilingualEntry],
    vars: VarGen,
    used: Vec<bool>,
    trace: Vec<Match>,
    /// Instantiable target templates, parallel to `trace`.
    targets: Vec<Vec<Sign>>,
    out: Vec<Transfer>,
    seen: HashSet<Bag>,
}

impl Search<'_> {
    fn cover(&mut self, s: &Substitution) -> Result<(), TransferError> {
        let Some(first) = self.used.iter().position(|u| !u) else {
            return self.emit(s);
        };
        for e in 0..self.lexicon.len() {
            // fresh copy per use, so one entry can match several times
            let entry = standardize_apart(&self.lexicon[e], &mut self.vars);
            self.assign(e, &entry, 0, first, s, &mut Vec::new())?;
        }
        Ok(())
    }

    /// Maps pattern `k` onwards of entry `e` injectively to unused signs;
    /// one of them must be the lowest unused position `first`.
    fn assign(
        &mut self,
        e: usize,
        entry: &BilingualEntry,
        k: usize,
        first: usize,
        s: &Substitution,
        positions: &mut Vec<usize>,
    ) -> Result<(), TransferError> {
        let patterns = &entry.source;
        if k == patterns.len() {
            if !positions.contains(&first) {
                return Ok(());
            }
            self.trace.push(Match {
                entry: e,
                positions: positions.iter().map(|p| p + 1).collect(),
            });
            self.targets.push(entry.target.clone());
            let r = self.cover(s);
            self.targets.pop();
            self.trace.pop();
            return r;
        }
        let pattern = &patterns[k];
        for i in first..self.src.len() {
            if self.used[i] {
                continue;
            }
            let Some(s2) = matches_under(s, pattern, &self.src[i]) else {
                continue;
            };
            self.used[i] = true;
            positions.push(i);
            let r = self.assign(e, entry, k + 1, first, &s2, positions);
            positions.pop();
            self.used[i] = false;
            r?;
        }
        Ok(())
    }

    fn emit(&mut self, s: &Substitution) -> Result<(), TransferError> {
        let mut groups: Vec<(usize, usize)> = self
            .trace
            .iter()
            .enumerate()
            .map(|(g, m)| (*m.positions.iter().min().unwrap(), g))
            .collect();
        groups.sort();
        let mut signs = Vec::new();
        for (_, g) in groups {
            signs.extend(self.targets[g].apply(s));
        }
        let bag = Bag::new(signs)?;
        if self.seen.insert(canonicalize(&bag)) {
            self.out.push(Transfer {
                bag,
                trace: self.trace.clone(),
            });
        }
        Ok(())
    }
}

/// Every exact cover of `src` by bilingual entries, rewritten to target signs.
///
/// Entries are tried in lexicon order against the lowest unconsumed source
/// sign, so each partition is found once per assignment of patterns to
/// signs; bags equal up to variable renaming are reported once.
pub fn transfer(src: &Bag, lexicon: &[BilingualEntry]) -> Result<TransferResult, TransferError> {
    if lexicon.is_empty() {
        return Err(TransferError::EmptyLexicon);
    }
    let mut vars = VarGen::new();
    vars.reserve_for(src);
    for e in lexicon {
        vars.reserve_for(e);
    }
    for (i, sign) in src.signs().iter().enumerate() {
        let known = lexicon
            .iter()
            .flat_map(|e| &e.source)
            .any(|p| p.phon == sign.phon && unify(&p.category, &sign.category).is_some());
        if !known {
            return Err(TransferError::Unmatchable {
                position: i + 1,
                sign: sign.clone(),
            });
        }
    }

    let mut search = Search {
        src: src.signs(),
        lexicon,
        vars,
        used: vec![false; src.len()],
        trace: Vec::new(),
        targets: Vec::new(),
        out: Vec::new(),
        seen: HashSet::new(),
    };
    search.cover(&Substitution::new())?;
    if search.out.is_empty() {
        return Err(TransferError::NoPartition);
    }
    Ok(TransferResult {
        results: search.out,
    })
}
