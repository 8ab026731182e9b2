//! Chart machinery shared by the generator and the parser: node sets as
//! bitstrings, dotted-rule edges, a functor-indexed chart, the agenda and
//! the redundancy index.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::grammar::{Sign, MAX_BAG_SIZE};
use crate::syntax::{render_words, Namer};
use crate::term::{canonicalize, Category, Name, Substitution, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NodeSetError {
    #[error("bag position {0} is outside 1..={max}", max = MAX_BAG_SIZE)]
    PositionOutOfRange(usize),
    #[error("bag size {0} is outside 1..={max}", max = MAX_BAG_SIZE)]
    BadSize(usize),
}

/// Set of bag positions, bit `i-1` standing for position `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{2,4,5}` encodes as `0b11010 = 26`.
    pub fn encode<I: IntoIterator<Item = usize>>(positions: I) -> Result<Self, NodeSetError> {
        positions.into_iter().try_fold(NodeSet::EMPTY, |acc, i| {
            Ok(acc.union(NodeSet::singleton(i)?))
        })
    }

    pub fn singleton(i: usize) -> Result<Self, NodeSetError> {
        if i == 0 || i > MAX_BAG_SIZE {
            return Err(NodeSetError::PositionOutOfRange(i));
        }
        Ok(NodeSet(1u64 << (i - 1)))
    }

    /// All positions `1..=n`.
    pub fn full(n: usize) -> Result<Self, NodeSetError> {
        match n {
            0 => Err(NodeSetError::BadSize(0)),
            64 => Ok(NodeSet(u64::MAX)),
            n if n < 64 => Ok(NodeSet((1u64 << n) - 1)),
            n => Err(NodeSetError::BadSize(n)),
        }
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_BAG_SIZE).contains(&i) && self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Positions in increasing order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        (1..=MAX_BAG_SIZE).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.positions().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", ps.join(","))
    }
}

/// A hyperedge `<N, A[phrase] -> found . remaining>`.
///
/// A bag sign enters the chart as a *sign edge* with nothing found and
/// nothing remaining; lexical entries lift it to an ordinary inactive edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub nodes: NodeSet,
    pub lhs: Category,
    pub phrase: Vec<Name>,
    pub found: Vec<Category>,
    pub remaining: Vec<Category>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Sign,
    Inactive,
    Active,
}

impl Edge {
    /// Initial edge for the sign at 1-based bag position `i`.
    pub fn from_sign(i: usize, sign: &Sign) -> Result<Self, NodeSetError> {
        Ok(Edge {
            nodes: NodeSet::singleton(i)?,
            lhs: sign.category.clone(),
            phrase: sign.phon.clone(),
            found: Vec::new(),
            remaining: Vec::new(),
        })
    }

    pub fn kind(&self) -> EdgeKind {
        match (self.found.is_empty(), self.remaining.is_empty()) {
            (_, false) => EdgeKind::Active,
            (true, true) => EdgeKind::Sign,
            (false, true) => EdgeKind::Inactive,
        }
    }

    pub fn is_active(&self) -> bool {
        !self.remaining.is_empty()
    }

    /// Category right after the dot.
    pub fn expected(&self) -> Option<&Category> {
        self.remaining.first()
    }
}

impl Term for Edge {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.lhs.visit_vars(f);
        self.found.visit_vars(f);
        self.remaining.visit_vars(f);
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        Edge {
            nodes: self.nodes,
            lhs: self.lhs.map_vars(f),
            phrase: self.phrase.clone(),
            found: self.found.map_vars(f),
            remaining: self.remaining.map_vars(f),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        Edge {
            nodes: self.nodes,
            lhs: self.lhs.apply(s),
            phrase: self.phrase.clone(),
            found: self.found.apply(s),
            remaining: self.remaining.apply(s),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut n = Namer::new();
        write!(
            f,
            "<{}, {} [{}] ->",
            self.nodes,
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

/// Where an item lives in the chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexKey {
    /// Bare bag signs awaiting lexical lookup.
    Sign,
    /// Inactive edges by the functor of their mother.
    Inactive(Name),
    /// Active edges by the functor right after the dot.
    Active(Name),
}

pub trait ChartItem {
    fn index_key(&self) -> IndexKey;
}

impl ChartItem for Edge {
    fn index_key(&self) -> IndexKey {
        match self.kind() {
            EdgeKind::Sign => IndexKey::Sign,
            EdgeKind::Inactive => IndexKey::Inactive(self.lhs.functor.clone()),
            EdgeKind::Active => IndexKey::Active(self.remaining[0].functor.clone()),
        }
    }
}

/// Processed edges, bucketed by [`IndexKey`].
#[derive(Clone, Debug)]
pub struct Chart<E> {
    buckets: HashMap<IndexKey, Vec<E>>,
    len: usize,
}

impl<E> Default for Chart<E> {
    fn default() -> Self {
        Chart {
            buckets: HashMap::new(),
            len: 0,
        }
    }
}

impl<E: ChartItem> Chart<E> {
    pub fn new() -> Self {
        Chart::default()
    }

    pub fn insert(&mut self, e: E) {
        self.buckets.entry(e.index_key()).or_default().push(e);
        self.len += 1;
    }

    pub fn lookup(&self, key: &IndexKey) -> &[E] {
        self.buckets.get(key).map_or(&[], Vec::as_slice)
    }

    pub fn inactive_with(&self, functor: &str) -> &[E] {
        self.lookup(&IndexKey::Inactive(functor.into()))
    }

    pub fn active_expecting(&self, functor: &str) -> &[E] {
        self.lookup(&IndexKey::Active(functor.into()))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.buckets.values().flatten()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Discipline {
    /// Queue: breadth-first.
    #[default]
    Fifo,
    /// Stack: depth-first.
    Lifo,
}

impl std::str::FromStr for Discipline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fifo" => Ok(Discipline::Fifo),
            "lifo" => Ok(Discipline::Lifo),
            other => Err(format!(
                "unknown agenda discipline `{other}` (expected fifo or lifo)"
            )),
        }
    }
}

/// Edges waiting to be processed.
#[derive(Clone, Debug)]
pub struct Agenda<E> {
    items: VecDeque<E>,
    discipline: Discipline,
}

impl<E> Agenda<E> {
    pub fn new(discipline: Discipline) -> Self {
        Agenda {
            items: VecDeque::new(),
            discipline,
        }
    }

    pub fn push(&mut self, e: E) {
        self.items.push_back(e);
    }

    pub fn pop(&mut self) -> Option<E> {
        match self.discipline {
            Discipline::Fifo => self.items.pop_front(),
            Discipline::Lifo => self.items.pop_back(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.items.iter()
    }
}

/// Every edge ever admitted to the chart or agenda, up to variable renaming.
#[derive(Clone, Debug)]
pub struct RedundancyIndex<E> {
    seen: HashSet<E>,
}

impl<E> Default for RedundancyIndex<E> {
    fn default() -> Self {
        RedundancyIndex {
            seen: HashSet::new(),
        }
    }
}

impl<E: Term + Eq + Hash> RedundancyIndex<E> {
    pub fn new() -> Self {
        RedundancyIndex::default()
    }

    /// True iff an alpha-equal edge (same nodes, same dotted rule) is
    /// already in the chart or on the agenda.
    pub fn is_redundant(&self, e: &E) -> bool {
        self.seen.contains(&canonicalize(e))
    }

    /// Records `e`; returns false if it was already present.
    pub fn admit(&mut self, e: &E) -> bool {
        self.seen.insert(canonicalize(e))
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}
