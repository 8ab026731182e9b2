//! Categories with semantic-index lists, and the unification machinery over them.
//!
//! A category is a functor plus an index list such as `v(X,Y,l)` or the
//! open-tailed `s(X|P)`. Index lists are cons-lists: the tail variable of an
//! open list binds to another (possibly open) index list, which is how a rule
//! like `s(X|P) -> np(X) vp(X|P)` shares the rest of the indices between the
//! mother and the verb phrase.
//!
//! Variables are sorted: a variable either stands for a single index (item
//! position) or for the rest of a list (tail position), never both. The
//! surface parser enforces this, and renaming preserves it.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Interned-ish name: functors, atoms, variable hints and words all share it.
pub type Name = Arc<str>;

/// A logic variable. Identity is the numeric id; the name is only a display hint.
#[derive(Clone, Debug)]
pub struct Var {
    id: u32,
    name: Name,
}

impl Var {
    pub fn new(id: u32, name: impl Into<Name>) -> Self {
        Var {
            id,
            name: name.into(),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

/// Source of fresh variable ids for one derivation session.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    /// A generator whose ids are all above every variable in `terms`.
    pub fn above<T: Term>(terms: &[&T]) -> Self {
        let mut max = None;
        for t in terms {
            t.visit_vars(&mut |v| max = max.max(Some(v.id)));
        }
        VarGen {
            next: max.map_or(0, |m| m + 1),
        }
    }

    pub fn fresh(&mut self, name: impl Into<Name>) -> Var {
        let id = self.next;
        self.next = self.next.checked_add(1).expect("variable ids exhausted");
        Var::new(id, name)
    }

    pub fn peek(&self) -> u32 {
        self.next
    }

    /// Makes sure future ids are above `id`.
    pub fn reserve_through(&mut self, id: u32) {
        self.next = self.next.max(id + 1);
    }

    /// Makes sure future ids are above every variable in `t`.
    pub fn reserve_for<T: Term>(&mut self, t: &T) {
        t.visit_vars(&mut |v| self.next = self.next.max(v.id + 1));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexTerm {
    Atom(Name),
    Var(Var),
}

impl IndexTerm {
    pub fn atom(name: &str) -> Self {
        IndexTerm::Atom(name.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexList {
    pub items: Vec<IndexTerm>,
    /// Open tail; `None` for a closed list.
    pub tail: Option<Var>,
}

impl IndexList {
    pub fn closed(items: Vec<IndexTerm>) -> Self {
        IndexList { items, tail: None }
    }

    pub fn open(items: Vec<IndexTerm>, tail: Var) -> Self {
        IndexList {
            items,
            tail: Some(tail),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.tail.is_none() && self.items.iter().all(|t| matches!(t, IndexTerm::Atom(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Category {
    pub functor: Name,
    pub indices: IndexList,
}

impl Category {
    pub fn new(functor: impl Into<Name>, indices: IndexList) -> Self {
        Category {
            functor: functor.into(),
            indices,
        }
    }

    /// Ground category from atom names, e.g. `Category::ground("v", &["j", "m", "l"])`.
    pub fn ground(functor: &str, atoms: &[&str]) -> Self {
        Category::new(
            functor,
            IndexList::closed(atoms.iter().map(|a| IndexTerm::atom(a)).collect()),
        )
    }
}

/// What a variable is bound to: an item variable to an index, a tail
/// variable to a list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Term(IndexTerm),
    List(IndexList),
}

/// An idempotent substitution. Bindings are composed eagerly, so no bound
/// variable ever occurs on a right-hand side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: Vec<(Var, Binding)>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: &Var) -> Option<&Binding> {
        self.bindings.iter().find(|(k, _)| k == v).map(|(_, b)| b)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Var, &Binding)> {
        self.bindings.iter().map(|(v, b)| (v, b))
    }

    /// Adds `v -> t` where `t` is already resolved under `self`.
    pub fn bind_term(&mut self, v: Var, t: IndexTerm) {
        debug_assert!(self.get(&v).is_none());
        if t == IndexTerm::Var(v.clone()) {
            return;
        }
        let single = Substitution {
            bindings: vec![(v.clone(), Binding::Term(t.clone()))],
        };
        for (_, b) in self.bindings.iter_mut() {
            *b = single.apply_binding(b);
        }
        self.bindings.push((v, Binding::Term(t)));
    }

    /// Adds `v -> l` where `l` is already resolved under `self`. Fails the
    /// occurs check when `l` ends in `v` and is nonempty.
    pub fn bind_list(&mut self, v: Var, l: IndexList) -> bool {
        debug_assert!(self.get(&v).is_none());
        if l.tail.as_ref() == Some(&v) {
            return l.items.is_empty();
        }
        let single = Substitution {
            bindings: vec![(v.clone(), Binding::List(l.clone()))],
        };
        for (_, b) in self.bindings.iter_mut() {
            *b = single.apply_binding(b);
        }
        self.bindings.push((v, Binding::List(l)));
        true
    }

    fn apply_binding(&self, b: &Binding) -> Binding {
        match b {
            Binding::Term(t) => Binding::Term(t.apply(self)),
            Binding::List(l) => Binding::List(l.apply(self)),
        }
    }

    fn walk(&self, t: &IndexTerm) -> IndexTerm {
        match t {
            IndexTerm::Var(v) => match self.get(v) {
                Some(Binding::Term(b)) => b.clone(),
                _ => t.clone(),
            },
            IndexTerm::Atom(_) => t.clone(),
        }
    }

    /// Extends `self` so that `a` and `b` become equal. On failure `self`
    /// is left partially extended and should be discarded.
    pub fn unify_terms(&mut self, a: &IndexTerm, b: &IndexTerm) -> bool {
        let (a, b) = (self.walk(a), self.walk(b));
        match (a, b) {
            (IndexTerm::Atom(x), IndexTerm::Atom(y)) => x == y,
            (IndexTerm::Var(v), t) | (t, IndexTerm::Var(v)) => {
                self.bind_term(v, t);
                true
            }
        }
    }

    pub fn unify_lists(&mut self, a: &IndexList, b: &IndexList) -> bool {
        let a = a.apply(self);
        let b = b.apply(self);
        let common = a.items.len().min(b.items.len());
        for (x, y) in a.items[..common].iter().zip(&b.items[..common]) {
            if !self.unify_terms(x, y) {
                return false;
            }
        }
        // item unification never binds tail variables
        let rest = |l: &IndexList| IndexList {
            items: l.items[common..].to_vec(),
            tail: l.tail.clone(),
        };
        let (short, long) = if a.items.len() <= b.items.len() {
            (&a, &b)
        } else {
            (&b, &a)
        };
        match (&short.tail, &long.tail) {
            (None, None) => short.items.len() == long.items.len(),
            (None, Some(t)) if short.items.len() == long.items.len() => {
                self.bind_list(t.clone(), IndexList::default())
            }
            (None, Some(_)) => false,
            (Some(t), _) => {
                let rest = rest(long).apply(self);
                self.bind_list(t.clone(), rest)
            }
        }
    }

    pub fn unify_categories(&mut self, a: &Category, b: &Category) -> bool {
        a.functor == b.functor && self.unify_lists(&a.indices, &b.indices)
    }
}

/// Most general unifier of two categories, or `None` if they clash.
pub fn unify(a: &Category, b: &Category) -> Option<Substitution> {
    let mut s = Substitution::new();
    s.unify_categories(a, b).then_some(s)
}

/// Unifies `a` and `b` on top of an existing substitution.
pub fn unify_under(s: &Substitution, a: &Category, b: &Category) -> Option<Substitution> {
    let mut s = s.clone();
    s.unify_categories(a, b).then_some(s)
}

/// Structures that contain variables.
pub trait Term: Sized {
    /// Visits every variable occurrence in a fixed left-to-right order.
    fn visit_vars(&self, f: &mut dyn FnMut(&Var));
    /// Rebuilds the structure with every variable replaced by `f(var)`.
    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self;
    fn apply(&self, s: &Substitution) -> Self;

    fn has_vars(&self) -> bool {
        let mut any = false;
        self.visit_vars(&mut |_| any = true);
        any
    }
}

impl Term for IndexTerm {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        if let IndexTerm::Var(v) = self {
            f(v)
        }
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        match self {
            IndexTerm::Var(v) => IndexTerm::Var(f(v)),
            IndexTerm::Atom(_) => self.clone(),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        s.walk(self)
    }
}

impl Term for IndexList {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.items.iter().for_each(|t| t.visit_vars(f));
        if let Some(v) = &self.tail {
            f(v)
        }
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        IndexList {
            items: self.items.iter().map(|t| t.map_vars(f)).collect(),
            tail: self.tail.as_ref().map(&mut *f),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        if s.is_empty() {
            return self.clone();
        }
        let mut items: Vec<IndexTerm> = self.items.iter().map(|t| s.walk(t)).collect();
        let mut tail = self.tail.clone();
        if let Some(v) = &self.tail {
            if let Some(Binding::List(l)) = s.get(v) {
                items.extend(l.items.iter().cloned());
                tail = l.tail.clone();
            }
        }
        IndexList { items, tail }
    }
}

impl Term for Category {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.indices.visit_vars(f)
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        Category {
            functor: self.functor.clone(),
            indices: self.indices.map_vars(f),
        }
    }

    fn apply(&self, s: &Substitution) -> Self {
        Category {
            functor: self.functor.clone(),
            indices: self.indices.apply(s),
        }
    }
}

impl<T: Term> Term for Vec<T> {
    fn visit_vars(&self, f: &mut dyn FnMut(&Var)) {
        self.iter().for_each(|t| t.visit_vars(f))
    }

    fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Var) -> Self {
        self.iter().map(|t| t.map_vars(f)).collect()
    }

    fn apply(&self, s: &Substitution) -> Self {
        self.iter().map(|t| t.apply(s)).collect()
    }
}

/// Copy of `t` with every variable renamed to a fresh one. Sharing inside
/// `t` is preserved.
pub fn standardize_apart<T: Term>(t: &T, vars: &mut VarGen) -> T {
    let mut map: HashMap<u32, Var> = HashMap::new();
    t.map_vars(&mut |v| {
        map.entry(v.id)
            .or_insert_with(|| vars.fresh(v.name.clone()))
            .clone()
    })
}

/// Renames variables to `0, 1, 2, ...` in order of first occurrence.
/// Two terms are alpha-equivalent iff their canonical forms are equal.
pub fn canonicalize<T: Term>(t: &T) -> T {
    let mut map: HashMap<u32, Var> = HashMap::new();
    t.map_vars(&mut |v| {
        let next = map.len() as u32;
        map.entry(v.id)
            .or_insert_with(|| Var::new(next, v.name.clone()))
            .clone()
    })
}

/// Equality up to a bijective renaming of variables.
pub fn alpha_equal<T: Term + PartialEq>(a: &T, b: &T) -> bool {
    // same shape once every variable is erased to one placeholder...
    let erase = |t: &T| t.map_vars(&mut |v| Var::new(u32::MAX, v.name.clone()));
    if erase(a) != erase(b) {
        return false;
    }
    // ...and the occurrence sequences are related by a bijection
    let collect = |t: &T| {
        let mut out = Vec::new();
        t.visit_vars(&mut |v| out.push(v.id));
        out
    };
    let (xs, ys) = (collect(a), collect(b));
    let mut fwd = HashMap::new();
    let mut bwd = HashMap::new();
    xs.len() == ys.len()
        && xs
            .iter()
            .zip(&ys)
            .all(|(x, y)| *fwd.entry(*x).or_insert(*y) == *y && *bwd.entry(*y).or_insert(*x) == *x)
}

/// True when `a` and `b` share at least one variable.
pub fn share_vars<A: Term, B: Term>(a: &A, b: &B) -> bool {
    let mut ids = Vec::new();
    a.visit_vars(&mut |v| ids.push(v.id));
    if ids.is_empty() {
        return false;
    }
    let mut shared = false;
    b.visit_vars(&mut |v| shared |= ids.contains(&v.id));
    shared
}

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexTerm::Atom(a) => f.write_str(a),
            IndexTerm::Var(v) => f.write_str(&v.name),
        }
    }
}

impl fmt::Display for Category {
    /// Uses raw variable names; see `syntax` for collision-free rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.functor)?;
        let l = &self.indices;
        if l.items.is_empty() && l.tail.is_none() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, t) in l.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        if let Some(v) = &l.tail {
            write!(f, "|{}", v.name)?;
        }
        f.write_str(")")
    }
}
