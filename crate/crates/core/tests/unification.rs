use proptest::prelude::*;
use sbgen_core::term::{alpha_equal, canonicalize, Term};
use sbgen_core::{unify, Category, IndexList, IndexTerm, Substitution, Var};

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn item_var(i: u32) -> Var {
    Var::new(i, format!("X{i}"))
}

fn tail_var(i: u32) -> Var {
    Var::new(100 + i, format!("P{i}"))
}

fn term() -> impl Strategy<Value = IndexTerm> {
    prop_oneof![
        (0..3usize).prop_map(|i| IndexTerm::atom(ATOMS[i])),
        (0..3u32).prop_map(|i| IndexTerm::Var(item_var(i))),
    ]
}

fn closed_category() -> impl Strategy<Value = Category> {
    prop::collection::vec(term(), 0..4)
        .prop_map(|items| Category::new("f", IndexList::closed(items)))
}

fn open_category() -> impl Strategy<Value = Category> {
    (
        prop::collection::vec(term(), 0..4),
        prop::option::of(0..2u32),
    )
        .prop_map(|(items, tail)| {
            let indices = match tail {
                Some(t) => IndexList::open(items, tail_var(t)),
                None => IndexList::closed(items),
            };
            Category::new("f", indices)
        })
}

fn vars_of(cs: &[&Category]) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::new();
    for c in cs {
        c.visit_vars(&mut |v| {
            if !out.contains(v) {
                out.push(v.clone())
            }
        });
    }
    out
}

/// Every grounding of `vars` over the three atoms.
fn groundings(vars: &[Var]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    for v in vars {
        let mut next = Vec::new();
        for s in &out {
            for a in ATOMS {
                let mut s = s.clone();
                s.bind_term(v.clone(), IndexTerm::atom(a));
                next.push(s);
            }
        }
        out = next;
    }
    out
}

proptest! {
    #[test]
    fn unifier_equates(a in open_category(), b in open_category()) {
        if let Some(s) = unify(&a, &b) {
            prop_assert_eq!(a.apply(&s), b.apply(&s));
        }
    }

    #[test]
    fn unification_is_symmetric(a in open_category(), b in open_category()) {
        match (unify(&a, &b), unify(&b, &a)) {
            (Some(s), Some(t)) => prop_assert!(alpha_equal(&a.apply(&s), &a.apply(&t))),
            (None, None) => {}
            _ => prop_assert!(false, "one direction failed"),
        }
    }

    #[test]
    fn substitution_is_idempotent(a in open_category(), b in open_category()) {
        if let Some(s) = unify(&a, &b) {
            let once = a.apply(&s);
            prop_assert_eq!(once.apply(&s), once);
        }
    }

    #[test]
    fn unifier_is_most_general(a in closed_category(), b in closed_category()) {
        let mgu = unify(&a, &b);
        let mut solved = false;
        for g in groundings(&vars_of(&[&a, &b])) {
            if a.apply(&g) != b.apply(&g) {
                continue;
            }
            solved = true;
            let s = mgu.as_ref().expect("ground unifier exists but unify failed");
            // g factors through the mgu
            prop_assert_eq!(a.apply(s).apply(&g), a.apply(&g));
            prop_assert_eq!(b.apply(s).apply(&g), b.apply(&g));
        }
        prop_assert_eq!(solved, mgu.is_some());
    }

    #[test]
    fn canonical_form_decides_alpha_equality(a in open_category(), shift in 1u32..50) {
        let renamed = a.map_vars(&mut |v| Var::new(v.id() + shift * 1000, v.name()));
        prop_assert!(alpha_equal(&a, &renamed));
        prop_assert_eq!(canonicalize(&a), canonicalize(&renamed));
    }
}

#[test]
fn tail_occurs_check() {
    // f(X|P) against f(X, a|P) would need P = [a|P]
    let p = tail_var(0);
    let x = IndexTerm::Var(item_var(0));
    let a = Category::new("f", IndexList::open(vec![x.clone()], p.clone()));
    let b = Category::new("f", IndexList::open(vec![x, IndexTerm::atom("a")], p));
    assert!(unify(&a, &b).is_none());
}

#[test]
fn tails_absorb_suffixes() {
    let a = Category::new(
        "vp",
        IndexList::open(vec![IndexTerm::atom("j")], tail_var(0)),
    );
    let b = Category::ground("vp", &["j", "m", "l"]);
    let s = unify(&a, &b).unwrap();
    assert_eq!(a.apply(&s), b);
}
