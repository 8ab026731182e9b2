use std::collections::BTreeSet;

use proptest::prelude::*;
use sbgen_core::NodeSet;

fn positions() -> impl Strategy<Value = BTreeSet<usize>> {
    prop::collection::btree_set(1..=20usize, 0..=20)
}

fn encode(s: &BTreeSet<usize>) -> NodeSet {
    NodeSet::encode(s.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn operations_match_set_semantics(a in positions(), b in positions()) {
        let (x, y) = (encode(&a), encode(&b));
        prop_assert_eq!(x.positions().collect::<BTreeSet<_>>(), a.clone());
        prop_assert_eq!(x.bits(), a.iter().map(|i| 1u64 << (i - 1)).sum::<u64>());
        prop_assert_eq!(x.union(y), encode(&a.union(&b).copied().collect()));
        prop_assert_eq!(x.is_disjoint(y), a.is_disjoint(&b));
        prop_assert_eq!(x.is_subset(y), a.is_subset(&b));
        prop_assert_eq!(x.len(), a.len());
    }
}

#[test]
fn anchors() {
    assert_eq!(NodeSet::encode([2, 4, 5]).unwrap().bits(), 26);
    assert_eq!(NodeSet::encode([1, 2, 3]).unwrap().bits(), 7);
    assert_eq!(NodeSet::full(3).unwrap().bits(), 7);
    assert_eq!(NodeSet::from_bits(26).to_string(), "{2,4,5}");
}
