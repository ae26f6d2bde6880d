mod common;

use connsum::engine::{derive_dual, derive_harmonic, derive_hoffman_dual, derive_shuffle, replay_trace};
use connsum::index::oracle::{dual_oracle, harmonic_oracle, hoffman_dual_oracle, shuffle_oracle};
use connsum::{ind, Index};
use proptest::prelude::*;

#[test]
fn library_oracles_match_word_products() {
    for k in Index::all_up_to_weight(4) {
        for l in Index::all_up_to_weight(4) {
            assert_eq!(common::as_map(&shuffle_oracle(&k, &l)), common::shuffle(k.entries(), l.entries()), "{k:?} ш {l:?}");
            assert_eq!(common::as_map(&harmonic_oracle(&k, &l)), common::stuffle(k.entries(), l.entries()), "{k:?} * {l:?}");
        }
    }
    for k in Index::all_up_to_weight(8) {
        if k.is_admissible() {
            assert_eq!(dual_oracle(&k).unwrap().entries(), common::dual(k.entries()).as_slice());
        }
        if !k.is_empty() {
            assert_eq!(hoffman_dual_oracle(&k).unwrap().entries(), common::hoffman_dual(k.entries()).as_slice());
        }
    }
}

#[test]
fn worked_products() {
    let (s, _) = derive_shuffle(&ind!(1, 1), &ind!(1)).unwrap();
    assert_eq!(s.to_string(), "3·(1,1,1)");
    let (s, _) = derive_harmonic(&ind!(1), &ind!(2)).unwrap();
    assert_eq!(common::as_map(&s), common::stuffle(&[1], &[2]));
    assert_eq!(s.len(), 3);
    let (d, t) = derive_dual(&ind!(3, 2)).unwrap();
    assert_eq!((d, t.len()), (ind!(2, 1, 2), 5));
    let (d, _) = derive_hoffman_dual(&ind!(3, 2)).unwrap();
    assert_eq!(d, ind!(1, 1, 2, 1));
}

#[test]
fn long_shuffles_stay_within_the_chain_bound() {
    // more total rewrites than the quadratic bound, but every chain is short
    for (k, l) in [(ind!(2, 2, 3), ind!(3, 3)), (ind!(3, 3, 3), ind!(3, 3, 3))] {
        let (s, t) = derive_shuffle(&k, &l).unwrap();
        assert_eq!(common::as_map(&s), common::shuffle(k.entries(), l.entries()));
        assert_eq!(replay_trace(&t).unwrap(), t.result);
    }
}

fn index(max_len: usize) -> impl Strategy<Value = Index> {
    prop::collection::vec(1u32..4, 0..=max_len).prop_map(|v| Index::from_slice(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_matches_words(k in index(3), l in index(3)) {
        let (s, t) = derive_shuffle(&k, &l).unwrap();
        prop_assert_eq!(common::as_map(&s), common::shuffle(k.entries(), l.entries()));
        prop_assert_eq!(replay_trace(&t).unwrap(), t.result);
    }

    #[test]
    fn harmonic_matches_stuffle(k in index(3), l in index(3)) {
        let (s, t) = derive_harmonic(&k, &l).unwrap();
        prop_assert_eq!(common::as_map(&s), common::stuffle(k.entries(), l.entries()));
        prop_assert_eq!(replay_trace(&t).unwrap(), t.result);
    }

    #[test]
    fn duals_are_involutions(k in index(5)) {
        if k.is_admissible() {
            let (d, t) = derive_dual(&k).unwrap();
            prop_assert_eq!(d.entries().to_vec(), common::dual(k.entries()));
            prop_assert_eq!(derive_dual(&d).unwrap().0, k.clone());
            prop_assert_eq!(t.len(), k.weight() as usize);
        }
        if !k.is_empty() {
            let (d, t) = derive_hoffman_dual(&k).unwrap();
            prop_assert_eq!(d.entries().to_vec(), common::hoffman_dual(k.entries()));
            prop_assert_eq!(derive_hoffman_dual(&d).unwrap().0, k.clone());
            prop_assert_eq!(t.len(), k.weight() as usize);
        }
    }

    #[test]
    fn index_text_round_trip(k in index(6)) {
        prop_assert_eq!(k.to_string().parse::<Index>().unwrap(), k);
    }
}
