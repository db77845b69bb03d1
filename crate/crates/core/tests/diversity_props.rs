mod common;

use common::{blocky_frame, frame, subset};
use proptest::prelude::*;

use pqml::axioms::diamond_collapse;
use pqml::diversity::{duplicate_structure, m_diamond_quotient};
use pqml::semantics::valid_on_kripke;
use pqml::{are_duplicates, diversity, diversity_generated, GeneralFrame, KripkeFrame, LocalKind};

/// Applies the transposition to every edge and compares edge sets.
fn swap_is_automorphism(f: &KripkeFrame, w: usize, u: usize) -> bool {
    let t = |x: usize| if x == w { u } else if x == u { w } else { x };
    let mut image: Vec<(usize, usize)> = f.edges().into_iter().map(|(a, b)| (t(a), t(b))).collect();
    image.sort();
    image == f.edges()
}

fn strategy() -> impl Strategy<Value = KripkeFrame> {
    prop_oneof![frame(7), blocky_frame(8)]
}

proptest! {
    #[test]
    fn duplicates_are_exactly_automorphic_swaps(f in strategy()) {
        let ds = duplicate_structure(&f);
        for w in 0..f.len() {
            for u in 0..f.len() {
                let expected = swap_is_automorphism(&f, w, u);
                prop_assert_eq!(are_duplicates(&f, w, u), expected);
                prop_assert_eq!(ds.class_of[w] == ds.class_of[u], expected);
            }
        }
    }

    #[test]
    fn classes_partition_the_worlds_in_order(f in strategy()) {
        let ds = duplicate_structure(&f);
        let union = ds.classes.iter().fold(pqml::WorldSet::EMPTY, |acc, &c| {
            assert!(!acc.intersects(c));
            acc.union(c)
        });
        prop_assert_eq!(union, f.universe());
        let firsts: Vec<usize> = ds.classes.iter().map(|c| c.first().unwrap()).collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(diversity(&f) <= f.len());
        prop_assert!(diversity_generated(&f) <= f.len());
    }

    #[test]
    fn edges_between_classes_are_all_or_nothing(f in strategy()) {
        let ds = duplicate_structure(&f);
        for (i, &a) in ds.classes.iter().enumerate() {
            for (j, &b) in ds.classes.iter().enumerate() {
                let pairs: Vec<bool> = a
                    .iter()
                    .flat_map(|x| b.iter().filter(move |&y| i != j || x != y).map(move |y| (x, y)))
                    .map(|(x, y)| f.related(x, y))
                    .collect();
                if i != j {
                    prop_assert!(pairs.iter().all(|&e| e == pairs[0]));
                    prop_assert_eq!(ds.quotient[i].contains(j), pairs[0]);
                }
            }
        }
    }

    #[test]
    fn quotient_and_kinds_match_internal_edges(f in strategy()) {
        let ds = duplicate_structure(&f);
        for (i, &d) in ds.classes.iter().enumerate() {
            let loops = d.iter().filter(|&w| f.related(w, w)).count();
            let off = d.iter().flat_map(|a| d.iter().map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && f.related(a, b))
                .count();
            let size = d.len();
            let expected = match (loops, off) {
                (0, 0) => LocalKind::Empty,
                (l, o) if l == size && o == size * (size - 1) => LocalKind::Full,
                (0, _) => LocalKind::Coidentity,
                _ => LocalKind::Identity,
            };
            prop_assert_eq!(ds.kinds[i], expected);
            prop_assert_eq!(ds.quotient[i].contains(i), loops + off > 0);
        }
    }

    #[test]
    fn quotient_diamond_matches(f in strategy(), x in any::<u64>()) {
        let ds = duplicate_structure(&f);
        let x = subset(&f, x);
        prop_assert_eq!(m_diamond_quotient(&ds, x), f.m_diamond(x));
    }

    #[test]
    fn generated_diversity_is_the_largest_rooted_one(f in strategy()) {
        let g = GeneralFrame::full(f.clone());
        let best = (0..f.len())
            .map(|w| diversity(&g.generated_subframe(w).frame.base))
            .max()
            .unwrap();
        prop_assert_eq!(diversity_generated(&f), best);
    }

    #[test]
    fn low_diversity_collapses_diamonds(f in blocky_frame(7)) {
        let d = diversity_generated(&f);
        let verdict = valid_on_kripke(&diamond_collapse(d), &f).unwrap();
        prop_assert!(verdict.is_valid());
    }
}
