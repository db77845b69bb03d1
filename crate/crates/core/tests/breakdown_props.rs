mod common;

use common::{blocky_frame, formula, frame, seeded, subset};
use proptest::prelude::*;
use rand::seq::SliceRandom;

use pqml::breakdown::{build_invariant_y, cells, eval_boolean, ExistsMode};
use pqml::diversity::duplicate_structure;
use pqml::syntax::p;
use pqml::{
    approx_equiv, extend_witness, extension_full, Breakdown, Formula, KripkeFrame, Valuation, Var,
    WorldSet,
};

fn strategy() -> impl Strategy<Value = KripkeFrame> {
    prop_oneof![frame(5), blocky_frame(8)]
}

fn valuation(f: &KripkeFrame, vars: &[Var], bits: &[u64]) -> Valuation {
    vars.iter().zip(bits).map(|(q, b)| (*q, subset(f, *b))).collect()
}

/// A set with the same cell sizes as `x`, via a random permutation inside
/// every cell.
fn shuffled_within_cells(x: WorldSet, cells: &[WorldSet], seed: u64) -> WorldSet {
    let mut rng = seeded(seed);
    let mut out = WorldSet::EMPTY;
    for &c in cells {
        let mut members: Vec<usize> = c.iter().collect();
        members.shuffle(&mut rng);
        out = out.union(members.into_iter().take(c.intersect(x).len()).collect());
    }
    out
}

proptest! {
    #[test]
    fn breakdown_agrees_with_semantics_on_each_class(
        f in strategy(),
        phi in formula(2, 14, 3, 2),
        bits in proptest::collection::vec(any::<u64>(), 2),
    ) {
        let v = valuation(&f, &[p(0), p(1)], &bits);
        let ds = duplicate_structure(&f);
        let full = extension_full(&phi, &f, &v).unwrap();
        let fs = Breakdown::new(&f, &ds).per_class(&phi, &v).unwrap();
        for (beta, &d) in fs.iter().zip(&ds.classes) {
            prop_assert!(beta.is_boolean());
            prop_assert!(beta.free_vars().is_subset(&phi.free_vars()));
            prop_assert_eq!(eval_boolean(beta, &v, f.len()).intersect(d), full.intersect(d));
        }
    }

    #[test]
    fn profile_and_powerset_modes_agree(
        f in strategy(),
        phi in formula(2, 12, 2, 2),
        bits in proptest::collection::vec(any::<u64>(), 2),
    ) {
        let v = valuation(&f, &[p(0), p(1)], &bits);
        let ds = duplicate_structure(&f);
        let fast = Breakdown::new(&f, &ds).per_class(&phi, &v).unwrap();
        let slow = Breakdown::new(&f, &ds).mode(ExistsMode::Powerset).per_class(&phi, &v).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn equal_profiles_give_equal_breakdowns(
        f in blocky_frame(9),
        phi in formula(2, 12, 2, 1),
        a in any::<u64>(),
        x in any::<u64>(),
        seed in any::<u64>(),
    ) {
        let v = valuation(&f, &[p(1)], &[a]);
        let ds = duplicate_structure(&f);
        let x = subset(&f, x);
        let c = cells(&v, &[p(1)], &ds);
        let y = shuffled_within_cells(x, &c, seed);
        let level = phi.quantifier_depth() as u32 + 1;
        prop_assert!(approx_equiv(&v.with(p(0), x), &v.with(p(0), y), level, &[p(0), p(1)], &ds));
        let b = Breakdown::new(&f, &ds);
        prop_assert_eq!(
            b.per_class(&phi, &v.with(p(0), x)).unwrap(),
            b.per_class(&phi, &v.with(p(0), y)).unwrap()
        );
    }

    #[test]
    fn duplicate_swaps_commute_with_truth(
        f in blocky_frame(7),
        phi in formula(2, 12, 2, 1),
        a in any::<u64>(),
        x in any::<u64>(),
    ) {
        let ds = duplicate_structure(&f);
        let x = subset(&f, x);
        for d in &ds.classes {
            let members: Vec<usize> = d.iter().collect();
            if members.len() < 2 {
                continue;
            }
            let (w1, w2) = (members[0], members[1]);
            // make v invariant under the swap
            let base = subset(&f, a);
            let inv = if base.contains(w1) { base.with(w2) } else { base.minus(WorldSet::singleton(w2)) };
            let v = Valuation::new().with(p(1), inv);
            let y = x.swap(w1, w2);
            let lhs = extension_full(&phi, &f, &v.with(p(0), x)).unwrap().contains(w1);
            let rhs = extension_full(&phi, &f, &v.with(p(0), y)).unwrap().contains(w2);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn witness_extension_postcondition(
        f in strategy(),
        n in 1u32..5,
        a in any::<u64>(),
        x in any::<u64>(),
    ) {
        let ds = duplicate_structure(&f);
        let u = valuation(&f, &[p(1)], &[a]);
        let x = subset(&f, x);
        let y = extend_witness(&u, &u, n, p(0), x, &ds).unwrap();
        prop_assert!(approx_equiv(&u.with(p(0), x), &u.with(p(0), y), n - 1, &[p(0), p(1)], &ds));
        // x itself is a witness when both sides agree
        prop_assert!(approx_equiv(&u.with(p(0), x), &u.with(p(0), x), n - 1, &[p(0), p(1)], &ds));
    }

    #[test]
    fn approximation_levels_are_nested(
        f in strategy(),
        n in 0u32..5,
        a in any::<u64>(),
        b in any::<u64>(),
    ) {
        let ds = duplicate_structure(&f);
        let u = valuation(&f, &[p(0)], &[a]);
        let v = valuation(&f, &[p(0)], &[b]);
        if approx_equiv(&u, &v, n + 1, &[p(0)], &ds) {
            prop_assert!(approx_equiv(&u, &v, n, &[p(0)], &ds));
        }
        prop_assert!(approx_equiv(&u, &u, n, &[p(0)], &ds));
    }

    #[test]
    fn invariant_witness_keeps_the_point(
        f in blocky_frame(10),
        n in 0u32..3,
        a in any::<u64>(),
        x in any::<u64>(),
        w in 0usize..10,
    ) {
        let ds = duplicate_structure(&f);
        let v = valuation(&f, &[p(1)], &[a]);
        let x = subset(&f, x);
        let w = w % f.len();
        let y = build_invariant_y(&ds, &v, p(0), x, w, n).unwrap();
        prop_assert_eq!(x.contains(w), y.contains(w));
        prop_assert!(approx_equiv(&v.with(p(0), x), &v.with(p(0), y), n, &[p(0), p(1)], &ds));
    }
}

#[test]
fn constants_pass_through() {
    let f = KripkeFrame::from_fn(3, |a, b| a <= b).unwrap();
    let ds = duplicate_structure(&f);
    let fs = Breakdown::new(&f, &ds).per_class(&Formula::Top, &Valuation::new()).unwrap();
    assert!(fs.iter().all(|b| *b == Formula::Top));
}
