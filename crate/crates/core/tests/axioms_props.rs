mod common;

use common::{blocky_frame, frame};
use proptest::prelude::*;

use pqml::axioms::{
    alt_n, alt_n_bounded, d45, five, instance, m_ax, sahlqvist_check, t, trs_m, trs_m_bounded,
    NAMES,
};
use pqml::corpus::all_frames;
use pqml::semantics::valid_on_kripke;
use pqml::{diversity_generated, parse, KripkeFrame};

fn valid(phi: &pqml::Formula, f: &KripkeFrame) -> bool {
    valid_on_kripke(phi, f).unwrap().is_valid()
}

fn small_frames() -> impl Iterator<Item = KripkeFrame> {
    (1..=3).flat_map(all_frames)
}

#[test]
fn five_is_valid_exactly_on_euclidean_frames() {
    for f in small_frames() {
        assert_eq!(valid(&five(), &f), f.is_euclidean(), "{:?}", f.edges());
    }
}

#[test]
fn t_is_valid_exactly_on_reflexive_frames() {
    for f in small_frames() {
        assert_eq!(valid(&t(), &f), f.is_reflexive(), "{:?}", f.edges());
    }
}

#[test]
fn d45_matches_its_relational_conditions() {
    for f in small_frames() {
        let expected = f.is_serial() && f.is_transitive() && f.is_euclidean();
        assert_eq!(valid(&d45(), &f), expected, "{:?}", f.edges());
    }
}

#[test]
fn literal_alt_and_trs_are_degenerate() {
    // with every p_i true at w, the consequent only asks whether w sees itself
    for f in small_frames() {
        assert_eq!(valid(&alt_n(2), &f), f.is_reflexive(), "{:?}", f.edges());
        assert!(valid(&trs_m(1), &f));
    }
}

#[test]
fn bounded_alt_and_trs_bound_diversity() {
    let mut seen = 0;
    for n in [2u32, 3] {
        let worlds = if n == 2 { 4 } else { 3 };
        for m in 0..=2 {
            let alt = alt_n_bounded(n);
            let trs = trs_m_bounded(m);
            let bound = (n as usize).pow(m as u32 + 1);
            for size in 1..=worlds {
                for f in all_frames(size) {
                    // the one-variable check is far cheaper, so it goes first
                    if valid(&trs, &f) && valid(&alt, &f) {
                        seen += 1;
                        assert!(diversity_generated(&f) <= bound, "{:?}", f.edges());
                    }
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn classifier_on_named_schemas() {
    for phi in [t(), five(), parse("[](<>p0 -> []<>p0)").unwrap(), parse("<><>p0 -> []<>p0").unwrap()] {
        assert!(sahlqvist_check(&phi).unwrap().is_sahlqvist, "{phi}");
    }
    assert!(!sahlqvist_check(&m_ax()).unwrap().is_sahlqvist);
    assert!(sahlqvist_check(&parse("E p0. p0").unwrap()).is_err());
}

#[test]
fn every_named_instance_is_deterministic() {
    for name in NAMES {
        let a = instance(name, Some(1), Some(parse("<>p0").unwrap())).unwrap();
        let b = instance(name, Some(1), Some(parse("<>p0").unwrap())).unwrap();
        assert_eq!(a.formula, b.formula, "{name}");
    }
}

proptest! {
    #[test]
    fn five_tracks_euclidean_on_larger_frames(f in prop_oneof![frame(5), blocky_frame(5)]) {
        prop_assert_eq!(valid(&five(), &f), f.is_euclidean());
    }
}
