//! A fast randomized pass over the library's invariants.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pqml::axioms::{bc, five, sahlqvist_check};
use pqml::breakdown::{approx_equiv, invariant_subdomain_check};
use pqml::corpus::{
    all_frames, random_formula, random_frame, random_full_valuation, random_general_frame,
    random_pd_frame, random_set, random_structured_frame, random_valuation, FormulaShape,
};
use pqml::diversity::{duplicate_structure, m_diamond_quotient};
use pqml::frames::Model;
use pqml::gallery::shift_isomorphism_check;
use pqml::semantics::{valid_on_general, valid_on_kripke};
use pqml::syntax::p;
use pqml::{
    extend_witness, extension_full, fast_extension, holds_at, parse, GeneralFrame, KripkeFrame,
    Var, WorldSet,
};

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

fn frame(rng: &mut ChaCha8Rng, n: usize) -> KripkeFrame {
    if rng.gen_bool(0.5) {
        random_structured_frame(rng, n)
    } else {
        random_frame(rng, n, 0.4)
    }
}

fn quotient(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut frames: Vec<KripkeFrame> = (1..=3).flat_map(all_frames).collect();
    frames.extend((0..100).map(|_| {
        let n = rng.gen_range(1..=6);
        frame(rng, n)
    }));
    for f in &frames {
        let ds = duplicate_structure(f);
        if let Some(x) = WorldSet::powerset(f.len()).find(|&x| m_diamond_quotient(&ds, x) != f.m_diamond(x)) {
            return Err(format!("frame {:?}, set {x:?}", f.edges()));
        }
    }
    Ok(format!("{} frames", frames.len()))
}

fn breakdown(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shape = FormulaShape::new(2, 12, 3, 2);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let f = frame(rng, n);
        let phi = random_formula(rng, &shape);
        let vars: Vec<Var> = phi.free_vars().into_iter().collect();
        let v = random_full_valuation(rng, &vars, n);
        let ds = duplicate_structure(&f);
        let a = fast_extension(&phi, &f, &v, &ds).map_err(|e| e.to_string())?;
        let b = extension_full(&phi, &f, &v).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{phi} on {:?}", f.edges()));
        }
    }
    Ok("200 cases".into())
}

fn witness(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..300 {
        let n = rng.gen_range(1..=9);
        let f = frame(rng, n);
        let ds = duplicate_structure(&f);
        let u = random_full_valuation(rng, &[p(1)], n);
        let level = rng.gen_range(1..=4);
        let x = random_set(rng, n);
        let y = extend_witness(&u, &u, level, p(0), x, &ds).map_err(|e| e.to_string())?;
        if !approx_equiv(&u.with(p(0), x), &u.with(p(0), y), level - 1, &[p(0), p(1)], &ds) {
            return Err(format!("X={x:?} Y={y:?}"));
        }
    }
    Ok("300 instances".into())
}

fn truncation(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shape = FormulaShape::new(2, 10, 3, 1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let base = frame(rng, n);
        let g = random_pd_frame(rng, base, 4);
        let family: Vec<WorldSet> = g.family_iter().collect();
        let phi = random_formula(rng, &shape);
        let vars: Vec<Var> = phi.free_vars().into_iter().collect();
        let m = Model::new(g, random_valuation(rng, &vars, &family)).map_err(|e| e.to_string())?;
        let w = rng.gen_range(0..n);
        let (sub, emb) = m.truncated_submodel(w, phi.modal_depth());
        let local = emb.iter().position(|&x| x == w).expect("root kept");
        let a = holds_at(&phi, &m, w).map_err(|e| e.to_string())?;
        let b = holds_at(&phi, &sub, local).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{phi} at {w}"));
        }
    }
    Ok("200 models".into())
}

fn euclidean(_: &mut ChaCha8Rng) -> Result<String, String> {
    for f in (1..=3).flat_map(all_frames) {
        let valid = valid_on_kripke(&five(), &f).map_err(|e| e.to_string())?.is_valid();
        if valid != f.is_euclidean() {
            return Err(format!("{:?}", f.edges()));
        }
    }
    Ok("all frames up to 3 worlds".into())
}

fn barcan(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shape = FormulaShape::new(2, 8, 2, 1);
    for _ in 0..30 {
        let n = rng.gen_range(1..=5);
        let base = frame(rng, n);
        let g = random_general_frame(rng, base);
        for _ in 0..10 {
            let phi = random_formula(rng, &shape);
            let verdict = valid_on_general(&bc(p(0), phi.clone()), &g).map_err(|e| e.to_string())?;
            if !verdict.is_valid() {
                return Err(format!("Bc for {phi}"));
            }
        }
    }
    Ok("30 frames x 10 formulas".into())
}

fn invariance(_: &mut ChaCha8Rng) -> Result<String, String> {
    let base = KripkeFrame::from_fn(2, |_, _| true).map_err(|e| e.to_string())?;
    let g = GeneralFrame::pd(base, [WorldSet::EMPTY, WorldSet::full(2)]).map_err(|e| e.to_string())?;
    let witness = parse("E p0. p0 & <>~p0").expect("valid text");
    let report = invariant_subdomain_check(&g, &[witness]).map_err(|e| e.to_string())?;
    match report.violation {
        Some(v) if v.restricted == WorldSet::EMPTY && v.full == WorldSet::full(2) => {
            Ok("two-world clique with {∅, W} separated".into())
        }
        _ => Err("expected violation not found".into()),
    }
}

fn shift(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shape = FormulaShape::new(1, 8, 2, 1);
    for _ in 0..10 {
        let phi = random_formula(rng, &shape);
        let v: BTreeMap<Var, Vec<i64>> = [(p(0), (-6..=6).filter(|_| rng.gen_bool(0.5)).collect())].into();
        for n in -5..=5 {
            for m in -5..=5 {
                let r = shift_isomorphism_check(-6, 6, 1, &phi, &v, n, m).map_err(|e| e.to_string())?;
                if !r.passed() {
                    return Err(format!("{phi} n={n} m={m}"));
                }
            }
        }
    }
    Ok("10 formulas on recession:-6,6".into())
}

fn sahlqvist(_: &mut ChaCha8Rng) -> Result<String, String> {
    for text in ["[]p0 -> p0", "<>p0 -> []<>p0", "[](<>p0 -> []<>p0)", "<><>p0 -> []<>p0"] {
        let phi = parse(text).expect("valid text");
        if !sahlqvist_check(&phi).map_err(|e| e.to_string())?.is_sahlqvist {
            return Err(format!("rejected {text}"));
        }
    }
    let m = parse("[]<>p0 -> <>[]p0").expect("valid text");
    if sahlqvist_check(&m).map_err(|e| e.to_string())?.is_sahlqvist {
        return Err("accepted the McKinsey formula".into());
    }
    Ok("4 accepted, 1 rejected".into())
}

/// Prints one line per check; true when all pass.
pub fn run(seed: u64) -> bool {
    let checks: [(&str, Check); 9] = [
        ("quotient diamond", quotient),
        ("breakdown oracle", breakdown),
        ("witness extension", witness),
        ("truncation", truncation),
        ("five iff euclidean", euclidean),
        ("Barcan on general frames", barcan),
        ("invariance failure", invariance),
        ("shift isomorphism", shift),
        ("Sahlqvist classifier", sahlqvist),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for (name, check) in checks {
        match check(&mut rng) {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                ok = false;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    ok
}
