//! Formula and frame generators for exhaustive and randomized checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::frames::{close_family, Admissible, Family, GeneralFrame, KripkeFrame};
use crate::semantics::Valuation;
use crate::syntax::{Formula, Var};
use crate::worldset::WorldSet;

/// Shape limits for generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    /// Variables that may occur, free or bound.
    pub vars: Vec<Var>,
    pub max_size: usize,
    pub max_md: usize,
    pub max_qd: usize,
}

impl FormulaShape {
    pub fn new(nvars: u32, max_size: usize, max_md: usize, max_qd: usize) -> Self {
        FormulaShape {
            vars: (0..nvars).map(Var).collect(),
            max_size,
            max_md,
            max_qd,
        }
    }
}

/// Every formula over the primitive connectives within the shape, by
/// increasing size. Constants are left out.
pub fn all_formulas(shape: &FormulaShape) -> Vec<Formula> {
    // by_size[s] holds (formula, md, qd) with exactly s nodes
    let mut by_size: Vec<Vec<(Formula, usize, usize)>> = vec![Vec::new()];
    for s in 1..=shape.max_size {
        let mut level = Vec::new();
        if s == 1 {
            level.extend(shape.vars.iter().map(|v| (Formula::Atom(*v), 0, 0)));
        } else {
            for (f, md, qd) in &by_size[s - 1] {
                level.push((Formula::not(f.clone()), *md, *qd));
                if *md < shape.max_md {
                    level.push((Formula::dia(f.clone()), md + 1, *qd));
                }
                if *qd < shape.max_qd {
                    for v in &shape.vars {
                        level.push((Formula::exists(*v, f.clone()), *md, qd + 1));
                    }
                }
            }
            for left in 1..s - 1 {
                let right = s - 1 - left;
                for (a, amd, aqd) in &by_size[left] {
                    for (b, bmd, bqd) in &by_size[right] {
                        level.push((Formula::or(a.clone(), b.clone()), *amd.max(bmd), *aqd.max(bqd)));
                    }
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().map(|(f, _, _)| f).collect()
}

/// A random formula within the shape.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    let size = rng.gen_range(1..=shape.max_size.max(1));
    gen(rng, shape, size, shape.max_md, shape.max_qd)
}

fn gen<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, size: usize, md: usize, qd: usize) -> Formula {
    let atom = |rng: &mut R| {
        match rng.gen_range(0..20) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::Atom(*shape.vars.choose(rng).expect("at least one variable")),
        }
    };
    if size <= 1 {
        return atom(rng);
    }
    let mut options = vec![0, 0, 1];
    if md > 0 {
        options.extend([2, 2]);
    }
    if qd > 0 {
        options.extend([3, 3]);
    }
    if size >= 3 {
        options.extend([4, 4, 4]);
    }
    match *options.choose(rng).unwrap() {
        0 | 1 => Formula::not(gen(rng, shape, size - 1, md, qd)),
        2 => Formula::dia(gen(rng, shape, size - 1, md - 1, qd)),
        3 => {
            let v = *shape.vars.choose(rng).unwrap();
            Formula::exists(v, gen(rng, shape, size - 1, md, qd - 1))
        }
        _ => {
            let left = rng.gen_range(1..size - 1);
            Formula::or(
                gen(rng, shape, left, md, qd),
                gen(rng, shape, size - 1 - left, md, qd),
            )
        }
    }
}

/// All `2^{n²}` relations on `n` worlds.
pub fn all_frames(n: usize) -> impl Iterator<Item = KripkeFrame> {
    assert!(n * n < 32, "too many frames to enumerate");
    (0u64..1 << (n * n)).map(move |code| {
        KripkeFrame::from_fn(n, |a, b| code >> (a * n + b) & 1 == 1).expect("valid size")
    })
}

/// A random relation with edge probability `density`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> KripkeFrame {
    let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(density)).collect();
    KripkeFrame::from_fn(n, |a, b| bits[a * n + b]).expect("valid size")
}

/// A random relation that is a union of a few structured pieces, which
/// produces more duplicate worlds than independent edges do.
pub fn random_structured_frame<R: Rng + ?Sized>(rng: &mut R, n: usize) -> KripkeFrame {
    let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3.min(n))).collect();
    let kinds: Vec<u8> = (0..3).map(|_| rng.gen_range(0..4)).collect();
    let links: Vec<bool> = (0..9).map(|_| rng.gen_bool(0.4)).collect();
    KripkeFrame::from_fn(n, |a, b| {
        let (x, y) = (blocks[a], blocks[b]);
        if x == y {
            match kinds[x] {
                0 => true,
                1 => false,
                2 => a != b,
                _ => a == b,
            }
        } else {
            links[x * 3 + y]
        }
    })
    .expect("valid size")
}

pub fn random_set<R: Rng + ?Sized>(rng: &mut R, n: usize) -> WorldSet {
    WorldSet(rng.gen::<u64>()).intersect(WorldSet::full(n))
}

/// A valuation of `vars` with values drawn from `family`.
pub fn random_valuation<R: Rng + ?Sized>(rng: &mut R, vars: &[Var], family: &[WorldSet]) -> Valuation {
    vars.iter()
        .map(|v| (*v, *family.choose(rng).expect("non-empty family")))
        .collect()
}

/// A valuation of `vars` with arbitrary subsets of `n` worlds.
pub fn random_full_valuation<R: Rng + ?Sized>(rng: &mut R, vars: &[Var], n: usize) -> Valuation {
    vars.iter().map(|v| (*v, random_set(rng, n))).collect()
}

/// A certified general frame: the closure of a few random sets.
pub fn random_general_frame<R: Rng + ?Sized>(rng: &mut R, base: KripkeFrame) -> GeneralFrame {
    let n = base.len();
    let seeds = rng.gen_range(0..=2);
    let family = Family::new((0..seeds).map(|_| random_set(rng, n)).chain([WorldSet::EMPTY]));
    let closed = close_family(&base, &Admissible::Sets(family)).expect("small frame");
    match closed {
        Admissible::Full => GeneralFrame::full(base),
        Admissible::Sets(f) => GeneralFrame::certified(base, f.sets().iter().copied())
            .expect("closure is closed"),
    }
}

/// A pd-frame with a random non-empty family of up to `k` sets.
pub fn random_pd_frame<R: Rng + ?Sized>(rng: &mut R, base: KripkeFrame, k: usize) -> GeneralFrame {
    let n = base.len();
    let count = rng.gen_range(1..=k.max(1));
    GeneralFrame::pd(base, (0..count).map(|_| random_set(rng, n))).expect("non-empty family")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn exhaustive_formulas_respect_shape() {
        let shape = FormulaShape::new(2, 4, 1, 1);
        let all = all_formulas(&shape);
        assert!(all.iter().all(|f| f.size() <= 4 && f.modal_depth() <= 1 && f.quantifier_depth() <= 1));
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        // sizes 1 and 2: 2 atoms, then ¬, ◊ and two binders over each atom
        assert_eq!(all_formulas(&FormulaShape::new(2, 2, 1, 1)).len(), 2 + 2 * 4);
    }

    #[test]
    fn random_formulas_respect_shape() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let shape = FormulaShape::new(3, 12, 2, 2);
        for _ in 0..500 {
            let f = random_formula(&mut rng, &shape);
            assert!(f.size() <= 12 && f.modal_depth() <= 2 && f.quantifier_depth() <= 2);
        }
    }

    #[test]
    fn frame_enumeration() {
        assert_eq!(all_frames(2).count(), 16);
        assert_eq!(all_frames(3).count(), 512);
    }

    #[test]
    fn random_general_frames_are_certified() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(1..6);
            let base = random_frame(&mut rng, n, 0.4);
            let g = random_general_frame(&mut rng, base);
            assert!(g.closure_certified() && g.is_quantifiable_finite());
        }
    }
}
