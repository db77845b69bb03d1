//! Duplicate worlds, duplicate classes and the quotient relation.

use std::fmt::Write as _;

use crate::frames::{GeneralFrame, KripkeFrame};
use crate::worldset::WorldSet;

/// Whether the transposition `(w u)` is an automorphism of the frame.
pub fn are_duplicates(f: &KripkeFrame, w: usize, u: usize) -> bool {
    if w == u {
        return true;
    }
    // Other worlds must see both or neither; w and u must have swapped rows.
    (0..f.len())
        .filter(|&a| a != w && a != u)
        .all(|a| f.related(a, w) == f.related(a, u))
        && f.successors(u) == f.successors(w).swap(w, u)
}

/// Shape of `R` restricted to one duplicate class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalKind {
    /// `D × D`.
    Full,
    /// `∅`.
    Empty,
    /// `D × D` minus the diagonal; only for `|D| ≥ 2`.
    Coidentity,
    /// The diagonal; only for `|D| ≥ 2`.
    Identity,
}

impl std::fmt::Display for LocalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LocalKind::Full => "full",
            LocalKind::Empty => "empty",
            LocalKind::Coidentity => "coidentity",
            LocalKind::Identity => "identity",
        })
    }
}

/// The partition `W/Δ` with `R_Δ` and the local kind of each class.
///
/// Classes are ordered by their least world, which is also their
/// representative. `quotient[i]` holds the class indices `j` with
/// `D_i R_Δ D_j`, including `i` itself when `R|_{D_i}` is non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicateStructure {
    pub classes: Vec<WorldSet>,
    pub class_of: Vec<usize>,
    pub quotient: Vec<WorldSet>,
    pub kinds: Vec<LocalKind>,
}

impl DuplicateStructure {
    pub fn new(f: &KripkeFrame) -> Self {
        let n = f.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for w in 0..n {
            if class_of[w] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut class = WorldSet::EMPTY;
            for (u, slot) in class_of.iter_mut().enumerate().skip(w) {
                if *slot == usize::MAX && are_duplicates(f, w, u) {
                    *slot = idx;
                    class.insert(u);
                }
            }
            classes.push(class);
        }
        let kinds = classes.iter().map(|&d| local_kind(f, d)).collect();
        let quotient = classes
            .iter()
            .map(|&d1| {
                let image = f.successors_of_set(d1);
                classes
                    .iter()
                    .enumerate()
                    .filter(|(_, &d2)| image.intersects(d2))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let ds = DuplicateStructure {
            classes,
            class_of,
            quotient,
            kinds,
        };
        ds.assert_all_or_nothing(f);
        ds
    }

    fn assert_all_or_nothing(&self, f: &KripkeFrame) {
        for (i, &d1) in self.classes.iter().enumerate() {
            for (j, &d2) in self.classes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let related = self.quotient[i].contains(j);
                for w in d1.iter() {
                    assert_eq!(
                        f.successors(w).intersect(d2) == d2,
                        related,
                        "duplicate classes {i} and {j} are not all-or-nothing related"
                    );
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// `R_Δ[D_i]` without `D_i` itself.
    pub fn external_successors(&self, i: usize) -> WorldSet {
        let mut out = self.quotient[i];
        out.remove(i);
        out
    }

    /// Union of the classes listed in `idx`.
    pub fn worlds_of(&self, idx: WorldSet) -> WorldSet {
        idx.iter()
            .fold(WorldSet::EMPTY, |acc, j| acc.union(self.classes[j]))
    }

    /// DOT rendering of the quotient graph.
    pub fn to_dot(&self, f: &KripkeFrame) -> String {
        let mut out = String::from("digraph quotient {\n");
        for (i, d) in self.classes.iter().enumerate() {
            let names: Vec<&str> = d.iter().map(|w| f.name(w)).collect();
            let _ = writeln!(
                out,
                "  c{i} [label=\"{{{}}}\\n{}\"];",
                names.join(","),
                self.kinds[i]
            );
        }
        for (i, succ) in self.quotient.iter().enumerate() {
            for j in succ.iter().filter(|&j| j != i) {
                let _ = writeln!(out, "  c{i} -> c{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn local_kind(f: &KripkeFrame, d: WorldSet) -> LocalKind {
    let size = d.len();
    let diagonal = d.iter().filter(|&w| f.related(w, w)).count();
    let off: usize = d
        .iter()
        .map(|w| f.successors(w).intersect(d).minus(WorldSet::singleton(w)).len())
        .sum();
    let all_off = size * (size - 1);
    match (diagonal, off) {
        (0, 0) => LocalKind::Empty,
        (dg, o) if dg == size && o == all_off => LocalKind::Full,
        (0, o) if o == all_off => LocalKind::Coidentity,
        (dg, 0) if dg == size => LocalKind::Identity,
        _ => panic!("class {d:?} has a relation outside the four duplicate shapes"),
    }
}

pub fn duplicate_structure(f: &KripkeFrame) -> DuplicateStructure {
    DuplicateStructure::new(f)
}

/// `|W/Δ|`.
pub fn diversity(f: &KripkeFrame) -> usize {
    DuplicateStructure::new(f).len()
}

/// Largest diversity of a point-generated subframe.
pub fn diversity_generated(f: &KripkeFrame) -> usize {
    let g = GeneralFrame::full(f.clone());
    (0..f.len())
        .map(|w| diversity(&g.generated_subframe(w).frame.base))
        .max()
        .unwrap_or(0)
}

/// `m_◊(X)` computed class by class from the duplicate structure alone.
pub fn m_diamond_quotient(ds: &DuplicateStructure, x: WorldSet) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for (i, &d) in ds.classes.iter().enumerate() {
        let hits = |j: usize| x.intersects(ds.classes[j]);
        let external = ds.external_successors(i).iter().any(hits);
        let inside = x.intersect(d);
        let part = match ds.kinds[i] {
            LocalKind::Full | LocalKind::Empty => {
                if ds.quotient[i].iter().any(hits) {
                    d
                } else {
                    WorldSet::EMPTY
                }
            }
            _ if external => d,
            LocalKind::Coidentity => match inside.len() {
                0 => WorldSet::EMPTY,
                1 => d.minus(x),
                _ => d,
            },
            LocalKind::Identity => inside,
        };
        out = out.union(part);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> WorldSet {
        xs.iter().copied().collect()
    }

    fn clique(n: usize) -> KripkeFrame {
        KripkeFrame::from_fn(n, |_, _| true).unwrap()
    }

    fn cyclic(n: usize) -> KripkeFrame {
        KripkeFrame::from_fn(n, |a, b| b == (a + 1) % n).unwrap()
    }

    /// r = 0 sees U = {1}; W = {1, 2, 3} is a clique.
    fn k5_shape() -> KripkeFrame {
        KripkeFrame::from_fn(4, |a, b| (a == 0 && b == 1) || (a != 0 && b != 0)).unwrap()
    }

    #[test]
    fn duplicate_examples() {
        let c = clique(3);
        assert!((0..3).all(|a| (0..3).all(|b| are_duplicates(&c, a, b))));
        let chain = KripkeFrame::numbered(2, [(0, 1)]).unwrap();
        assert!(!are_duplicates(&chain, 0, 1));
        let cyc = cyclic(3);
        assert!(!are_duplicates(&cyc, 0, 1) && !are_duplicates(&cyc, 1, 2));
    }

    #[test]
    fn structure_examples() {
        let ds = DuplicateStructure::new(&k5_shape());
        assert_eq!(ds.classes, vec![set(&[0]), set(&[1]), set(&[2, 3])]);
        assert_eq!(ds.kinds, vec![LocalKind::Empty, LocalKind::Full, LocalKind::Full]);
        assert_eq!(ds.quotient[0], set(&[1]));
        assert_eq!(ds.quotient[2], set(&[1, 2]));

        let id = KripkeFrame::from_fn(3, |a, b| a == b).unwrap();
        let ds = DuplicateStructure::new(&id);
        assert_eq!(ds.classes, vec![set(&[0, 1, 2])]);
        assert_eq!(ds.kinds, vec![LocalKind::Identity]);

        let ds = DuplicateStructure::new(&clique(4));
        assert_eq!(ds.kinds, vec![LocalKind::Full]);
    }

    #[test]
    fn diversity_examples() {
        assert_eq!(diversity(&cyclic(3)), 3);
        assert_eq!(diversity(&clique(4)), 1);
        assert_eq!(diversity(&k5_shape()), 3);
    }

    #[test]
    fn generated_diversity_examples() {
        // cliques {0,1} and {2,3,4}
        let two = KripkeFrame::from_fn(5, |a, b| (a < 2) == (b < 2)).unwrap();
        assert_eq!(diversity(&two), 2);
        assert_eq!(diversity_generated(&two), 1);
        // 0 sees the clique {1,2,3}
        let d45 = KripkeFrame::from_fn(4, |_, b| b != 0).unwrap();
        assert_eq!(diversity_generated(&d45), 2);
        assert_eq!(diversity_generated(&KripkeFrame::numbered(1, []).unwrap()), 1);
    }

    #[test]
    fn quotient_examples() {
        let c = clique(3);
        let ds = DuplicateStructure::new(&c);
        assert_eq!(m_diamond_quotient(&ds, set(&[1])), set(&[0, 1, 2]));

        let co = KripkeFrame::from_fn(3, |a, b| a != b).unwrap();
        let ds = DuplicateStructure::new(&co);
        assert_eq!(ds.kinds, vec![LocalKind::Coidentity]);
        assert_eq!(m_diamond_quotient(&ds, set(&[0])), set(&[1, 2]));
        assert_eq!(m_diamond_quotient(&ds, set(&[0, 2])), set(&[0, 1, 2]));

        let id = KripkeFrame::from_fn(3, |a, b| a == b).unwrap();
        let ds = DuplicateStructure::new(&id);
        assert_eq!(m_diamond_quotient(&ds, set(&[2])), set(&[2]));
    }

    #[test]
    fn coidentity_with_external_trigger() {
        // 0 and 1 see each other and world 2
        let f = KripkeFrame::numbered(3, [(0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        let ds = DuplicateStructure::new(&f);
        assert_eq!(ds.kinds[0], LocalKind::Coidentity);
        for x in WorldSet::powerset(3) {
            assert_eq!(m_diamond_quotient(&ds, x), f.m_diamond(x), "{x:?}");
        }
    }

    #[test]
    fn dot_output_lists_classes() {
        let f = k5_shape();
        let dot = DuplicateStructure::new(&f).to_dot(&f);
        assert!(dot.contains("c2 [label=\"{2,3}\\nfull\"]"));
        assert!(dot.contains("c0 -> c1;"));
    }
}
