//! Formulas of the propositionally quantified modal language.
//!
//! The stored tree only uses the primitive connectives `¬`, `∨`, `◊` and `∃`
//! (plus the constants `⊤` and `⊥`). Every derived connective is expanded by its
//! constructor, so two formulas built from the same sugar are structurally equal.

mod parse;
mod print;
mod subst;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, ParseError};
pub use subst::{alpha_equivalent, substitute, Substitution};

/// A propositional variable `p<index>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Shorthand for `Var(i)`.
pub const fn p(i: u32) -> Var {
    Var(i)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Atom(Var),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Dia(Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(v: Var) -> Formula {
        Formula::Atom(v)
    }

    pub fn var(i: u32) -> Formula {
        Formula::Atom(Var(i))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a ∧ b`, stored as `¬(¬a ∨ ¬b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    /// `a → b`, stored as `¬a ∨ b`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a ↔ b`, stored as `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }

    /// `□a`, stored as `¬◊¬a`.
    pub fn boxed(a: Formula) -> Formula {
        Formula::not(Formula::dia(Formula::not(a)))
    }

    pub fn exists(v: Var, a: Formula) -> Formula {
        Formula::Exists(v, Box::new(a))
    }

    /// `∀v a`, stored as `¬∃v¬a`.
    pub fn forall(v: Var, a: Formula) -> Formula {
        Formula::not(Formula::exists(v, Formula::not(a)))
    }

    /// Left-folded conjunction; the empty conjunction is `⊤`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-folded disjunction; the empty disjunction is `⊥`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Every variable occurring in the formula, free or bound, binders included.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(v) | Formula::Exists(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Dia(a) => a.quantifier_depth(),
            Formula::Or(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, a) => 1 + a.quantifier_depth(),
        }
    }

    /// Nesting depth of `◊`; quantifiers do not count.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Exists(_, a) => a.modal_depth(),
            Formula::Or(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Dia(a) => 1 + a.modal_depth(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_depth() == 0
    }

    /// True for formulas built only from atoms, `⊤`, `⊥`, `¬` and `∨`.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_boolean(),
            Formula::Or(a, b) => a.is_boolean() && b.is_boolean(),
            Formula::Dia(_) | Formula::Exists(..) => false,
        }
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => {}
            Formula::Not(a) | Formula::Dia(a) | Formula::Exists(_, a) => a.visit(f),
            Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => vec![],
            Formula::Not(a) | Formula::Dia(a) | Formula::Exists(_, a) => vec![a],
            Formula::Or(a, b) => vec![a, b],
        }
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(v) => {
            if !bound.contains(v) {
                out.insert(*v);
            }
        }
        Formula::Not(a) | Formula::Dia(a) => collect_free(a, bound, out),
        Formula::Or(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Exists(v, a) => {
            bound.push(*v);
            collect_free(a, bound, out);
            bound.pop();
        }
    }
}

/// `◊^n φ`.
pub fn dia_iter(n: usize, phi: Formula) -> Formula {
    (0..n).fold(phi, |acc, _| Formula::dia(acc))
}

/// `□^n φ`.
pub fn box_iter(n: usize, phi: Formula) -> Formula {
    (0..n).fold(phi, |acc, _| Formula::boxed(acc))
}

/// `◊^{≤n} φ`: `◊^{≤0}φ = φ` and `◊^{≤n+1}φ = ◊^{≤n}φ ∨ ◊^{n+1}φ`.
pub fn dia_le(n: usize, phi: Formula) -> Formula {
    (1..=n).fold(phi.clone(), |acc, k| Formula::or(acc, dia_iter(k, phi.clone())))
}

/// `□^{≤n} φ`, dual of [`dia_le`].
pub fn box_le(n: usize, phi: Formula) -> Formula {
    (1..=n).fold(phi.clone(), |acc, k| Formula::and(acc, box_iter(k, phi.clone())))
}

/// All `2^k` conjunctions of literals over `vars`.
///
/// Ordering: the first variable is most significant and a positive literal
/// precedes its negation, so index bit `k-1-i` set means `vars[i]` is negated.
/// The empty list yields `[⊤]`.
pub fn atoms_over(vars: &[Var]) -> Vec<Formula> {
    let k = vars.len();
    (0..1usize << k)
        .map(|code| {
            Formula::conj(vars.iter().enumerate().map(|(i, v)| {
                if code >> (k - 1 - i) & 1 == 0 {
                    Formula::Atom(*v)
                } else {
                    Formula::not(Formula::Atom(*v))
                }
            }))
        })
        .collect()
}

/// Least variable index not in `used`.
pub fn first_unused<'a, I: IntoIterator<Item = &'a Var>>(used: I) -> Var {
    let used: BTreeSet<Var> = used.into_iter().copied().collect();
    (0..).map(Var).find(|v| !used.contains(v)).expect("variable universe")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(a(0).free_vars(), BTreeSet::from([p(0)]));
        let f = Formula::exists(p(0), Formula::or(a(0), a(1)));
        assert_eq!(f.free_vars(), BTreeSet::from([p(1)]));
        let g = Formula::dia(Formula::exists(p(1), a(1)));
        assert!(g.free_vars().is_empty());
        assert!(Formula::Top.free_vars().is_empty());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(a(0).quantifier_depth(), 0);
        let f = Formula::exists(p(0), Formula::exists(p(1), a(0)));
        assert_eq!(f.quantifier_depth(), 2);
        let g = Formula::or(Formula::exists(p(0), a(0)), Formula::dia(a(1)));
        assert_eq!(g.quantifier_depth(), 1);

        assert_eq!(a(0).modal_depth(), 0);
        assert_eq!(Formula::dia(Formula::dia(a(0))).modal_depth(), 2);
        assert_eq!(Formula::exists(p(0), Formula::dia(a(0))).modal_depth(), 1);
    }

    #[test]
    fn iterated_modalities() {
        assert_eq!(dia_iter(0, a(0)), a(0));
        assert_eq!(dia_iter(2, a(0)), Formula::dia(Formula::dia(a(0))));
        assert_eq!(dia_le(1, a(0)), Formula::or(a(0), Formula::dia(a(0))));
        assert_eq!(dia_le(0, a(0)), a(0));
        assert_eq!(
            dia_le(2, a(0)),
            Formula::or(
                Formula::or(a(0), Formula::dia(a(0))),
                Formula::dia(Formula::dia(a(0)))
            )
        );
        assert_eq!(box_iter(1, a(0)), Formula::boxed(a(0)));
        assert_eq!(box_le(1, a(0)), Formula::and(a(0), Formula::boxed(a(0))));
    }

    #[test]
    fn atoms_over_examples() {
        assert_eq!(atoms_over(&[]), vec![Formula::Top]);
        assert_eq!(atoms_over(&[p(0)]), vec![a(0), Formula::not(a(0))]);
        let n = |f| Formula::not(f);
        assert_eq!(
            atoms_over(&[p(0), p(1)]),
            vec![
                Formula::and(a(0), a(1)),
                Formula::and(a(0), n(a(1))),
                Formula::and(n(a(0)), a(1)),
                Formula::and(n(a(0)), n(a(1))),
            ]
        );
        assert_eq!(atoms_over(&[p(3), p(1), p(2)]).len(), 8);
    }

    #[test]
    fn sugar_expands_to_primitives() {
        let f = Formula::implies(Formula::boxed(a(0)), a(0));
        assert_eq!(
            f,
            Formula::or(
                Formula::not(Formula::not(Formula::dia(Formula::not(a(0))))),
                a(0)
            )
        );
        assert_eq!(
            Formula::forall(p(1), a(1)),
            Formula::not(Formula::exists(p(1), Formula::not(a(1))))
        );
    }

    #[test]
    fn first_unused_is_least_index() {
        assert_eq!(first_unused(&[p(0), p(1), p(3)]), p(2));
        assert_eq!(first_unused(&[]), p(0));
    }

    #[test]
    fn depths_monotone_under_embedding() {
        let inner = Formula::exists(p(0), Formula::dia(a(0)));
        for outer in [
            Formula::not(inner.clone()),
            Formula::dia(inner.clone()),
            Formula::or(a(2), inner.clone()),
            Formula::exists(p(4), inner.clone()),
        ] {
            assert!(outer.quantifier_depth() >= inner.quantifier_depth());
            assert!(outer.modal_depth() >= inner.modal_depth());
        }
    }
}
