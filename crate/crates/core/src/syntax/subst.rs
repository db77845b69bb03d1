use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{first_unused, Formula, Var};

/// A finite map from variables to formulas; identity outside its domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The single-variable substitution `ι_p^ψ`.
    pub fn single(p: Var, psi: Formula) -> Self {
        Self::identity().with(p, psi)
    }

    /// `σ_p^ψ`: agrees with `self` except at `p`.
    pub fn with(&self, p: Var, psi: Formula) -> Self {
        let mut map = self.map.clone();
        if psi == Formula::Atom(p) {
            map.remove(&p);
        } else {
            map.insert(p, psi);
        }
        Substitution { map }
    }

    pub fn image(&self, v: Var) -> Formula {
        self.map.get(&v).cloned().unwrap_or(Formula::Atom(v))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> {
        self.map.iter()
    }

    pub fn apply(&self, phi: &Formula) -> Formula {
        substitute(self, phi)
    }
}

impl FromIterator<(Var, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        iter.into_iter()
            .fold(Substitution::identity(), |s, (v, f)| s.with(v, f))
    }
}

/// Applies `sigma` with renaming of bound variables.
///
/// For `∃pφ` the binder is kept unless `p` is free in some `σ(r)` with
/// `r ∈ Fv(∃pφ)`; in that case it becomes the least-index variable occurring
/// neither in `∃pφ` nor in any such `σ(r)`.
pub fn substitute(sigma: &Substitution, phi: &Formula) -> Formula {
    match phi {
        Formula::Top | Formula::Bot => phi.clone(),
        Formula::Atom(v) => sigma.image(*v),
        Formula::Not(a) => Formula::not(substitute(sigma, a)),
        Formula::Dia(a) => Formula::dia(substitute(sigma, a)),
        Formula::Or(a, b) => Formula::or(substitute(sigma, a), substitute(sigma, b)),
        Formula::Exists(p, body) => {
            let free = phi.free_vars();
            let images: Vec<Formula> = free.iter().map(|r| sigma.image(*r)).collect();
            let clash = images.iter().any(|img| img.free_vars().contains(p));
            let q = if clash {
                let mut used: BTreeSet<Var> = phi.all_vars();
                for img in &images {
                    used.extend(img.all_vars());
                }
                first_unused(&used)
            } else {
                *p
            };
            Formula::exists(q, substitute(&sigma.with(*p, Formula::Atom(q)), body))
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_equivalent(a: &Formula, b: &Formula) -> bool {
    fn go(
        a: &Formula,
        b: &Formula,
        left: &mut HashMap<Var, Vec<usize>>,
        right: &mut HashMap<Var, Vec<usize>>,
        depth: usize,
    ) -> bool {
        match (a, b) {
            (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
            (Formula::Atom(x), Formula::Atom(y)) => {
                match (
                    left.get(x).and_then(|s| s.last()),
                    right.get(y).and_then(|s| s.last()),
                ) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Formula::Not(x), Formula::Not(y)) | (Formula::Dia(x), Formula::Dia(y)) => {
                go(x, y, left, right, depth)
            }
            (Formula::Or(x1, x2), Formula::Or(y1, y2)) => {
                go(x1, y1, left, right, depth) && go(x2, y2, left, right, depth)
            }
            (Formula::Exists(x, bx), Formula::Exists(y, by)) => {
                left.entry(*x).or_default().push(depth);
                right.entry(*y).or_default().push(depth);
                let ok = go(bx, by, left, right, depth + 1);
                left.get_mut(x).unwrap().pop();
                right.get_mut(y).unwrap().pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut HashMap::new(), &mut HashMap::new(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{p, parse};

    fn a(i: u32) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn renames_into_dia() {
        let s = Substitution::single(p(0), a(1));
        assert_eq!(s.apply(&Formula::dia(a(0))), Formula::dia(a(1)));
    }

    #[test]
    fn renaming_clause_picks_least_unused() {
        let s = Substitution::single(p(0), a(1));
        let phi = Formula::exists(p(1), Formula::and(a(1), a(0)));
        let expected = Formula::exists(p(2), Formula::and(a(2), a(1)));
        assert_eq!(s.apply(&phi), expected);
    }

    #[test]
    fn no_renaming_without_clash() {
        let s = Substitution::single(p(0), Formula::dia(a(2)));
        let phi = Formula::exists(p(1), Formula::and(a(1), a(0)));
        assert_eq!(
            s.apply(&phi),
            Formula::exists(p(1), Formula::and(a(1), Formula::dia(a(2))))
        );
    }

    #[test]
    fn bound_variable_is_not_substituted() {
        let s = Substitution::single(p(0), a(3));
        let phi = Formula::exists(p(0), a(0));
        assert_eq!(s.apply(&phi), phi);
    }

    #[test]
    fn identity_is_identity() {
        for src in ["p0", "E p0. <>p0 & ~p1", "A p1. E p2. [](p1 -> p2) | p0"] {
            let f = parse(src).unwrap();
            assert_eq!(Substitution::identity().apply(&f), f);
        }
    }

    #[test]
    fn alpha_equivalence() {
        let x = parse("E p1. p1 & p0").unwrap();
        let y = parse("E p2. p2 & p0").unwrap();
        let z = parse("E p0. p0 & p0").unwrap();
        assert!(alpha_equivalent(&x, &y));
        assert!(!alpha_equivalent(&x, &z));
        assert!(!alpha_equivalent(&parse("p0").unwrap(), &parse("p1").unwrap()));
        let s = Substitution::single(p(0), a(1));
        let renamed = s.apply(&parse("E p1. p1 & p0").unwrap());
        assert!(alpha_equivalent(&renamed, &parse("E p5. p5 & p1").unwrap()));
    }
}
