//! Extensions of formulas on general frames.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::frames::{GeneralFrame, KripkeFrame, Model};
use crate::syntax::{Formula, Substitution, Var};
use crate::worldset::WorldSet;

/// Quantified evaluation over `℘(W)` is refused above this many worlds.
pub const DEFAULT_MAX_WORLDS: usize = 20;

/// Validity checks refuse to enumerate more valuations than this.
pub const DEFAULT_MAX_VALUATIONS: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable {0} has no value")]
    Unbound(Var),
    #[error("value of {0} is not an admissible set")]
    Inadmissible(Var),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("quantifying over the powerset of {worlds} worlds exceeds the limit of {limit}")]
    TooManyWorlds { worlds: usize, limit: usize },
    #[error("{count} valuations exceed the limit of {limit}")]
    TooManyValuations { count: u128, limit: u128 },
}

/// A finite partial map from variables to sets of worlds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    map: BTreeMap<Var, WorldSet>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    /// `v[X/p]`.
    pub fn with(&self, p: Var, x: WorldSet) -> Self {
        let mut out = self.clone();
        out.map.insert(p, x);
        out
    }

    pub fn set(&mut self, p: Var, x: WorldSet) {
        self.map.insert(p, x);
    }

    pub fn get(&self, p: Var) -> Option<WorldSet> {
        self.map.get(&p).copied()
    }

    pub fn contains(&self, p: Var) -> bool {
        self.map.contains_key(&p)
    }

    /// Variables with a value, ascending.
    pub fn domain(&self) -> Vec<Var> {
        self.map.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, WorldSet)> + '_ {
        self.map.iter().map(|(v, x)| (*v, *x))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `v|_vars`.
    pub fn restrict<'a, I: IntoIterator<Item = &'a Var>>(&self, vars: I) -> Self {
        vars.into_iter()
            .filter_map(|p| self.get(*p).map(|x| (*p, x)))
            .collect()
    }

    pub fn map(&self, f: impl Fn(WorldSet) -> WorldSet) -> Self {
        self.iter().map(|(p, x)| (p, f(x))).collect()
    }
}

impl FromIterator<(Var, WorldSet)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, WorldSet)>>(iter: I) -> Self {
        Valuation {
            map: iter.into_iter().collect(),
        }
    }
}

/// Outcome of a validity check. Counterexamples are the least failing
/// valuation (first free variable most significant, values in canonical
/// family order) and the least world outside the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { valuation: Valuation, world: usize },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Direct evaluator; `∃` unions over the admissible family of the frame.
#[derive(Clone, Copy, Debug)]
pub struct Evaluator<'a> {
    frame: &'a GeneralFrame,
    max_worlds: usize,
    max_valuations: u128,
}

impl<'a> Evaluator<'a> {
    pub fn new(frame: &'a GeneralFrame) -> Self {
        Evaluator {
            frame,
            max_worlds: DEFAULT_MAX_WORLDS,
            max_valuations: DEFAULT_MAX_VALUATIONS,
        }
    }

    pub fn max_worlds(self, max_worlds: usize) -> Self {
        Evaluator { max_worlds, ..self }
    }

    pub fn max_valuations(self, max_valuations: u128) -> Self {
        Evaluator {
            max_valuations,
            ..self
        }
    }

    fn guard(&self, phi: &Formula) -> Result<(), EvalError> {
        let n = self.frame.len();
        if self.frame.is_full() && !phi.is_quantifier_free() && n > self.max_worlds {
            return Err(EvalError::TooManyWorlds {
                worlds: n,
                limit: self.max_worlds,
            });
        }
        Ok(())
    }

    /// `⟦φ⟧(v)`, after checking that `v` binds `Fv(φ)` to admissible sets.
    pub fn extension(&self, phi: &Formula, v: &Valuation) -> Result<WorldSet, EvalError> {
        for p in phi.free_vars() {
            match v.get(p) {
                None => return Err(EvalError::Unbound(p)),
                Some(x) if !self.frame.admits(x) => return Err(EvalError::Inadmissible(p)),
                Some(_) => {}
            }
        }
        self.extension_unchecked(phi, v)
    }

    /// As [`Self::extension`] but without the admissibility check on `v`.
    pub fn extension_unchecked(&self, phi: &Formula, v: &Valuation) -> Result<WorldSet, EvalError> {
        self.guard(phi)?;
        let mut run = Run::new(self.frame, phi);
        for p in phi.free_vars() {
            let x = v.get(p).ok_or(EvalError::Unbound(p))?;
            run.env[p.0 as usize] = Some(x);
        }
        Ok(run.eval(phi))
    }

    fn family(&self) -> Result<Vec<WorldSet>, EvalError> {
        let n = self.frame.len();
        if self.frame.is_full() && n > self.max_worlds {
            return Err(EvalError::TooManyWorlds {
                worlds: n,
                limit: self.max_worlds,
            });
        }
        Ok(self.frame.family_iter().collect())
    }

    /// Exhaustive validity over all valuations of `Fv(φ)` into the family.
    pub fn validity(&self, phi: &Formula) -> Result<Validity, EvalError> {
        self.guard(phi)?;
        let vars: Vec<Var> = phi.free_vars().into_iter().collect();
        let universe = self.frame.base.universe();
        let mut run = Run::new(self.frame, phi);
        if vars.is_empty() {
            let ext = run.eval(phi);
            return Ok(match universe.minus(ext).first() {
                None => Validity::Valid,
                Some(world) => Validity::Invalid {
                    valuation: Valuation::new(),
                    world,
                },
            });
        }
        let family = self.family()?;
        let count = (family.len() as u128).checked_pow(vars.len() as u32);
        match count {
            Some(c) if c <= self.max_valuations => {}
            _ => {
                return Err(EvalError::TooManyValuations {
                    count: count.unwrap_or(u128::MAX),
                    limit: self.max_valuations,
                })
            }
        }
        let mut digits = vec![0usize; vars.len()];
        loop {
            for (p, &d) in vars.iter().zip(&digits) {
                run.env[p.0 as usize] = Some(family[d]);
            }
            let ext = run.eval(phi);
            if let Some(world) = universe.minus(ext).first() {
                let valuation = vars.iter().zip(&digits).map(|(p, &d)| (*p, family[d])).collect();
                return Ok(Validity::Invalid { valuation, world });
            }
            // odometer, last variable fastest
            let mut i = vars.len();
            loop {
                if i == 0 {
                    return Ok(Validity::Valid);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < family.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

/// One evaluation pass: variable environment plus a memo for `∃` nodes.
struct Run<'f> {
    frame: &'f KripkeFrame,
    family: FamilySource<'f>,
    env: Vec<Option<WorldSet>>,
    free: HashMap<*const Formula, Vec<Var>>,
    memo: HashMap<(*const Formula, Vec<u64>), WorldSet>,
}

enum FamilySource<'f> {
    Full(usize),
    Sets(&'f [WorldSet]),
}

impl<'f> Run<'f> {
    fn new(frame: &'f GeneralFrame, phi: &Formula) -> Self {
        let family = match frame.admissible() {
            crate::frames::Admissible::Full => FamilySource::Full(frame.len()),
            crate::frames::Admissible::Sets(f) => FamilySource::Sets(f.sets()),
        };
        let top = phi.all_vars().iter().map(|v| v.0 as usize + 1).max().unwrap_or(0);
        let mut free = HashMap::new();
        phi.visit(&mut |f| {
            if let Formula::Exists(..) = f {
                free.insert(f as *const Formula, f.free_vars().into_iter().collect());
            }
        });
        Run {
            frame: &frame.base,
            family,
            env: vec![None; top],
            free,
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, phi: &Formula) -> WorldSet {
        let n = self.frame.len();
        match phi {
            Formula::Top => WorldSet::full(n),
            Formula::Bot => WorldSet::EMPTY,
            Formula::Atom(p) => self.env[p.0 as usize].expect("free variables are bound"),
            Formula::Not(a) => self.eval(a).complement(n),
            Formula::Or(a, b) => self.eval(a).union(self.eval(b)),
            Formula::Dia(a) => {
                let x = self.eval(a);
                self.frame.m_diamond(x)
            }
            Formula::Exists(p, body) => {
                let key_ptr = phi as *const Formula;
                let key: Vec<u64> = self.free[&key_ptr]
                    .iter()
                    .map(|q| self.env[q.0 as usize].expect("bound").bits())
                    .collect();
                let key = (key_ptr, key);
                if let Some(&hit) = self.memo.get(&key) {
                    return hit;
                }
                let slot = p.0 as usize;
                let saved = self.env[slot];
                let universe = WorldSet::full(n);
                let mut acc = WorldSet::EMPTY;
                match self.family {
                    FamilySource::Full(n) => {
                        for bits in 0..1u64 << n {
                            self.env[slot] = Some(WorldSet(bits));
                            acc = acc.union(self.eval(body));
                            if acc == universe {
                                break;
                            }
                        }
                    }
                    FamilySource::Sets(sets) => {
                        for &x in sets {
                            self.env[slot] = Some(x);
                            acc = acc.union(self.eval(body));
                            if acc == universe {
                                break;
                            }
                        }
                    }
                }
                self.env[slot] = saved;
                self.memo.insert(key, acc);
                acc
            }
        }
    }
}

/// `⟦φ⟧^G(v)`.
pub fn extension(phi: &Formula, g: &GeneralFrame, v: &Valuation) -> Result<WorldSet, EvalError> {
    Evaluator::new(g).extension(phi, v)
}

/// `⟦φ⟧^F(v)` with quantifiers over `℘(W)`.
pub fn extension_full(phi: &Formula, f: &KripkeFrame, v: &Valuation) -> Result<WorldSet, EvalError> {
    Evaluator::new(&GeneralFrame::full(f.clone())).extension(phi, v)
}

/// `M, w ⊨ φ`.
pub fn holds_at(phi: &Formula, m: &Model, w: usize) -> Result<bool, EvalError> {
    if w >= m.frame.len() {
        return Err(EvalError::WorldOutOfRange(w));
    }
    Ok(extension(phi, &m.frame, &m.valuation)?.contains(w))
}

pub fn valid_on_kripke(phi: &Formula, f: &KripkeFrame) -> Result<Validity, EvalError> {
    Evaluator::new(&GeneralFrame::full(f.clone())).validity(phi)
}

pub fn valid_on_general(phi: &Formula, g: &GeneralFrame) -> Result<Validity, EvalError> {
    Evaluator::new(g).validity(phi)
}

/// `σ⋆v`: each `p ∈ vars` is sent to `⟦σ(p)⟧(v)`.
pub fn star(
    sigma: &Substitution,
    vars: &[Var],
    g: &GeneralFrame,
    v: &Valuation,
) -> Result<Valuation, EvalError> {
    let eval = Evaluator::new(g);
    vars.iter()
        .map(|&p| Ok((p, eval.extension_unchecked(&sigma.image(p), v)?)))
        .collect()
}

/// Compares `⟦φ⟧(σ⋆v)` with `⟦σ(φ)⟧(v)`.
pub fn check_substitution_lemma(
    phi: &Formula,
    sigma: &Substitution,
    g: &GeneralFrame,
    v: &Valuation,
) -> Result<bool, EvalError> {
    let eval = Evaluator::new(g);
    let vars: Vec<Var> = phi.free_vars().into_iter().collect();
    let lhs = eval.extension_unchecked(phi, &star(sigma, &vars, g, v)?)?;
    let rhs = eval.extension_unchecked(&sigma.apply(phi), v)?;
    Ok(lhs == rhs)
}
