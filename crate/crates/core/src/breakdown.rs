//! Quantifier elimination on finite frames through duplicate classes.
//!
//! For a valuation `v` and a duplicate class `D`, [`Breakdown`] computes a
//! Boolean formula `f_φ(v, D)` over `Fv(φ)` that agrees with `φ` on `D`.
//! The `∃` case only visits one witness per capped cardinality profile,
//! which keeps the search far below `2^|W|` once classes are large.

use thiserror::Error;

use crate::diversity::{DuplicateStructure, LocalKind};
use crate::frames::{GeneralFrame, KripkeFrame};
use crate::semantics::{EvalError, Evaluator, Valuation, DEFAULT_MAX_VALUATIONS};
use crate::syntax::{atoms_over, Formula, Var};
use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BreakdownError {
    #[error("free variable {0} has no value")]
    Unbound(Var),
    #[error("valuations are not ≈{0}-equivalent")]
    NotEquivalent(u32),
    #[error("witness extension needs a level of at least 1")]
    ZeroLevel,
    #[error("{0} is already in the valuation domain")]
    VarInDomain(Var),
    #[error("valuations have different domains")]
    DomainMismatch,
    #[error("class index {0} out of range")]
    NoSuchClass(usize),
    #[error("constructed witness fails its postcondition")]
    Postcondition,
}

/// `2^n`, saturating.
pub fn cap_for(n: u32) -> u64 {
    1u64.checked_shl(n).unwrap_or(u64::MAX)
}

/// The cells `⟦ζ⟧(v) ∩ D`, atom-major in [`atoms_over`] order.
///
/// Variables missing from `v` are read as `∅`.
pub fn cells(v: &Valuation, vars: &[Var], ds: &DuplicateStructure) -> Vec<WorldSet> {
    let k = vars.len();
    let classes = ds.len();
    let values: Vec<WorldSet> = vars.iter().map(|p| v.get(*p).unwrap_or_default()).collect();
    let mut out = vec![WorldSet::EMPTY; classes << k];
    for (c, d) in ds.classes.iter().enumerate() {
        for w in d.iter() {
            let atom = values
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.contains(w))
                .fold(0usize, |acc, (i, _)| acc | 1 << (k - 1 - i));
            out[atom * classes + c].insert(w);
        }
    }
    out
}

/// Per-cell counts `min(|⟦ζ⟧(v) ∩ D|, cap)`; equal profiles at cap `2^n`
/// are exactly the `≈ₙ`-equivalent valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CardinalityProfile {
    pub vars: Vec<Var>,
    pub cap: u64,
    pub classes: usize,
    pub counts: Vec<u64>,
}

impl CardinalityProfile {
    pub fn new(v: &Valuation, vars: &[Var], ds: &DuplicateStructure, cap: u64) -> Self {
        let counts = cells(v, vars, ds)
            .iter()
            .map(|c| (c.len() as u64).min(cap))
            .collect();
        CardinalityProfile {
            vars: vars.to_vec(),
            cap,
            classes: ds.len(),
            counts,
        }
    }

    /// `(count, capped)` for one cell; `capped` means the true count is `≥ cap`.
    pub fn get(&self, atom: usize, class: usize) -> (u64, bool) {
        let c = self.counts[atom * self.classes + class];
        (c, c >= self.cap)
    }
}

/// `u ≈ₙ v` over the atoms of `vars`.
pub fn approx_equiv(
    u: &Valuation,
    v: &Valuation,
    n: u32,
    vars: &[Var],
    ds: &DuplicateStructure,
) -> bool {
    let cap = cap_for(n);
    CardinalityProfile::new(u, vars, ds, cap) == CardinalityProfile::new(v, vars, ds, cap)
}

/// Given `u ≈ₙ v` and `X`, builds `Y` with `u[X/p] ≈_{n−1} v[Y/p]`.
///
/// With `c = 2^{n−1}`, each cell of `v` copies the size of the matching cell
/// of `X` when that is below `c`, else leaves out as many elements as `X`
/// does when that is below `c`, else takes exactly `c` elements. Elements
/// are always the least ones of the cell.
pub fn extend_witness(
    u: &Valuation,
    v: &Valuation,
    n: u32,
    p: Var,
    x: WorldSet,
    ds: &DuplicateStructure,
) -> Result<WorldSet, BreakdownError> {
    if n == 0 {
        return Err(BreakdownError::ZeroLevel);
    }
    let vars = u.domain();
    if vars != v.domain() {
        return Err(BreakdownError::DomainMismatch);
    }
    if vars.contains(&p) {
        return Err(BreakdownError::VarInDomain(p));
    }
    if !approx_equiv(u, v, n, &vars, ds) {
        return Err(BreakdownError::NotEquivalent(n));
    }
    let c = cap_for(n - 1) as usize;
    let mut y = WorldSet::EMPTY;
    for (uc, vc) in cells(u, &vars, ds).into_iter().zip(cells(v, &vars, ds)) {
        let inside = uc.intersect(x).len();
        let outside = uc.minus(x).len();
        let part = if inside < c {
            vc.take_least(inside)
        } else if outside < c {
            vc.minus(vc.take_least(outside))
        } else {
            vc.take_least(c)
        };
        y = y.union(part);
    }
    let mut ext_vars = vars;
    ext_vars.push(p);
    if !approx_equiv(&u.with(p, x), &v.with(p, y), n - 1, &ext_vars, ds) {
        return Err(BreakdownError::Postcondition);
    }
    Ok(y)
}

/// How the `∃` case enumerates candidate witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExistsMode {
    /// One least-index witness per capped per-cell profile.
    #[default]
    Profiles,
    /// Every subset of `W`.
    Powerset,
}

/// Computes `f_φ(v, D)` for a fixed frame.
#[derive(Clone, Copy, Debug)]
pub struct Breakdown<'a> {
    frame: &'a KripkeFrame,
    ds: &'a DuplicateStructure,
    mode: ExistsMode,
}

impl<'a> Breakdown<'a> {
    pub fn new(frame: &'a KripkeFrame, ds: &'a DuplicateStructure) -> Self {
        Breakdown {
            frame,
            ds,
            mode: ExistsMode::Profiles,
        }
    }

    pub fn mode(self, mode: ExistsMode) -> Self {
        Breakdown { mode, ..self }
    }

    fn check(&self, phi: &Formula, v: &Valuation) -> Result<(), BreakdownError> {
        match phi.free_vars().into_iter().find(|p| !v.contains(*p)) {
            Some(p) => Err(BreakdownError::Unbound(p)),
            None => Ok(()),
        }
    }

    /// `f_φ(v, D)` for every class, in class order.
    pub fn per_class(&self, phi: &Formula, v: &Valuation) -> Result<Vec<Formula>, BreakdownError> {
        self.check(phi, v)?;
        Ok(self.fs(phi, v))
    }

    /// `f_φ(v, D_class)`.
    pub fn class(
        &self,
        phi: &Formula,
        v: &Valuation,
        class: usize,
    ) -> Result<Formula, BreakdownError> {
        if class >= self.ds.len() {
            return Err(BreakdownError::NoSuchClass(class));
        }
        Ok(self.per_class(phi, v)?.swap_remove(class))
    }

    /// `⋃_D ⟦f_φ(v, D)⟧(v) ∩ D`.
    pub fn extension(&self, phi: &Formula, v: &Valuation) -> Result<WorldSet, BreakdownError> {
        self.check(phi, v)?;
        let fs = self.fs(phi, v);
        Ok(self.assemble(&fs, v))
    }

    fn assemble(&self, fs: &[Formula], v: &Valuation) -> WorldSet {
        let n = self.frame.len();
        fs.iter()
            .zip(&self.ds.classes)
            .fold(WorldSet::EMPTY, |acc, (f, &d)| {
                acc.union(eval_boolean(f, v, n).intersect(d))
            })
    }

    fn fs(&self, phi: &Formula, v: &Valuation) -> Vec<Formula> {
        let k = self.ds.len();
        match phi {
            Formula::Top | Formula::Bot | Formula::Atom(_) => vec![phi.clone(); k],
            Formula::Not(a) => self.fs(a, v).into_iter().map(Formula::not).collect(),
            Formula::Or(a, b) => self
                .fs(a, v)
                .into_iter()
                .zip(self.fs(b, v))
                .map(|(x, y)| Formula::or(x, y))
                .collect(),
            Formula::Dia(a) => {
                let inner = self.fs(a, v);
                let x = self.assemble(&inner, v);
                self.dia_case(inner, x)
            }
            Formula::Exists(p, body) => self.exists_case(phi, *p, body, v),
        }
    }

    fn dia_case(&self, inner: Vec<Formula>, x: WorldSet) -> Vec<Formula> {
        let ds = self.ds;
        let hit = |j: usize| x.intersects(ds.classes[j]);
        inner
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                let external = ds.external_successors(i).iter().any(hit);
                match ds.kinds[i] {
                    LocalKind::Full | LocalKind::Empty => {
                        if ds.quotient[i].iter().any(hit) {
                            Formula::Top
                        } else {
                            Formula::Bot
                        }
                    }
                    _ if external => Formula::Top,
                    LocalKind::Coidentity => match x.intersect(ds.classes[i]).len() {
                        0 => Formula::Bot,
                        1 => Formula::not(f),
                        _ => Formula::Top,
                    },
                    LocalKind::Identity => f,
                }
            })
            .collect()
    }

    fn exists_case(&self, phi: &Formula, p: Var, body: &Formula, v: &Valuation) -> Vec<Formula> {
        let vars: Vec<Var> = phi.free_vars().into_iter().collect();
        let base = v.restrict(&vars);
        let cells = cells(&base, &vars, self.ds);
        let universe = self.frame.universe();
        let mut union = WorldSet::EMPTY;
        let mut visit = |x: WorldSet| {
            let w = base.with(p, x);
            let fs = self.fs(body, &w);
            union = union.union(self.assemble(&fs, &w));
            union == universe
        };
        if !body.free_vars().contains(&p) {
            visit(WorldSet::EMPTY);
        } else {
            match self.mode {
                ExistsMode::Powerset => {
                    for x in WorldSet::powerset(self.frame.len()) {
                        if visit(x) {
                            break;
                        }
                    }
                }
                ExistsMode::Profiles => {
                    let cap = cap_for(body.quantifier_depth() as u32 + 1);
                    for_each_profile_witness(&cells, cap, visit);
                }
            }
        }
        let atoms = atoms_over(&vars);
        let classes = self.ds.len();
        (0..classes)
            .map(|c| {
                Formula::disj(
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(a, _)| cells[a * classes + c].intersects(union))
                        .map(|(_, z)| z.clone()),
                )
            })
            .collect()
    }
}

/// Calls `visit` on the least-index representative of every capped profile
/// of subsets, cell by cell, until it returns `true`.
fn for_each_profile_witness(cells: &[WorldSet], cap: u64, mut visit: impl FnMut(WorldSet) -> bool) {
    let choices: Vec<(WorldSet, Vec<usize>)> = cells
        .iter()
        .filter(|c| !c.is_empty())
        .map(|&c| {
            let s = c.len();
            let cap = cap.min(s as u64) as usize;
            let mut ks: Vec<usize> = (0..=cap).chain(s.saturating_sub(cap)..=s).collect();
            ks.sort_unstable();
            ks.dedup();
            (c, ks)
        })
        .collect();
    let mut digits = vec![0usize; choices.len()];
    loop {
        let x = choices
            .iter()
            .zip(&digits)
            .fold(WorldSet::EMPTY, |acc, ((c, ks), &d)| acc.union(c.take_least(ks[d])));
        if visit(x) {
            return;
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices[i].1.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// `⟦β⟧(v)` for a Boolean formula.
pub fn eval_boolean(beta: &Formula, v: &Valuation, n: usize) -> WorldSet {
    match beta {
        Formula::Top => WorldSet::full(n),
        Formula::Bot => WorldSet::EMPTY,
        Formula::Atom(p) => v.get(*p).expect("free variables are bound"),
        Formula::Not(a) => eval_boolean(a, v, n).complement(n),
        Formula::Or(a, b) => eval_boolean(a, v, n).union(eval_boolean(b, v, n)),
        Formula::Dia(_) | Formula::Exists(..) => panic!("not a Boolean formula: {beta}"),
    }
}

/// `f_φ(v, D_class)` on `f` with duplicate structure `ds`.
pub fn breakdown(
    phi: &Formula,
    v: &Valuation,
    class: usize,
    f: &KripkeFrame,
    ds: &DuplicateStructure,
) -> Result<Formula, BreakdownError> {
    Breakdown::new(f, ds).class(phi, v, class)
}

/// Extension of `φ` on the full frame, assembled from the breakdown.
pub fn fast_extension(
    phi: &Formula,
    f: &KripkeFrame,
    v: &Valuation,
    ds: &DuplicateStructure,
) -> Result<WorldSet, BreakdownError> {
    Breakdown::new(f, ds).extension(phi, v)
}

/// First disagreement between quantifying over the family and over `℘(W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantViolation {
    pub formula: Formula,
    pub valuation: Valuation,
    pub world: usize,
    pub restricted: WorldSet,
    pub full: WorldSet,
}

/// Result of a corpus-bounded invariance test. Passing means only that no
/// formula of the corpus separates the family from the powerset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub formulas_checked: usize,
    pub valuations_checked: u64,
    pub violation: Option<InvariantViolation>,
}

impl InvariantReport {
    pub fn passed_corpus(&self) -> bool {
        self.violation.is_none()
    }
}

/// Compares `⟦φ⟧^B(v)` with `⟦φ⟧^{℘(W)}(v)` for every corpus formula and
/// every valuation of its free variables into `B`.
pub fn invariant_subdomain_check(
    g: &GeneralFrame,
    corpus: &[Formula],
) -> Result<InvariantReport, EvalError> {
    let full = GeneralFrame::full(g.base.clone());
    let restricted = Evaluator::new(g);
    let unrestricted = Evaluator::new(&full);
    let family: Vec<WorldSet> = g.family_iter().collect();
    let mut report = InvariantReport {
        formulas_checked: 0,
        valuations_checked: 0,
        violation: None,
    };
    for phi in corpus {
        let vars: Vec<Var> = phi.free_vars().into_iter().collect();
        let count = (family.len() as u128).checked_pow(vars.len() as u32);
        match count {
            Some(c) if c <= DEFAULT_MAX_VALUATIONS => {}
            _ => {
                return Err(EvalError::TooManyValuations {
                    count: count.unwrap_or(u128::MAX),
                    limit: DEFAULT_MAX_VALUATIONS,
                })
            }
        }
        let mut digits = vec![0usize; vars.len()];
        'valuations: loop {
            let v: Valuation = vars.iter().zip(&digits).map(|(p, &d)| (*p, family[d])).collect();
            let a = restricted.extension(phi, &v)?;
            let b = unrestricted.extension(phi, &v)?;
            report.valuations_checked += 1;
            if a != b {
                let world = a.union(b).minus(a.intersect(b)).first().expect("sets differ");
                report.violation = Some(InvariantViolation {
                    formula: phi.clone(),
                    valuation: v,
                    world,
                    restricted: a,
                    full: b,
                });
                report.formulas_checked += 1;
                return Ok(report);
            }
            let mut i = vars.len();
            loop {
                if i == 0 {
                    break 'valuations;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < family.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
        report.formulas_checked += 1;
    }
    Ok(report)
}

/// Builds `Y` with `v[X/p] ≈ₙ v[Y/p]` and `w ∈ X ⟺ w ∈ Y`, cell by cell
/// over the atoms of `dom(v)`: a cell where `X` or its complement has fewer
/// than `2^n` elements keeps `X`; otherwise `Y` keeps exactly `2^n` elements
/// on the side not containing `w`.
pub fn build_invariant_y(
    ds: &DuplicateStructure,
    v: &Valuation,
    p: Var,
    x: WorldSet,
    w: usize,
    n: u32,
) -> Result<WorldSet, BreakdownError> {
    let vars = v.domain();
    if vars.contains(&p) {
        return Err(BreakdownError::VarInDomain(p));
    }
    let cap = cap_for(n) as usize;
    let mut y = WorldSet::EMPTY;
    for cell in cells(v, &vars, ds) {
        let inside = cell.intersect(x);
        let outside = cell.minus(x);
        let part = if inside.len() < cap || outside.len() < cap {
            inside
        } else if inside.contains(w) {
            cell.minus(outside.take_least(cap))
        } else {
            inside.take_least(cap)
        };
        y = y.union(part);
    }
    let mut ext = vars;
    ext.push(p);
    if !approx_equiv(&v.with(p, x), &v.with(p, y), n, &ext, ds) || x.contains(w) != y.contains(w) {
        return Err(BreakdownError::Postcondition);
    }
    Ok(y)
}
