//! Finite Kripke frames, frames with a propositional domain, and models.

use std::collections::HashSet;

use thiserror::Error;

use crate::semantics::Valuation;
use crate::worldset::{WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    NoWorlds,
    #[error("frame has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world name {0:?}")]
    DuplicateName(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldOutOfRange(usize),
    #[error("admissible family must be non-empty")]
    EmptyFamily,
    #[error("admissible set {0:?} mentions worlds outside the frame")]
    SetOutOfRange(WorldSet),
    #[error("admissible family is not closed: {0}")]
    NotClosed(ClosureReport),
    #[error("closure would materialize 2^{0} sets")]
    FamilyTooLarge(usize),
    #[error("valuation of {var} is not an admissible set")]
    InadmissibleValue { var: crate::syntax::Var },
}

/// A finite Kripke frame `(W, R)` with named worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    names: Vec<String>,
    succ: Vec<WorldSet>,
    pred: Vec<WorldSet>,
}

impl KripkeFrame {
    pub fn new<I>(names: Vec<String>, edges: I) -> Result<Self, FrameError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::NoWorlds);
        }
        if n > MAX_WORLDS {
            return Err(FrameError::TooManyWorlds(n));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(FrameError::DuplicateName(name.clone()));
            }
        }
        let mut succ = vec![WorldSet::EMPTY; n];
        let mut pred = vec![WorldSet::EMPTY; n];
        for (a, b) in edges {
            if a >= n {
                return Err(FrameError::WorldOutOfRange(a));
            }
            if b >= n {
                return Err(FrameError::WorldOutOfRange(b));
            }
            succ[a].insert(b);
            pred[b].insert(a);
        }
        Ok(KripkeFrame { names, succ, pred })
    }

    /// Worlds named `"0"`, `"1"`, ….
    pub fn numbered<I>(n: usize, edges: I) -> Result<Self, FrameError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Numbered frame whose relation is given by a predicate.
    pub fn from_fn(n: usize, related: impl Fn(usize, usize) -> bool) -> Result<Self, FrameError> {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| related(a, b))
            .collect();
        Self::numbered(n, edges)
    }

    /// Numbered frame from successor rows.
    pub fn from_rows(rows: &[WorldSet]) -> Result<Self, FrameError> {
        let n = rows.len();
        let edges: Vec<_> = rows
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |b| (a, b)))
            .collect();
        Self::numbered(n, edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, FrameError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FrameError::UnknownWorld(name.to_string()))
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    /// `R[w]`.
    pub fn successors(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    /// `{u | uRw}`.
    pub fn predecessors(&self, w: usize) -> WorldSet {
        self.pred[w]
    }

    /// `R[X] = ⋃_{w∈X} R[w]`.
    pub fn successors_of_set(&self, x: WorldSet) -> WorldSet {
        x.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(self.succ[w]))
    }

    /// `m_◊(X) = {w | ∃u ∈ X, wRu}`.
    pub fn m_diamond(&self, x: WorldSet) -> WorldSet {
        x.iter().fold(WorldSet::EMPTY, |acc, u| acc.union(self.pred[u]))
    }

    /// Dual of [`Self::m_diamond`]: `{w | R[w] ⊆ X}`.
    pub fn m_box(&self, x: WorldSet) -> WorldSet {
        let n = self.len();
        self.m_diamond(x.complement(n)).complement(n)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |b| (a, b)))
            .collect()
    }

    /// `R*[w]`, the reflexive-transitive closure image.
    pub fn reachable(&self, w: usize) -> WorldSet {
        self.reach_within(w, usize::MAX)
    }

    /// `R^{≤n}[w]`: worlds reachable in at most `n` steps, `w` included.
    pub fn reach_within(&self, w: usize, n: usize) -> WorldSet {
        let mut seen = WorldSet::singleton(w);
        let mut frontier = seen;
        let mut steps = 0;
        while steps < n && !frontier.is_empty() {
            frontier = self.successors_of_set(frontier).minus(seen);
            seen = seen.union(frontier);
            steps += 1;
        }
        seen
    }

    /// Induced subframe on `keep`, with the ascending list of kept indices.
    /// Panics if `keep` has no world of the frame.
    pub fn restrict(&self, keep: WorldSet) -> (KripkeFrame, Vec<usize>) {
        let embedding: Vec<usize> = keep.iter().collect();
        let names = embedding.iter().map(|&w| self.names[w].clone()).collect();
        let edges: Vec<_> = embedding
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| {
                embedding
                    .iter()
                    .enumerate()
                    .filter(move |&(_, &b)| self.related(a, b))
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        let frame = KripkeFrame::new(names, edges).expect("restriction of a valid frame");
        (frame, embedding)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|w| self.related(w, w))
    }

    pub fn is_serial(&self) -> bool {
        self.succ.iter().all(|r| !r.is_empty())
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|w| self.successors_of_set(self.succ[w]).is_subset(self.succ[w]))
    }

    /// `wRu ∧ wRv ⇒ uRv`.
    pub fn is_euclidean(&self) -> bool {
        (0..self.len()).all(|w| self.succ[w].iter().all(|u| self.succ[w].is_subset(self.succ[u])))
    }
}

/// Projects a set of original indices onto the local indices of `embedding`.
pub fn project(x: WorldSet, embedding: &[usize]) -> WorldSet {
    embedding
        .iter()
        .enumerate()
        .filter(|&(_, &w)| x.contains(w))
        .map(|(i, _)| i)
        .collect()
}

/// Maps a set of local indices back to the original frame.
pub fn lift(x: WorldSet, embedding: &[usize]) -> WorldSet {
    x.iter().map(|i| embedding[i]).collect()
}

/// An explicit admissible family: sorted, deduplicated, with a membership index.
#[derive(Clone, Debug)]
pub struct Family {
    sets: Vec<WorldSet>,
    members: HashSet<WorldSet>,
}

impl Family {
    pub fn new<I: IntoIterator<Item = WorldSet>>(sets: I) -> Self {
        let mut sets: Vec<WorldSet> = sets.into_iter().collect();
        sets.sort();
        sets.dedup();
        let members = sets.iter().copied().collect();
        Family { sets, members }
    }

    pub fn contains(&self, x: WorldSet) -> bool {
        self.members.contains(&x)
    }

    pub fn sets(&self) -> &[WorldSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.sets == other.sets
    }
}

impl Eq for Family {}

/// The range of the propositional quantifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissible {
    /// `℘(W)`, never materialized.
    Full,
    Sets(Family),
}

/// Outcome of checking a family for closure under `¬`, `∪` and `m_◊`.
///
/// Each witness is the first missing set found when scanning the family in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub boolean_closed: bool,
    pub mdia_closed: bool,
    pub complement_witness: Option<WorldSet>,
    pub union_witness: Option<WorldSet>,
    pub mdia_witness: Option<WorldSet>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.boolean_closed && self.mdia_closed
    }
}

impl std::fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "boolean_closed={} mdia_closed={}",
            self.boolean_closed, self.mdia_closed
        )?;
        if let Some(x) = self.complement_witness {
            write!(f, " missing complement {x:?}")?;
        }
        if let Some(x) = self.union_witness {
            write!(f, " missing union {x:?}")?;
        }
        if let Some(x) = self.mdia_witness {
            write!(f, " missing m_dia image {x:?}")?;
        }
        Ok(())
    }
}

pub fn check_closure(frame: &KripkeFrame, family: &Admissible) -> ClosureReport {
    let fam = match family {
        Admissible::Full => {
            return ClosureReport {
                boolean_closed: true,
                mdia_closed: true,
                complement_witness: None,
                union_witness: None,
                mdia_witness: None,
            }
        }
        Admissible::Sets(f) => f,
    };
    let n = frame.len();
    let complement_witness = fam
        .sets()
        .iter()
        .map(|x| x.complement(n))
        .find(|c| !fam.contains(*c));
    // A family closed under complement is a field iff it has 2^(#atoms) members.
    let union_witness = if complement_witness.is_none()
        && fam.len() as u128 == 1u128 << atoms_of(n, fam.sets()).len()
    {
        None
    } else {
        let sets = fam.sets();
        sets.iter()
            .enumerate()
            .flat_map(|(i, &a)| sets[i..].iter().map(move |&b| a.union(b)))
            .find(|u| !fam.contains(*u))
    };
    let mdia_witness = fam
        .sets()
        .iter()
        .map(|&x| frame.m_diamond(x))
        .find(|m| !fam.contains(*m));
    ClosureReport {
        boolean_closed: complement_witness.is_none() && union_witness.is_none(),
        mdia_closed: mdia_witness.is_none(),
        complement_witness,
        union_witness,
        mdia_witness,
    }
}

/// Blocks of the partition of `{0..n-1}` induced by membership in `sets`.
fn atoms_of(n: usize, sets: &[WorldSet]) -> Vec<WorldSet> {
    let mut blocks = vec![WorldSet::full(n)];
    for &s in sets {
        refine(&mut blocks, s);
    }
    blocks
}

fn refine(blocks: &mut Vec<WorldSet>, s: WorldSet) -> bool {
    let mut changed = false;
    let mut out = Vec::with_capacity(blocks.len() + 1);
    for &b in blocks.iter() {
        let (inside, outside) = (b.intersect(s), b.minus(s));
        if !inside.is_empty() && !outside.is_empty() {
            changed = true;
            out.push(inside);
            out.push(outside);
        } else {
            out.push(b);
        }
    }
    out.sort();
    *blocks = out;
    changed
}

/// Largest number of atoms for which a closed family is materialized.
pub const MAX_MATERIALIZED_ATOMS: usize = 20;

/// Least family containing `seed` closed under complement, union and `m_◊`.
///
/// Works on the atom partition: the field generated by a family is the set
/// of unions of its atoms, and it is closed under `m_◊` once the image of
/// every atom is itself a union of atoms.
pub fn close_family(frame: &KripkeFrame, seed: &Admissible) -> Result<Admissible, FrameError> {
    let sets = match seed {
        Admissible::Full => return Ok(Admissible::Full),
        Admissible::Sets(f) => f.sets(),
    };
    let n = frame.len();
    let mut blocks = atoms_of(n, sets);
    loop {
        let images: Vec<WorldSet> = blocks.iter().map(|&b| frame.m_diamond(b)).collect();
        let mut changed = false;
        for m in images {
            changed |= refine(&mut blocks, m);
        }
        if !changed {
            break;
        }
    }
    if blocks.len() == n {
        return Ok(Admissible::Full);
    }
    if blocks.len() > MAX_MATERIALIZED_ATOMS {
        return Err(FrameError::FamilyTooLarge(blocks.len()));
    }
    let k = blocks.len();
    let family = (0..1u64 << k).map(|code| {
        (0..k)
            .filter(|i| code >> i & 1 == 1)
            .fold(WorldSet::EMPTY, |acc, i| acc.union(blocks[i]))
    });
    Ok(Admissible::Sets(Family::new(family)))
}

/// A Kripke frame together with an admissible family (a pd-frame).
///
/// `closure_certified` is set only after the family was checked to be closed
/// under complement, union and `m_◊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFrame {
    pub base: KripkeFrame,
    admissible: Admissible,
    closure_certified: bool,
}

/// A frame obtained by restriction, with the original index of each world.
#[derive(Clone, Debug)]
pub struct Subframe {
    pub frame: GeneralFrame,
    pub embedding: Vec<usize>,
}

impl Subframe {
    pub fn local(&self, original: usize) -> Option<usize> {
        self.embedding.iter().position(|&w| w == original)
    }
}

impl GeneralFrame {
    /// The full general frame `(W, R, ℘(W))`.
    pub fn full(base: KripkeFrame) -> Self {
        GeneralFrame {
            base,
            admissible: Admissible::Full,
            closure_certified: true,
        }
    }

    /// A pd-frame: any non-empty family, no closure requirement.
    pub fn pd<I: IntoIterator<Item = WorldSet>>(
        base: KripkeFrame,
        sets: I,
    ) -> Result<Self, FrameError> {
        let universe = base.universe();
        let family = Family::new(sets);
        if family.is_empty() {
            return Err(FrameError::EmptyFamily);
        }
        if let Some(&bad) = family.sets().iter().find(|s| !s.is_subset(universe)) {
            return Err(FrameError::SetOutOfRange(bad));
        }
        Ok(GeneralFrame {
            base,
            admissible: Admissible::Sets(family),
            closure_certified: false,
        })
    }

    /// A general frame; fails unless the family passes [`check_closure`].
    pub fn certified<I: IntoIterator<Item = WorldSet>>(
        base: KripkeFrame,
        sets: I,
    ) -> Result<Self, FrameError> {
        Self::pd(base, sets)?.certify()
    }

    /// Machine-checks closure and sets the certification flag.
    pub fn certify(mut self) -> Result<Self, FrameError> {
        let report = check_closure(&self.base, &self.admissible);
        if !report.is_closed() {
            return Err(FrameError::NotClosed(report));
        }
        self.closure_certified = true;
        Ok(self)
    }

    /// Certifies when closed, otherwise leaves the frame as a pd-frame.
    pub fn certify_if_closed(self) -> Self {
        let report = check_closure(&self.base, &self.admissible);
        GeneralFrame {
            closure_certified: report.is_closed(),
            ..self
        }
    }

    /// The general frame over the least closed family containing this one's.
    pub fn closed(&self) -> Result<Self, FrameError> {
        Ok(GeneralFrame {
            base: self.base.clone(),
            admissible: close_family(&self.base, &self.admissible)?,
            closure_certified: true,
        })
    }

    pub fn admissible(&self) -> &Admissible {
        &self.admissible
    }

    pub fn closure_certified(&self) -> bool {
        self.closure_certified
    }

    pub fn is_full(&self) -> bool {
        matches!(self.admissible, Admissible::Full)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn admits(&self, x: WorldSet) -> bool {
        match &self.admissible {
            Admissible::Full => x.is_subset(self.base.universe()),
            Admissible::Sets(f) => f.contains(x),
        }
    }

    /// Number of admissible sets.
    pub fn family_size(&self) -> u128 {
        match &self.admissible {
            Admissible::Full => 1u128 << self.len(),
            Admissible::Sets(f) => f.len() as u128,
        }
    }

    /// Admissible sets in canonical order; `℘(W)` is streamed.
    pub fn family_iter(&self) -> Box<dyn Iterator<Item = WorldSet> + '_> {
        match &self.admissible {
            Admissible::Full => Box::new(WorldSet::powerset(self.len())),
            Admissible::Sets(f) => Box::new(f.sets().iter().copied()),
        }
    }

    pub fn check_closure(&self) -> ClosureReport {
        check_closure(&self.base, &self.admissible)
    }

    /// Closure under complement, union and `m_◊`; for a finite family this
    /// makes it closed under the semantics of every formula.
    pub fn is_quantifiable_finite(&self) -> bool {
        self.check_closure().is_closed()
    }

    /// `F|_U`: worlds `U`, relation and family restricted pointwise.
    pub fn restrict(&self, keep: WorldSet) -> Subframe {
        let (base, embedding) = self.base.restrict(keep);
        let admissible = match &self.admissible {
            Admissible::Full => Admissible::Full,
            Admissible::Sets(f) => Admissible::Sets(Family::new(
                f.sets().iter().map(|&x| project(x, &embedding)),
            )),
        };
        let closure_certified = matches!(admissible, Admissible::Full);
        Subframe {
            frame: GeneralFrame {
                base,
                admissible,
                closure_certified,
            },
            embedding,
        }
    }

    /// Subframe on `R*[w]` with the family restricted pointwise.
    pub fn generated_subframe(&self, w: usize) -> Subframe {
        let mut sub = self.restrict(self.base.reachable(w));
        // Restricting to an R-closed set preserves closure.
        sub.frame.closure_certified = self.closure_certified;
        sub
    }
}

/// A pd-model: a frame plus a valuation into its admissible family.
#[derive(Clone, Debug)]
pub struct Model {
    pub frame: GeneralFrame,
    pub valuation: Valuation,
}

impl Model {
    pub fn new(frame: GeneralFrame, valuation: Valuation) -> Result<Self, FrameError> {
        for (var, x) in valuation.iter() {
            if !frame.admits(x) {
                return Err(FrameError::InadmissibleValue { var });
            }
        }
        Ok(Model { frame, valuation })
    }

    /// `M_{w,n}`: restriction to `R^{≤n}[w]`. Returns the model and the
    /// original index of each kept world.
    pub fn truncated_submodel(&self, w: usize, n: usize) -> (Model, Vec<usize>) {
        let keep = self.frame.base.reach_within(w, n);
        let sub = self.frame.restrict(keep);
        let valuation = self.valuation.map(|x| project(x, &sub.embedding));
        (
            Model {
                frame: sub.frame,
                valuation,
            },
            sub.embedding,
        )
    }
}
