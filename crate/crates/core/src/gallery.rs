//! Named example frames and the shift check on recession windows.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::frames::{FrameError, GeneralFrame, KripkeFrame};
use crate::io::FrameJson;
use crate::semantics::{EvalError, Evaluator, Valuation};
use crate::syntax::{Formula, Var};
use crate::worldset::{WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("unknown gallery id {0:?}")]
    UnknownId(String),
    #[error("bad parameters in {0:?}")]
    BadParams(String),
    #[error("{0}")]
    Size(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("band of radius {d} around {point} leaves the window [{lo}, {hi}]")]
    BoundaryClipping { point: i64, d: i64, lo: i64, hi: i64 },
}

/// A gallery frame with a note on where its shape comes from.
#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub id: String,
    pub params: Vec<i64>,
    pub frame: GeneralFrame,
    pub provenance: String,
    /// Set for finite windows of infinite structures.
    pub caveat: Option<String>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    id: &'a str,
    provenance: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<&'a str>,
    frame: FrameJson,
}

impl GalleryEntry {
    fn new(id: String, params: Vec<i64>, frame: KripkeFrame, provenance: &str) -> Self {
        GalleryEntry {
            id,
            params,
            frame: GeneralFrame::full(frame),
            provenance: provenance.to_string(),
            caveat: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EntryJson {
            id: &self.id,
            provenance: &self.provenance,
            caveat: self.caveat.as_deref(),
            frame: FrameJson::from_frame(&self.frame),
        })
        .expect("entry serializes")
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), GalleryError> {
    if cond {
        Ok(())
    } else {
        Err(GalleryError::Size(msg()))
    }
}

fn numbered(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

fn sized(n: usize, what: &str) -> Result<(), GalleryError> {
    check((1..=MAX_WORLDS).contains(&n), || {
        format!("{what} needs between 1 and {MAX_WORLDS} worlds, got {n}")
    })
}

/// `i → i+1 mod n`.
pub fn cyclic(n: usize) -> Result<GalleryEntry, GalleryError> {
    sized(n, "cyclic")?;
    let f = KripkeFrame::from_fn(n, |a, b| b == (a + 1) % n)?;
    Ok(GalleryEntry::new(
        format!("cyclic:{n}"),
        vec![n as i64],
        f,
        "directed cycle of length n; from length 3 on every world is its own duplicate class, while the 2-cycle is a single class",
    ))
}

/// `(W, W × W)`.
pub fn clique(n: usize) -> Result<GalleryEntry, GalleryError> {
    sized(n, "clique")?;
    let f = KripkeFrame::from_fn(n, |_, _| true)?;
    Ok(GalleryEntry::new(
        format!("clique:{n}"),
        vec![n as i64],
        f,
        "universal relation; one duplicate class",
    ))
}

/// The diagonal relation.
pub fn identity(n: usize) -> Result<GalleryEntry, GalleryError> {
    sized(n, "identity")?;
    let f = KripkeFrame::from_fn(n, |a, b| a == b)?;
    Ok(GalleryEntry::new(
        format!("identity:{n}"),
        vec![n as i64],
        f,
        "reflexive points without other edges; one duplicate class",
    ))
}

/// `0 → 1 → … → n-1`.
pub fn chain(n: usize) -> Result<GalleryEntry, GalleryError> {
    sized(n, "chain")?;
    let f = KripkeFrame::from_fn(n, |a, b| b == a + 1)?;
    Ok(GalleryEntry::new(
        format!("chain:{n}"),
        vec![n as i64],
        f,
        "irreflexive successor chain",
    ))
}

/// Root `r` seeing a clique of `k` worlds.
pub fn d45_point(k: usize) -> Result<GalleryEntry, GalleryError> {
    check((1..MAX_WORLDS).contains(&k), || format!("d45 needs 1..{} clique worlds", MAX_WORLDS - 1))?;
    let mut names = vec!["r".to_string()];
    names.extend(numbered("w", k));
    let f = KripkeFrame::new(
        names,
        (0..=k).flat_map(|a| (1..=k).map(move |b| (a, b))),
    )?;
    Ok(GalleryEntry::new(
        format!("d45:{k}"),
        vec![k as i64],
        f,
        "root with edges into a clique, a rooted D45 frame; two duplicate classes",
    ))
}

/// `({r} ∪ W, {r} × U ∪ W × W)` with `|U| = u` and `|W ∖ U| = rest`.
pub fn k5_frame(u: usize, rest: usize) -> Result<GalleryEntry, GalleryError> {
    check(u >= 1, || "k5 needs |U| >= 1".into())?;
    check(1 + u + rest <= MAX_WORLDS, || "k5 frame too large".into())?;
    let mut names = vec!["r".to_string()];
    names.extend(numbered("u", u));
    names.extend(numbered("x", rest));
    let n = 1 + u + rest;
    let edges = (1..=u)
        .map(|b| (0, b))
        .chain((1..n).flat_map(|a| (1..n).map(move |b| (a, b))));
    let f = KripkeFrame::new(names, edges)?;
    Ok(GalleryEntry::new(
        format!("k5:{u},{rest}"),
        vec![u as i64, rest as i64],
        f,
        "root with edges into a part U of a clique W, a rooted frame for axiom 5; classes {r}, U and the rest of W",
    ))
}

/// `W = {r} ∪ B ∪ C`, `A ⊆ C`, `R = {r} × (B ∪ A) ∪ (B ∪ C) × C`.
pub fn div4_frame(b: usize, a: usize, c_minus_a: usize) -> Result<GalleryEntry, GalleryError> {
    check(a >= 1, || "div4 needs |A| >= 1".into())?;
    check(1 + b + a + c_minus_a <= MAX_WORLDS, || "div4 frame too large".into())?;
    let mut names = vec!["r".to_string()];
    names.extend(numbered("b", b));
    names.extend(numbered("a", a));
    names.extend(numbered("c", c_minus_a));
    let n = names.len();
    let in_b = |w: usize| (1..=b).contains(&w);
    let in_a = |w: usize| (b + 1..=b + a).contains(&w);
    let in_c = |w: usize| w > b;
    let f = KripkeFrame::new(
        names,
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| {
                (x == 0 && (in_b(y) || in_a(y))) || ((in_b(x) || in_c(x)) && in_c(y))
            })
            .collect::<Vec<_>>(),
    )?;
    Ok(GalleryEntry::new(
        format!("div4:{b},{a},{c_minus_a}"),
        vec![b as i64, a as i64, c_minus_a as i64],
        f,
        "root seeing irreflexive B and reflexive A inside a clique C that B also sees; at most four classes {r}, B, A, C minus A",
    ))
}

/// Worlds `0..=N` forming a clique plus `w` seeing the even numbers.
pub fn euclid_window(n: usize) -> Result<GalleryEntry, GalleryError> {
    check(n + 2 <= MAX_WORLDS, || "euclid window too large".into())?;
    let mut names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    names.push("w".into());
    let wi = n + 1;
    let edges = (0..=n)
        .flat_map(|a| (0..=n).map(move |b| (a, b)))
        .chain((0..=n).step_by(2).map(|b| (wi, b)));
    let f = KripkeFrame::new(names, edges)?;
    let mut e = GalleryEntry::new(
        format!("euclid:{n}"),
        vec![n as i64],
        f,
        "naturals up to N, totally related, plus a world w that sees the even ones",
    );
    e.caveat = Some(
        "finite window with the full powerset; the infinite frame with finite and cofinite admissible sets is not represented"
            .into(),
    );
    Ok(e)
}

/// Integers `lo..=hi` with `nRm` iff `m ≥ n − 1`.
pub fn recession_window(lo: i64, hi: i64) -> Result<GalleryEntry, GalleryError> {
    check(lo <= hi && hi - lo < MAX_WORLDS as i64, || {
        format!("recession window needs lo <= hi and at most {MAX_WORLDS} worlds")
    })?;
    let f = recession_frame(lo, hi)?;
    let mut e = GalleryEntry::new(
        format!("recession:{lo},{hi}"),
        vec![lo, hi],
        f,
        "integers where n sees m iff m >= n - 1",
    );
    e.caveat = Some(
        "finite window with the full powerset; the integer frame with eventually settled admissible sets is not represented"
            .into(),
    );
    Ok(e)
}

fn recession_frame(lo: i64, hi: i64) -> Result<KripkeFrame, FrameError> {
    let n = (hi - lo + 1) as usize;
    let names = (lo..=hi).map(|i| i.to_string()).collect();
    let edges: Vec<_> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| b as i64 >= a as i64 - 1)
        .collect();
    KripkeFrame::new(names, edges)
}

fn params<T: std::str::FromStr>(id: &str, text: &str, count: usize) -> Result<Vec<T>, GalleryError> {
    let out: Vec<T> = text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| GalleryError::BadParams(id.to_string()))?;
    if out.len() != count {
        return Err(GalleryError::BadParams(id.to_string()));
    }
    Ok(out)
}

/// Builds an entry from an id such as `cyclic:5`, `k5:1,2` or `recession:-3,3`.
pub fn lookup(id: &str) -> Result<GalleryEntry, GalleryError> {
    let (kind, rest) = id
        .split_once(':')
        .ok_or_else(|| GalleryError::UnknownId(id.to_string()))?;
    match kind {
        "cyclic" => cyclic(params::<usize>(id, rest, 1)?[0]),
        "clique" => clique(params::<usize>(id, rest, 1)?[0]),
        "identity" => identity(params::<usize>(id, rest, 1)?[0]),
        "chain" => chain(params::<usize>(id, rest, 1)?[0]),
        "d45" => d45_point(params::<usize>(id, rest, 1)?[0]),
        "k5" => {
            let p = params::<usize>(id, rest, 2)?;
            k5_frame(p[0], p[1])
        }
        "div4" => {
            let p = params::<usize>(id, rest, 3)?;
            div4_frame(p[0], p[1], p[2])
        }
        "euclid" => euclid_window(params::<usize>(id, rest, 1)?[0]),
        "recession" => {
            let p = params::<i64>(id, rest, 2)?;
            recession_window(p[0], p[1])
        }
        _ => Err(GalleryError::UnknownId(id.to_string())),
    }
}

/// One small instance of every constructor.
pub fn catalogue() -> Vec<GalleryEntry> {
    [
        "cyclic:4",
        "clique:3",
        "identity:3",
        "chain:3",
        "d45:3",
        "k5:1,2",
        "div4:1,1,1",
        "euclid:6",
        "recession:-3,3",
    ]
    .iter()
    .map(|id| lookup(id).expect("catalogue ids are valid"))
    .collect()
}

/// Outcome of comparing two bands of a recession window under a shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    /// `π: x ↦ x + (m − n)` preserves and reflects the relation on the bands.
    pub relation_preserved: bool,
    /// `π` carries the valuation on the first band onto the shifted one.
    pub valuation_preserved: bool,
    pub truth_at_n: bool,
    pub truth_at_m: bool,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.relation_preserved && self.valuation_preserved && self.truth_at_n == self.truth_at_m
    }
}

/// Compares the bands `[n−d, n+d]` and `[m−d, m+d]` of the recession window
/// `lo..=hi`. The first band carries `v` (integer sets, clipped to the band);
/// the second carries `v` shifted by `m − n`. Both bands must lie inside the
/// window.
pub fn shift_isomorphism_check(
    lo: i64,
    hi: i64,
    d: i64,
    phi: &Formula,
    v: &BTreeMap<Var, Vec<i64>>,
    n: i64,
    m: i64,
) -> Result<ShiftReport, GalleryError> {
    check(lo <= hi && hi - lo < MAX_WORLDS as i64, || "window too large".into())?;
    check(d >= 0, || "band radius must be non-negative".into())?;
    for point in [n, m] {
        if point - d < lo || point + d > hi {
            return Err(GalleryError::BoundaryClipping { point, d, lo, hi });
        }
    }
    let delta = m - n;
    let band_n = recession_frame(n - d, n + d)?;
    let band_m = recession_frame(m - d, m + d)?;
    // Both bands are indexed from their lower end, so π is the identity on indices.
    let relation_preserved = band_n.edges() == band_m.edges()
        && band_n.names().iter().zip(band_m.names()).all(|(a, b)| {
            a.parse::<i64>().unwrap() + delta == b.parse::<i64>().unwrap()
        });
    let to_set = |center: i64, shift: i64, xs: &[i64]| -> WorldSet {
        xs.iter()
            .map(|x| x + shift - (center - d))
            .filter(|&i| (0..=2 * d).contains(&i))
            .map(|i| i as usize)
            .collect()
    };
    let vn: Valuation = v.iter().map(|(p, xs)| (*p, to_set(n, 0, xs))).collect();
    let vm: Valuation = v.iter().map(|(p, xs)| (*p, to_set(m, delta, xs))).collect();
    let valuation_preserved = vn == vm;
    let gn = GeneralFrame::full(band_n);
    let gm = GeneralFrame::full(band_m);
    let centre = d as usize;
    let truth_at_n = Evaluator::new(&gn).extension(phi, &vn)?.contains(centre);
    let truth_at_m = Evaluator::new(&gm).extension(phi, &vm)?.contains(centre);
    Ok(ShiftReport {
        relation_preserved,
        valuation_preserved,
        truth_at_n,
        truth_at_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::{diversity, diversity_generated};
    use crate::syntax::{p, parse};

    #[test]
    fn constructor_examples() {
        let c = cyclic(4).unwrap();
        assert_eq!(c.frame.base.edges(), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(diversity(&c.frame.base), 4);
        // swapping the two worlds of a 2-cycle maps 0→1 onto 1→0
        assert_eq!(diversity(&cyclic(2).unwrap().frame.base), 1);

        let d = d45_point(3).unwrap();
        assert_eq!(d.frame.len(), 4);
        assert_eq!(diversity_generated(&d.frame.base), 2);

        let r = recession_window(-3, 3).unwrap();
        assert_eq!(r.frame.len(), 7);
        let f = &r.frame.base;
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.related(a, b), b + 1 >= a, "{a} {b}");
            }
        }
        assert_eq!(f.name(0), "-3");
    }

    #[test]
    fn size_errors() {
        assert!(matches!(k5_frame(0, 2), Err(GalleryError::Size(_))));
        assert!(matches!(cyclic(0), Err(GalleryError::Size(_))));
        assert!(matches!(div4_frame(1, 0, 1), Err(GalleryError::Size(_))));
        assert!(matches!(recession_window(3, -3), Err(GalleryError::Size(_))));
        assert!(matches!(clique(65), Err(GalleryError::Size(_))));
    }

    #[test]
    fn lookup_ids() {
        assert_eq!(lookup("k5:1,2").unwrap().frame.len(), 4);
        assert_eq!(lookup("recession:-3,3").unwrap().frame.len(), 7);
        assert_eq!(lookup("div4:1,1,1").unwrap().frame.len(), 4);
        assert_eq!(lookup("euclid:4").unwrap().frame.len(), 6);
        assert!(matches!(lookup("nope:1"), Err(GalleryError::UnknownId(_))));
        assert!(matches!(lookup("cyclic"), Err(GalleryError::UnknownId(_))));
        assert!(matches!(lookup("k5:1"), Err(GalleryError::BadParams(_))));
        assert!(matches!(lookup("cyclic:x"), Err(GalleryError::BadParams(_))));
    }

    #[test]
    fn div4_shape() {
        let e = div4_frame(1, 1, 1).unwrap();
        let f = &e.frame.base;
        // r=0, b0=1, a0=2, c0=3
        assert_eq!(f.successors(0), [1, 2].into_iter().collect());
        assert_eq!(f.successors(1), [2, 3].into_iter().collect());
        assert_eq!(f.successors(3), [2, 3].into_iter().collect());
        assert!(diversity_generated(f) <= 4);
    }

    #[test]
    fn entries_carry_provenance() {
        for e in catalogue() {
            assert!(!e.provenance.is_empty());
            assert!(e.to_json().contains(&e.id));
        }
        assert!(euclid_window(3).unwrap().caveat.is_some());
    }

    #[test]
    fn shift_examples() {
        let v: BTreeMap<Var, Vec<i64>> = [(p(0), vec![1])].into_iter().collect();
        let phi = parse("<>p0").unwrap();
        let r = shift_isomorphism_check(-8, 8, 1, &phi, &v, 0, 2).unwrap();
        assert!(r.passed());
        assert!(r.truth_at_n && r.truth_at_m);

        let r = shift_isomorphism_check(-8, 8, 1, &phi, &v, 3, 3).unwrap();
        assert!(r.passed());

        let r = shift_isomorphism_check(-8, 8, 0, &parse("p0").unwrap(), &v, 1, 5).unwrap();
        assert!(r.passed() && r.truth_at_n);

        assert!(matches!(
            shift_isomorphism_check(-3, 3, 2, &phi, &v, 2, 0),
            Err(GalleryError::BoundaryClipping { point: 2, .. })
        ));
    }
}
