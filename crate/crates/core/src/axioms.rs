//! Axiom and scheme generators, and a syntactic Sahlqvist classifier.

use thiserror::Error;

use crate::syntax::{box_iter, box_le, dia_iter, dia_le, first_unused, p, Formula, Var};

fn a(i: u32) -> Formula {
    Formula::var(i)
}

/// `K`: `□(p0 → p1) → (□p0 → □p1)`.
pub fn k() -> Formula {
    Formula::implies(
        Formula::boxed(Formula::implies(a(0), a(1))),
        Formula::implies(Formula::boxed(a(0)), Formula::boxed(a(1))),
    )
}

/// `◊p0 ↔ ¬□¬p0`.
pub fn dual() -> Formula {
    Formula::iff(
        Formula::dia(a(0)),
        Formula::not(Formula::boxed(Formula::not(a(0)))),
    )
}

/// Barcan instance `◊∃pφ → ∃p◊φ`.
pub fn bc(var: Var, phi: Formula) -> Formula {
    Formula::implies(
        Formula::dia(Formula::exists(var, phi.clone())),
        Formula::exists(var, Formula::dia(phi)),
    )
}

/// `Qⁿ(φ) = ◊^{≤n}φ ∧ ∀q(□^{≤n}(φ → q) ∨ □^{≤n}(φ → ¬q))`, with `q` the
/// least variable not free in `φ`.
pub fn q_n(n: usize, phi: Formula) -> Formula {
    let q = first_unused(&phi.free_vars());
    let qa = Formula::atom(q);
    Formula::and(
        dia_le(n, phi.clone()),
        Formula::forall(
            q,
            Formula::or(
                box_le(n, Formula::implies(phi.clone(), qa.clone())),
                box_le(n, Formula::implies(phi, Formula::not(qa))),
            ),
        ),
    )
}

/// `Atⁿ = ∀p0(◊^{≤n}p0 → ∃p1(Qⁿ(p1) ∧ □^{≤n}(p1 → p0)))`.
pub fn at_n(n: usize) -> Formula {
    Formula::forall(
        p(0),
        Formula::implies(
            dia_le(n, a(0)),
            Formula::exists(
                p(1),
                Formula::and(q_n(n, a(1)), box_le(n, Formula::implies(a(1), a(0)))),
            ),
        ),
    )
}

/// `Rⁿ = ∀p0∃p1(□^{≤n}(p0 → □p1) ∧ ∀p2(□^{≤n}(p0 → □p2) → □^{≤n}(p1 → p2)))`.
pub fn r_n(n: usize) -> Formula {
    Formula::forall(
        p(0),
        Formula::exists(
            p(1),
            Formula::and(
                box_le(n, Formula::implies(a(0), Formula::boxed(a(1)))),
                Formula::forall(
                    p(2),
                    Formula::implies(
                        box_le(n, Formula::implies(a(0), Formula::boxed(a(2)))),
                        box_le(n, Formula::implies(a(1), a(2))),
                    ),
                ),
            ),
        ),
    )
}

/// `◊p0 → □◊p0`.
pub fn five() -> Formula {
    Formula::implies(Formula::dia(a(0)), Formula::boxed(Formula::dia(a(0))))
}

/// `□p0 → p0`.
pub fn t() -> Formula {
    Formula::implies(Formula::boxed(a(0)), a(0))
}

/// `p0 → ◊p0`.
pub fn t_dia() -> Formula {
    Formula::implies(a(0), Formula::dia(a(0)))
}

/// McKinsey: `□◊p0 → ◊□p0`.
pub fn m_ax() -> Formula {
    Formula::implies(
        Formula::boxed(Formula::dia(a(0))),
        Formula::dia(Formula::boxed(a(0))),
    )
}

/// `◊(◊p0 ∧ □p1) → □(◊p0 ∨ □p1)`.
pub fn e_ax() -> Formula {
    Formula::implies(
        Formula::dia(Formula::and(Formula::dia(a(0)), Formula::boxed(a(1)))),
        Formula::boxed(Formula::or(Formula::dia(a(0)), Formula::boxed(a(1)))),
    )
}

/// `(◊p0 ∧ □(p0 → □p0)) → p0`.
pub fn q_vb() -> Formula {
    Formula::implies(
        Formula::and(
            Formula::dia(a(0)),
            Formula::boxed(Formula::implies(a(0), Formula::boxed(a(0)))),
        ),
        a(0),
    )
}

fn pairs(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

/// `⋀_{i≤n} p_i → ⋁_{i<j≤n} ◊(p_i ∧ p_j)`, exactly as printed.
pub fn alt_n(n: u32) -> Formula {
    Formula::implies(
        Formula::conj((0..=n).map(a)),
        Formula::disj(pairs(n).map(|(i, j)| Formula::dia(Formula::and(a(i), a(j))))),
    )
}

/// `⋀_{i≤n} ◊p_i → ⋁_{i<j≤n} ◊(p_i ∧ p_j)`: at most `n` successors.
pub fn alt_n_bounded(n: u32) -> Formula {
    Formula::implies(
        Formula::conj((0..=n).map(|i| Formula::dia(a(i)))),
        Formula::disj(pairs(n).map(|(i, j)| Formula::dia(Formula::and(a(i), a(j))))),
    )
}

/// `◊^{≤m}p0 → ◊^{≤m+1}p0`, exactly as printed.
pub fn trs_m(m: usize) -> Formula {
    Formula::implies(dia_le(m, a(0)), dia_le(m + 1, a(0)))
}

/// `◊^{≤m+1}p0 → ◊^{≤m}p0`: everything reachable is reachable in `m` steps.
pub fn trs_m_bounded(m: usize) -> Formula {
    Formula::implies(dia_le(m + 1, a(0)), dia_le(m, a(0)))
}

/// `(□p0 → ◊p0) ∧ (□p0 → □□p0) ∧ (◊p0 → □◊p0)`.
pub fn d45() -> Formula {
    Formula::conj([
        Formula::implies(Formula::boxed(a(0)), Formula::dia(a(0))),
        Formula::implies(Formula::boxed(a(0)), box_iter(2, a(0))),
        five(),
    ])
}

/// `◊^{n+1}p0 → ◊^{≤n}p0`.
pub fn diamond_collapse(n: usize) -> Formula {
    Formula::implies(dia_iter(n + 1, a(0)), dia_le(n, a(0)))
}

/// `∃p0(p0 ∧ Qⁿ(p0))`.
pub fn world_prop_exists(n: usize) -> Formula {
    Formula::exists(p(0), Formula::and(a(0), q_n(n, a(0))))
}

/// `∃p0(□p0 ∧ ∀p1(□p1 → □□(p0 → p1)))`.
pub fn succ_set_definability() -> Formula {
    Formula::exists(
        p(0),
        Formula::and(
            Formula::boxed(a(0)),
            Formula::forall(
                p(1),
                Formula::implies(
                    Formula::boxed(a(1)),
                    box_iter(2, Formula::implies(a(0), a(1))),
                ),
            ),
        ),
    )
}

/// A generated axiom with its parameters and reading notes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaInstance {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub formula: Formula,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown axiom {0:?}")]
    Unknown(String),
    #[error("axiom {name} needs parameter {param}")]
    MissingParam { name: String, param: &'static str },
}

/// Names accepted by [`instance`].
pub const NAMES: &[&str] = &[
    "K", "Dual", "Bc", "Q", "At", "R", "5", "T", "Tdia", "M", "E", "Qvb", "Alt", "AltB", "Trs",
    "TrsB", "D45", "Collapse", "WorldProp", "SuccSet",
];

/// Looks up a generator by name. `n` feeds the numeric parameter; `phi`
/// feeds `Bc` and `Q` (default `p0`), and `Bc` binds `p0`.
pub fn instance(name: &str, n: Option<usize>, phi: Option<Formula>) -> Result<SchemaInstance, AxiomError> {
    let need = |param: &'static str| {
        n.ok_or_else(|| AxiomError::MissingParam {
            name: name.to_string(),
            param,
        })
    };
    let phi_or_p0 = phi.unwrap_or_else(|| a(0));
    let mut params = Vec::new();
    let mut notes = Vec::new();
    let formula = match name {
        "K" => k(),
        "Dual" => dual(),
        "Bc" => {
            params.push(("phi".into(), phi_or_p0.to_string()));
            bc(p(0), phi_or_p0)
        }
        "Q" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            params.push(("phi".into(), phi_or_p0.to_string()));
            q_n(n, phi_or_p0)
        }
        "At" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            notes.push("the inner Q^{<=n}(p1) is generated as Q^n(p1)".into());
            at_n(n)
        }
        "R" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            notes.push(
                "parenthesized as A p0. E p1. (B(p0 -> []p1) & A p2. (B(p0 -> []p2) -> B(p1 -> p2))) with B = box^{<=n}"
                    .into(),
            );
            r_n(n)
        }
        "5" => five(),
        "T" => t(),
        "Tdia" => {
            notes.push("diamond form of T; the box form is the axiom named T".into());
            t_dia()
        }
        "M" => m_ax(),
        "E" => e_ax(),
        "Qvb" => q_vb(),
        "Alt" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            notes.push("literal form; see AltB for the bounded-branching reading".into());
            alt_n(n as u32)
        }
        "AltB" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            alt_n_bounded(n as u32)
        }
        "Trs" => {
            let m = need("m")?;
            params.push(("m".into(), m.to_string()));
            notes.push("literal form, valid on every frame; see TrsB for the depth bound".into());
            trs_m(m)
        }
        "TrsB" => {
            let m = need("m")?;
            params.push(("m".into(), m.to_string()));
            trs_m_bounded(m)
        }
        "D45" => d45(),
        "Collapse" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            diamond_collapse(n)
        }
        "WorldProp" => {
            let n = need("n")?;
            params.push(("n".into(), n.to_string()));
            world_prop_exists(n)
        }
        "SuccSet" => succ_set_definability(),
        other => return Err(AxiomError::Unknown(other.to_string())),
    };
    Ok(SchemaInstance {
        name: name.to_string(),
        params,
        formula,
        notes,
    })
}

/// Polarity of the free occurrences of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Occurrence {
    pub positive: bool,
    pub negative: bool,
}

/// Free occurrences of `var` under an even (positive) or odd (negative)
/// number of negations.
pub fn positive_negative_occurrence(phi: &Formula, var: Var) -> Occurrence {
    fn go(f: &Formula, var: Var, neg: bool, out: &mut Occurrence) {
        match f {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(q) if *q == var => {
                if neg {
                    out.negative = true;
                } else {
                    out.positive = true;
                }
            }
            Formula::Atom(_) => {}
            Formula::Not(x) => go(x, var, !neg, out),
            Formula::Dia(x) => go(x, var, neg, out),
            Formula::Or(x, y) => {
                go(x, var, neg, out);
                go(y, var, neg, out);
            }
            Formula::Exists(q, x) => {
                if *q != var {
                    go(x, var, neg, out);
                }
            }
        }
    }
    let mut out = Occurrence::default();
    go(phi, var, false, &mut out);
    out
}

fn is_positive(f: &Formula) -> bool {
    f.free_vars()
        .into_iter()
        .all(|v| !positive_negative_occurrence(f, v).negative)
}

fn is_negative(f: &Formula) -> bool {
    f.free_vars()
        .into_iter()
        .all(|v| !positive_negative_occurrence(f, v).positive)
}

/// `□x` stored as `¬◊¬x`.
fn as_box(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(x) => match x.as_ref() {
            Formula::Dia(y) => match y.as_ref() {
                Formula::Not(z) => Some(z),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// `x ∧ y` stored as `¬(¬x ∨ ¬y)`.
fn as_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Not(x) => match x.as_ref() {
            Formula::Or(l, r) => match (l.as_ref(), r.as_ref()) {
                (Formula::Not(a), Formula::Not(b)) => Some((a, b)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn is_boxed_atom(mut f: &Formula) -> bool {
    loop {
        match f {
            Formula::Atom(_) => return true,
            _ => match as_box(f) {
                Some(inner) => f = inner,
                None => return false,
            },
        }
    }
}

fn flatten_or<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Or(l, r) => {
            flatten_or(l, out);
            flatten_or(r, out);
        }
        _ => out.push(f),
    }
}

/// Verdict of [`sahlqvist_check`] with the rules applied, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SahlqvistReport {
    pub is_sahlqvist: bool,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SahlqvistError {
    #[error("the classifier only accepts quantifier-free formulas")]
    Quantified,
}

/// Classifies a quantifier-free formula against the grammar:
///
/// * antecedents are built from `⊤`, `⊥`, boxed atoms `□ᵏp` and negative
///   formulas using `∧`, `∨` and `◊`;
/// * a Sahlqvist implication is `A → P` with `A` an antecedent and `P`
///   positive (a disjunction whose disjuncts are negated antecedents or
///   positive formulas has this form);
/// * Sahlqvist formulas are built from Sahlqvist implications with `□`,
///   `∧`, and `∨` between formulas sharing no variable.
///
/// Anything outside the grammar is rejected, even when it is equivalent to
/// a formula inside it.
pub fn sahlqvist_check(phi: &Formula) -> Result<SahlqvistReport, SahlqvistError> {
    if !phi.is_quantifier_free() {
        return Err(SahlqvistError::Quantified);
    }
    let mut trace = Vec::new();
    let ok = formula(phi, 0, &mut trace);
    if !ok {
        trace.push(format!("rejected: {phi}"));
    }
    Ok(SahlqvistReport {
        is_sahlqvist: ok,
        trace,
    })
}

fn log(trace: &mut Vec<String>, depth: usize, msg: String) {
    trace.push(format!("{}{}", "  ".repeat(depth), msg));
}

fn antecedent(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Bot => true,
        _ if is_boxed_atom(f) || is_negative(f) => true,
        Formula::Dia(x) => antecedent(x),
        Formula::Or(x, y) => antecedent(x) && antecedent(y),
        _ => matches!(as_and(f), Some((x, y)) if antecedent(x) && antecedent(y)),
    }
}

/// Disjuncts that are all negated antecedents or positive formulas form
/// the implication `⋀A_i → ⋁P_j`.
fn implication_group(ds: &[&Formula]) -> bool {
    ds.iter().all(|d| {
        is_positive(d) || matches!(d, Formula::Not(x) if antecedent(x))
    })
}

fn formula(f: &Formula, depth: usize, trace: &mut Vec<String>) -> bool {
    if is_positive(f) {
        log(trace, depth, format!("positive: {f}"));
        return true;
    }
    if let Formula::Not(x) = f {
        if antecedent(x) {
            log(trace, depth, format!("negated antecedent: {f}"));
            return true;
        }
    }
    let mark = trace.len();
    if let Some(x) = as_box(f) {
        log(trace, depth, format!("box of: {x}"));
        if formula(x, depth + 1, trace) {
            return true;
        }
        trace.truncate(mark);
    }
    if let Some((x, y)) = as_and(f) {
        log(trace, depth, format!("conjunction: {f}"));
        if formula(x, depth + 1, trace) && formula(y, depth + 1, trace) {
            return true;
        }
        trace.truncate(mark);
    }
    if let Formula::Or(..) = f {
        let mut ds = Vec::new();
        flatten_or(f, &mut ds);
        if implication_group(&ds) {
            log(trace, depth, format!("implication: {f}"));
            return true;
        }
        let groups = variable_groups(&ds);
        if groups.len() > 1 {
            log(trace, depth, format!("disjunction of {} variable-disjoint parts", groups.len()));
            let ok = groups.iter().all(|g| {
                if implication_group(g) {
                    log(trace, depth + 1, format!("implication: {}", Formula::disj(g.iter().map(|d| (*d).clone()))));
                    true
                } else {
                    g.len() == 1 && formula(g[0], depth + 1, trace)
                }
            });
            if ok {
                return true;
            }
            trace.truncate(mark);
        }
    }
    log(trace, depth, format!("no rule applies to {f}"));
    false
}

/// Connected components of disjuncts linked by shared variables.
fn variable_groups<'a>(ds: &[&'a Formula]) -> Vec<Vec<&'a Formula>> {
    let vars: Vec<_> = ds.iter().map(|d| d.free_vars()).collect();
    let mut group: Vec<usize> = (0..ds.len()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                if group[i] != group[j] && !vars[i].is_disjoint(&vars[j]) {
                    let (from, to) = (group[i].max(group[j]), group[i].min(group[j]));
                    group.iter_mut().filter(|g| **g == from).for_each(|g| *g = to);
                    changed = true;
                }
            }
        }
    }
    let mut out: Vec<Vec<&Formula>> = Vec::new();
    let mut ids: Vec<usize> = group.clone();
    ids.sort_unstable();
    ids.dedup();
    for id in ids {
        out.push(ds.iter().zip(&group).filter(|(_, g)| **g == id).map(|(d, _)| *d).collect());
    }
    out
}
