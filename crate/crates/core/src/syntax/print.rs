use std::fmt;

use super::{Formula, Var};

/// Surface view of a formula with the common abbreviations recovered.
enum View<'a> {
    Top,
    Bot,
    Atom(Var),
    Not(&'a Formula),
    Dia(&'a Formula),
    Box(&'a Formula),
    Or(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
    Exists(Var, &'a Formula),
    Forall(Var, &'a Formula),
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Top => View::Top,
        Formula::Bot => View::Bot,
        Formula::Atom(v) => View::Atom(*v),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Or(l, r) => match (l.as_ref(), r.as_ref()) {
                (Formula::Not(a), Formula::Not(b)) => View::And(a, b),
                _ => View::Not(inner),
            },
            Formula::Dia(d) => match d.as_ref() {
                Formula::Not(a) => View::Box(a),
                _ => View::Not(inner),
            },
            Formula::Exists(v, body) => match body.as_ref() {
                Formula::Not(a) => View::Forall(*v, a),
                _ => View::Not(inner),
            },
            _ => View::Not(inner),
        },
        Formula::Or(l, r) => match l.as_ref() {
            Formula::Not(a) => View::Imp(a, r),
            _ => View::Or(l, r),
        },
        Formula::Dia(a) => View::Dia(a),
        Formula::Exists(v, a) => View::Exists(*v, a),
    }
}

// Binding strength: quantifiers 0 (body runs to the right), `->` 1, `|` 2,
// `&` 3, prefix operators and atoms 4.
fn prec(v: &View<'_>) -> u8 {
    match v {
        View::Exists(..) | View::Forall(..) => 0,
        View::Imp(..) => 1,
        View::Or(..) => 2,
        View::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let v = view(f);
    let paren = prec(&v) < min;
    if paren {
        out.write_str("(")?;
    }
    match v {
        View::Top => out.write_str("true")?,
        View::Bot => out.write_str("false")?,
        View::Atom(x) => write!(out, "{x}")?,
        View::Not(a) => {
            out.write_str("~")?;
            write_at(a, 4, out)?;
        }
        View::Dia(a) => {
            out.write_str("<>")?;
            write_at(a, 4, out)?;
        }
        View::Box(a) => {
            out.write_str("[]")?;
            write_at(a, 4, out)?;
        }
        View::And(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" & ")?;
            write_at(b, 4, out)?;
        }
        View::Or(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" | ")?;
            write_at(b, 3, out)?;
        }
        View::Imp(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" -> ")?;
            write_at(b, 1, out)?;
        }
        View::Exists(x, a) => {
            write!(out, "E {x}. ")?;
            write_at(a, 0, out)?;
        }
        View::Forall(x, a) => {
            write!(out, "A {x}. ")?;
            write_at(a, 0, out)?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}
