//! Printer emitting the concrete grammar with minimal parentheses.
//!
//! Derived connectives are recognised structurally and printed in their
//! abbreviated form, so the output parses back to the identical AST.

use super::{Formula, TangleSet};

// Binding strength, loosest to tightest.
const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;

enum View<'a> {
    Atom(&'a str),
    Top,
    Bot,
    Prefix(&'static str, &'a Formula),
    Binary(u8, &'a Formula, &'a Formula),
    Tangle(&'static str, &'a TangleSet),
    Mu(&'a str, &'a Formula),
    Nu(&'a str, Formula),
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Atom(a) => View::Atom(a),
        Formula::Top => View::Top,
        Formula::Not(x) => not_view(x),
        Formula::And(a, b) => match iff_parts(a, b) {
            Some((x, y)) => View::Binary(IFF, x, y),
            None => View::Binary(AND, a, b),
        },
        Formula::Nec(a) => View::Prefix("[]", a),
        Formula::NecD(a) => View::Prefix("[d]", a),
        Formula::Forall(a) => View::Prefix("A ", a),
        Formula::Tangle(d) => View::Tangle("<t>", d),
        Formula::TangleD(d) => View::Tangle("<dt>", d),
        Formula::Mu(q, body) => View::Mu(q, body),
    }
}

fn not_view(x: &Formula) -> View<'_> {
    match x {
        Formula::Top => return View::Bot,
        Formula::Nec(inner) => {
            if let Formula::Not(a) = inner.as_ref() {
                return View::Prefix("<>", a);
            }
        }
        Formula::NecD(inner) => {
            if let Formula::Not(a) = inner.as_ref() {
                return View::Prefix("<d>", a);
            }
        }
        Formula::Forall(inner) => {
            if let Formula::Not(a) = inner.as_ref() {
                return View::Prefix("E ", a);
            }
        }
        Formula::Mu(q, inner) => {
            if let Formula::Not(b) = inner.as_ref() {
                if let Some(body) = unflip(b, q) {
                    return View::Nu(q, body);
                }
            }
        }
        Formula::And(a, b) => {
            if let (Formula::Not(a), Formula::Not(b)) = (a.as_ref(), b.as_ref()) {
                // `¬A → B` and `A ∨ B` share a shape; prefer the arrow
                // unless its antecedent would print as a plain negation.
                let arrow_left = !matches!(not_view(a), View::Prefix("~", _));
                if !arrow_left {
                    return View::Binary(OR, a, b);
                }
            }
            if let Formula::Not(b) = b.as_ref() {
                return View::Binary(IMP, a, b);
            }
        }
        _ => {}
    }
    View::Prefix("~", x)
}

/// Matches `¬(x ∧ ¬y) ∧ ¬(y ∧ ¬x)`.
fn iff_parts<'a>(a: &'a Formula, b: &'a Formula) -> Option<(&'a Formula, &'a Formula)> {
    let (x, y) = imp_parts(a)?;
    let (y2, x2) = imp_parts(b)?;
    (x == x2 && y == y2).then_some((x, y))
}

fn imp_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Not(inner) = f {
        if let Formula::And(x, ny) = inner.as_ref() {
            if let Formula::Not(y) = ny.as_ref() {
                return Some((x, y));
            }
        }
    }
    None
}

/// Undo `body(¬q/q)`: succeeds when every free `q` sits directly under `¬`.
fn unflip(f: &Formula, q: &str) -> Option<Formula> {
    Some(match f {
        Formula::Atom(a) if a == q => return None,
        Formula::Atom(_) | Formula::Top => f.clone(),
        Formula::Not(x) => match x.as_ref() {
            Formula::Atom(a) if a == q => x.as_ref().clone(),
            _ => Formula::not(unflip(x, q)?),
        },
        Formula::And(a, b) => Formula::and(unflip(a, q)?, unflip(b, q)?),
        Formula::Nec(a) => Formula::nec(unflip(a, q)?),
        Formula::NecD(a) => Formula::nec_d(unflip(a, q)?),
        Formula::Forall(a) => Formula::forall(unflip(a, q)?),
        Formula::Tangle(d) => Formula::Tangle(unflip_set(d, q)?),
        Formula::TangleD(d) => Formula::TangleD(unflip_set(d, q)?),
        Formula::Mu(p, _) if p == q => f.clone(),
        Formula::Mu(p, body) => Formula::Mu(p.clone(), Box::new(unflip(body, q)?)),
    })
}

fn unflip_set(d: &TangleSet, q: &str) -> Option<TangleSet> {
    let members = d.iter().map(|m| unflip(m, q)).collect::<Option<Vec<_>>>()?;
    TangleSet::new(members).ok()
}

pub(super) fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IFF, true, &mut out);
    out
}

/// `min` is the loosest level allowed without parentheses; `last` is true
/// when nothing follows at this nesting level, so a binder may run to the end.
fn write(f: &Formula, min: u8, last: bool, out: &mut String) {
    let v = view(f);
    let (level, is_binder) = match &v {
        View::Binary(level, ..) => (*level, false),
        View::Mu(..) | View::Nu(..) => (IFF, true),
        _ => (PREFIX, false),
    };
    let parens = if is_binder { !last } else { level < min };
    if parens {
        out.push('(');
    }
    let last = last || parens;
    match v {
        View::Atom(a) => out.push_str(a),
        View::Top => out.push_str("true"),
        View::Bot => out.push_str("false"),
        View::Prefix(op, a) => {
            out.push_str(op);
            write(a, PREFIX, last, out);
        }
        View::Binary(level, a, b) => {
            let (lmin, rmin, op) = match level {
                IFF => (IFF, IMP, " <-> "),
                IMP => (OR, IMP, " -> "),
                OR => (OR, AND, " | "),
                _ => (AND, PREFIX, " & "),
            };
            write(a, lmin, false, out);
            out.push_str(op);
            write(b, rmin, last, out);
        }
        View::Tangle(op, d) => {
            out.push_str(op);
            out.push('{');
            for (i, m) in d.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(m, IFF, true, out);
            }
            out.push('}');
        }
        View::Mu(q, body) => {
            out.push_str("mu ");
            out.push_str(q);
            out.push_str(". ");
            write(body, IFF, true, out);
        }
        View::Nu(q, body) => {
            out.push_str("nu ");
            out.push_str(q);
            out.push_str(". ");
            write(&body, IFF, true, out);
        }
    }
    if parens {
        out.push(')');
    }
}
