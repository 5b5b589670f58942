//! Translations between fragments of the language.
//!
//! * [`to_mu`] removes tangles in favour of greatest fixpoints.
//! * [`to_d`] removes `□` and `⟨t⟩` in favour of `[d]` and `⟨dt⟩`.
//! * [`star`] maps `□` to the fixpoint that reads it as `□` over `R*`.
//!
//! Each translation draws fresh atoms `_g0, _g1, ..` that do not occur in
//! its input, one per rewritten node, in pre-order.

use thiserror::Error;

use crate::formula::{Formula, FreshNames, TangleSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("the star translation is defined on the box/mu fragment only, found {0}")]
    OutsideFragment(String),
}

/// Tangle-free, `⟨dt⟩`-free equivalent:
/// `⟨t⟩Δ ↦ νq.⋀◇(δ ∧ q)`, `⟨dt⟩Δ ↦ νq.⋀⟨d⟩(δ ∧ q)`.
pub fn to_mu(f: &Formula) -> Formula {
    let mut names = FreshNames::avoiding(f);
    mu_rec(f, &mut names)
}

fn mu_rec(f: &Formula, names: &mut FreshNames) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top => f.clone(),
        Formula::Not(a) => Formula::not(mu_rec(a, names)),
        Formula::And(a, b) => {
            let a = mu_rec(a, names);
            Formula::and(a, mu_rec(b, names))
        }
        Formula::Nec(a) => Formula::nec(mu_rec(a, names)),
        Formula::NecD(a) => Formula::nec_d(mu_rec(a, names)),
        Formula::Forall(a) => Formula::forall(mu_rec(a, names)),
        Formula::Mu(q, a) => Formula::Mu(q.clone(), Box::new(mu_rec(a, names))),
        Formula::Tangle(d) | Formula::TangleD(d) => {
            let q = names.fresh();
            let dia = if matches!(f, Formula::Tangle(_)) {
                Formula::dia
            } else {
                Formula::dia_d
            };
            let body = Formula::conj(
                d.iter()
                    .map(|m| dia(Formula::and(mu_rec(m, names), Formula::atom(q.as_str())))),
            );
            Formula::nu(q, body).expect("q occurs only positively")
        }
    }
}

/// `□`-free, `⟨t⟩`-free equivalent on reflexive frames and `T_D` spaces:
/// `□φ ↦ φ ∧ [d]φ`, `⟨t⟩Δ ↦ ⋀Δ ∨ ⟨d⟩⋀Δ ∨ ⟨dt⟩Δ`.
pub fn to_d(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top => f.clone(),
        Formula::Not(a) => Formula::not(to_d(a)),
        Formula::And(a, b) => Formula::and(to_d(a), to_d(b)),
        Formula::Nec(a) => {
            let a = to_d(a);
            Formula::and(a.clone(), Formula::nec_d(a))
        }
        Formula::NecD(a) => Formula::nec_d(to_d(a)),
        Formula::Forall(a) => Formula::forall(to_d(a)),
        Formula::Mu(q, a) => Formula::Mu(q.clone(), Box::new(to_d(a))),
        Formula::TangleD(d) => Formula::TangleD(map_set(d, to_d)),
        Formula::Tangle(d) => {
            let members = map_set(d, to_d);
            let all = Formula::conj(members.iter().cloned());
            Formula::or(
                Formula::or(all.clone(), Formula::dia_d(all)),
                Formula::TangleD(members),
            )
        }
    }
}

/// `□φ ↦ νq.(φ* ∧ □q)`; defined on formulas built from atoms, booleans,
/// `□` and `μ`.
pub fn star(f: &Formula) -> Result<Formula, TranslateError> {
    let mut names = FreshNames::avoiding(f);
    star_rec(f, &mut names)
}

fn star_rec(f: &Formula, names: &mut FreshNames) -> Result<Formula, TranslateError> {
    Ok(match f {
        Formula::Atom(_) | Formula::Top => f.clone(),
        Formula::Not(a) => Formula::not(star_rec(a, names)?),
        Formula::And(a, b) => {
            let a = star_rec(a, names)?;
            Formula::and(a, star_rec(b, names)?)
        }
        Formula::Mu(q, a) => Formula::Mu(q.clone(), Box::new(star_rec(a, names)?)),
        Formula::Nec(a) => {
            let q = names.fresh();
            let body = Formula::and(star_rec(a, names)?, Formula::nec(Formula::atom(q.as_str())));
            Formula::nu(q, body).expect("q occurs only positively")
        }
        other => return Err(TranslateError::OutsideFragment(other.to_string())),
    })
}

fn map_set(d: &TangleSet, f: impl Fn(&Formula) -> Formula) -> TangleSet {
    TangleSet::new(d.iter().map(f)).expect("non-empty stays non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn pr(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn to_mu_examples() {
        assert_eq!(to_mu(&pr("<t>{p}")), pr("nu _g0. <>(p & _g0)"));
        assert_eq!(to_mu(&pr("p & []r")), pr("p & []r"));
        assert_eq!(
            to_mu(&pr("<dt>{p, r}")),
            pr("nu _g0. <d>(p & _g0) & <d>(r & _g0)")
        );
        // fresh names skip what is taken
        assert_eq!(to_mu(&pr("_g0 & <t>{p}")), pr("_g0 & nu _g1. <>(p & _g1)"));
    }

    #[test]
    fn to_d_examples() {
        assert_eq!(to_d(&pr("[]p")), pr("p & [d]p"));
        assert_eq!(to_d(&pr("p")), pr("p"));
        assert_eq!(to_d(&pr("<t>{p}")), pr("p | <d>p | <dt>{p}"));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&pr("p")).unwrap(), pr("p"));
        assert_eq!(star(&pr("[]p")).unwrap(), pr("nu _g0. p & []_g0"));
        assert_eq!(
            star(&pr("mu s. <>s")).unwrap(),
            pr("mu s. ~nu _g0. ~s & []_g0")
        );
        assert!(star(&pr("<t>{p}")).is_err());
        assert!(star(&pr("A p")).is_err());
    }
}
