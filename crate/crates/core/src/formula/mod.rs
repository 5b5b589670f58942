//! Formulas of the full language with box, derivative box, universal
//! modality, the two tangle connectives and the least-fixpoint binder.
//!
//! Only the primitive constructors are AST nodes. Derived connectives
//! (`⊥ ∨ → ↔ ◇ ⟨d⟩ ∃ ν □* ◇*`) are helper constructors that build their
//! standard expansion, e.g. `◇φ` is `¬□¬φ` and `νq.φ` is `¬μq.¬φ(¬q/q)`.
//! The printer folds the expansions back, so the concrete syntax stays
//! readable and `parse(print(φ)) == φ`.

mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{var} is not positive in {body}")]
    NotPositive { var: String, body: String },
    #[error("empty tangle set")]
    EmptyTangle,
    #[error("substituting for {var} would capture {captured} under the binder mu {captured}")]
    Capture { var: String, captured: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `□φ`
    Nec(Box<Formula>),
    /// `[d]φ`
    NecD(Box<Formula>),
    /// `∀φ`
    Forall(Box<Formula>),
    /// `⟨t⟩Δ`
    Tangle(TangleSet),
    /// `⟨dt⟩Δ`
    TangleD(TangleSet),
    /// `μq.φ`, with `φ` positive in `q`.
    Mu(String, Box<Formula>),
}

/// The argument set of a tangle connective: non-empty, duplicate-free, and
/// sorted by printed form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangleSet(Vec<Formula>);

impl TangleSet {
    pub fn new(members: impl IntoIterator<Item = Formula>) -> Result<Self, FormulaError> {
        let mut keyed: Vec<(String, Formula)> =
            members.into_iter().map(|f| (f.to_string(), f)).collect();
        if keyed.is_empty() {
            return Err(FormulaError::EmptyTangle);
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        Ok(TangleSet(keyed.into_iter().map(|(_, f)| f).collect()))
    }

    pub fn members(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    fn try_map(
        &self,
        mut f: impl FnMut(&Formula) -> Result<Formula, FormulaError>,
    ) -> Result<TangleSet, FormulaError> {
        TangleSet::new(self.0.iter().map(&mut f).collect::<Result<Vec<_>, _>>()?)
    }
}

impl<'a> IntoIterator for &'a TangleSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

// Constructors. The derived ones expand per the standard abbreviations.
impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn top() -> Formula {
        Formula::Top
    }

    pub fn bot() -> Formula {
        Formula::not(Formula::Top)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// `¬(¬a ∧ ¬b)`
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `¬(a ∧ ¬b)`
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    /// `(a → b) ∧ (b → a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn nec(a: Formula) -> Formula {
        Formula::Nec(Box::new(a))
    }

    pub fn nec_d(a: Formula) -> Formula {
        Formula::NecD(Box::new(a))
    }

    pub fn forall(a: Formula) -> Formula {
        Formula::Forall(Box::new(a))
    }

    /// `¬□¬a`
    pub fn dia(a: Formula) -> Formula {
        Formula::not(Formula::nec(Formula::not(a)))
    }

    /// `¬[d]¬a`
    pub fn dia_d(a: Formula) -> Formula {
        Formula::not(Formula::nec_d(Formula::not(a)))
    }

    /// `¬∀¬a`
    pub fn exists(a: Formula) -> Formula {
        Formula::not(Formula::forall(Formula::not(a)))
    }

    /// `a ∧ □a`
    pub fn nec_star(a: Formula) -> Formula {
        Formula::and(a.clone(), Formula::nec(a))
    }

    /// `a ∨ ◇a`
    pub fn dia_star(a: Formula) -> Formula {
        Formula::or(a.clone(), Formula::dia(a))
    }

    pub fn tangle(members: impl IntoIterator<Item = Formula>) -> Result<Formula, FormulaError> {
        Ok(Formula::Tangle(TangleSet::new(members)?))
    }

    pub fn tangle_d(members: impl IntoIterator<Item = Formula>) -> Result<Formula, FormulaError> {
        Ok(Formula::TangleD(TangleSet::new(members)?))
    }

    pub fn mu(var: impl Into<String>, body: Formula) -> Result<Formula, FormulaError> {
        let var = var.into();
        if !body.positive_in(&var) {
            return Err(FormulaError::NotPositive {
                body: body.to_string(),
                var,
            });
        }
        Ok(Formula::Mu(var, Box::new(body)))
    }

    /// `νq.φ = ¬μq.¬φ(¬q/q)`
    pub fn nu(var: impl Into<String>, body: Formula) -> Result<Formula, FormulaError> {
        let var = var.into();
        if !body.positive_in(&var) {
            return Err(FormulaError::NotPositive {
                body: body.to_string(),
                var,
            });
        }
        let flipped = body.replace_free(&var, &Formula::not(Formula::atom(var.as_str())));
        Ok(Formula::not(Formula::Mu(
            var,
            Box::new(Formula::not(flipped)),
        )))
    }

    /// `⋀`, left-nested; `⊤` for no conjuncts.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// `⋁`, left-nested; `⊥` for no disjuncts.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bot)
    }
}

impl Formula {
    /// Every free occurrence of `var` lies under an even number of negations.
    pub fn positive_in(&self, var: &str) -> bool {
        fn walk(f: &Formula, var: &str, negated: bool) -> bool {
            match f {
                Formula::Atom(a) => a != var || !negated,
                Formula::Top => true,
                Formula::Not(a) => walk(a, var, !negated),
                Formula::And(a, b) => walk(a, var, negated) && walk(b, var, negated),
                Formula::Nec(a) | Formula::NecD(a) | Formula::Forall(a) => walk(a, var, negated),
                Formula::Tangle(d) | Formula::TangleD(d) => d.iter().all(|m| walk(m, var, negated)),
                Formula::Mu(q, body) => q == var || walk(body, var, negated),
            }
        }
        walk(self, var, false)
    }

    /// Atoms with at least one free occurrence.
    pub fn free_atoms(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(a) => {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
                Formula::Top => {}
                Formula::Not(a) | Formula::Nec(a) | Formula::NecD(a) | Formula::Forall(a) => {
                    walk(a, bound, out)
                }
                Formula::And(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Tangle(d) | Formula::TangleD(d) => {
                    for m in d {
                        walk(m, bound, out);
                    }
                }
                Formula::Mu(q, body) => {
                    bound.push(q.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every identifier occurring in the formula, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) | Formula::Mu(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    pub fn occurs_free(&self, var: &str) -> bool {
        self.free_atoms().contains(var)
    }

    /// Pre-order traversal over every node.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    /// Immediate subformulas, in AST order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top => vec![],
            Formula::Not(a) | Formula::Nec(a) | Formula::NecD(a) | Formula::Forall(a) => {
                vec![a]
            }
            Formula::And(a, b) => vec![a, b],
            Formula::Tangle(d) | Formula::TangleD(d) => d.iter().collect(),
            Formula::Mu(_, body) => vec![body],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    /// Nesting depth of modal operators (`□ [d] ∀ ⟨t⟩ ⟨dt⟩`).
    pub fn modal_depth(&self) -> usize {
        let inner = self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Nec(_)
            | Formula::NecD(_)
            | Formula::Forall(_)
            | Formula::Tangle(_)
            | Formula::TangleD(_) => inner + 1,
            _ => inner,
        }
    }

    /// Nesting depth of tangle connectives.
    pub fn tangle_depth(&self) -> usize {
        let inner = self
            .children()
            .into_iter()
            .map(Formula::tangle_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Tangle(_) | Formula::TangleD(_) => inner + 1,
            _ => inner,
        }
    }

    pub fn has_tangle(&self) -> bool {
        self.tangle_depth() > 0
    }

    /// True when some node satisfies `pred`.
    pub fn any_node(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    /// Every `μ` node has a body positive in its variable.
    pub fn is_well_formed(&self) -> bool {
        !self.any_node(&|f| matches!(f, Formula::Mu(q, body) if !body.positive_in(q)))
    }

    /// `self(replacement/var)`: replace every free occurrence of `var`.
    ///
    /// Fails if a free atom of `replacement` would be captured by a binder of
    /// `self`, or if the result is not well formed.
    pub fn substitute(&self, replacement: &Formula, var: &str) -> Result<Formula, FormulaError> {
        let free = replacement.free_atoms();
        let out = self.substitute_checked(replacement, var, &free)?;
        if let Some(Formula::Mu(q, body)) = out.find_ill_formed() {
            return Err(FormulaError::NotPositive {
                var: q.clone(),
                body: body.to_string(),
            });
        }
        Ok(out)
    }

    fn find_ill_formed(&self) -> Option<&Formula> {
        if let Formula::Mu(q, body) = self {
            if !body.positive_in(q) {
                return Some(self);
            }
        }
        self.children()
            .into_iter()
            .find_map(Formula::find_ill_formed)
    }

    fn substitute_checked(
        &self,
        replacement: &Formula,
        var: &str,
        free: &BTreeSet<String>,
    ) -> Result<Formula, FormulaError> {
        let rec = |f: &Formula| f.substitute_checked(replacement, var, free);
        Ok(match self {
            Formula::Atom(a) if a == var => replacement.clone(),
            Formula::Atom(_) | Formula::Top => self.clone(),
            Formula::Not(a) => Formula::not(rec(a)?),
            Formula::And(a, b) => Formula::and(rec(a)?, rec(b)?),
            Formula::Nec(a) => Formula::nec(rec(a)?),
            Formula::NecD(a) => Formula::nec_d(rec(a)?),
            Formula::Forall(a) => Formula::forall(rec(a)?),
            Formula::Tangle(d) => Formula::Tangle(d.try_map(rec)?),
            Formula::TangleD(d) => Formula::TangleD(d.try_map(rec)?),
            Formula::Mu(q, _) if q == var => self.clone(),
            Formula::Mu(q, body) => {
                if free.contains(q) && body.occurs_free(var) {
                    return Err(FormulaError::Capture {
                        var: var.to_string(),
                        captured: q.clone(),
                    });
                }
                Formula::Mu(q.clone(), Box::new(rec(body)?))
            }
        })
    }

    /// Capture-unchecked replacement of free `var`; callers guarantee no capture.
    pub(crate) fn replace_free(&self, var: &str, replacement: &Formula) -> Formula {
        match self {
            Formula::Atom(a) if a == var => replacement.clone(),
            Formula::Atom(_) | Formula::Top => self.clone(),
            Formula::Not(a) => Formula::not(a.replace_free(var, replacement)),
            Formula::And(a, b) => Formula::and(
                a.replace_free(var, replacement),
                b.replace_free(var, replacement),
            ),
            Formula::Nec(a) => Formula::nec(a.replace_free(var, replacement)),
            Formula::NecD(a) => Formula::nec_d(a.replace_free(var, replacement)),
            Formula::Forall(a) => Formula::forall(a.replace_free(var, replacement)),
            Formula::Tangle(d) => Formula::Tangle(
                d.try_map(|m| Ok(m.replace_free(var, replacement)))
                    .expect("non-empty stays non-empty"),
            ),
            Formula::TangleD(d) => Formula::TangleD(
                d.try_map(|m| Ok(m.replace_free(var, replacement)))
                    .expect("non-empty stays non-empty"),
            ),
            Formula::Mu(q, _) if q == var => self.clone(),
            Formula::Mu(q, body) => {
                Formula::Mu(q.clone(), Box::new(body.replace_free(var, replacement)))
            }
        }
    }
}

/// A finite set of formulas closed under immediate subformulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    formulas: BTreeSet<Formula>,
}

impl ClosureSet {
    /// The least superset of `roots` closed under immediate subformulas.
    pub fn of(roots: impl IntoIterator<Item = Formula>) -> ClosureSet {
        let mut formulas = BTreeSet::new();
        let mut stack: Vec<Formula> = roots.into_iter().collect();
        while let Some(f) = stack.pop() {
            if formulas.contains(&f) {
                continue;
            }
            stack.extend(f.children().into_iter().cloned());
            formulas.insert(f);
        }
        ClosureSet { formulas }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    pub fn formulas(&self) -> &BTreeSet<Formula> {
        &self.formulas
    }

    /// `Φ^t`: the members of the form `⟨t⟩Γ` or `⟨dt⟩Γ`.
    pub fn tangle_members(&self) -> impl Iterator<Item = &Formula> {
        self.iter()
            .filter(|f| matches!(f, Formula::Tangle(_) | Formula::TangleD(_)))
    }

    /// `Φ^◇`: the members of the form `◇φ` (or `⟨d⟩φ`).
    pub fn diamond_members(&self) -> impl Iterator<Item = &Formula> {
        self.iter().filter(|f| f.as_diamond().is_some())
    }

    /// Atoms occurring as members.
    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.iter().filter_map(|f| match f {
            Formula::Atom(a) => Some(a.as_str()),
            _ => None,
        })
    }

    pub fn with(&self, extra: impl IntoIterator<Item = Formula>) -> ClosureSet {
        ClosureSet::of(self.formulas.iter().cloned().chain(extra))
    }
}

impl Formula {
    /// The argument of `◇φ` or `⟨d⟩φ`.
    pub fn as_diamond(&self) -> Option<&Formula> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Nec(b) | Formula::NecD(b) => match b.as_ref() {
                    Formula::Not(arg) => Some(arg),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }
}

/// Generates `_g0, _g1, ..` skipping names already taken.
#[derive(Debug, Clone)]
pub struct FreshNames {
    taken: BTreeSet<String>,
    next: usize,
}

impl FreshNames {
    pub fn avoiding(f: &Formula) -> FreshNames {
        FreshNames {
            taken: f.all_names(),
            next: 0,
        }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("_g{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn positivity_counts_negations() {
        assert!(q().positive_in("q"));
        assert!(!Formula::not(q()).positive_in("q"));
        // nu q. <>(p & q) expands to ~mu q. ~<>(p & ~q): p sits under
        // 1 (outer) + 1 (inside mu) + 2 (the diamond) = 4 negations.
        let nu = Formula::nu("q", Formula::dia(Formula::and(p(), q()))).unwrap();
        assert_eq!(
            nu,
            Formula::not(Formula::Mu(
                "q".into(),
                Box::new(Formula::not(Formula::dia(Formula::and(
                    p(),
                    Formula::not(q())
                ))))
            ))
        );
        assert!(nu.positive_in("p"));
        // q is bound, so trivially positive.
        assert!(nu.positive_in("q"));
    }

    #[test]
    fn implication_flips_antecedent() {
        assert!(!Formula::implies(q(), p()).positive_in("q"));
        assert!(Formula::implies(p(), q()).positive_in("q"));
    }

    #[test]
    fn mu_rejects_negative_body() {
        assert!(matches!(
            Formula::mu("p", Formula::not(p())),
            Err(FormulaError::NotPositive { .. })
        ));
    }

    #[test]
    fn substitute_examples() {
        // (mu p. q)(~p / q) would be mu p. ~p.
        let f = Formula::mu("p", q()).unwrap();
        assert!(f.substitute(&Formula::not(p()), "q").is_err());

        let r = Formula::atom("r");
        assert_eq!(
            Formula::dia(q()).substitute(&Formula::and(p(), r.clone()), "q"),
            Ok(Formula::dia(Formula::and(p(), r)))
        );

        let f = Formula::mu("p", Formula::and(q(), Formula::dia(p()))).unwrap();
        assert_eq!(
            f.substitute(&p(), "q"),
            Err(FormulaError::Capture {
                var: "q".into(),
                captured: "p".into()
            })
        );
    }

    #[test]
    fn substitute_stops_at_rebinding() {
        let f = Formula::and(q(), Formula::mu("q", Formula::dia(q())).unwrap());
        let g = f.substitute(&p(), "q").unwrap();
        assert_eq!(
            g,
            Formula::and(p(), Formula::mu("q", Formula::dia(q())).unwrap())
        );
    }

    #[test]
    fn closure_examples() {
        let c = ClosureSet::of([Formula::dia(p())]);
        let expected: BTreeSet<_> = [
            Formula::dia(p()),
            Formula::nec(Formula::not(p())),
            Formula::not(p()),
            p(),
        ]
        .into_iter()
        .collect();
        assert_eq!(c.formulas(), &expected);
        assert_eq!(c.diamond_members().count(), 1);

        let t = Formula::tangle([p(), q()]).unwrap();
        let c = ClosureSet::of([t.clone()]);
        assert_eq!(c.formulas(), &[t, p(), q()].into_iter().collect());
        assert_eq!(c.tangle_members().count(), 1);

        let b = Formula::nec(Formula::and(p(), q()));
        let c = ClosureSet::of([b.clone()]);
        assert_eq!(
            c.formulas(),
            &[b, Formula::and(p(), q()), p(), q()].into_iter().collect()
        );
    }

    #[test]
    fn tangle_sets_are_canonical() {
        let a = Formula::tangle([q(), p(), q()]).unwrap();
        let b = Formula::tangle([p(), q()]).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            Formula::tangle(Vec::new()),
            Err(FormulaError::EmptyTangle)
        ));
    }

    #[test]
    fn fresh_names_skip_taken() {
        let f = Formula::and(Formula::atom("_g0"), Formula::atom("_g2"));
        let mut names = FreshNames::avoiding(&f);
        assert_eq!(names.fresh(), "_g1");
        assert_eq!(names.fresh(), "_g3");
    }
}
