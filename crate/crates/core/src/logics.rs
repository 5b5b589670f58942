//! Axiom schemata, logic profiles, frame validity and bounded satisfiability.
//!
//! Profiles bundle frame conditions and a language fragment. Nothing here
//! decides theoremhood: validity is checked frame by frame and
//! satisfiability by exhaustive search up to a size bound.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{Frame, KripkeError, KripkeModel};
use crate::set::WorldSet;

/// Default work budget for [`frame_validates`] and [`bounded_sat`].
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum LogicsError {
    #[error("unknown schema {0:?}")]
    UnknownSchema(String),
    #[error("unknown logic profile {0:?}")]
    UnknownProfile(String),
    #[error("schema {schema} takes {expected} argument(s), got {got}")]
    Arity {
        schema: Schema,
        expected: String,
        got: usize,
    },
    #[error("{formula} is outside the language of {profile}: {reason}")]
    OutsideFragment {
        formula: String,
        profile: String,
        reason: String,
    },
    #[error("search needs more than the budget of {budget} steps")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Schema {
    K,
    Four,
    T,
    D,
    Fix,
    Ind,
    FourT,
    TT,
    U,
    C,
    G(usize),
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schema::K => f.write_str("K"),
            Schema::Four => f.write_str("4"),
            Schema::T => f.write_str("T"),
            Schema::D => f.write_str("D"),
            Schema::Fix => f.write_str("Fix"),
            Schema::Ind => f.write_str("Ind"),
            Schema::FourT => f.write_str("4t"),
            Schema::TT => f.write_str("Tt"),
            Schema::U => f.write_str("U"),
            Schema::C => f.write_str("C"),
            Schema::G(n) => write!(f, "G{n}"),
        }
    }
}

impl FromStr for Schema {
    type Err = LogicsError;

    fn from_str(s: &str) -> Result<Schema, LogicsError> {
        Ok(match s {
            "K" => Schema::K,
            "4" => Schema::Four,
            "T" => Schema::T,
            "D" => Schema::D,
            "Fix" => Schema::Fix,
            "Ind" => Schema::Ind,
            "4t" | "4_t" => Schema::FourT,
            "Tt" | "T_t" => Schema::TT,
            "U" => Schema::U,
            "C" => Schema::C,
            _ => match s.strip_prefix('G').and_then(|n| n.parse().ok()) {
                Some(n) if n >= 1 => Schema::G(n),
                _ => return Err(LogicsError::UnknownSchema(s.to_string())),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaInstance {
    pub schema: Schema,
    pub args: Vec<Formula>,
    pub formula: Formula,
}

/// `Q_i = p_i ∧ ⋀_{j≠i} ¬p_j` over the given `p_0..p_n`.
pub fn q_formula(ps: &[Formula], i: usize) -> Formula {
    Formula::conj(
        std::iter::once(ps[i].clone()).chain(
            ps.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| Formula::not(p.clone())),
        ),
    )
}

fn tangle_of(members: &[Formula]) -> Formula {
    Formula::tangle(members.iter().cloned()).expect("arity checked")
}

impl Schema {
    /// Argument count description, for error messages.
    fn arity(&self) -> (usize, Option<usize>, &'static str) {
        match self {
            Schema::K => (2, Some(2), "2"),
            Schema::Four | Schema::T | Schema::U | Schema::C => (1, Some(1), "1"),
            Schema::D => (0, Some(0), "0"),
            Schema::Fix | Schema::FourT | Schema::TT => (1, None, "at least 1 (the set Γ)"),
            Schema::Ind => (2, None, "at least 2 (φ, then the set Γ)"),
            Schema::G(_) => (0, None, ""),
        }
    }

    /// Instance with the given substitution.
    ///
    /// * `K`: `φ, ψ`; `4`, `T`, `U`, `C`: `φ`; `D`: nothing.
    /// * `Fix`, `4t`, `Tt`: the members of `Γ`.
    /// * `Ind`: `φ` followed by the members of `Γ`.
    /// * `Gn`: `p_0, .., p_n`.
    pub fn instantiate(&self, args: &[Formula]) -> Result<SchemaInstance, LogicsError> {
        let (lo, hi, desc) = self.arity();
        let ok = match self {
            Schema::G(n) => args.len() == n + 1,
            _ => args.len() >= lo && hi.is_none_or(|h| args.len() <= h),
        };
        if !ok {
            let expected = match self {
                Schema::G(n) => format!("{}", n + 1),
                _ => desc.to_string(),
            };
            return Err(LogicsError::Arity {
                schema: *self,
                expected,
                got: args.len(),
            });
        }
        use Formula as F;
        let formula = match self {
            Schema::K => {
                let (p, q) = (&args[0], &args[1]);
                F::implies(
                    F::nec(F::implies(p.clone(), q.clone())),
                    F::implies(F::nec(p.clone()), F::nec(q.clone())),
                )
            }
            Schema::Four => F::implies(F::dia(F::dia(args[0].clone())), F::dia(args[0].clone())),
            Schema::T => F::implies(args[0].clone(), F::dia(args[0].clone())),
            Schema::D => F::dia(F::top()),
            Schema::Fix => {
                let t = tangle_of(args);
                F::implies(
                    t.clone(),
                    F::conj(args.iter().map(|g| F::dia(F::and(g.clone(), t.clone())))),
                )
            }
            Schema::Ind => {
                let phi = &args[0];
                let gamma = &args[1..];
                let step = F::conj(gamma.iter().map(|g| F::dia(F::and(g.clone(), phi.clone()))));
                F::implies(
                    F::nec_star(F::implies(phi.clone(), step)),
                    F::implies(phi.clone(), tangle_of(gamma)),
                )
            }
            Schema::FourT => {
                let t = tangle_of(args);
                F::implies(F::dia(t.clone()), t)
            }
            Schema::TT => F::implies(F::conj(args.iter().cloned()), tangle_of(args)),
            Schema::U => F::implies(F::forall(args[0].clone()), F::nec(args[0].clone())),
            Schema::C => {
                let p = &args[0];
                F::implies(
                    F::forall(F::or(
                        F::nec_star(p.clone()),
                        F::nec_star(F::not(p.clone())),
                    )),
                    F::or(F::forall(p.clone()), F::forall(F::not(p.clone()))),
                )
            }
            Schema::G(_) => {
                let qs: Vec<Formula> = (0..args.len()).map(|i| q_formula(args, i)).collect();
                F::implies(
                    F::conj(qs.iter().map(|q| F::dia(q.clone()))),
                    F::dia(F::conj(qs.iter().map(|q| F::dia_star(F::not(q.clone()))))),
                )
            }
        };
        Ok(SchemaInstance {
            schema: *self,
            args: args.to_vec(),
            formula,
        })
    }

    /// Instance over plain atoms: `p`, `q` for the fixed-arity schemata,
    /// `Γ = {p, q}`, and `p0..pn` for `Gn`.
    pub fn generic(&self) -> SchemaInstance {
        let atoms = |names: &[&str]| names.iter().map(|a| Formula::atom(*a)).collect::<Vec<_>>();
        let args = match self {
            Schema::K => atoms(&["p", "q"]),
            Schema::D => Vec::new(),
            Schema::Four | Schema::T | Schema::U | Schema::C => atoms(&["p"]),
            Schema::Fix | Schema::FourT | Schema::TT => atoms(&["p", "q"]),
            Schema::Ind => atoms(&["r", "p", "q"]),
            Schema::G(n) => (0..=*n).map(|i| Formula::atom(format!("p{i}"))).collect(),
        };
        self.instantiate(&args).expect("generic arities match")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogicProfile {
    pub name: String,
    pub transitive: bool,
    pub serial: bool,
    pub reflexive: bool,
    pub connected: bool,
    /// `Some(n)`: every `R(x)` has at most n path components.
    pub local_components: Option<usize>,
    pub tangle: bool,
    pub mu: bool,
    pub universal: bool,
}

impl FromStr for LogicProfile {
    type Err = LogicsError;

    /// Names are `K`, `Kmu`, or `(K|KD|S)4`, then optionally `G<n>`, then
    /// optionally `t` or `mu`, then optionally `.U` or `.UC`.
    fn from_str(name: &str) -> Result<LogicProfile, LogicsError> {
        let bad = || LogicsError::UnknownProfile(name.to_string());
        let mut p = LogicProfile {
            name: name.to_string(),
            transitive: true,
            serial: false,
            reflexive: false,
            connected: false,
            local_components: None,
            tangle: false,
            mu: false,
            universal: false,
        };
        if name == "K" || name == "Kmu" {
            p.transitive = false;
            p.mu = name == "Kmu";
            return Ok(p);
        }
        let mut rest = if let Some(r) = name.strip_prefix("KD4") {
            p.serial = true;
            r
        } else if let Some(r) = name.strip_prefix("K4") {
            r
        } else if let Some(r) = name.strip_prefix("S4") {
            p.reflexive = true;
            p.serial = true;
            r
        } else {
            return Err(bad());
        };
        if let Some(r) = rest.strip_suffix(".UC") {
            p.universal = true;
            p.connected = true;
            rest = r;
        } else if let Some(r) = rest.strip_suffix(".U") {
            p.universal = true;
            rest = r;
        }
        if let Some(r) = rest.strip_suffix("mu").or_else(|| rest.strip_suffix("μ")) {
            p.mu = true;
            rest = r;
        } else if let Some(r) = rest.strip_suffix('t') {
            p.tangle = true;
            rest = r;
        }
        if let Some(digits) = rest.strip_prefix('G') {
            match digits.parse::<usize>() {
                Ok(n) if n >= 1 && !digits.starts_with('0') => p.local_components = Some(n),
                _ => return Err(bad()),
            }
        } else if !rest.is_empty() {
            return Err(bad());
        }
        Ok(p)
    }
}

impl LogicProfile {
    /// Schemata whose validity corresponds to the profile's conditions.
    pub fn schemas(&self) -> Vec<Schema> {
        let mut out = vec![Schema::K];
        if self.transitive {
            out.push(Schema::Four);
        }
        if self.serial {
            out.push(Schema::D);
        }
        if self.reflexive {
            out.push(Schema::T);
        }
        if self.tangle {
            out.extend([Schema::Fix, Schema::Ind, Schema::FourT]);
            if self.reflexive {
                out.push(Schema::TT);
            }
        }
        if self.universal {
            out.push(Schema::U);
        }
        if self.connected {
            out.push(Schema::C);
        }
        if let Some(n) = self.local_components {
            out.push(Schema::G(n));
        }
        out
    }

    pub fn frame_ok(&self, f: &Frame) -> bool {
        (!self.transitive || f.is_transitive())
            && (!self.serial || f.is_serial())
            && (!self.reflexive || f.is_reflexive())
            && (!self.connected || f.is_connected())
            && self
                .local_components
                .is_none_or(|n| f.locally_n_connected(n))
    }

    /// Rejects formulas using operators outside the profile's language.
    pub fn admits(&self, f: &Formula) -> Result<(), LogicsError> {
        let reason = if f.any_node(&|g| matches!(g, Formula::NecD(_) | Formula::TangleD(_))) {
            Some("[d] and <dt> are not in the Kripke languages of the profiles")
        } else if !self.tangle && f.any_node(&|g| matches!(g, Formula::Tangle(_))) {
            Some("no tangle modality")
        } else if !self.mu && f.any_node(&|g| matches!(g, Formula::Mu(..))) {
            Some("no fixpoint binder")
        } else if !self.universal && f.any_node(&|g| matches!(g, Formula::Forall(_))) {
            Some("no universal modality")
        } else {
            None
        };
        match reason {
            Some(r) => Err(LogicsError::OutsideFragment {
                formula: f.to_string(),
                profile: self.name.clone(),
                reason: r.to_string(),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// A valuation of the formula's atoms and a world where it fails.
    Invalid {
        valuation: BTreeMap<String, WorldSet>,
        world: usize,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Sets `atoms[j]` to the `j`-th block of `n` bits of `mask`.
fn assign(model: &mut KripkeModel, atoms: &[String], n: usize, mask: u64) {
    let block = (1u64 << n) - 1;
    for (j, a) in atoms.iter().enumerate() {
        model.set_atom(a.clone(), WorldSet::from_mask(n, (mask >> (j * n)) & block));
    }
}

/// `φ` is true at every world under every valuation of its atoms.
pub fn frame_validates(f: &Frame, phi: &Formula, budget: u64) -> Result<Validity, LogicsError> {
    let atoms: Vec<String> = phi.free_atoms().into_iter().collect();
    let n = f.len();
    let bits = atoms.len() * n;
    if bits >= 64 || 1u64 << bits > budget {
        return Err(LogicsError::BudgetExceeded { budget });
    }
    let mut model = KripkeModel::bare(f.clone());
    for mask in 0..1u64 << bits {
        assign(&mut model, &atoms, n, mask);
        let ext = model.model_check(phi)?;
        if let Some(world) = ext.complement().first() {
            return Ok(Validity::Invalid {
                valuation: model.val().clone(),
                world,
            });
        }
    }
    Ok(Validity::Valid)
}

/// Work counter shared by the enumerators.
#[derive(Debug)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    pub fn spend(&mut self, units: u64) -> Result<(), LogicsError> {
        self.used = self.used.saturating_add(units);
        if self.used > self.limit {
            Err(LogicsError::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// No relabelling gives a lexicographically smaller adjacency matrix
/// (cells read row by row).
fn is_canonical(n: usize, rel: &[bool]) -> bool {
    let mut minimal = true;
    for_each_permutation(n, |p| {
        for k in 0..n * n {
            let permuted = rel[p[k / n] * n + p[k % n]];
            if permuted != rel[k] {
                if !permuted {
                    minimal = false;
                }
                break;
            }
        }
        minimal
    });
    minimal
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    fn rec(
        p: &mut Vec<usize>,
        used: &mut [bool],
        n: usize,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if p.len() == n {
            return f(p);
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                p.push(v);
                let go = rec(p, used, n, f);
                p.pop();
                used[v] = false;
                if !go {
                    return false;
                }
            }
        }
        true
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], n, &mut f);
}

/// Calls `visit` on every relation on `n` points (transitive ones only if
/// asked) whose adjacency matrix is lexicographically least among its
/// relabellings, in increasing matrix order. `visit` returns false to stop.
pub fn canonical_frames(
    n: usize,
    transitive: bool,
    budget: &mut Budget,
    mut visit: impl FnMut(Frame) -> bool,
) -> Result<(), LogicsError> {
    assert!((1..=8).contains(&n), "frames of 1..=8 worlds");
    let mut rel = vec![false; n * n];

    // Transitivity among decided cells (index <= k), for triples using cell k.
    let consistent = |rel: &[bool], k: usize| -> bool {
        let (i, j) = (k / n, k % n);
        let at = |a: usize, b: usize| a * n + b;
        (0..n).all(|x| {
            let ok1 =
                !(at(j, x) <= k && at(i, x) <= k && rel[k] && rel[at(j, x)] && !rel[at(i, x)]);
            let ok2 =
                !(at(x, i) <= k && at(x, j) <= k && rel[at(x, i)] && rel[k] && !rel[at(x, j)]);
            let ok3 =
                !(at(i, x) <= k && at(x, j) <= k && rel[at(i, x)] && rel[at(x, j)] && !rel[k]);
            ok1 && ok2 && ok3
        })
    };

    fn rec(
        k: usize,
        n: usize,
        rel: &mut Vec<bool>,
        transitive: bool,
        budget: &mut Budget,
        consistent: &dyn Fn(&[bool], usize) -> bool,
        visit: &mut dyn FnMut(Frame) -> bool,
    ) -> Result<bool, LogicsError> {
        if k == n * n {
            budget.spend(1)?;
            if !is_canonical(n, rel) {
                return Ok(true);
            }
            let pairs = (0..n * n).filter(|&c| rel[c]).map(|c| (c / n, c % n));
            return Ok(visit(Frame::from_pairs(n, pairs)));
        }
        for bit in [false, true] {
            rel[k] = bit;
            if (!transitive || consistent(rel, k))
                && !rec(k + 1, n, rel, transitive, budget, consistent, visit)?
            {
                return Ok(false);
            }
        }
        rel[k] = false;
        Ok(true)
    }

    rec(0, n, &mut rel, transitive, budget, &consistent, &mut visit)?;
    Ok(())
}

/// Canonical frames on `n` points meeting the profile's conditions.
pub fn profile_frames(
    profile: &LogicProfile,
    n: usize,
    budget: &mut Budget,
) -> Result<Vec<Frame>, LogicsError> {
    let mut out = Vec::new();
    canonical_frames(n, profile.transitive, budget, |f| {
        if profile.frame_ok(&f) {
            out.push(f);
        }
        true
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// A model and a world satisfying the formula; the least in
    /// enumeration order (frame size, frame matrix, valuation).
    Sat { model: KripkeModel, world: usize },
    /// No model on at most `max_worlds` worlds.
    Unsat { max_worlds: usize },
}

/// Exhaustive search for a model of `phi` on a frame of the profile with
/// at most `max_worlds` worlds. Work is metered: one unit per valuation
/// checked and one per labelled frame generated.
pub fn bounded_sat(
    phi: &Formula,
    profile: &LogicProfile,
    max_worlds: usize,
    budget: u64,
) -> Result<SatOutcome, LogicsError> {
    profile.admits(phi)?;
    let atoms: Vec<String> = phi.free_atoms().into_iter().collect();
    let mut budget = Budget::new(budget);
    for n in 1..=max_worlds {
        let bits = atoms.len() * n;
        if bits >= 64 {
            return Err(LogicsError::BudgetExceeded {
                budget: budget.limit,
            });
        }
        for frame in profile_frames(profile, n, &mut budget)? {
            let mut model = KripkeModel::bare(frame);
            for mask in 0..1u64 << bits {
                budget.spend(1)?;
                assign(&mut model, &atoms, n, mask);
                if let Some(world) = model.model_check(phi)?.first() {
                    return Ok(SatOutcome::Sat { model, world });
                }
            }
        }
    }
    Ok(SatOutcome::Unsat { max_worlds })
}

/// Initial segment of the model used against strong completeness with the
/// universal modality: worlds `a_0..a_m` and `b_0..b_{m+1}` (the submodel
/// generated by the `a`s), `R` the reflexive closure of
/// `a_n → b_n, a_n → b_{n+1}`, with `r, g, b` cycling along the `b`s and
/// `p_n` on `b_{3n}, b_{3n+1}`.
pub fn figure3_model(m: usize) -> KripkeModel {
    let a = |i: usize| i;
    let b = |i: usize| m + 1 + i;
    let total = 2 * m + 3;
    let mut worlds: Vec<String> = (0..=m).map(|i| format!("a{i}")).collect();
    worlds.extend((0..=m + 1).map(|i| format!("b{i}")));
    let mut succ = vec![WorldSet::empty(total); total];
    for (i, s) in succ.iter_mut().enumerate() {
        s.insert(i);
    }
    for i in 0..=m {
        succ[a(i)].insert(b(i));
        succ[a(i)].insert(b(i + 1));
    }
    let frame = Frame::with_names(worlds, succ);
    let mut model = KripkeModel::bare(frame);
    for (k, colour) in ["r", "g", "b"].iter().enumerate() {
        let s = WorldSet::from_indices(total, (0..=m + 1).filter(|i| i % 3 == k).map(b));
        model.set_atom(*colour, s);
    }
    for p in 0..=(m + 1) / 3 {
        let s = WorldSet::from_indices(
            total,
            [3 * p, 3 * p + 1]
                .into_iter()
                .filter(|&i| i <= m + 1)
                .map(b),
        );
        model.set_atom(format!("p{p}"), s);
    }
    model
}

fn p(i: usize) -> Formula {
    Formula::atom(format!("p{i}"))
}

fn colour(c: &str) -> Formula {
    Formula::dia(Formula::atom(c))
}

/// `∃(◇p_i ∧ ◇r ∧ ◇g)`
pub fn sigma1(i: usize) -> Formula {
    Formula::exists(Formula::conj([
        Formula::dia(p(i)),
        colour("r"),
        colour("g"),
    ]))
}

/// `∀¬(◇p_i ∧ ◇p_j)`
pub fn sigma2(i: usize, j: usize) -> Formula {
    Formula::forall(Formula::not(Formula::and(
        Formula::dia(p(i)),
        Formula::dia(p(j)),
    )))
}

/// `∀¬(◇r ∧ ◇g ∧ ◇b)`
pub fn sigma3() -> Formula {
    Formula::forall(Formula::not(Formula::conj([
        colour("r"),
        colour("g"),
        colour("b"),
    ])))
}

/// `∀(◇p_i ∧ □¬b → □◇p_i)`
pub fn sigma4(i: usize) -> Formula {
    Formula::forall(Formula::implies(
        Formula::and(
            Formula::dia(p(i)),
            Formula::nec(Formula::not(Formula::atom("b"))),
        ),
        Formula::nec(Formula::dia(p(i))),
    ))
}

/// Every Σ formula with indices at most `k`.
pub fn sigma_upto(k: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = (0..=k).map(sigma1).collect();
    for i in 0..=k {
        for j in i + 1..=k {
            out.push(sigma2(i, j));
        }
    }
    out.push(sigma3());
    out.extend((0..=k).map(sigma4));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn pr(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn schema_examples() {
        assert_eq!(
            Schema::Fix.instantiate(&[pr("p")]).unwrap().formula,
            pr("<t>{p} -> <>(p & <t>{p})")
        );
        assert_eq!(
            Schema::Four.instantiate(&[pr("true")]).unwrap().formula,
            pr("<><>true -> <>true")
        );
        assert_eq!(
            Schema::G(1).instantiate(&[pr("p"), pr("q")]).unwrap().formula,
            pr("<>(p & ~q) & <>(q & ~p) -> <>((~(p & ~q) | <>~(p & ~q)) & (~(q & ~p) | <>~(q & ~p)))")
        );
        assert!(matches!(
            Schema::K.instantiate(&[pr("p")]),
            Err(LogicsError::Arity { .. })
        ));
        assert!(matches!(
            Schema::G(2).instantiate(&[pr("p"), pr("q")]),
            Err(LogicsError::Arity { .. })
        ));
        assert!(Schema::Fix.instantiate(&[]).is_err());
    }

    #[test]
    fn schema_names_round_trip() {
        for s in [
            Schema::K,
            Schema::Four,
            Schema::T,
            Schema::D,
            Schema::Fix,
            Schema::Ind,
            Schema::FourT,
            Schema::TT,
            Schema::U,
            Schema::C,
            Schema::G(3),
        ] {
            assert_eq!(s.to_string().parse::<Schema>().unwrap(), s);
        }
        assert!("G0".parse::<Schema>().is_err());
        assert!("X".parse::<Schema>().is_err());
    }

    #[test]
    fn profile_names() {
        let p: LogicProfile = "KD4G1t.UC".parse().unwrap();
        assert!(p.serial && !p.reflexive && p.tangle && p.universal && p.connected);
        assert_eq!(p.local_components, Some(1));
        let p: LogicProfile = "S4mu".parse().unwrap();
        assert!(p.reflexive && p.mu && !p.tangle);
        let p: LogicProfile = "K4t.U".parse().unwrap();
        assert!(p.universal && !p.connected && !p.serial);
        let p: LogicProfile = "K".parse().unwrap();
        assert!(!p.transitive);
        for bad in ["K5", "S4x", "K4G", "K4G0t", "S4t.V", ""] {
            assert!(bad.parse::<LogicProfile>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fragment_checks() {
        let k4: LogicProfile = "K4".parse().unwrap();
        assert!(k4.admits(&pr("<>true & []false")).is_ok());
        assert!(k4.admits(&pr("<t>{p}")).is_err());
        assert!(k4.admits(&pr("A p")).is_err());
        assert!("S4t.U"
            .parse::<LogicProfile>()
            .unwrap()
            .admits(&pr("A <t>{p}"))
            .is_ok());
    }

    #[test]
    fn validity_examples() {
        let refl = Frame::from_pairs(1, [(0, 0)]);
        assert!(frame_validates(&refl, &pr("[]p -> p"), DEFAULT_BUDGET)
            .unwrap()
            .is_valid());
        let fork = Frame::from_pairs(3, [(0, 1), (0, 2), (1, 1), (2, 2)]);
        let g1 = Schema::G(1)
            .instantiate(&[pr("p"), pr("~p")])
            .unwrap()
            .formula;
        match frame_validates(&fork, &g1, DEFAULT_BUDGET).unwrap() {
            Validity::Invalid { valuation, world } => {
                assert_eq!(world, 0);
                let p = &valuation["p"];
                assert!(p.contains(1) != p.contains(2));
            }
            Validity::Valid => panic!("G1 holds on the fork"),
        }
    }

    #[test]
    fn canonical_counts() {
        // unlabelled transitive relations on 1..=4 points
        for (n, expected) in [(1, 2), (2, 8), (3, 39), (4, 242)] {
            let mut count = 0;
            canonical_frames(n, true, &mut Budget::new(u64::MAX), |_| {
                count += 1;
                true
            })
            .unwrap();
            assert_eq!(count, expected, "n = {n}");
        }
        // all relations on 2 points up to relabelling
        let mut count = 0;
        canonical_frames(2, false, &mut Budget::new(u64::MAX), |_| {
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, 10);
    }

    #[test]
    fn bounded_sat_examples() {
        let k4t: LogicProfile = "K4t".parse().unwrap();
        match bounded_sat(&pr("<t>{p, ~p}"), &k4t, 2, DEFAULT_BUDGET).unwrap() {
            SatOutcome::Sat { model, .. } => {
                assert_eq!(model.len(), 2);
                assert_eq!(model.frame().pairs().len(), 4);
                assert_eq!(model.atom("p").iter().collect::<Vec<_>>(), vec![0]);
            }
            other => panic!("{other:?}"),
        }
        let k4: LogicProfile = "K4".parse().unwrap();
        assert_eq!(
            bounded_sat(&pr("<>true & []false"), &k4, 5, DEFAULT_BUDGET).unwrap(),
            SatOutcome::Unsat { max_worlds: 5 }
        );
    }

    #[test]
    fn figure3_examples() {
        let m0 = figure3_model(0);
        assert_eq!(m0.len(), 3);
        let b0 = m0.frame().index_of("b0").unwrap();
        assert!(m0.holds(b0, &pr("r & p0")).unwrap());
        let m2 = figure3_model(2);
        let a0 = m2.frame().index_of("a0").unwrap();
        assert!(m2.holds(a0, &pr("<>p0 & <>r & <>g")).unwrap());
        for m in 0..6 {
            let f = figure3_model(m).frame().clone();
            assert!(f.is_reflexive() && f.is_transitive() && f.is_connected());
        }
    }
}
