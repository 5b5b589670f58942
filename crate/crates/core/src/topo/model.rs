use std::collections::BTreeMap;

use crate::formula::Formula;
use crate::set::WorldSet;

use super::{FiniteSpace, SpaceFile, TopoError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopoModel {
    space: FiniteSpace,
    val: BTreeMap<String, WorldSet>,
}

impl TopoModel {
    pub fn new(
        space: FiniteSpace,
        val: BTreeMap<String, WorldSet>,
    ) -> Result<TopoModel, TopoError> {
        for (atom, s) in &val {
            if s.universe() != space.len() {
                return Err(TopoError::ValuationSize {
                    atom: atom.clone(),
                    got: s.universe(),
                    expected: space.len(),
                });
            }
        }
        Ok(TopoModel { space, val })
    }

    pub fn from_json(text: &str) -> Result<TopoModel, TopoError> {
        let file: SpaceFile = serde_json::from_str(text)?;
        let space = FiniteSpace::new(file.points, file.opens)?;
        let mut val = BTreeMap::new();
        for (atom, pts) in file.val {
            val.insert(atom, space.set_of(pts)?);
        }
        Ok(TopoModel { space, val })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn val(&self) -> &BTreeMap<String, WorldSet> {
        &self.val
    }

    pub fn atom(&self, name: &str) -> WorldSet {
        self.val
            .get(name)
            .cloned()
            .unwrap_or_else(|| WorldSet::empty(self.space.len()))
    }

    pub fn set_atom(&mut self, name: impl Into<String>, s: WorldSet) {
        assert_eq!(s.universe(), self.space.len());
        self.val.insert(name.into(), s);
    }

    /// `⟦φ⟧` under the topological semantics.
    pub fn model_check(&self, f: &Formula) -> Result<WorldSet, TopoError> {
        Eval {
            model: self,
            env: Vec::new(),
        }
        .eval(f)
    }
}

struct Eval<'a> {
    model: &'a TopoModel,
    env: Vec<(String, WorldSet)>,
}

impl Eval<'_> {
    fn eval(&mut self, f: &Formula) -> Result<WorldSet, TopoError> {
        let sp = &self.model.space;
        let n = sp.len();
        Ok(match f {
            Formula::Atom(a) => match self.env.iter().rev().find(|(q, _)| q == a) {
                Some((_, s)) => s.clone(),
                None => self.model.atom(a),
            },
            Formula::Top => WorldSet::full(n),
            Formula::Not(a) => self.eval(a)?.complement(),
            Formula::And(a, b) => self.eval(a)?.intersection(&self.eval(b)?),
            Formula::Nec(a) => sp.interior(&self.eval(a)?),
            Formula::NecD(a) => sp.co_derivative(&self.eval(a)?),
            Formula::Forall(a) => {
                if self.eval(a)?.is_full() {
                    WorldSet::full(n)
                } else {
                    WorldSet::empty(n)
                }
            }
            Formula::Tangle(d) | Formula::TangleD(d) => {
                let exts = d
                    .iter()
                    .map(|m| self.eval(m))
                    .collect::<Result<Vec<_>, _>>()?;
                tangle_gfp(sp, &exts, matches!(f, Formula::TangleD(_)))
            }
            Formula::Mu(q, body) => {
                let mut s = WorldSet::empty(n);
                for _ in 0..=n + 1 {
                    self.env.push((q.clone(), s.clone()));
                    let next = self.eval(body);
                    self.env.pop();
                    let next = next?;
                    if next == s {
                        return Ok(s);
                    }
                    s = next;
                }
                return Err(TopoError::NoFixpoint { var: q.clone() });
            }
        })
    }
}

fn tangle_step(sp: &FiniteSpace, exts: &[WorldSet], s: &WorldSet, derived: bool) -> WorldSet {
    exts.iter().fold(WorldSet::full(sp.len()), |acc, e| {
        let meet = e.intersection(s);
        let op = if derived {
            sp.derivative(&meet)
        } else {
            sp.closure(&meet)
        };
        acc.intersection(&op)
    })
}

/// Greatest fixpoint of `S ↦ ⋂ cl(⟦δ⟧ ∩ S)` (or `⟨d⟩` for `derived`),
/// iterating down from the whole space.
fn tangle_gfp(sp: &FiniteSpace, exts: &[WorldSet], derived: bool) -> WorldSet {
    let mut s = WorldSet::full(sp.len());
    loop {
        let next = tangle_step(sp, exts, &s, derived);
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Union of every `S` with `S ⊆ ⋂ cl(ext ∩ S)`, by subset enumeration.
pub fn tangle_exhaustive(sp: &FiniteSpace, exts: &[WorldSet], derived: bool) -> WorldSet {
    let n = sp.len();
    assert!(n <= 16, "subset enumeration over {n} points");
    let mut out = WorldSet::empty(n);
    for mask in 0..1u64 << n {
        let s = WorldSet::from_mask(n, mask);
        if s.is_subset(&tangle_step(sp, exts, &s, derived)) {
            out.union_with(&s);
        }
    }
    out
}
