use std::collections::{BTreeMap, HashSet};

use crate::formula::{Formula, TangleSet};
use crate::set::WorldSet;

use super::{Frame, KripkeError};

/// How `⟨t⟩Δ` and `⟨dt⟩Δ` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangleEval {
    /// The cluster criterion: some reflexive successor whose cluster
    /// realises every member.
    Cluster,
    /// Brute force over simple cycles reachable in at least one step.
    Lasso,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    frame: Frame,
    val: BTreeMap<String, WorldSet>,
}

impl KripkeModel {
    pub fn new(frame: Frame, val: BTreeMap<String, WorldSet>) -> Result<KripkeModel, KripkeError> {
        for (atom, s) in &val {
            if s.universe() != frame.len() {
                return Err(KripkeError::ValuationSize {
                    atom: atom.clone(),
                    got: s.universe(),
                    expected: frame.len(),
                });
            }
        }
        Ok(KripkeModel { frame, val })
    }

    /// Model with every atom false everywhere.
    pub fn bare(frame: Frame) -> KripkeModel {
        KripkeModel {
            frame,
            val: BTreeMap::new(),
        }
    }

    pub fn from_names<S: AsRef<str>>(
        frame: Frame,
        val: impl IntoIterator<Item = (String, Vec<S>)>,
    ) -> Result<KripkeModel, KripkeError> {
        let mut out = BTreeMap::new();
        for (atom, worlds) in val {
            out.insert(atom, frame.set_of(worlds)?);
        }
        Ok(KripkeModel { frame, val: out })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn val(&self) -> &BTreeMap<String, WorldSet> {
        &self.val
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    /// `h(p)`, empty for atoms without an entry.
    pub fn atom(&self, name: &str) -> WorldSet {
        self.val
            .get(name)
            .cloned()
            .unwrap_or_else(|| self.frame.empty_set())
    }

    pub fn set_atom(&mut self, name: impl Into<String>, s: WorldSet) {
        assert_eq!(s.universe(), self.frame.len());
        self.val.insert(name.into(), s);
    }

    /// Same worlds and valuation over a different relation.
    pub fn with_frame(&self, frame: Frame) -> KripkeModel {
        assert_eq!(frame.len(), self.frame.len());
        KripkeModel {
            frame,
            val: self.val.clone(),
        }
    }

    /// `⟦φ⟧` with tangles by the cluster criterion.
    pub fn model_check(&self, f: &Formula) -> Result<WorldSet, KripkeError> {
        self.model_check_with(f, TangleEval::Cluster)
    }

    pub fn model_check_with(&self, f: &Formula, mode: TangleEval) -> Result<WorldSet, KripkeError> {
        if f.has_tangle() {
            self.frame.require_transitive("tangle evaluation")?;
        }
        Eval {
            model: self,
            mode,
            env: Vec::new(),
            cycles: None,
        }
        .eval(f)
    }

    pub fn holds(&self, x: usize, f: &Formula) -> Result<bool, KripkeError> {
        Ok(self.model_check(f)?.contains(x))
    }

    /// Submodel on `keep`, with the original index of each kept world.
    pub fn restrict(&self, keep: &WorldSet) -> (KripkeModel, Vec<usize>) {
        let (frame, old) = self.frame.restrict(keep);
        let val = self
            .val
            .iter()
            .map(|(a, s)| {
                let t = WorldSet::from_indices(
                    old.len(),
                    old.iter()
                        .enumerate()
                        .filter(|(_, &i)| s.contains(i))
                        .map(|(k, _)| k),
                );
                (a.clone(), t)
            })
            .collect();
        (KripkeModel { frame, val }, old)
    }

    /// Submodel generated by `w`, on `R*(w)`.
    pub fn generated_submodel(&self, w: usize) -> KripkeModel {
        self.restrict(&self.frame.reachable(w)).0
    }
}

/// Lasso check of `⟨t⟩Δ` at `x`: some simple cycle reachable from `x` in
/// at least one step realises every member of `Δ`.
pub fn tangle_oracle(m: &KripkeModel, x: usize, members: &TangleSet) -> Result<bool, KripkeError> {
    m.frame.require_transitive("tangle evaluation")?;
    let exts = members
        .iter()
        .map(|d| m.model_check_with(d, TangleEval::Lasso))
        .collect::<Result<Vec<_>, _>>()?;
    let reach = strict_reach(&m.frame, x);
    Ok(simple_cycles(&m.frame)
        .iter()
        .any(|z| z.intersects(&reach) && exts.iter().all(|e| e.intersects(z))))
}

struct Eval<'a> {
    model: &'a KripkeModel,
    mode: TangleEval,
    env: Vec<(String, WorldSet)>,
    cycles: Option<Vec<WorldSet>>,
}

impl Eval<'_> {
    fn frame(&self) -> &Frame {
        &self.model.frame
    }

    fn eval(&mut self, f: &Formula) -> Result<WorldSet, KripkeError> {
        let n = self.frame().len();
        Ok(match f {
            Formula::Atom(a) => match self.env.iter().rev().find(|(q, _)| q == a) {
                Some((_, s)) => s.clone(),
                None => self.model.atom(a),
            },
            Formula::Top => WorldSet::full(n),
            Formula::Not(a) => self.eval(a)?.complement(),
            Formula::And(a, b) => {
                let mut s = self.eval(a)?;
                if !s.is_empty() {
                    s.intersect_with(&self.eval(b)?);
                }
                s
            }
            Formula::Nec(a) | Formula::NecD(a) => {
                let s = self.eval(a)?;
                WorldSet::from_indices(n, (0..n).filter(|&x| self.frame().succ(x).is_subset(&s)))
            }
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
                match self.mode {
                    TangleEval::Cluster => self.tangle_by_clusters(&exts),
                    TangleEval::Lasso => self.tangle_by_lassos(&exts),
                }
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
                return Err(KripkeError::NoFixpoint { var: q.clone() });
            }
        })
    }

    fn tangle_by_clusters(&self, exts: &[WorldSet]) -> WorldSet {
        let fr = self.frame();
        let n = fr.len();
        let mut good = WorldSet::empty(n);
        for y in 0..n {
            if !fr.related(y, y) || good.contains(y) {
                continue;
            }
            let cluster = fr.succ(y).intersection(&fr.pred(y));
            if exts.iter().all(|e| e.intersects(&cluster)) {
                good.union_with(&cluster);
            }
        }
        WorldSet::from_indices(n, (0..n).filter(|&x| fr.succ(x).intersects(&good)))
    }

    fn tangle_by_lassos(&mut self, exts: &[WorldSet]) -> WorldSet {
        let n = self.frame().len();
        if self.cycles.is_none() {
            self.cycles = Some(simple_cycles(self.frame()));
        }
        let cycles = self.cycles.as_ref().expect("just filled");
        WorldSet::from_indices(
            n,
            (0..n).filter(|&x| {
                let reach = strict_reach(&self.model.frame, x);
                cycles
                    .iter()
                    .any(|z| z.intersects(&reach) && exts.iter().all(|e| e.intersects(z)))
            }),
        )
    }
}

/// Worlds reachable from `x` in one or more steps.
fn strict_reach(f: &Frame, x: usize) -> WorldSet {
    let mut seen = WorldSet::empty(f.len());
    let mut stack: Vec<usize> = f.succ(x).iter().collect();
    for &y in &stack {
        seen.insert(y);
    }
    while let Some(y) = stack.pop() {
        for z in f.succ(y).iter() {
            if !seen.contains(z) {
                seen.insert(z);
                stack.push(z);
            }
        }
    }
    seen
}

/// Node sets of all simple cycles, each found from its least node.
fn simple_cycles(f: &Frame) -> Vec<WorldSet> {
    fn extend(
        f: &Frame,
        start: usize,
        at: usize,
        path: &mut WorldSet,
        out: &mut HashSet<WorldSet>,
    ) {
        for next in f.succ(at).iter() {
            if next == start {
                out.insert(path.clone());
            } else if next > start && !path.contains(next) {
                path.insert(next);
                extend(f, start, next, path, out);
                path.remove(next);
            }
        }
    }
    let mut out = HashSet::new();
    for start in 0..f.len() {
        let mut path = WorldSet::singleton(f.len(), start);
        extend(f, start, start, &mut path, &mut out);
    }
    let mut v: Vec<WorldSet> = out.into_iter().collect();
    v.sort();
    v
}
