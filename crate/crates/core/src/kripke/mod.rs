//! Finite Kripke frames and models.
//!
//! Worlds carry opaque string ids but are addressed internally by index
//! `0..n` in declaration order; relations are successor bitsets.

mod clusters;
mod io;
mod model;

use thiserror::Error;

use crate::set::WorldSet;

pub use clusters::ClusterDecomposition;
pub use io::{FrameFile, ModelFile};
pub use model::{tangle_oracle, KripkeModel, TangleEval};

#[derive(Debug, Error)]
pub enum KripkeError {
    #[error("a frame needs at least one world")]
    EmptyFrame,
    #[error("duplicate world id {0:?}")]
    DuplicateWorld(String),
    #[error("unknown world id {0:?}")]
    UnknownWorld(String),
    #[error("{op} requires a transitive frame")]
    NotTransitive { op: &'static str },
    #[error("fixpoint iteration for mu {var} did not stabilise")]
    NoFixpoint { var: String },
    #[error("valuation of {atom:?} is over {got} worlds, frame has {expected}")]
    ValuationSize {
        atom: String,
        got: usize,
        expected: usize,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub transitive: bool,
    pub serial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closures {
    pub transitive_closure: Frame,
    pub refl_trans_closure: Frame,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
}

impl Frame {
    /// Frame over named worlds; `rel` pairs refer to ids in `worlds`.
    pub fn new<S: AsRef<str>>(
        worlds: Vec<String>,
        rel: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Frame, KripkeError> {
        if worlds.is_empty() {
            return Err(KripkeError::EmptyFrame);
        }
        let mut index = std::collections::HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.as_str(), i).is_some() {
                return Err(KripkeError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        let mut succ = vec![WorldSet::empty(n); n];
        for (a, b) in rel {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| KripkeError::UnknownWorld(s.to_string()))
            };
            let (i, j) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            succ[i].insert(j);
        }
        Ok(Frame { worlds, succ })
    }

    /// Frame on worlds `w0..w{n-1}` from index pairs.
    pub fn from_pairs(n: usize, rel: impl IntoIterator<Item = (usize, usize)>) -> Frame {
        let mut succ = vec![WorldSet::empty(n); n];
        for (a, b) in rel {
            succ[a].insert(b);
        }
        Frame::from_succ(succ)
    }

    /// Frame on worlds `w0..w{n-1}` from successor sets.
    pub fn from_succ(succ: Vec<WorldSet>) -> Frame {
        assert!(!succ.is_empty(), "a frame needs at least one world");
        let worlds = (0..succ.len()).map(|i| format!("w{i}")).collect();
        Frame { worlds, succ }
    }

    /// Frame with explicit names and successor sets.
    pub fn with_names(worlds: Vec<String>, succ: Vec<WorldSet>) -> Frame {
        assert_eq!(worlds.len(), succ.len());
        assert!(!succ.is_empty(), "a frame needs at least one world");
        Frame { worlds, succ }
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    /// `R(i)`
    pub fn succ(&self, i: usize) -> &WorldSet {
        &self.succ[i]
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(j)
    }

    /// `R⁻¹(i)`
    pub fn pred(&self, i: usize) -> WorldSet {
        WorldSet::from_indices(self.len(), (0..self.len()).filter(|&k| self.related(k, i)))
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.succ[i].iter().map(move |j| (i, j)))
            .collect()
    }

    pub fn empty_set(&self) -> WorldSet {
        WorldSet::empty(self.len())
    }

    pub fn full_set(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn set_of<S: AsRef<str>>(
        &self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<WorldSet, KripkeError> {
        let mut s = self.empty_set();
        for name in names {
            let name = name.as_ref();
            s.insert(
                self.index_of(name)
                    .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))?,
            );
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &WorldSet) -> Vec<String> {
        s.iter().map(|i| self.worlds[i].clone()).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.related(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|i| {
            self.succ[i]
                .iter()
                .all(|j| self.succ[j].is_subset(&self.succ[i]))
        })
    }

    pub fn is_serial(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }

    pub fn properties(&self) -> RelationProperties {
        RelationProperties {
            reflexive: self.is_reflexive(),
            transitive: self.is_transitive(),
            serial: self.is_serial(),
        }
    }

    /// Least transitive relation containing `R` (Warshall).
    pub fn transitive_closure(&self) -> Frame {
        let mut succ = self.succ.clone();
        for k in 0..self.len() {
            let via = succ[k].clone();
            for s in succ.iter_mut() {
                if s.contains(k) {
                    s.union_with(&via);
                }
            }
        }
        Frame {
            worlds: self.worlds.clone(),
            succ,
        }
    }

    pub fn reflexive_closure(&self) -> Frame {
        let mut out = self.clone();
        for (i, s) in out.succ.iter_mut().enumerate() {
            s.insert(i);
        }
        out
    }

    /// `R*`
    pub fn refl_trans_closure(&self) -> Frame {
        self.transitive_closure().reflexive_closure()
    }

    pub fn closures(&self) -> Closures {
        Closures {
            transitive_closure: self.transitive_closure(),
            refl_trans_closure: self.refl_trans_closure(),
        }
    }

    /// `R*(i)`: everything reachable from `i` in zero or more steps.
    pub fn reachable(&self, i: usize) -> WorldSet {
        let mut seen = WorldSet::singleton(self.len(), i);
        let mut stack = vec![i];
        while let Some(x) = stack.pop() {
            for y in self.succ[x].iter() {
                if !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Subframe on `keep`, with the index of each kept world in the original.
    pub fn restrict(&self, keep: &WorldSet) -> (Frame, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let n = old.len();
        let succ = old
            .iter()
            .map(|&i| {
                WorldSet::from_indices(
                    n,
                    old.iter()
                        .enumerate()
                        .filter(|(_, &j)| self.related(i, j))
                        .map(|(k, _)| k),
                )
            })
            .collect();
        let worlds = old.iter().map(|&i| self.worlds[i].clone()).collect();
        (Frame { worlds, succ }, old)
    }

    /// Path components of the subframe on `within`: classes of the
    /// symmetric-transitive closure of `R` restricted to `within`.
    pub fn components_within(&self, within: &WorldSet) -> Vec<WorldSet> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in within.iter() {
            for j in self.succ[i].intersection(within).iter() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut comps: Vec<WorldSet> = Vec::new();
        let mut root_slot = vec![usize::MAX; n];
        for i in within.iter() {
            let r = find(&mut parent, i);
            if root_slot[r] == usize::MAX {
                root_slot[r] = comps.len();
                comps.push(WorldSet::empty(n));
            }
            comps[root_slot[r]].insert(i);
        }
        comps
    }

    pub fn path_components(&self) -> Vec<WorldSet> {
        self.components_within(&self.full_set())
    }

    pub fn is_connected(&self) -> bool {
        self.path_components().len() == 1
    }

    /// Every `R(x)` has at most `n` path components (paths inside `R(x)`).
    pub fn locally_n_connected(&self, n: usize) -> bool {
        (0..self.len()).all(|x| self.components_within(&self.succ[x]).len() <= n)
    }

    pub fn clusters(&self) -> Result<ClusterDecomposition, KripkeError> {
        ClusterDecomposition::new(self)
    }

    pub(crate) fn require_transitive(&self, op: &'static str) -> Result<(), KripkeError> {
        if self.is_transitive() {
            Ok(())
        } else {
            Err(KripkeError::NotTransitive { op })
        }
    }
}
