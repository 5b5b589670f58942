//! Finite topological spaces given by an explicit family of opens.

mod model;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kripke::Frame;
use crate::set::WorldSet;

pub use model::{tangle_exhaustive, TopoModel};

#[derive(Debug, Error)]
pub enum TopoError {
    #[error("duplicate point id {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point id {0:?}")]
    UnknownPoint(String),
    #[error("the empty set is not open")]
    MissingEmpty,
    #[error("the whole space is not open")]
    MissingWhole,
    #[error("union of {a:?} and {b:?} is not open")]
    MissingUnion { a: Vec<String>, b: Vec<String> },
    #[error("intersection of {a:?} and {b:?} is not open")]
    MissingIntersection { a: Vec<String>, b: Vec<String> },
    #[error("the Alexandrov topology is built from transitive frames only")]
    NotTransitive,
    #[error("fixpoint iteration for mu {var} did not stabilise")]
    NoFixpoint { var: String },
    #[error("valuation of {atom:?} is over {got} points, space has {expected}")]
    ValuationSize {
        atom: String,
        got: usize,
        expected: usize,
    },
    #[error("malformed space file: {0}")]
    Json(#[from] serde_json::Error),
}

/// `{"points": [ids], "opens": [[ids], ..]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub val: std::collections::BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpacePredicates {
    pub is_td: bool,
    pub dense_in_itself: bool,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operators {
    pub interior: WorldSet,
    pub closure: WorldSet,
    pub derivative: WorldSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<String>,
    opens: Vec<WorldSet>,
    /// Least open neighbourhood of each point.
    nbhd: Vec<WorldSet>,
}

impl FiniteSpace {
    pub fn new(points: Vec<String>, opens: Vec<Vec<String>>) -> Result<FiniteSpace, TopoError> {
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.as_str(), i).is_some() {
                return Err(TopoError::DuplicatePoint(p.clone()));
            }
        }
        let n = points.len();
        let mut sets = Vec::new();
        for o in opens {
            let mut s = WorldSet::empty(n);
            for p in o {
                s.insert(*index.get(p.as_str()).ok_or(TopoError::UnknownPoint(p))?);
            }
            sets.push(s);
        }
        FiniteSpace::with_names(points, sets)
    }

    /// Space on points `x0..x{n-1}`.
    pub fn from_opens(n: usize, opens: Vec<WorldSet>) -> Result<FiniteSpace, TopoError> {
        FiniteSpace::with_names((0..n).map(|i| format!("x{i}")).collect(), opens)
    }

    pub fn with_names(points: Vec<String>, opens: Vec<WorldSet>) -> Result<FiniteSpace, TopoError> {
        let n = points.len();
        let opens: Vec<WorldSet> = opens
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let names = |s: &WorldSet| s.iter().map(|i| points[i].clone()).collect::<Vec<_>>();
        let family: BTreeSet<&WorldSet> = opens.iter().collect();
        if !family.contains(&WorldSet::empty(n)) {
            return Err(TopoError::MissingEmpty);
        }
        if !family.contains(&WorldSet::full(n)) {
            return Err(TopoError::MissingWhole);
        }
        for (i, a) in opens.iter().enumerate() {
            for b in &opens[i + 1..] {
                if !family.contains(&a.union(b)) {
                    return Err(TopoError::MissingUnion {
                        a: names(a),
                        b: names(b),
                    });
                }
                if !family.contains(&a.intersection(b)) {
                    return Err(TopoError::MissingIntersection {
                        a: names(a),
                        b: names(b),
                    });
                }
            }
        }
        let nbhd = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(WorldSet::full(n), |acc, o| acc.intersection(o))
            })
            .collect();
        Ok(FiniteSpace {
            points,
            opens,
            nbhd,
        })
    }

    pub fn discrete(n: usize) -> FiniteSpace {
        let opens = (0..1u64 << n).map(|m| WorldSet::from_mask(n, m)).collect();
        FiniteSpace::from_opens(n, opens).expect("the power set is a topology")
    }

    pub fn indiscrete(n: usize) -> FiniteSpace {
        FiniteSpace::from_opens(n, vec![WorldSet::empty(n), WorldSet::full(n)])
            .expect("the trivial family is a topology")
    }

    /// Opens are the `R`-upward closed sets of a transitive frame.
    pub fn alexandrov(frame: &Frame) -> Result<FiniteSpace, TopoError> {
        if !frame.is_transitive() {
            return Err(TopoError::NotTransitive);
        }
        let n = frame.len();
        let principal: Vec<WorldSet> = (0..n).map(|a| frame.reachable(a)).collect();
        let mut opens = BTreeSet::from([WorldSet::empty(n)]);
        let mut frontier = vec![WorldSet::empty(n)];
        while let Some(o) = frontier.pop() {
            for p in &principal {
                let u = o.union(p);
                if opens.insert(u.clone()) {
                    frontier.push(u);
                }
            }
        }
        FiniteSpace::with_names(frame.worlds().to_vec(), opens.into_iter().collect())
    }

    /// Every topology on `n` points, by brute force over families of subsets.
    pub fn all_topologies(n: usize) -> Vec<FiniteSpace> {
        assert!(n <= 4, "family enumeration is doubly exponential");
        let full = (1u64 << n) - 1;
        let middle: Vec<u64> = (1..full).collect();
        let mut out = Vec::new();
        for pick in 0..1u64 << middle.len() {
            let mut masks = vec![0, full];
            masks.extend(
                middle
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| pick >> k & 1 == 1)
                    .map(|(_, &m)| m),
            );
            let closed = masks.iter().all(|a| {
                masks
                    .iter()
                    .all(|b| masks.contains(&(a | b)) && masks.contains(&(a & b)))
            });
            if closed {
                let opens = masks.iter().map(|&m| WorldSet::from_mask(n, m)).collect();
                out.push(FiniteSpace::from_opens(n, opens).expect("closure checked"));
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<FiniteSpace, TopoError> {
        let file: SpaceFile = serde_json::from_str(text)?;
        FiniteSpace::new(file.points, file.opens)
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            points: self.points.clone(),
            opens: self.opens.iter().map(|o| self.names_of(o)).collect(),
            val: Default::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[WorldSet] {
        &self.opens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn set_of<S: AsRef<str>>(
        &self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<WorldSet, TopoError> {
        let mut s = WorldSet::empty(self.len());
        for name in names {
            let name = name.as_ref();
            s.insert(
                self.index_of(name)
                    .ok_or_else(|| TopoError::UnknownPoint(name.to_string()))?,
            );
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &WorldSet) -> Vec<String> {
        s.iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn is_open(&self, s: &WorldSet) -> bool {
        self.opens.binary_search(s).is_ok()
    }

    pub fn is_closed(&self, s: &WorldSet) -> bool {
        self.is_open(&s.complement())
    }

    /// Least open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> &WorldSet {
        &self.nbhd[x]
    }

    pub fn interior(&self, s: &WorldSet) -> WorldSet {
        let n = self.len();
        WorldSet::from_indices(n, (0..n).filter(|&x| self.nbhd[x].is_subset(s)))
    }

    pub fn closure(&self, s: &WorldSet) -> WorldSet {
        let n = self.len();
        WorldSet::from_indices(n, (0..n).filter(|&x| self.nbhd[x].intersects(s)))
    }

    /// `⟨d⟩S`: points each of whose neighbourhoods meets `S` off the point.
    pub fn derivative(&self, s: &WorldSet) -> WorldSet {
        let n = self.len();
        WorldSet::from_indices(
            n,
            (0..n).filter(|&x| {
                let mut meet = self.nbhd[x].intersection(s);
                meet.remove(x);
                !meet.is_empty()
            }),
        )
    }

    /// `[d]S`, the dual of the derivative.
    pub fn co_derivative(&self, s: &WorldSet) -> WorldSet {
        self.derivative(&s.complement()).complement()
    }

    pub fn operators(&self, s: &WorldSet) -> Operators {
        Operators {
            interior: self.interior(s),
            closure: self.closure(s),
            derivative: self.derivative(s),
        }
    }

    pub fn is_td(&self) -> bool {
        (0..self.len()).all(|x| {
            let d = self.derivative(&WorldSet::singleton(self.len(), x));
            self.derivative(&d).is_subset(&d)
        })
    }

    pub fn dense_in_itself(&self) -> bool {
        self.opens.iter().all(|o| o.len() != 1)
    }

    pub fn connected(&self) -> bool {
        self.opens
            .iter()
            .all(|o| o.is_empty() || o.is_full() || !self.is_open(&o.complement()))
    }

    pub fn predicates(&self) -> SpacePredicates {
        SpacePredicates {
            is_td: self.is_td(),
            dense_in_itself: self.dense_in_itself(),
            connected: self.connected(),
        }
    }
}
