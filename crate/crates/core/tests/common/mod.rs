//! Seeded generators for frames, models, spaces and formulas.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tangle_core::{FiniteSpace, Formula, Frame, KripkeModel, TopoModel, WorldSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FrameSpec {
    pub transitive: bool,
    pub reflexive: bool,
    pub serial: bool,
}

impl FrameSpec {
    pub const TRANSITIVE: FrameSpec = FrameSpec {
        transitive: true,
        reflexive: false,
        serial: false,
    };
    pub const ANY: FrameSpec = FrameSpec {
        transitive: false,
        reflexive: false,
        serial: false,
    };
}

pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, spec: FrameSpec) -> Frame {
    // Sparse relations give frames with several clusters after closing.
    let density = rng.gen_range(0.05..0.45);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    if spec.reflexive {
        pairs.extend((0..n).map(|a| (a, a)));
    }
    if spec.serial {
        for a in 0..n {
            if !pairs.iter().any(|&(x, _)| x == a) {
                pairs.push((a, rng.gen_range(0..n)));
            }
        }
    }
    let f = Frame::from_pairs(n, pairs);
    if spec.transitive {
        f.transitive_closure()
    } else {
        f
    }
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize) -> WorldSet {
    WorldSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.4)))
}

pub fn random_model(rng: &mut ChaCha8Rng, frame: Frame, atoms: &[&str]) -> KripkeModel {
    let n = frame.len();
    let mut m = KripkeModel::bare(frame);
    for a in atoms {
        m.set_atom(*a, random_set(rng, n));
    }
    m
}

pub fn random_space_model(
    rng: &mut ChaCha8Rng,
    spaces: &[FiniteSpace],
    atoms: &[&str],
) -> TopoModel {
    let sp = spaces.choose(rng).expect("non-empty").clone();
    let n = sp.len();
    let mut m = TopoModel::new(sp, Default::default()).unwrap();
    for a in atoms {
        m.set_atom(*a, random_set(rng, n));
    }
    m
}

/// Which operators a generated formula may use.
#[derive(Debug, Clone)]
pub struct Language {
    pub atoms: Vec<String>,
    pub boxes: bool,
    pub tangle: bool,
    pub derived: bool,
    pub universal: bool,
    pub mu: bool,
    pub max_members: usize,
    pub member_depth: usize,
}

impl Language {
    pub fn new(atoms: &[&str]) -> Language {
        Language {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            boxes: true,
            tangle: false,
            derived: false,
            universal: false,
            mu: false,
            max_members: 2,
            member_depth: 2,
        }
    }

    pub fn tangle(mut self) -> Language {
        self.tangle = true;
        self
    }

    pub fn derived(mut self) -> Language {
        self.derived = true;
        self
    }

    pub fn universal(mut self) -> Language {
        self.universal = true;
        self
    }

    pub fn mu(mut self) -> Language {
        self.mu = true;
        self
    }
}

/// Random formula of depth at most `depth`. Fixpoint variables `x0, x1, ..`
/// are only placed under an even number of negations below their binder.
pub fn random_formula(rng: &mut ChaCha8Rng, lang: &Language, depth: usize) -> Formula {
    Gen {
        rng,
        lang,
        bound: Vec::new(),
    }
    .gen(depth, true)
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    lang: &'a Language,
    /// Bound variables with the polarity at their binder.
    bound: Vec<(String, bool)>,
}

impl Gen<'_> {
    fn leaf(&mut self, polarity: bool) -> Formula {
        let usable: Vec<String> = self
            .bound
            .iter()
            .filter(|(_, p)| *p == polarity)
            .map(|(v, _)| v.clone())
            .collect();
        if !usable.is_empty() && self.rng.gen_bool(0.5) {
            return Formula::atom(usable.choose(self.rng).unwrap().as_str());
        }
        if self.rng.gen_bool(0.1) {
            return Formula::top();
        }
        Formula::atom(self.lang.atoms.choose(self.rng).unwrap().as_str())
    }

    fn gen(&mut self, depth: usize, polarity: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.leaf(polarity);
        }
        let mut ops = vec![0, 1, 2];
        if self.lang.boxes {
            ops.extend([3, 4]);
        }
        if self.lang.tangle {
            ops.push(5);
        }
        if self.lang.derived {
            ops.extend([6, 7, 8]);
        }
        if self.lang.universal {
            ops.push(9);
        }
        if self.lang.mu {
            ops.push(10);
        }
        let d = depth - 1;
        match *ops.choose(self.rng).unwrap() {
            0 => Formula::not(self.gen(d, !polarity)),
            1 => Formula::and(self.gen(d, polarity), self.gen(d, polarity)),
            2 => Formula::or(self.gen(d, polarity), self.gen(d, polarity)),
            3 => Formula::nec(self.gen(d, polarity)),
            4 => Formula::dia(self.gen(d, polarity)),
            5 | 8 => {
                let k = self.rng.gen_range(1..=self.lang.max_members);
                let md = d.min(self.lang.member_depth);
                let members: Vec<Formula> = (0..k).map(|_| self.gen(md, polarity)).collect();
                if self.lang.derived && self.rng.gen_bool(0.5) {
                    Formula::tangle_d(members).unwrap()
                } else {
                    Formula::tangle(members).unwrap()
                }
            }
            6 => Formula::nec_d(self.gen(d, polarity)),
            7 => Formula::dia_d(self.gen(d, polarity)),
            9 => {
                if self.rng.gen_bool(0.5) {
                    Formula::forall(self.gen(d, polarity))
                } else {
                    Formula::exists(self.gen(d, polarity))
                }
            }
            _ => {
                let var = format!("x{}", self.bound.len());
                self.bound.push((var.clone(), polarity));
                let body = self.gen(d, polarity);
                self.bound.pop();
                let positive = self.rng.gen_bool(0.5);
                if positive {
                    Formula::mu(var, body).expect("generated positive")
                } else {
                    Formula::nu(var, body).expect("generated positive")
                }
            }
        }
    }
}

/// A formula containing at least one tangle.
pub fn random_tangle_formula(rng: &mut ChaCha8Rng, lang: &Language, depth: usize) -> Formula {
    loop {
        let f = random_formula(rng, lang, depth);
        if f.has_tangle() {
            return f;
        }
    }
}

/// Every pair of `a` is a pair of `b`.
pub fn relation_subset(a: &Frame, b: &Frame) -> bool {
    (0..a.len()).all(|x| a.succ(x).is_subset(b.succ(x)))
}
