//! Syntax, Kripke and topological semantics, translations, filtrations and
//! bounded model search for tangled modal logics and the modal mu-calculus.
//!
//! The crate is organised bottom-up:
//!
//! * [`formula`]: the AST, concrete grammar, positivity and subformula closure.
//! * [`kripke`]: finite frames and models, cluster/rank/connectivity analysis
//!   and the Kripke model checker.
//! * [`topo`]: finite topological spaces and the topological model checker.
//! * [`translate`]: the tangle-to-mu, box-to-derivative and star translations.
//! * [`filtration`]: standard and refined transitive filtrations, untangling
//!   and the characteristic formulas of weak models.
//! * [`logics`]: axiom schemata, logic profiles, frame validity and bounded
//!   satisfiability search.

pub mod filtration;
pub mod formula;
pub mod kripke;
pub mod logics;
pub mod set;
pub mod topo;
pub mod translate;

pub use formula::{ClosureSet, Formula, FormulaError, TangleSet};
pub use kripke::{Frame, KripkeError, KripkeModel};
pub use set::WorldSet;
pub use topo::{FiniteSpace, TopoError, TopoModel};
