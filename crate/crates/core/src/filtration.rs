//! Transitive filtrations through a closure set, untangling of the quotient
//! clusters, and the characteristic formulas that define quotient classes.
//!
//! "φ belongs to x" is read as "φ is true at x in the source model".

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{ClosureSet, Formula};
use crate::kripke::{ClusterDecomposition, Frame, KripkeError, KripkeModel};
use crate::set::WorldSet;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error("no critical point in the cluster {cluster:?}")]
    NoCriticalPoint { cluster: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationMode {
    /// Quotient by agreement on Φ.
    Standard,
    /// Quotient by agreement on Φ and on the maximal clusters seen.
    Refined,
}

#[derive(Debug, Clone)]
pub struct FiltrationResult {
    mode: FiltrationMode,
    quotient: KripkeModel,
    r_lambda: Frame,
    map: Vec<usize>,
    classes: Vec<WorldSet>,
    formulas: Vec<Formula>,
    truth: Vec<WorldSet>,
}

/// Truth sets of the members of Φ, in Φ's order.
fn truth_table(
    m: &KripkeModel,
    phi: &ClosureSet,
) -> Result<(Vec<Formula>, Vec<WorldSet>), KripkeError> {
    let formulas: Vec<Formula> = phi.iter().cloned().collect();
    let truth = formulas
        .iter()
        .map(|f| m.model_check(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((formulas, truth))
}

/// `M(x)` for every world.
fn maximal_seen(m: &KripkeModel, d: &ClusterDecomposition) -> Vec<Vec<usize>> {
    (0..m.len())
        .map(|x| d.maximal_seen_from(m.frame(), x))
        .collect()
}

pub fn filtrate(
    m: &KripkeModel,
    phi: &ClosureSet,
    mode: FiltrationMode,
) -> Result<FiltrationResult, FiltrationError> {
    let frame = m.frame();
    let decomposition = frame.clusters()?;
    let (formulas, truth) = truth_table(m, phi)?;
    let seen = match mode {
        FiltrationMode::Standard => vec![Vec::new(); m.len()],
        FiltrationMode::Refined => maximal_seen(m, &decomposition),
    };

    let mut key_to_class: HashMap<(Vec<bool>, Vec<usize>), usize> = HashMap::new();
    let mut map = Vec::with_capacity(m.len());
    let mut reps = Vec::new();
    for (x, seen_x) in seen.iter().enumerate() {
        let key = (
            truth.iter().map(|t| t.contains(x)).collect(),
            seen_x.clone(),
        );
        let next = key_to_class.len();
        let c = *key_to_class.entry(key).or_insert(next);
        if c == reps.len() {
            reps.push(x);
        }
        map.push(c);
    }
    let k = reps.len();
    let mut classes = vec![WorldSet::empty(m.len()); k];
    for (x, &c) in map.iter().enumerate() {
        classes[c].insert(x);
    }
    let names: Vec<String> = reps
        .iter()
        .map(|&x| format!("|{}|", frame.name(x)))
        .collect();
    let r_lambda = Frame::with_names(
        names.clone(),
        (0..k)
            .map(|c| {
                WorldSet::from_indices(
                    k,
                    classes[c]
                        .iter()
                        .flat_map(|x| frame.succ(x).iter().map(|y| map[y]).collect::<Vec<_>>()),
                )
            })
            .collect(),
    );
    let r_phi = r_lambda.transitive_closure();
    let mut val = BTreeMap::new();
    for (f, t) in formulas.iter().zip(&truth) {
        if let Formula::Atom(a) = f {
            val.insert(
                a.clone(),
                WorldSet::from_indices(k, t.iter().map(|x| map[x])),
            );
        }
    }
    let quotient = KripkeModel::new(r_phi, val)?;
    Ok(FiltrationResult {
        mode,
        quotient,
        r_lambda,
        map,
        classes,
        formulas,
        truth,
    })
}

impl FiltrationResult {
    pub fn mode(&self) -> FiltrationMode {
        self.mode
    }

    /// `(W_Φ, R_Φ, h_Φ)`
    pub fn quotient(&self) -> &KripkeModel {
        &self.quotient
    }

    pub fn r_phi(&self) -> &Frame {
        self.quotient.frame()
    }

    pub fn r_lambda(&self) -> &Frame {
        &self.r_lambda
    }

    /// `f(x) = |x|`
    pub fn class_of(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn quotient_map(&self) -> &[usize] {
        &self.map
    }

    /// `f⁻¹(c)`
    pub fn preimage(&self, c: usize) -> &WorldSet {
        &self.classes[c]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// Truth set in the source model of the `i`-th member of Φ.
    pub fn truth(&self, i: usize) -> &WorldSet {
        &self.truth[i]
    }

    fn index_of(&self, f: &Formula) -> Option<usize> {
        self.formulas.iter().position(|g| g == f)
    }

    /// Quotient worlds at which the `i`-th member of Φ is realised.
    fn realised(&self, i: usize) -> WorldSet {
        WorldSet::from_indices(self.len(), self.truth[i].iter().map(|x| self.map[x]))
    }

    /// Checks (r1)-(r4); returns the first violation.
    pub fn check_conditions(&self, m: &KripkeModel) -> Result<(), String> {
        let fr = m.frame();
        for (i, f) in self.formulas.iter().enumerate() {
            if let Formula::Atom(a) = f {
                for x in 0..m.len() {
                    if self.truth[i].contains(x) != self.quotient.atom(a).contains(self.map[x]) {
                        return Err(format!("(r1) fails for {a} at {}", fr.name(x)));
                    }
                }
            }
        }
        for c in 0..self.len() {
            let first = self.classes[c].first().expect("classes are non-empty");
            for y in self.classes[c].iter() {
                if self
                    .truth
                    .iter()
                    .any(|t| t.contains(first) != t.contains(y))
                {
                    return Err(format!("(r2) fails at {}", fr.name(y)));
                }
            }
        }
        for (x, y) in fr.pairs() {
            if !self.r_phi().related(self.map[x], self.map[y]) {
                return Err(format!("(r3) fails for {} R {}", fr.name(x), fr.name(y)));
            }
        }
        let diamonds: Vec<(usize, usize)> = self
            .formulas
            .iter()
            .enumerate()
            .filter_map(|(i, f)| Some((i, self.index_of(f.as_diamond()?)?)))
            .collect();
        let tangles: Vec<usize> = (0..self.formulas.len())
            .filter(|&i| matches!(self.formulas[i], Formula::Tangle(_) | Formula::TangleD(_)))
            .collect();
        for x in 0..m.len() {
            for y in 0..m.len() {
                if !self.r_phi().related(self.map[x], self.map[y]) {
                    continue;
                }
                for &t in &tangles {
                    if self.truth[t].contains(y) && !self.truth[t].contains(x) {
                        return Err(format!(
                            "(r4) fails for {} from {} to {}",
                            self.formulas[t],
                            fr.name(x),
                            fr.name(y)
                        ));
                    }
                }
                for &(d, a) in &diamonds {
                    let star_at_y = self.truth[a].contains(y) || self.truth[d].contains(y);
                    if star_at_y && !self.truth[d].contains(x) {
                        return Err(format!(
                            "(r4) fails for {} from {} to {}",
                            self.formulas[d],
                            fr.name(x),
                            fr.name(y)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct UntangleResult {
    reflexive_mode: bool,
    clusters: ClusterDecomposition,
    critical: Vec<usize>,
    nuclei: Vec<WorldSet>,
    model: KripkeModel,
}

/// Picks a critical point and nucleus for every `R_Φ`-cluster and builds
/// `R_t`: the inter-cluster part of `R_Φ` plus `C × C°` inside each `C`
/// (plus the loops on `C ∖ C°` in reflexive mode).
pub fn untangle(
    fr: &FiltrationResult,
    m: &KripkeModel,
    reflexive_mode: bool,
) -> Result<UntangleResult, FiltrationError> {
    let r_phi = fr.r_phi();
    let k = fr.len();
    let clusters = r_phi.clusters()?;
    let tangles: Vec<(usize, Vec<WorldSet>)> = fr
        .formulas
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            Formula::Tangle(d) | Formula::TangleD(d) => Some((
                i,
                d.iter()
                    .map(|g| fr.realised(fr.index_of(g).expect("closure contains members")))
                    .collect(),
            )),
            _ => None,
        })
        .collect();

    let mut critical = Vec::with_capacity(clusters.len());
    let mut nuclei = Vec::with_capacity(clusters.len());
    for c in 0..clusters.len() {
        let cluster = clusters.cluster(c);
        let candidates = cluster
            .iter()
            .flat_map(|q| fr.preimage(q).iter().collect::<Vec<_>>());
        let mut candidates: Vec<usize> = candidates.collect();
        candidates.sort_unstable();
        let nucleus_of = |y: usize| {
            WorldSet::from_indices(k, m.frame().succ(y).iter().map(|z| fr.map[z]))
                .intersection(cluster)
        };
        let found = candidates.into_iter().find(|&y| {
            let nucleus = nucleus_of(y);
            tangles.iter().all(|(i, members)| {
                fr.truth[*i].contains(y) || members.iter().any(|r| !r.intersects(&nucleus))
            })
        });
        let y = found.ok_or_else(|| FiltrationError::NoCriticalPoint {
            cluster: r_phi.names_of(cluster),
        })?;
        critical.push(y);
        nuclei.push(nucleus_of(y));
    }

    let mut succ = vec![WorldSet::empty(k); k];
    for (a, s) in succ.iter_mut().enumerate() {
        let ca = clusters.cluster_of(a);
        for b in r_phi.succ(a).iter() {
            if clusters.cluster_of(b) != ca {
                s.insert(b);
            }
        }
        s.union_with(&nuclei[ca]);
        if reflexive_mode && !nuclei[ca].contains(a) {
            s.insert(a);
        }
    }
    let r_t = Frame::with_names(r_phi.worlds().to_vec(), succ);
    let model = fr.quotient.with_frame(r_t);
    Ok(UntangleResult {
        reflexive_mode,
        clusters,
        critical,
        nuclei,
        model,
    })
}

impl UntangleResult {
    pub fn reflexive_mode(&self) -> bool {
        self.reflexive_mode
    }

    pub fn r_t(&self) -> &Frame {
        self.model.frame()
    }

    /// `(W_Φ, R_t, h_Φ)`
    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    /// The `R_Φ`-clusters the construction worked on.
    pub fn clusters(&self) -> &ClusterDecomposition {
        &self.clusters
    }

    /// Source world chosen as critical point of cluster `c`.
    pub fn critical_point(&self, c: usize) -> usize {
        self.critical[c]
    }

    /// `C°` of cluster `c`, empty for degenerate clusters.
    pub fn nucleus(&self, c: usize) -> &WorldSet {
        &self.nuclei[c]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionFailure {
    pub formula: String,
    pub world: String,
    pub source_value: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub formulas_checked: usize,
    pub counterexample: Option<ReductionFailure>,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every member of Φ is true at `f(x)` in the untangled model exactly when
/// it is true at `x` in the source.
pub fn verify_reduction(
    fr: &FiltrationResult,
    ut: &UntangleResult,
    m: &KripkeModel,
) -> Result<ReductionReport, FiltrationError> {
    for (i, f) in fr.formulas.iter().enumerate() {
        let ext = ut.model.model_check(f)?;
        for x in 0..m.len() {
            if fr.truth[i].contains(x) != ext.contains(fr.map[x]) {
                return Ok(ReductionReport {
                    formulas_checked: i + 1,
                    counterexample: Some(ReductionFailure {
                        formula: f.to_string(),
                        world: m.frame().name(x).to_string(),
                        source_value: fr.truth[i].contains(x),
                    }),
                });
            }
        }
    }
    Ok(ReductionReport {
        formulas_checked: fr.formulas.len(),
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameSummary {
    pub serial: bool,
    pub reflexive: bool,
    pub transitive: bool,
    /// Every world sees a reflexive world.
    pub sees_reflexive: bool,
    pub components: usize,
    /// Local n-connectedness for n = 1, 2, 3.
    pub locally_connected: Vec<bool>,
}

impl FrameSummary {
    pub fn of(f: &Frame) -> FrameSummary {
        let p = f.properties();
        FrameSummary {
            serial: p.serial,
            reflexive: p.reflexive,
            transitive: p.transitive,
            sees_reflexive: (0..f.len()).all(|x| f.succ(x).iter().any(|y| f.related(y, y))),
            components: f.path_components().len(),
            locally_connected: (1..=3).map(|n| f.locally_n_connected(n)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub source: FrameSummary,
    pub r_phi: FrameSummary,
    pub r_t: FrameSummary,
    pub path_components_equal: bool,
    /// The n ≤ 3 for which source, `R_Φ` and `R_t` are all locally n-connected.
    pub locally_n_connected_for: Vec<usize>,
    /// Hypotheses of the preservation results that this input lacks.
    pub precondition_notes: Vec<String>,
}

pub fn preservation_report(
    fr: &FiltrationResult,
    ut: &UntangleResult,
    m: &KripkeModel,
) -> PreservationReport {
    let source = FrameSummary::of(m.frame());
    let r_phi = FrameSummary::of(fr.r_phi());
    let r_t = FrameSummary::of(ut.r_t());
    let partition = |f: &Frame| {
        let mut p = f.path_components();
        p.sort();
        p
    };
    let locally_n_connected_for = (1..=3)
        .filter(|&n| {
            source.locally_connected[n - 1]
                && r_phi.locally_connected[n - 1]
                && r_t.locally_connected[n - 1]
        })
        .collect();
    let mut notes = Vec::new();
    let dia_top = Formula::dia(Formula::top());
    if !fr.formulas.contains(&dia_top) {
        notes.push("<>true is not in the closure set: component equality is not guaranteed".into());
    }
    if fr.mode != FiltrationMode::Refined {
        notes.push("standard filtration: local connectedness is not guaranteed".into());
    }
    let missing: Vec<&String> = m
        .val()
        .keys()
        .filter(|a| !fr.formulas.contains(&Formula::atom(a.as_str())))
        .collect();
    if !missing.is_empty() {
        notes.push(format!(
            "atoms {missing:?} are not in the closure set: local connectedness is not guaranteed"
        ));
    }
    PreservationReport {
        path_components_equal: partition(fr.r_phi()) == partition(ut.r_t()),
        source,
        r_phi,
        r_t,
        locally_n_connected_for,
        precondition_notes: notes,
    }
}

/// `At`: the atoms of Φ followed by `◇⊤`.
pub fn atomic_letters(phi: &ClosureSet) -> Vec<Formula> {
    let mut at: Vec<Formula> = phi.atoms().map(Formula::atom).collect();
    at.push(Formula::dia(Formula::top()));
    at
}

/// An atomic type: membership of each letter of `At`, in `At` order.
pub type AtomicType = Vec<bool>;

#[derive(Debug, Clone)]
pub struct AtomicTypeData {
    pub at: Vec<Formula>,
    /// `τ(x)`
    pub types: Vec<AtomicType>,
    pub clusters: ClusterDecomposition,
    /// `δC` for every cluster.
    pub delta: Vec<BTreeSet<AtomicType>>,
    /// `M`
    pub maximal: Vec<usize>,
    /// `M(x)`
    pub maximal_seen: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicChecks {
    /// `χ(s)` true at x iff s = τ(x).
    pub chi: bool,
    /// On maximal worlds, x ∈ C iff α(C) true at x.
    pub alpha_cluster: bool,
    /// C ⊆ R(x) iff ◇□*α(C) true at x.
    pub sees_cluster: bool,
    /// Within R(x), α(P) defines the path component P.
    pub alpha_component: bool,
    /// γ_x true at y iff x and y agree on Φ.
    pub gamma: bool,
    /// μ_x true at y iff M(x) = M(y).
    pub mu: bool,
    /// φ_x true at y iff x ≈ y.
    pub phi: bool,
    /// Distinct maximal clusters have distinct δC. The cluster lemmas are
    /// only guaranteed under this hypothesis on arbitrary finite models.
    pub delta_injective: bool,
}

#[derive(Debug, Clone)]
pub struct CharacteristicFormulas {
    pub data: AtomicTypeData,
    /// `α(C)` for each maximal cluster, keyed by cluster index.
    pub alpha_cluster: BTreeMap<usize, Formula>,
    /// `(x, P, α(P))` for each world x and path component P of R(x).
    pub alpha_component: Vec<(usize, WorldSet, Formula)>,
    pub gamma: Vec<Formula>,
    pub mu: Vec<Formula>,
    pub phi: Vec<Formula>,
    pub checks: CharacteristicChecks,
}

/// `χ(s) = ⋀{a : a ∈ s} ∧ ⋀{¬a : a ∈ At ∖ s}`
pub fn chi(at: &[Formula], s: &AtomicType) -> Formula {
    Formula::conj(at.iter().zip(s).map(|(a, &inside)| {
        if inside {
            a.clone()
        } else {
            Formula::not(a.clone())
        }
    }))
}

fn all_types(n: usize) -> impl Iterator<Item = AtomicType> {
    (0..1u64 << n).map(move |mask| (0..n).map(|i| mask >> i & 1 == 1).collect())
}

/// `α(C) = ⋀{◇*χ(s) : s ∈ δC} ∧ ⋀{¬◇*χ(s) : s ∉ δC}`
pub fn alpha_of_cluster(at: &[Formula], delta: &BTreeSet<AtomicType>) -> Formula {
    let (inside, outside): (Vec<AtomicType>, Vec<AtomicType>) =
        all_types(at.len()).partition(|s| delta.contains(s));
    Formula::conj(
        inside.iter().map(|s| Formula::dia_star(chi(at, s))).chain(
            outside
                .iter()
                .map(|s| Formula::not(Formula::dia_star(chi(at, s)))),
        ),
    )
}

fn sees_alpha(alpha: &Formula) -> Formula {
    Formula::dia(Formula::nec_star(alpha.clone()))
}

pub fn characteristic_formulas(
    m: &KripkeModel,
    phi: &ClosureSet,
) -> Result<CharacteristicFormulas, FiltrationError> {
    let frame = m.frame();
    let n = m.len();
    let clusters = frame.clusters()?;
    let at = atomic_letters(phi);
    let at_ext = at
        .iter()
        .map(|a| m.model_check(a))
        .collect::<Result<Vec<_>, _>>()?;
    let types: Vec<AtomicType> = (0..n)
        .map(|x| at_ext.iter().map(|e| e.contains(x)).collect())
        .collect();
    let delta: Vec<BTreeSet<AtomicType>> = (0..clusters.len())
        .map(|c| {
            clusters
                .cluster(c)
                .iter()
                .map(|x| types[x].clone())
                .collect()
        })
        .collect();
    let maximal = clusters.maximal();
    let maximal_seen = maximal_seen(m, &clusters);

    let mut checks = CharacteristicChecks {
        chi: true,
        alpha_cluster: true,
        sees_cluster: true,
        alpha_component: true,
        gamma: true,
        mu: true,
        phi: true,
        delta_injective: maximal
            .iter()
            .map(|&c| &delta[c])
            .collect::<BTreeSet<_>>()
            .len()
            == maximal.len(),
    };

    for s in all_types(at.len()) {
        let ext = m.model_check(&chi(&at, &s))?;
        checks.chi &= (0..n).all(|x| ext.contains(x) == (types[x] == s));
    }

    let mut alpha_cluster = BTreeMap::new();
    let mut sees_ext = BTreeMap::new();
    let maximal_worlds = WorldSet::from_indices(
        n,
        maximal
            .iter()
            .flat_map(|&c| clusters.cluster(c).iter().collect::<Vec<_>>()),
    );
    for &c in &maximal {
        let alpha = alpha_of_cluster(&at, &delta[c]);
        let ext = m.model_check(&alpha)?;
        checks.alpha_cluster &= maximal_worlds
            .iter()
            .all(|x| ext.contains(x) == (clusters.cluster_of(x) == c));
        let sees = m.model_check(&sees_alpha(&alpha))?;
        checks.sees_cluster &=
            (0..n).all(|x| sees.contains(x) == clusters.cluster(c).is_subset(frame.succ(x)));
        sees_ext.insert(c, sees);
        alpha_cluster.insert(c, alpha);
    }

    let mut alpha_component = Vec::new();
    for x in 0..n {
        for p in frame.components_within(frame.succ(x)) {
            let f = Formula::disj(
                maximal
                    .iter()
                    .filter(|&&c| clusters.cluster(c).is_subset(&p))
                    .map(|c| sees_alpha(&alpha_cluster[c])),
            );
            let ext = m.model_check(&f)?;
            checks.alpha_component &= frame
                .succ(x)
                .iter()
                .all(|y| ext.contains(y) == p.contains(y));
            alpha_component.push((x, p, f));
        }
    }

    let (formulas, truth) = truth_table(m, phi)?;
    let mut gamma = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    let mut phis = Vec::with_capacity(n);
    for x in 0..n {
        let g = Formula::conj(formulas.iter().zip(&truth).map(|(f, t)| {
            if t.contains(x) {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }));
        let u = Formula::conj(maximal.iter().map(|c| {
            let f = sees_alpha(&alpha_cluster[c]);
            if maximal_seen[x].contains(c) {
                f
            } else {
                Formula::not(f)
            }
        }));
        let g_ext = m.model_check(&g)?;
        let u_ext = m.model_check(&u)?;
        let p = Formula::and(g.clone(), u.clone());
        let p_ext = m.model_check(&p)?;
        for y in 0..n {
            let agree = truth.iter().all(|t| t.contains(x) == t.contains(y));
            let same_m = maximal_seen[x] == maximal_seen[y];
            checks.gamma &= g_ext.contains(y) == agree;
            checks.mu &= u_ext.contains(y) == same_m;
            checks.phi &= p_ext.contains(y) == (agree && same_m);
        }
        gamma.push(g);
        mu.push(u);
        phis.push(p);
    }

    Ok(CharacteristicFormulas {
        data: AtomicTypeData {
            at,
            types,
            clusters,
            delta,
            maximal,
            maximal_seen,
        },
        alpha_cluster,
        alpha_component,
        gamma,
        mu,
        phi: phis,
        checks,
    })
}

impl CharacteristicFormulas {
    /// A formula true exactly on `f⁻¹(C)` for a set `C` of quotient worlds
    /// of the refined filtration: `⋁ φ_x` over representatives, `⊥` if empty.
    pub fn defining_formula(&self, fr: &FiltrationResult, quotient_worlds: &WorldSet) -> Formula {
        Formula::disj(quotient_worlds.iter().map(|c| {
            let rep = fr.preimage(c).first().expect("classes are non-empty");
            self.phi[rep].clone()
        }))
    }
}
